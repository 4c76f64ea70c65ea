#include "geocollab/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "geocollab/errors.hpp"
#include "geocollab/io.hpp"

namespace geocollab {

namespace {

constexpr std::array<const char*, 16> kCountryNames{
    "USA",    "Canada", "Netherlands", "Germany", "Japan",  "Brazil",      "Australia", "South Africa",
    "India",  "China",  "France",      "Kenya",   "Chile",  "New Zealand", "Norway",    "Egypt"};

constexpr std::array<const char*, 4> kBroadFields{"ET", "MLA", "NCM", "SHA"};

std::string two_digit(std::size_t n) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%02zu", n);
  return buf;
}

std::string country_name(std::size_t c) {
  if (c < kCountryNames.size()) return kCountryNames[c];
  return "Country " + two_digit(c);
}

// Moves a point by roughly `km` in a random direction, staying in range.
GeoPoint displace(const GeoPoint& p, double km, Rng& rng) {
  const double bearing = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
  const double deg = km / (kEarthRadiusKm * std::numbers::pi / 180.0);
  double lat = std::clamp(p.lat() + deg * std::cos(bearing), -89.0, 89.0);
  const double coslat = std::max(0.05, std::cos(lat * std::numbers::pi / 180.0));
  double lon = p.lon() + deg * std::sin(bearing) / coslat;
  while (lon > 180.0) lon -= 360.0;
  while (lon < -180.0) lon += 360.0;
  return GeoPoint(lat, lon);
}

// 1 + number of successes before a failure, capped.
unsigned geometric(Rng& rng, double p_continue, unsigned cap) {
  unsigned n = 1;
  while (n < cap && uniform_unit(rng) < p_continue) ++n;
  return n;
}

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

SyntheticWorld make_world(const SyntheticOptions& options) {
  if (options.countries == 0 || options.sites_per_country == 0) {
    throw ConfigError("synthetic world needs at least one country and site");
  }
  if (options.years.first > options.years.last) throw ConfigError("synthetic year range is empty");
  if (options.max_addresses == 0 || options.journals == 0 || options.categories == 0) {
    throw ConfigError("synthetic limits must be positive");
  }
  SyntheticWorld world;
  world.options = options;
  Rng rng(mix_seed(options.seed, 0xC0FFEE));
  for (std::size_t c = 0; c < options.countries; ++c) {
    const std::string name = country_name(c);
    world.countries.push_back(name);
    // Uniform on the sphere, kept off the poles.
    const double lat = std::asin(uniform_real(rng, -0.95, 0.95)) * 180.0 / std::numbers::pi;
    const GeoPoint centre(lat, uniform_real(rng, -180.0, 180.0));
    auto& members = world.sites_by_country.emplace_back();
    const bool regional = name == "USA" || name == "Canada";
    for (std::size_t s = 0; s < options.sites_per_country; ++s) {
      SyntheticSite site{"City " + two_digit(s), regional ? "R" + std::to_string(s % 4) : "", name,
                         displace(centre, uniform_real(rng, 0.0, 800.0), rng)};
      members.push_back(world.sites.size());
      world.sites.push_back(std::move(site));
    }
  }
  return world;
}

Publication synthesize_publication(const SyntheticWorld& world, std::uint64_t index) {
  const auto& opt = world.options;
  Rng rng(mix_seed(opt.seed, index));
  Publication p;
  p.id = "P" + std::to_string(index);
  p.year = opt.years.first + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(opt.years.span())));
  const double t = opt.years.span() > 1
                       ? static_cast<double>(p.year - opt.years.first) / (opt.years.span() - 1)
                       : 0.0;

  const double type_draw = uniform_unit(rng);
  if (type_draw < opt.non_article_fraction) {
    p.doc_type = DocType::other;
  } else {
    p.doc_type = type_draw < opt.non_article_fraction + 0.1 ? DocType::review : DocType::article;
  }

  // The last quarter of the journals only start halfway through the window.
  const auto journal = uniform_below(rng, opt.journals);
  if (journal >= opt.journals - opt.journals / 4 && t < 0.5) {
    p.journal_id = "J" + std::to_string(journal % std::max(1u, opt.journals - opt.journals / 4));
  } else {
    p.journal_id = "J" + std::to_string(journal);
  }

  const unsigned ncat = 1 + static_cast<unsigned>(uniform_below(rng, 3));
  for (unsigned k = 0; k < ncat; ++k) {
    p.subject_categories.push_back("SC" + two_digit(uniform_below(rng, opt.categories)));
  }

  // Planted collaboration pattern: larger teams and more foreign partners later on.
  const unsigned naddr = geometric(rng, 0.35 + 0.25 * t, opt.max_addresses);
  const double p_foreign = 0.1 + 0.35 * t;
  const std::size_t home_country = uniform_below(rng, world.countries.size());
  const auto& home_sites = world.sites_by_country[home_country];
  const std::size_t home = home_sites[uniform_below(rng, home_sites.size())];

  auto make_address = [&](std::size_t site_index, bool reprint) {
    const auto& site = world.sites[site_index];
    std::optional<std::string_view> region;
    if (!site.region.empty()) region = site.region;
    Address a = normalize_address(site.city, region, site.country);
    a.is_reprint = reprint;
    a.coords = site.point;
    return a;
  };

  p.addresses.push_back(make_address(home, false));
  for (unsigned k = 1; k < naddr; ++k) {
    std::size_t site;
    const double draw = uniform_unit(rng);
    if (draw < 0.1) {
      site = home;
    } else if (draw < 0.1 + p_foreign) {
      site = uniform_below(rng, world.sites.size());
    } else {
      site = home_sites[uniform_below(rng, home_sites.size())];
    }
    p.addresses.push_back(make_address(site, false));
  }
  if (uniform_unit(rng) < opt.reprint_fraction) p.addresses.push_back(make_address(home, true));

  p.author_count = static_cast<int>(naddr + geometric(rng, 0.5, 30) - 1);
  return p;
}

std::string render_record(const Publication& p) {
  std::string line;
  line.reserve(128 + 80 * p.addresses.size());
  line += "{\"id\":" + json_escape(p.id);
  line += ",\"year\":" + std::to_string(p.year);
  line += ",\"doc_type\":";
  line += p.doc_type == DocType::other ? json_escape("editorial") : json_escape(to_string(p.doc_type));
  line += ",\"journal_id\":" + json_escape(p.journal_id);
  line += ",\"subject_categories\":[";
  for (std::size_t i = 0; i < p.subject_categories.size(); ++i) {
    if (i) line.push_back(',');
    line += json_escape(p.subject_categories[i]);
  }
  line += "],\"author_count\":" + std::to_string(p.author_count);
  line += ",\"addresses\":[";
  for (std::size_t i = 0; i < p.addresses.size(); ++i) {
    const auto& a = p.addresses[i];
    if (i) line.push_back(',');
    line += "{\"city\":" + json_escape(a.city);
    line += ",\"region\":";
    line += a.region.empty() ? std::string("null") : json_escape(a.region);
    line += ",\"country\":" + json_escape(a.country);
    line += a.is_reprint ? ",\"is_reprint\":true}" : ",\"is_reprint\":false}";
  }
  line += "]}";
  return line;
}

SyntheticFiles write_synthetic(const SyntheticOptions& options, const std::filesystem::path& out_dir) {
  const SyntheticWorld world = make_world(options);
  SyntheticFiles files;
  files.corpus = out_dir / "corpus.jsonl";
  files.gazetteer = out_dir / "gazetteer.tsv";
  files.field_scheme = out_dir / "field_scheme.tsv";
  files.sites = world.sites.size();

  {
    auto out = open_output(files.corpus);
    std::string line;
    for (std::uint64_t i = 0; i < options.publications; ++i) {
      line = render_record(synthesize_publication(world, i));
      line.push_back('\n');
      out.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
    if (!out) throw ConfigError("failed writing " + files.corpus.string());
    files.publications = options.publications;
  }

  {
    Rng rng(mix_seed(options.seed, 0x6A2E77));
    auto out = open_output(files.gazetteer);
    out << "key\tlat\tlon\tsource\n";
    std::vector<std::string> second;
    for (const auto& site : world.sites) {
      const bool missing = uniform_unit(rng) < options.missing_fraction;
      const bool conflict = uniform_unit(rng) < options.conflict_fraction;
      const double jitter_km = uniform_real(rng, 0.0, 5.0);
      const double conflict_km = uniform_real(rng, 60.0, 400.0);
      if (missing) continue;
      std::optional<std::string_view> region;
      if (!site.region.empty()) region = site.region;
      const std::string key = normalize_address(site.city, region, site.country).key().str();
      out << key << '\t' << format_fixed(site.point.lat(), 6) << '\t'
          << format_fixed(site.point.lon(), 6) << "\talpha\n";
      if (options.second_source) {
        const GeoPoint moved = displace(site.point, conflict ? conflict_km : jitter_km, rng);
        second.push_back(key + '\t' + format_fixed(moved.lat(), 6) + '\t' +
                         format_fixed(moved.lon(), 6) + "\tbeta\n");
      }
    }
    for (const auto& row : second) out << row;
  }

  {
    auto out = open_output(files.field_scheme);
    out << "category_code\tfield_code\tbroad_field_code\n";
    const unsigned fields = std::max(1u, options.categories / 3);
    for (unsigned c = 0; c < options.categories; ++c) {
      const unsigned field = c % fields;
      out << "SC" << two_digit(c) << "\tF" << two_digit(field) << '\t'
          << kBroadFields[field % kBroadFields.size()] << '\n';
    }
  }
  return files;
}

}  // namespace geocollab
