#include "geocollab/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "geocollab/errors.hpp"
#include "geocollab/io.hpp"

namespace geocollab {

CountryWeighting parse_country_weighting(std::string_view text) {
  if (text == "proportional") return CountryWeighting::proportional;
  if (text == "equal-country") return CountryWeighting::equal_country;
  throw ConfigError("unknown fractional weighting '" + std::string(text) + "'");
}

std::string_view to_string(CountryWeighting w) noexcept {
  return w == CountryWeighting::proportional ? "proportional" : "equal-country";
}

// ---------------------------------------------------------------------------
// Field scheme

const std::set<std::string, std::less<>>& FieldScheme::broad_fields() {
  static const std::set<std::string, std::less<>> codes{"ET", "MLA", "NCM", "SHA"};
  return codes;
}

void FieldScheme::add(const std::string& category, const std::string& field,
                      const std::string& broad) {
  if (category.empty() || field.empty()) throw DataError("field scheme: empty category or field");
  if (!broad_fields().contains(broad)) {
    throw DataError("field scheme: unknown broad field '" + broad + "'");
  }
  if (field == kUnclassified) {
    throw DataError("field scheme: '" + field + "' is reserved");
  }
  if (auto [it, fresh] = category_field_.emplace(category, field); !fresh && it->second != field) {
    throw DataError("field scheme: category '" + category + "' mapped to both '" + it->second +
                    "' and '" + field + "'");
  }
  if (auto [it, fresh] = field_broad_.emplace(field, broad); !fresh && it->second != broad) {
    throw DataError("field scheme: field '" + field + "' grouped under both '" + it->second +
                    "' and '" + broad + "'");
  }
}

FieldScheme FieldScheme::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("field scheme not found: " + path.string());
  const Table table = read_tsv(path);
  const auto cat = table.require_column("category_code", path);
  const auto field = table.require_column("field_code", path);
  const auto broad = table.require_column("broad_field_code", path);
  FieldScheme scheme;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    try {
      scheme.add(table.rows[r][cat], table.rows[r][field], table.rows[r][broad]);
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(table.line_numbers[r]) + ": " + e.what());
    }
  }
  return scheme;
}

std::optional<std::string_view> FieldScheme::field_of(std::string_view category) const {
  const auto it = category_field_.find(category);
  if (it == category_field_.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::optional<std::string_view> FieldScheme::broad_of_field(std::string_view field) const {
  const auto it = field_broad_.find(field);
  if (it == field_broad_.end()) return std::nullopt;
  return std::string_view(it->second);
}

Dimension parse_dimension(std::string_view text) {
  if (text == "all") return Dimension::all;
  if (text == "country") return Dimension::country;
  if (text == "field") return Dimension::field;
  if (text == "broad_field" || text == "broad-field") return Dimension::broad_field;
  throw ConfigError("unknown partition dimension '" + std::string(text) + "'");
}

std::string_view to_string(Dimension d) noexcept {
  switch (d) {
    case Dimension::all: return "all";
    case Dimension::country: return "country";
    case Dimension::field: return "field";
    case Dimension::broad_field: return "broad_field";
  }
  return "all";
}

// ---------------------------------------------------------------------------
// Fractional counting

namespace {

FractionalAssignment from_counts(const std::string& id, const std::map<std::string, double>& counts) {
  double total = 0.0;
  for (const auto& [unit, n] : counts) total += n;
  FractionalAssignment out{id, {}};
  out.shares.reserve(counts.size());
  for (const auto& [unit, n] : counts) out.shares.push_back({unit, n / total});
  return out;
}

}  // namespace

FractionalAssignment fractionalize_countries(const Publication& p, CountryWeighting weighting) {
  std::map<std::string, double> counts;
  for (const auto& a : p.addresses) {
    if (weighting == CountryWeighting::proportional) {
      counts[a.country] += 1.0;
    } else {
      counts[a.country] = 1.0;
    }
  }
  return from_counts(p.id, counts);
}

FractionalAssignment fractionalize_fields(const Publication& p, const FieldScheme& scheme, bool broad,
                                          std::vector<std::string>* unmapped) {
  std::map<std::string, double> counts;
  for (const auto& category : p.subject_categories) {
    const auto field = scheme.field_of(category);
    if (!field) {
      counts[std::string(kUnclassified)] += 1.0;
      if (unmapped) unmapped->push_back(category);
      continue;
    }
    const std::string_view unit = broad ? *scheme.broad_of_field(*field) : *field;
    counts[std::string(unit)] += 1.0;
  }
  if (counts.empty()) counts[std::string(kUnclassified)] = 1.0;
  return from_counts(p.id, counts);
}

// ---------------------------------------------------------------------------
// Cells

CellAggregator::CellAggregator(std::vector<Dimension> dimensions, const FieldScheme* scheme,
                               CountryWeighting weighting)
    : dimensions_(std::move(dimensions)), scheme_(scheme), weighting_(weighting) {
  std::sort(dimensions_.begin(), dimensions_.end());
  dimensions_.erase(std::unique(dimensions_.begin(), dimensions_.end()), dimensions_.end());
  for (auto d : dimensions_) {
    if ((d == Dimension::field || d == Dimension::broad_field) && scheme_ == nullptr) {
      throw ConfigError("field partitions need a field scheme");
    }
    cells_[d];
  }
}

void CellAggregator::add(const Publication& p, const PublicationMeasures& m) {
  bool unmapped_counted = false;
  for (auto d : dimensions_) {
    auto& cells = cells_[d];
    if (d == Dimension::all) {
      cells[CellKey{"all", p.year}].add(m, 1.0);
      continue;
    }
    FractionalAssignment assignment;
    if (d == Dimension::country) {
      assignment = fractionalize_countries(p, weighting_);
    } else {
      std::vector<std::string> unmapped;
      assignment = fractionalize_fields(p, *scheme_, d == Dimension::broad_field, &unmapped);
      if (!unmapped_counted) {
        std::sort(unmapped.begin(), unmapped.end());
        unmapped.erase(std::unique(unmapped.begin(), unmapped.end()), unmapped.end());
        for (auto& c : unmapped) ++unmapped_[c];
        unmapped_counted = true;
      }
    }
    for (const auto& share : assignment.shares) {
      cells[CellKey{share.unit, p.year}].add(m, share.weight);
    }
  }
}

void CellAggregator::merge(const CellAggregator& other) {
  for (const auto& [d, cells] : other.cells_) {
    auto& mine = cells_[d];
    for (const auto& [key, acc] : cells) mine[key].merge(acc);
  }
  for (const auto& [c, n] : other.unmapped_) unmapped_[c] += n;
}

const CellMap& CellAggregator::cells(Dimension d) const {
  const auto it = cells_.find(d);
  if (it == cells_.end()) {
    throw std::out_of_range("dimension '" + std::string(to_string(d)) + "' not aggregated");
  }
  return it->second;
}

CellAggregator aggregate_cells(std::span<const Publication> corpus, std::vector<Dimension> dimensions,
                               const FieldScheme* scheme, CountryWeighting weighting) {
  CellAggregator agg(std::move(dimensions), scheme, weighting);
  for (const auto& p : corpus) agg.add(p);
  return agg;
}

std::map<std::string, SummaryAccumulator> collapse_years(const CellMap& cells, YearWindow window) {
  std::map<std::string, SummaryAccumulator> out;
  for (const auto& [key, acc] : cells) {
    if (window.contains(key.year)) out[key.unit].merge(acc);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trends

namespace {

constexpr std::pair<Metric, std::string_view> kMetricNames[] = {
    {Metric::frac_pubs, "frac_pubs"},   {Metric::mgcd, "mgcd"},
    {Metric::pct_mldc, "pct_mldc"},     {Metric::pct_ldc, "pct_ldc"},
    {Metric::pct_vldc, "pct_vldc"},     {Metric::pct_copub, "pct_copub"},
    {Metric::pct_intl_copub, "pct_intl_copub"}, {Metric::mean_authors, "mean_authors"},
};

double value_at(std::span<const TrendPoint> series, Metric metric, int year) {
  const auto it = std::find_if(series.begin(), series.end(),
                               [&](const TrendPoint& t) { return t.year == year; });
  if (it == series.end()) throw DataError("year " + std::to_string(year) + " not in series");
  const auto v = metric_value(it->summary, metric);
  if (!v) {
    throw DataError(std::string(to_string(metric)) + " undefined in year " + std::to_string(year));
  }
  return *v;
}

}  // namespace

Metric parse_metric(std::string_view text) {
  if (text == "mgcd_km") return Metric::mgcd;
  for (const auto& [m, name] : kMetricNames) {
    if (name == text) return m;
  }
  throw ConfigError("unknown metric '" + std::string(text) + "'");
}

std::string_view to_string(Metric m) noexcept {
  for (const auto& [metric, name] : kMetricNames) {
    if (metric == m) return name;
  }
  return "mgcd";
}

std::optional<double> metric_value(const IndicatorSummary& s, Metric m) noexcept {
  switch (m) {
    case Metric::frac_pubs: return s.frac_pubs;
    case Metric::mgcd: return s.mgcd_km;
    case Metric::pct_mldc: return s.pct_mldc;
    case Metric::pct_ldc: return s.pct_ldc;
    case Metric::pct_vldc: return s.pct_vldc;
    case Metric::pct_copub: return s.pct_copub;
    case Metric::pct_intl_copub: return s.pct_intl_copub;
    case Metric::mean_authors: return s.mean_authors;
  }
  return std::nullopt;
}

std::vector<TrendPoint> trend_series(const CellMap& cells, std::string_view unit) {
  std::vector<TrendPoint> out;
  for (const auto& [key, acc] : cells) {
    if (key.unit == unit) out.push_back({key.year, acc.summary()});
  }
  return out;
}

double annual_growth(double v0, double v1, int years) {
  if (years <= 0) throw DataError("growth needs an increasing year pair");
  return (v1 - v0) / years;
}

double annual_growth_rate(double v0, double v1, int years) {
  if (years <= 0) throw DataError("growth rate needs an increasing year pair");
  if (!(v0 > 0.0)) throw DataError("growth rate needs a positive base value");
  if (v1 < 0.0) throw DataError("growth rate needs a non-negative end value");
  return 100.0 * (std::pow(v1 / v0, 1.0 / years) - 1.0);
}

double annual_growth(std::span<const TrendPoint> series, Metric metric, int y0, int y1) {
  if (y0 >= y1) throw DataError("growth needs y0 < y1");
  return annual_growth(value_at(series, metric, y0), value_at(series, metric, y1), y1 - y0);
}

double annual_growth_rate(std::span<const TrendPoint> series, Metric metric, int y0, int y1) {
  if (y0 >= y1) throw DataError("growth rate needs y0 < y1");
  return annual_growth_rate(value_at(series, metric, y0), value_at(series, metric, y1), y1 - y0);
}

// ---------------------------------------------------------------------------
// Dispersion

SelfPairs parse_self_pairs(std::string_view text) {
  if (text == "include") return SelfPairs::include;
  if (text == "exclude") return SelfPairs::exclude;
  throw ConfigError("unknown self-pair mode '" + std::string(text) + "'");
}

double dispersion(std::span<const LocationCount> locations, SelfPairs self_pairs, unsigned threads) {
  long double total = 0.0L;
  long double self = 0.0L;
  for (const auto& l : locations) {
    total += static_cast<long double>(l.count);
    self += static_cast<long double>(l.count) * static_cast<long double>(l.count);
  }
  if (locations.empty() || total == 0.0L) throw DataError("dispersion of an empty address set");

  // Row sums are kept per location and added in index order, so the result
  // does not depend on the thread count.
  std::vector<double> rows(locations.size(), 0.0);
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < locations.size(); ++j) {
        row += static_cast<double>(locations[j].count) *
               great_circle_distance(locations[i].point, locations[j].point);
      }
      rows[i] = static_cast<double>(locations[i].count) * row;
    }
  };
  const std::size_t n = locations.size();
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n / 64));
  if (workers <= 1) {
    fill(0, n);
  } else {
    std::vector<std::future<void>> jobs;
    const std::size_t step = (n + workers - 1) / workers;
    for (std::size_t b = 0; b < n; b += step) {
      jobs.push_back(std::async(std::launch::async, fill, b, std::min(n, b + step)));
    }
    for (auto& j : jobs) j.get();
  }

  long double numerator = 0.0L;
  for (double r : rows) numerator += r;
  long double denominator = total * total;
  if (self_pairs == SelfPairs::exclude) denominator -= self;
  if (denominator <= 0.0L) throw DataError("dispersion needs at least two distinct locations");
  return static_cast<double>(numerator / denominator);
}

// ---------------------------------------------------------------------------
// Country map

std::string_view to_string(MapClass c) noexcept {
  switch (c) {
    case MapClass::white: return "white";
    case MapClass::dark_blue: return "dark_blue";
    case MapClass::light_blue: return "light_blue";
    case MapClass::green: return "green";
    case MapClass::yellow: return "yellow";
    case MapClass::red: return "red";
  }
  return "white";
}

MapClass classify_country(double frac_pubs, std::optional<double> mgcd_km, double min_pubs) noexcept {
  if (frac_pubs < min_pubs || !mgcd_km) return MapClass::white;
  const double m = *mgcd_km;
  if (m < 1000.0) return MapClass::dark_blue;
  if (m < 2000.0) return MapClass::light_blue;
  if (m < 3000.0) return MapClass::green;
  if (m <= 4000.0) return MapClass::yellow;
  return MapClass::red;
}

std::map<std::string, MapClass> classify_country_map(
    const std::map<std::string, CountryWindowStats>& countries, double min_pubs) {
  std::map<std::string, MapClass> out;
  for (const auto& [country, stats] : countries) {
    out.emplace(country, classify_country(stats.frac_pubs, stats.mgcd_km, min_pubs));
  }
  return out;
}

}  // namespace geocollab
