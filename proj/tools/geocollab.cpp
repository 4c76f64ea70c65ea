// geocollab: collaboration-distance analytics over publication address lists.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geocollab/commands.hpp"
#include "geocollab/errors.hpp"

using namespace geocollab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

YearWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const int y = std::stoi(text);
      return {y, y};
    }
    YearWindow w{std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    if (w.first > w.last) throw ConfigError("year window '" + text + "' is empty");
    return w;
  } catch (const std::logic_error&) {
    throw ConfigError("invalid year window '" + text + "' (expected y0:y1)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaboration-distance indicators from publication address lists"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML file with option defaults; flags override it");

  RunConfig config;
  std::string window = "1980:2009";
  std::string fixed_journals;
  std::string map_window = "2007:2009";
  std::string weighting = "proportional";
  std::string self_pairs = "include";
  std::vector<std::string> doc_types{"article", "review"};
  std::vector<std::string> region_countries;
  std::string cache = config.cache.string();
  std::string corpus;
  std::vector<std::string> gazetteers;
  std::string field_scheme;
  std::string out_dir = config.out_dir.string();
  std::uint64_t seed = 1;

  app.add_option("--corpus", corpus, "Publication records, one JSON object per line");
  app.add_option("--gazetteer", gazetteers, "Gazetteer TSV file(s): key, lat, lon, source");
  app.add_option("--cache", cache, "Geocode cache (JSON lines)")->capture_default_str();
  app.add_option("--field-scheme", field_scheme, "Field scheme TSV: category_code, field_code, broad_field_code");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--window", window, "Publication years to admit, y0:y1")->capture_default_str();
  app.add_option("--doc-types", doc_types, "Admitted document types")->capture_default_str();
  app.add_option("--reprint-cutoff", config.filter.reprint_cutoff_year,
                 "Drop reprint addresses of publications after this year")->capture_default_str();
  app.add_option("--fixed-journals", fixed_journals,
                 "Keep only journals publishing in every year of y0:y1");
  app.add_option("--region-countries", region_countries,
                 "Countries whose state/province is part of the address key");
  app.add_option("--threads", config.threads, "Worker threads")->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--fractional", weighting, "Country weighting: proportional | equal-country")
      ->capture_default_str();
  app.add_option("--dispersion-self-pairs", self_pairs, "include | exclude")->capture_default_str();

  auto* geocode = app.add_subcommand("geocode", "Count, geocode and reconcile addresses");
  geocode->add_option("--strict-km", config.policy.strict_distance_km)->capture_default_str();
  geocode->add_option("--strict-min-occurrences", config.policy.strict_min_occurrences)->capture_default_str();
  geocode->add_option("--cursory-km", config.policy.cursory_distance_km)->capture_default_str();
  geocode->add_option("--preferred-source", config.policy.preferred_source,
                      "Source trusted when sources agree (default: first listed)");
  geocode->add_option("--top-k", config.policy.top_k_addresses,
                      "Geocode only the most frequent addresses")->capture_default_str();
  std::string verdicts;
  geocode->add_option("--review-verdicts", verdicts, "Completed review queue to apply");

  auto* indicators = app.add_subcommand("indicators", "Indicator tables per partition cell");
  std::vector<std::string> partitions{"all", "country"};
  indicators->add_option("--partitions", partitions, "all, country, field, broad_field")
      ->capture_default_str();

  auto* trend = app.add_subcommand("trend", "Yearly series and growth between two years");
  std::string metric = "mgcd";
  std::string dimension = "all";
  std::string cell = "all";
  std::string series;
  int y0 = 0, y1 = 0;
  trend->add_option("--metric", metric)->capture_default_str();
  trend->add_option("--from", y0, "First endpoint year")->required();
  trend->add_option("--to", y1, "Last endpoint year")->required();
  trend->add_option("--dimension", dimension)->capture_default_str();
  trend->add_option("--cell", cell, "Unit within the dimension")->capture_default_str();
  trend->add_option("--series", series, "CSV with year,value columns instead of the corpus");

  auto* disp = app.add_subcommand("dispersion", "Geographic dispersion of addresses per year");
  std::vector<int> disp_years;
  disp->add_option("years", disp_years, "Years to evaluate")->required();

  auto* map = app.add_subcommand("map-classes", "Country map colour classes");
  map->add_option("--map-window", map_window, "Years pooled per country")->capture_default_str();

  auto* sample = app.add_subcommand("audit-sample", "Random sample of resolved addresses");
  std::size_t sample_size = 150;
  sample->add_option("-n,--size", sample_size)->capture_default_str();

  auto* compare = app.add_subcommand("audit-compare", "Compare verified against resolved coordinates");
  std::string verified;
  double threshold_km = 50.0;
  compare->add_option("--verified", verified, "Audit sample with verified_lat/verified_lon filled")
      ->required();
  compare->add_option("--threshold-km", threshold_km)->capture_default_str();

  auto* schema = app.add_subcommand("schema-check", "Validate every corpus record");

  auto* gen = app.add_subcommand("gen-synthetic", "Write a seeded synthetic corpus and gazetteer");
  SyntheticOptions synth;
  std::string synth_years = "1980:2009";
  bool single_source = false;
  gen->add_option("--pubs", synth.publications)->capture_default_str();
  gen->add_option("--countries", synth.countries)->capture_default_str();
  gen->add_option("--sites-per-country", synth.sites_per_country)->capture_default_str();
  gen->add_option("--years", synth_years)->capture_default_str();
  gen->add_option("--max-addresses", synth.max_addresses)->capture_default_str();
  gen->add_option("--journals", synth.journals)->capture_default_str();
  gen->add_option("--categories", synth.categories)->capture_default_str();
  gen->add_option("--missing-fraction", synth.missing_fraction)->capture_default_str();
  gen->add_option("--conflict-fraction", synth.conflict_fraction)->capture_default_str();
  gen->add_flag("--single-source", single_source, "Emit only one gazetteer source");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    config.corpus = corpus;
    for (const auto& g : gazetteers) config.gazetteers.emplace_back(g);
    config.cache = cache;
    if (!field_scheme.empty()) config.field_scheme = field_scheme;
    if (!verdicts.empty()) config.review_verdicts = verdicts;
    config.out_dir = out_dir;
    config.filter.years = parse_window(window);
    config.filter.allowed_types.clear();
    for (const auto& t : doc_types) {
      const DocType type = parse_doc_type(t);
      if (type == DocType::other && fold_token(t) != "other") {
        throw ConfigError("unknown document type '" + t + "'");
      }
      config.filter.allowed_types.insert(type);
    }
    if (!fixed_journals.empty()) config.filter.fixed_journal_window = parse_window(fixed_journals);
    if (!region_countries.empty()) {
      config.regions.region_countries.clear();
      for (const auto& c : region_countries) config.regions.region_countries.insert(fold_token(c));
    }
    config.map_window = parse_window(map_window);
    config.weighting = parse_country_weighting(weighting);
    config.self_pairs = parse_self_pairs(self_pairs);
    config.partitions.clear();
    for (const auto& p : partitions) config.partitions.push_back(parse_dimension(p));

    std::ostream& log = std::cout;
    if (*geocode) {
      cmd_geocode(config, log);
    } else if (*indicators) {
      cmd_indicators(config, log);
    } else if (*trend) {
      TrendRequest request;
      request.metric = parse_metric(metric);
      request.y0 = y0;
      request.y1 = y1;
      request.dimension = parse_dimension(dimension);
      request.unit = request.dimension == Dimension::all ? "all" : fold_token(cell);
      if (request.dimension == Dimension::field || request.dimension == Dimension::broad_field) {
        request.unit = cell;
      }
      if (!series.empty()) request.series_file = series;
      cmd_trend(config, request, log);
    } else if (*disp) {
      cmd_dispersion(config, disp_years, log);
    } else if (*map) {
      cmd_map_classes(config, log);
    } else if (*sample) {
      cmd_audit_sample(config, sample_size, seed, log);
    } else if (*compare) {
      cmd_audit_compare(config, verified, threshold_km, log);
    } else if (*schema) {
      if (config.corpus.empty()) throw ConfigError("schema-check needs --corpus");
      const auto report = cmd_schema_check(config.corpus, log);
      return report.valid == report.lines ? 0 : kExitData;
    } else if (*gen) {
      synth.seed = seed;
      synth.second_source = !single_source;
      const auto w = parse_window(synth_years);
      synth.years = w;
      cmd_gen_synthetic(synth, config.out_dir, log);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
