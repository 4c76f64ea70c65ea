// Subcommand implementations behind the geocollab CLI. Each command reads
// its inputs from RunConfig, writes its files under out_dir and returns the
// numbers it printed so callers and tests can inspect them.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geocollab/aggregate.hpp"
#include "geocollab/gazetteer.hpp"
#include "geocollab/io.hpp"
#include "geocollab/model.hpp"
#include "geocollab/synthetic.hpp"

namespace geocollab {

struct RunConfig {
  std::filesystem::path corpus;
  std::vector<std::filesystem::path> gazetteers;
  std::filesystem::path cache = "geocode_cache.jsonl";
  std::optional<std::filesystem::path> field_scheme;
  std::optional<std::filesystem::path> review_verdicts;
  CorpusFilter filter;
  ReconcilePolicy policy;
  RegionPolicy regions;
  std::filesystem::path out_dir = "out";
  std::vector<Dimension> partitions{Dimension::all, Dimension::country};
  YearWindow map_window{2007, 2009};
  unsigned threads = 1;
  std::size_t chunk_lines = 8192;
  CountryWeighting weighting = CountryWeighting::proportional;
  SelfPairs self_pairs = SelfPairs::include;
};

/// Attaches cached coordinates to geocodable addresses.
void resolve_coordinates(Publication& p, const CoordinateIndex& index);

struct GeocodeSummary {
  IngestReport ingest;
  std::uint64_t total_occurrences = 0;
  std::uint64_t ungeocodable_occurrences = 0;
  std::uint64_t resolved_occurrences = 0;
  std::size_t unique_addresses = 0;
  std::size_t considered = 0;
  std::size_t resolved_auto = 0;
  std::size_t resolved_manual = 0;
  std::size_t pending_strict = 0;
  std::size_t pending_cursory = 0;
  std::size_t unknown = 0;
  std::size_t queried = 0;
  std::size_t verdicts_applied = 0;
  std::size_t verdicts_ignored = 0;
  /// Occurrence-weighted share of addresses with usable coordinates.
  double coverage_pct = 0.0;
  std::filesystem::path review_queue;
};

/// Counts address occurrences, geocodes the top_k keys (reusing cached
/// candidates), reconciles, applies review verdicts, then writes the cache
/// and out_dir/review_queue.tsv.
GeocodeSummary cmd_geocode(const RunConfig& config, std::ostream& log);

struct IndicatorsResult {
  IngestReport ingest;
  CellAggregator cells;
  std::vector<std::filesystem::path> files;
};

/// One CSV per partition dimension plus indicators_meta.json.
IndicatorsResult cmd_indicators(const RunConfig& config, std::ostream& log);

/// CSV cell formatting shared by the report writers.
std::string csv_field(std::string_view text);
std::string summary_columns(const IndicatorSummary& s);
inline constexpr std::string_view kSummaryHeader =
    "frac_pubs,mgcd_km,pct_mldc,pct_ldc,pct_vldc,pct_copub,pct_intl_copub,mean_authors";

struct TrendRequest {
  Metric metric = Metric::mgcd;
  int y0 = 0;
  int y1 = 0;
  Dimension dimension = Dimension::all;
  std::string unit = "all";
  /// Read (year, value) pairs from this CSV instead of the corpus.
  std::optional<std::filesystem::path> series_file;
};

struct TrendResult {
  std::vector<TrendPoint> series;
  double value_y0 = 0.0;
  double value_y1 = 0.0;
  double annual_growth = 0.0;
  double annual_growth_rate_pct = 0.0;
};

/// Writes trend.csv and trend_growth.csv. Throws DataError when an endpoint
/// year is absent.
TrendResult cmd_trend(const RunConfig& config, const TrendRequest& request, std::ostream& log);

/// Reads `year,value` rows into a series carrying `metric`.
std::vector<TrendPoint> read_series_csv(const std::filesystem::path& path, Metric metric);

struct DispersionRow {
  int year = 0;
  std::optional<double> dispersion_km;
  std::uint64_t occurrences = 0;
  std::size_t locations = 0;
};

struct DispersionResult {
  std::vector<DispersionRow> rows;
  std::optional<double> annual_growth;
  std::optional<double> annual_growth_rate_pct;
};

/// Writes dispersion.csv and, when both endpoints are defined,
/// dispersion_growth.csv.
DispersionResult cmd_dispersion(const RunConfig& config, std::vector<int> years, std::ostream& log);

struct MapRow {
  std::string country;
  double frac_pubs = 0.0;
  std::optional<double> mgcd_km;
  MapClass map_class = MapClass::white;
};

/// Writes map_classes.csv for the window in config.map_window.
std::vector<MapRow> cmd_map_classes(const RunConfig& config, std::ostream& log);

/// Writes out_dir/audit_sample.tsv.
std::vector<AuditItem> cmd_audit_sample(const RunConfig& config, std::size_t n, std::uint64_t seed,
                                        std::ostream& log);

/// Writes out_dir/audit_report.tsv listing mismatches.
AuditReport cmd_audit_compare(const RunConfig& config, const std::filesystem::path& verified,
                              double threshold_km, std::ostream& log);

SchemaReport cmd_schema_check(const std::filesystem::path& corpus, std::ostream& log);

SyntheticFiles cmd_gen_synthetic(const SyntheticOptions& options, const std::filesystem::path& out_dir,
                                 std::ostream& log);

}  // namespace geocollab
