// Fractional counting, aggregation cells, growth statistics, geographic
// dispersion and the country map classification.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geocollab/geo.hpp"
#include "geocollab/indicators.hpp"
#include "geocollab/model.hpp"

namespace geocollab {

/// Field code for publications whose categories are not in the scheme.
inline constexpr std::string_view kUnclassified = "unclassified";

struct UnitShare {
  std::string unit;
  double weight = 0.0;

  friend bool operator==(const UnitShare&, const UnitShare&) = default;
};

/// Units sorted by code; weights in (0, 1] summing to 1.
struct FractionalAssignment {
  std::string pub_id;
  std::vector<UnitShare> shares;
};

enum class CountryWeighting {
  /// Proportional to the number of addresses per country.
  proportional,
  /// Equal share per distinct country.
  equal_country,
};

CountryWeighting parse_country_weighting(std::string_view text);
std::string_view to_string(CountryWeighting w) noexcept;

/// Subject category to field to broad field. Broad fields are ET, MLA, NCM, SHA.
class FieldScheme {
 public:
  static const std::set<std::string, std::less<>>& broad_fields();

  /// Tab-separated `category_code field_code broad_field_code`. Throws
  /// DataError for unknown broad fields, conflicting duplicates, or a field
  /// mapped to two broad fields; ConfigError if the file is missing.
  static FieldScheme load(const std::filesystem::path& path);

  /// Throws DataError on the same conditions as load().
  void add(const std::string& category, const std::string& field, const std::string& broad);

  std::optional<std::string_view> field_of(std::string_view category) const;
  std::optional<std::string_view> broad_of_field(std::string_view field) const;
  std::size_t size() const noexcept { return category_field_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> category_field_;
  std::map<std::string, std::string, std::less<>> field_broad_;
};

enum class Dimension { all, country, field, broad_field };

Dimension parse_dimension(std::string_view text);
std::string_view to_string(Dimension d) noexcept;

FractionalAssignment fractionalize_countries(const Publication& p,
                                             CountryWeighting weighting = CountryWeighting::proportional);

/// Equal share per subject category, accumulated per field (or broad field
/// when `broad` is set). Unmapped categories go to kUnclassified and are
/// appended to `unmapped` when given.
FractionalAssignment fractionalize_fields(const Publication& p, const FieldScheme& scheme,
                                          bool broad = false,
                                          std::vector<std::string>* unmapped = nullptr);

struct CellKey {
  std::string unit;
  int year = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

using CellMap = std::map<CellKey, SummaryAccumulator>;

/// Mergeable accumulation of publications into (dimension, unit, year) cells.
class CellAggregator {
 public:
  CellAggregator(std::vector<Dimension> dimensions, const FieldScheme* scheme,
                 CountryWeighting weighting = CountryWeighting::proportional);

  void add(const Publication& p, const PublicationMeasures& m);
  void add(const Publication& p) { add(p, measure(p)); }
  void merge(const CellAggregator& other);

  const std::vector<Dimension>& dimensions() const noexcept { return dimensions_; }
  const CellMap& cells(Dimension d) const;
  /// Category code to number of publications where it was unmapped.
  const std::map<std::string, std::uint64_t>& unmapped_categories() const noexcept {
    return unmapped_;
  }

 private:
  std::vector<Dimension> dimensions_;
  const FieldScheme* scheme_;
  CountryWeighting weighting_;
  std::map<Dimension, CellMap> cells_;
  std::map<std::string, std::uint64_t> unmapped_;
};

/// In-memory helper over a resolved corpus.
CellAggregator aggregate_cells(std::span<const Publication> corpus, std::vector<Dimension> dimensions,
                               const FieldScheme* scheme,
                               CountryWeighting weighting = CountryWeighting::proportional);

/// Merges a unit's yearly cells inside the window into one accumulator per unit.
std::map<std::string, SummaryAccumulator> collapse_years(const CellMap& cells, YearWindow window);

// ---------------------------------------------------------------------------
// Trends

enum class Metric { frac_pubs, mgcd, pct_mldc, pct_ldc, pct_vldc, pct_copub, pct_intl_copub, mean_authors };

Metric parse_metric(std::string_view text);
std::string_view to_string(Metric m) noexcept;
std::optional<double> metric_value(const IndicatorSummary& s, Metric m) noexcept;

struct TrendPoint {
  int year = 0;
  IndicatorSummary summary;
};

/// Yearly series for one unit, years increasing.
std::vector<TrendPoint> trend_series(const CellMap& cells, std::string_view unit);

/// (v1 - v0) / years. Throws DataError unless years > 0.
double annual_growth(double v0, double v1, int years);
/// Compound annual growth rate in percent. Throws DataError unless v0 > 0
/// and years > 0.
double annual_growth_rate(double v0, double v1, int years);

/// Series forms; throw DataError if a year is missing or the metric is undefined there.
double annual_growth(std::span<const TrendPoint> series, Metric metric, int y0, int y1);
double annual_growth_rate(std::span<const TrendPoint> series, Metric metric, int y0, int y1);

// ---------------------------------------------------------------------------
// Dispersion

struct LocationCount {
  GeoPoint point;
  std::uint64_t count = 0;
};

enum class SelfPairs { include, exclude };

SelfPairs parse_self_pairs(std::string_view text);

/// Occurrence-weighted mean distance over ordered pairs of locations. With
/// SelfPairs::include the i=j terms (distance 0) stay in the denominator.
/// Throws DataError for an empty multiset or a zero denominator.
double dispersion(std::span<const LocationCount> locations, SelfPairs self_pairs = SelfPairs::include,
                  unsigned threads = 1);

// ---------------------------------------------------------------------------
// Country map

enum class MapClass { white, dark_blue, light_blue, green, yellow, red };

std::string_view to_string(MapClass c) noexcept;

inline constexpr double kMapMinPublications = 200.0;

/// White below the publication floor or without an MGCD; otherwise bands
/// [0,1000) [1000,2000) [2000,3000) [3000,4000] (4000,inf).
MapClass classify_country(double frac_pubs, std::optional<double> mgcd_km,
                          double min_pubs = kMapMinPublications) noexcept;

struct CountryWindowStats {
  double frac_pubs = 0.0;
  std::optional<double> mgcd_km;
};

std::map<std::string, MapClass> classify_country_map(
    const std::map<std::string, CountryWindowStats>& countries,
    double min_pubs = kMapMinPublications);

}  // namespace geocollab
