// Per-publication collaboration distance and the per-cell indicator battery.
#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "geocollab/geo.hpp"
#include "geocollab/model.hpp"

namespace geocollab {

/// Distance thresholds (km) for the medium/long, long and very long
/// collaboration shares. Comparisons are strict.
inline constexpr double kMldcThresholdKm = 200.0;
inline constexpr double kLdcThresholdKm = 1000.0;
inline constexpr double kVldcThresholdKm = 5000.0;

struct GcdResult {
  /// Defined iff at least one address has coordinates.
  std::optional<double> value_km;
  std::size_t geocoded_addresses = 0;
  std::size_t dropped_addresses = 0;

  bool defined() const noexcept { return value_km.has_value(); }
  /// Some addresses lacked coordinates, so the value may be too small.
  bool downward_biased() const noexcept { return dropped_addresses > 0 && geocoded_addresses > 0; }
};

/// Largest pairwise great-circle distance over points; 0 for one point.
double max_pairwise_distance(std::span<const GeoPoint> points) noexcept;

/// GCD over the addresses whose coords are known.
GcdResult gcd(std::span<const Address> addresses);
inline GcdResult gcd(const Publication& p) { return gcd(p.addresses); }

struct ThresholdFlags {
  bool mldc = false;
  bool ldc = false;
  bool vldc = false;

  friend bool operator==(const ThresholdFlags&, const ThresholdFlags&) = default;
};

/// All false for an undefined GCD.
ThresholdFlags threshold_flags(const GcdResult& g) noexcept;

struct CopubFlags {
  bool copub = false;
  bool intl_copub = false;

  friend bool operator==(const CopubFlags&, const CopubFlags&) = default;
};

/// copub: more than one distinct address key; intl: more than one country.
CopubFlags copub_flags(const Publication& p);

/// Everything the indicators need from one publication.
struct PublicationMeasures {
  GcdResult gcd;
  ThresholdFlags flags;
  CopubFlags copub;
  int author_count = 1;
};

PublicationMeasures measure(const Publication& p);

struct IndicatorSummary {
  double frac_pubs = 0.0;
  /// Weight of publications with a defined GCD; denominator of the
  /// distance indicators.
  double gcd_weight = 0.0;
  std::optional<double> mgcd_km;
  std::optional<double> pct_mldc;
  std::optional<double> pct_ldc;
  std::optional<double> pct_vldc;
  std::optional<double> pct_copub;
  std::optional<double> pct_intl_copub;
  std::optional<double> mean_authors;
};

/// Weighted running sums; merge() is associative and commutative.
class SummaryAccumulator {
 public:
  void add(const PublicationMeasures& m, double weight);
  void merge(const SummaryAccumulator& other);
  IndicatorSummary summary() const;

  double weight() const noexcept { return weight_; }
  bool empty() const noexcept { return weight_ == 0.0; }

 private:
  double weight_ = 0.0;
  double gcd_weight_ = 0.0;
  double gcd_sum_ = 0.0;
  double mldc_ = 0.0;
  double ldc_ = 0.0;
  double vldc_ = 0.0;
  double copub_ = 0.0;
  double intl_copub_ = 0.0;
  double authors_ = 0.0;
};

struct WeightedMeasures {
  PublicationMeasures measures;
  double weight = 1.0;
};

IndicatorSummary summarize(std::span<const WeightedMeasures> items);

}  // namespace geocollab
