#include "geocollab/indicators.hpp"

#include <algorithm>
#include <string_view>
#include <vector>

namespace geocollab {

double max_pairwise_distance(std::span<const GeoPoint> points) noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::max(best, great_circle_distance(points[i], points[j]));
    }
  }
  return best;
}

GcdResult gcd(std::span<const Address> addresses) {
  GcdResult result;
  std::vector<GeoPoint> points;
  points.reserve(addresses.size());
  for (const auto& a : addresses) {
    if (a.coords) {
      points.push_back(*a.coords);
    } else {
      ++result.dropped_addresses;
    }
  }
  result.geocoded_addresses = points.size();
  if (!points.empty()) result.value_km = max_pairwise_distance(points);
  return result;
}

ThresholdFlags threshold_flags(const GcdResult& g) noexcept {
  if (!g.value_km) return {};
  const double d = *g.value_km;
  return {d > kMldcThresholdKm, d > kLdcThresholdKm, d > kVldcThresholdKm};
}

CopubFlags copub_flags(const Publication& p) {
  CopubFlags flags;
  const auto& addrs = p.addresses;
  for (std::size_t i = 1; i < addrs.size() && !flags.intl_copub; ++i) {
    const auto& first = addrs.front();
    const auto& a = addrs[i];
    if (a.country != first.country) {
      flags.copub = true;
      flags.intl_copub = true;
    } else if (a.city != first.city || a.region != first.region) {
      flags.copub = true;
    }
  }
  return flags;
}

PublicationMeasures measure(const Publication& p) {
  PublicationMeasures m;
  m.gcd = gcd(p);
  m.flags = threshold_flags(m.gcd);
  m.copub = copub_flags(p);
  m.author_count = p.author_count;
  return m;
}

void SummaryAccumulator::add(const PublicationMeasures& m, double w) {
  weight_ += w;
  if (m.copub.copub) copub_ += w;
  if (m.copub.intl_copub) intl_copub_ += w;
  authors_ += w * m.author_count;
  if (!m.gcd.value_km) return;
  gcd_weight_ += w;
  gcd_sum_ += w * *m.gcd.value_km;
  if (m.flags.mldc) mldc_ += w;
  if (m.flags.ldc) ldc_ += w;
  if (m.flags.vldc) vldc_ += w;
}

void SummaryAccumulator::merge(const SummaryAccumulator& o) {
  weight_ += o.weight_;
  gcd_weight_ += o.gcd_weight_;
  gcd_sum_ += o.gcd_sum_;
  mldc_ += o.mldc_;
  ldc_ += o.ldc_;
  vldc_ += o.vldc_;
  copub_ += o.copub_;
  intl_copub_ += o.intl_copub_;
  authors_ += o.authors_;
}

IndicatorSummary SummaryAccumulator::summary() const {
  IndicatorSummary s;
  s.frac_pubs = weight_;
  s.gcd_weight = gcd_weight_;
  if (gcd_weight_ > 0.0) {
    s.mgcd_km = gcd_sum_ / gcd_weight_;
    s.pct_mldc = 100.0 * (mldc_ / gcd_weight_);
    s.pct_ldc = 100.0 * (ldc_ / gcd_weight_);
    s.pct_vldc = 100.0 * (vldc_ / gcd_weight_);
  }
  if (weight_ > 0.0) {
    s.pct_copub = 100.0 * (copub_ / weight_);
    s.pct_intl_copub = 100.0 * (intl_copub_ / weight_);
    s.mean_authors = authors_ / weight_;
  }
  return s;
}

IndicatorSummary summarize(std::span<const WeightedMeasures> items) {
  SummaryAccumulator acc;
  for (const auto& item : items) acc.add(item.measures, item.weight);
  return acc.summary();
}

}  // namespace geocollab
