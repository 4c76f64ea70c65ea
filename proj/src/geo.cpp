#include "geocollab/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace geocollab {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

bool GeoPoint::valid(double lat, double lon) noexcept {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
         lon >= -180.0 && lon <= 180.0;
}

GeoPoint::GeoPoint(double lat, double lon) : lat_(lat), lon_(lon) {
  if (!valid(lat, lon)) {
    throw std::invalid_argument("coordinate out of range: (" + std::to_string(lat) + ", " +
                                std::to_string(lon) + ")");
  }
}

std::optional<GeoPoint> GeoPoint::make(double lat, double lon) noexcept {
  if (!valid(lat, lon)) return std::nullopt;
  return GeoPoint(Unchecked{}, lat, lon);
}

double great_circle_distance(const GeoPoint& a, const GeoPoint& b) noexcept {
  // Absolute differences keep the result bit-identical under argument swap.
  const double dlat = std::fabs(b.lat() - a.lat()) * kDegToRad;
  double dlon_deg = std::fabs(b.lon() - a.lon());
  if (dlon_deg > 180.0) dlon_deg = 360.0 - dlon_deg;
  const double dlon = dlon_deg * kDegToRad;

  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  const double cos_product = std::cos(a.lat() * kDegToRad) * std::cos(b.lat() * kDegToRad);
  const double h = s_lat * s_lat + cos_product * s_lon * s_lon;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

}  // namespace geocollab
