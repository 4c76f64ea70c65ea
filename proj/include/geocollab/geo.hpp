// Geodesic primitives on a spherical Earth.
#pragma once

#include <optional>

namespace geocollab {

/// Mean Earth radius used for every distance in the project.
inline constexpr double kEarthRadiusKm = 6371.0;

/// Latitude/longitude in degrees. Always valid: lat in [-90, 90],
/// lon in [-180, 180], both finite.
class GeoPoint {
 public:
  /// Throws std::invalid_argument for out-of-range or non-finite input.
  GeoPoint(double lat, double lon);

  static std::optional<GeoPoint> make(double lat, double lon) noexcept;
  static bool valid(double lat, double lon) noexcept;

  double lat() const noexcept { return lat_; }
  double lon() const noexcept { return lon_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  struct Unchecked {};
  GeoPoint(Unchecked, double lat, double lon) noexcept : lat_(lat), lon_(lon) {}

  double lat_;
  double lon_;
};

/// Haversine distance in kilometres. Exactly symmetric, exactly zero for
/// equal points and for the two representations of the antimeridian.
double great_circle_distance(const GeoPoint& a, const GeoPoint& b) noexcept;

}  // namespace geocollab
