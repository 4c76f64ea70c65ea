// Coordinate resolution: gazetteer sources, multi-source reconciliation,
// manual review round-trips and the accuracy audit.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "geocollab/geo.hpp"
#include "geocollab/model.hpp"

namespace geocollab {

enum class GeocodeStatus {
  resolved_auto,
  resolved_manual,
  pending_review_strict,
  pending_review_cursory,
  unknown,
};

std::string_view to_string(GeocodeStatus status) noexcept;
GeocodeStatus parse_geocode_status(std::string_view text);

inline bool is_resolved(GeocodeStatus s) noexcept {
  return s == GeocodeStatus::resolved_auto || s == GeocodeStatus::resolved_manual;
}
inline bool is_pending(GeocodeStatus s) noexcept {
  return s == GeocodeStatus::pending_review_strict || s == GeocodeStatus::pending_review_cursory;
}

struct Candidate {
  std::string source;
  GeoPoint point;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct GeocodeEntry {
  AddressKey key;
  std::uint64_t occurrences = 0;
  /// In source-listing order; a source that failed to recognise the key is absent.
  std::vector<Candidate> candidates;
  std::optional<GeoPoint> resolved;
  GeocodeStatus status = GeocodeStatus::unknown;

  const Candidate* candidate(std::string_view source) const noexcept;
  /// Coordinates usable downstream; pending entries never contribute.
  std::optional<GeoPoint> contributing_point() const noexcept {
    return is_resolved(status) ? resolved : std::nullopt;
  }

  friend bool operator==(const GeocodeEntry&, const GeocodeEntry&) = default;
};

struct ReconcilePolicy {
  double strict_distance_km = 50.0;
  std::uint64_t strict_min_occurrences = 200;
  double cursory_distance_km = 100.0;
  /// Empty means "the first-listed source".
  std::string preferred_source;
  std::size_t top_k_addresses = 11000;

  /// Throws std::invalid_argument if thresholds are non-positive or unordered.
  void validate() const;
};

/// Largest pairwise distance between the entry's candidates; nullopt with
/// fewer than two candidates.
std::optional<double> disagreement_km(const GeocodeEntry& entry);

/// Assigns status and resolved point from the candidates. Total and
/// deterministic: every entry leaves with exactly one status.
GeocodeEntry reconcile(GeocodeEntry entry, const ReconcilePolicy& policy);

struct ConfirmSource {
  std::string source;
};
struct SupplyPoint {
  GeoPoint point;
};
struct MarkUnknown {};
using ReviewVerdict = std::variant<ConfirmSource, SupplyPoint, MarkUnknown>;

class ReviewError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ReviewError if the entry is not pending or the confirmed source
/// has no candidate.
GeocodeEntry apply_review(GeocodeEntry entry, const ReviewVerdict& verdict);

/// Parses a reviewer's verdict cell: "unknown", "confirm:<source>", a bare
/// source name, or "lat,lon". Empty text means "not reviewed yet".
std::optional<ReviewVerdict> parse_verdict(std::string_view text);

// ---------------------------------------------------------------------------
// Geocoder clients

/// Uniform interface over coordinate providers.
class GeocoderClient {
 public:
  virtual ~GeocoderClient() = default;
  virtual const std::string& name() const noexcept = 0;
  virtual std::optional<GeoPoint> lookup(const AddressKey& key) const = 0;
};

/// One source's rows from gazetteer files, held in memory.
class GazetteerSource final : public GeocoderClient {
 public:
  explicit GazetteerSource(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept override { return name_; }
  std::optional<GeoPoint> lookup(const AddressKey& key) const override;

  /// Later inserts for the same key replace earlier ones.
  void insert(const AddressKey& key, GeoPoint point);
  std::size_t size() const noexcept { return points_.size(); }

 private:
  std::string name_;
  std::unordered_map<AddressKey, GeoPoint> points_;
};

/// Loads tab-separated `key lat lon source` files (header row required).
/// Sources come back in order of first appearance. Missing files raise
/// ConfigError; bad rows raise DataError naming file and line.
std::vector<std::unique_ptr<GeocoderClient>> load_gazetteer(
    std::span<const std::filesystem::path> paths);

/// Asks every client for the key; candidates follow client order.
std::vector<Candidate> query_sources(const AddressKey& key,
                                     std::span<const std::unique_ptr<GeocoderClient>> clients);

// ---------------------------------------------------------------------------
// Occurrence ranking

struct KeyCount {
  AddressKey key;
  std::uint64_t occurrences = 0;

  friend bool operator==(const KeyCount&, const KeyCount&) = default;
};

/// Mergeable occurrence tally over address keys.
class OccurrenceCounter {
 public:
  void add(const AddressKey& key, std::uint64_t n = 1) { counts_[key] += n; }
  void add_publication(const Publication& p);
  void merge(const OccurrenceCounter& other);

  std::size_t unique() const noexcept { return counts_.size(); }
  std::uint64_t count(const AddressKey& key) const;
  /// Descending by occurrences, ties broken by key.
  std::vector<KeyCount> ranked() const;

 private:
  std::unordered_map<AddressKey, std::uint64_t> counts_;
};

/// Counts geocodable address occurrences across admitted publications.
std::vector<KeyCount> rank_addresses_by_occurrence(std::span<const Publication> corpus);

/// Queries sources for the top_k ranked keys and reconciles them; the rest
/// come back as unknown without candidates. Output keeps the ranked order.
std::vector<GeocodeEntry> geocode_ranked(std::span<const KeyCount> ranked,
                                         std::span<const std::unique_ptr<GeocoderClient>> clients,
                                         const ReconcilePolicy& policy);

// ---------------------------------------------------------------------------
// Persistence

/// One JSON object per line: key, occurrences, candidates, resolved, status.
void write_cache(const std::filesystem::path& path, std::span<const GeocodeEntry> entries);
std::vector<GeocodeEntry> read_cache(const std::filesystem::path& path);
std::string cache_line(const GeocodeEntry& entry);
GeocodeEntry parse_cache_line(std::string_view line);

/// Key to usable coordinates, built from resolved cache entries only.
using CoordinateIndex = std::unordered_map<std::string, GeoPoint>;
CoordinateIndex build_coordinate_index(std::span<const GeocodeEntry> entries);

/// Tab-separated queue of pending entries with an empty verdict column.
void write_review_queue(std::ostream& out, std::span<const GeocodeEntry> pending,
                        std::span<const std::string> sources);

struct ReviewRow {
  AddressKey key;
  ReviewVerdict verdict;
};

/// Reads a completed queue; rows with an empty verdict are skipped.
std::vector<ReviewRow> read_review_verdicts(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Accuracy audit

struct AuditItem {
  AddressKey key;
  GeoPoint resolved;
};

/// Uniform sample without replacement from resolved entries, reproducible
/// from the seed. Throws std::invalid_argument if n exceeds the population.
std::vector<AuditItem> audit_sample(std::span<const GeocodeEntry> entries, std::size_t n,
                                    std::uint64_t seed);

struct VerifiedPoint {
  AddressKey key;
  GeoPoint verified;
};

struct AuditMismatch {
  AddressKey key;
  double distance_km = 0.0;
};

struct AuditReport {
  std::size_t compared = 0;
  std::size_t not_resolved = 0;
  std::vector<AuditMismatch> mismatches;
};

/// Counts verified points farther than threshold_km from the resolved ones.
AuditReport audit_compare(std::span<const VerifiedPoint> verified, const CoordinateIndex& resolved,
                          double threshold_km = 50.0);

void write_audit_sample(std::ostream& out, std::span<const AuditItem> sample);
/// Reads `key` plus `verified_lat`/`verified_lon` (or `lat`/`lon`) columns;
/// rows without a verified point are skipped.
std::vector<VerifiedPoint> read_verified_points(const std::filesystem::path& path);

}  // namespace geocollab
