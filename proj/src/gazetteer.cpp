#include "geocollab/gazetteer.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "geocollab/errors.hpp"
#include "geocollab/io.hpp"
#include "geocollab/random.hpp"

namespace geocollab {

using nlohmann::ordered_json;

std::string_view to_string(GeocodeStatus status) noexcept {
  switch (status) {
    case GeocodeStatus::resolved_auto: return "resolved_auto";
    case GeocodeStatus::resolved_manual: return "resolved_manual";
    case GeocodeStatus::pending_review_strict: return "pending_review_strict";
    case GeocodeStatus::pending_review_cursory: return "pending_review_cursory";
    case GeocodeStatus::unknown: return "unknown";
  }
  return "unknown";
}

GeocodeStatus parse_geocode_status(std::string_view text) {
  for (auto s : {GeocodeStatus::resolved_auto, GeocodeStatus::resolved_manual,
                 GeocodeStatus::pending_review_strict, GeocodeStatus::pending_review_cursory,
                 GeocodeStatus::unknown}) {
    if (to_string(s) == text) return s;
  }
  throw DataError("unknown geocode status '" + std::string(text) + "'");
}

const Candidate* GeocodeEntry::candidate(std::string_view source) const noexcept {
  for (const auto& c : candidates) {
    if (c.source == source) return &c;
  }
  return nullptr;
}

void ReconcilePolicy::validate() const {
  if (!(strict_distance_km > 0.0) || !(cursory_distance_km > 0.0) || strict_min_occurrences == 0) {
    throw std::invalid_argument("reconcile thresholds must be positive");
  }
  if (!(strict_distance_km < cursory_distance_km)) {
    throw std::invalid_argument("strict distance must be below cursory distance");
  }
}

std::optional<double> disagreement_km(const GeocodeEntry& entry) {
  if (entry.candidates.size() < 2) return std::nullopt;
  double worst = 0.0;
  for (std::size_t i = 0; i < entry.candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < entry.candidates.size(); ++j) {
      worst = std::max(worst, great_circle_distance(entry.candidates[i].point,
                                                    entry.candidates[j].point));
    }
  }
  return worst;
}

GeocodeEntry reconcile(GeocodeEntry entry, const ReconcilePolicy& policy) {
  entry.resolved.reset();
  if (entry.candidates.empty()) {
    entry.status = GeocodeStatus::unknown;
    return entry;
  }
  if (const auto d = disagreement_km(entry)) {
    const bool frequent = entry.occurrences > policy.strict_min_occurrences;
    if (frequent && *d > policy.strict_distance_km) {
      entry.status = GeocodeStatus::pending_review_strict;
      return entry;
    }
    if (!frequent && *d > policy.cursory_distance_km) {
      entry.status = GeocodeStatus::pending_review_cursory;
      return entry;
    }
  }
  const Candidate* chosen = policy.preferred_source.empty()
                                ? nullptr
                                : entry.candidate(policy.preferred_source);
  if (!chosen) chosen = &entry.candidates.front();
  entry.resolved = chosen->point;
  entry.status = GeocodeStatus::resolved_auto;
  return entry;
}

GeocodeEntry apply_review(GeocodeEntry entry, const ReviewVerdict& verdict) {
  if (!is_pending(entry.status)) {
    throw ReviewError("entry " + entry.key.str() + " is not pending review (status " +
                      std::string(to_string(entry.status)) + ")");
  }
  if (const auto* confirm = std::get_if<ConfirmSource>(&verdict)) {
    const Candidate* c = entry.candidate(confirm->source);
    if (!c) {
      throw ReviewError("entry " + entry.key.str() + " has no candidate from source '" +
                        confirm->source + "'");
    }
    entry.resolved = c->point;
    entry.status = GeocodeStatus::resolved_manual;
  } else if (const auto* supply = std::get_if<SupplyPoint>(&verdict)) {
    entry.resolved = supply->point;
    entry.status = GeocodeStatus::resolved_manual;
  } else {
    entry.resolved.reset();
    entry.status = GeocodeStatus::unknown;
  }
  return entry;
}

std::optional<ReviewVerdict> parse_verdict(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) return std::nullopt;
  text = text.substr(first, text.find_last_not_of(" \t") - first + 1);

  if (text == "unknown") return MarkUnknown{};
  if (text.starts_with("confirm:")) return ConfirmSource{std::string(text.substr(8))};

  const auto comma = text.find(',');
  if (comma != std::string_view::npos) {
    const double lat = parse_double(text.substr(0, comma), "verdict latitude");
    const double lon = parse_double(text.substr(comma + 1), "verdict longitude");
    const auto point = GeoPoint::make(lat, lon);
    if (!point) throw ReviewError("verdict coordinates out of range: " + std::string(text));
    return SupplyPoint{*point};
  }
  return ConfirmSource{std::string(text)};
}

// ---------------------------------------------------------------------------
// Geocoder clients

std::optional<GeoPoint> GazetteerSource::lookup(const AddressKey& key) const {
  const auto it = points_.find(key);
  if (it == points_.end()) return std::nullopt;
  return it->second;
}

void GazetteerSource::insert(const AddressKey& key, GeoPoint point) {
  points_.insert_or_assign(key, point);
}

std::vector<std::unique_ptr<GeocoderClient>> load_gazetteer(
    std::span<const std::filesystem::path> paths) {
  std::vector<std::unique_ptr<GazetteerSource>> sources;
  for (const auto& path : paths) {
    if (!std::filesystem::exists(path)) {
      throw ConfigError("gazetteer file not found: " + path.string());
    }
    const Table table = read_tsv(path);
    const auto key_col = table.require_column("key", path);
    const auto lat_col = table.require_column("lat", path);
    const auto lon_col = table.require_column("lon", path);
    const auto src_col = table.require_column("source", path);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      const std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
      AddressKey key;
      try {
        key = AddressKey::parse(row[key_col]);
      } catch (const std::invalid_argument& e) {
        throw DataError(where + ": " + e.what());
      }
      const auto point = GeoPoint::make(parse_double(row[lat_col], where + " lat"),
                                        parse_double(row[lon_col], where + " lon"));
      if (!point) throw DataError(where + ": coordinates out of range");
      const std::string& source = row[src_col];
      if (source.empty()) throw DataError(where + ": empty source");
      auto it = std::find_if(sources.begin(), sources.end(),
                             [&](const auto& s) { return s->name() == source; });
      if (it == sources.end()) {
        sources.push_back(std::make_unique<GazetteerSource>(source));
        it = std::prev(sources.end());
      }
      (*it)->insert(key, *point);
    }
  }
  std::vector<std::unique_ptr<GeocoderClient>> clients;
  for (auto& s : sources) clients.push_back(std::move(s));
  return clients;
}

std::vector<Candidate> query_sources(const AddressKey& key,
                                     std::span<const std::unique_ptr<GeocoderClient>> clients) {
  std::vector<Candidate> out;
  for (const auto& client : clients) {
    if (auto point = client->lookup(key)) out.push_back({client->name(), *point});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Occurrence ranking

void OccurrenceCounter::add_publication(const Publication& p) {
  for (const auto& a : p.addresses) {
    if (a.geocodable()) add(a.key());
  }
}

void OccurrenceCounter::merge(const OccurrenceCounter& other) {
  for (const auto& [key, n] : other.counts_) counts_[key] += n;
}

std::uint64_t OccurrenceCounter::count(const AddressKey& key) const {
  const auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

std::vector<KeyCount> OccurrenceCounter::ranked() const {
  std::vector<KeyCount> out;
  out.reserve(counts_.size());
  for (const auto& [key, n] : counts_) out.push_back({key, n});
  std::sort(out.begin(), out.end(), [](const KeyCount& a, const KeyCount& b) {
    if (a.occurrences != b.occurrences) return a.occurrences > b.occurrences;
    return a.key < b.key;
  });
  return out;
}

std::vector<KeyCount> rank_addresses_by_occurrence(std::span<const Publication> corpus) {
  OccurrenceCounter counter;
  for (const auto& p : corpus) counter.add_publication(p);
  return counter.ranked();
}

std::vector<GeocodeEntry> geocode_ranked(std::span<const KeyCount> ranked,
                                         std::span<const std::unique_ptr<GeocoderClient>> clients,
                                         const ReconcilePolicy& policy) {
  std::vector<GeocodeEntry> out;
  out.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    GeocodeEntry entry;
    entry.key = ranked[i].key;
    entry.occurrences = ranked[i].occurrences;
    if (i < policy.top_k_addresses) {
      entry.candidates = query_sources(entry.key, clients);
      entry = reconcile(std::move(entry), policy);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

ordered_json point_json(const GeoPoint& p) { return ordered_json::array({p.lat(), p.lon()}); }

GeoPoint point_from_json(const nlohmann::json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw DataError("cache: coordinates must be [lat, lon]");
  }
  const auto p = GeoPoint::make(v[0].get<double>(), v[1].get<double>());
  if (!p) throw DataError("cache: coordinates out of range");
  return *p;
}

}  // namespace

std::string cache_line(const GeocodeEntry& entry) {
  ordered_json j;
  j["key"] = entry.key.str();
  j["occurrences"] = entry.occurrences;
  ordered_json cands = ordered_json::object();
  for (const auto& c : entry.candidates) cands[c.source] = point_json(c.point);
  j["candidates"] = std::move(cands);
  j["resolved"] = entry.resolved ? point_json(*entry.resolved) : ordered_json(nullptr);
  j["status"] = to_string(entry.status);
  return j.dump();
}

GeocodeEntry parse_cache_line(std::string_view line) {
  // ordered_json keeps candidate order as written.
  const auto j = ordered_json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError("cache: not a JSON object");
  GeocodeEntry e;
  try {
    e.key = AddressKey::parse(j.at("key").get<std::string>());
    e.occurrences = j.at("occurrences").get<std::uint64_t>();
    for (const auto& [source, point] : j.at("candidates").items()) {
      e.candidates.push_back({source, point_from_json(point)});
    }
    if (const auto& r = j.at("resolved"); !r.is_null()) e.resolved = point_from_json(r);
    e.status = parse_geocode_status(j.at("status").get<std::string>());
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("cache: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw DataError(std::string("cache: ") + ex.what());
  }
  if (is_resolved(e.status) != e.resolved.has_value()) {
    throw DataError("cache: entry " + e.key.str() + " has inconsistent status and coordinates");
  }
  return e;
}

void write_cache(const std::filesystem::path& path, std::span<const GeocodeEntry> entries) {
  auto out = open_output(path);
  for (const auto& e : entries) out << cache_line(e) << '\n';
  if (!out) throw ConfigError("failed writing " + path.string());
}

std::vector<GeocodeEntry> read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open geocode cache " + path.string());
  std::vector<GeocodeEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_cache_line(line));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

CoordinateIndex build_coordinate_index(std::span<const GeocodeEntry> entries) {
  CoordinateIndex index;
  index.reserve(entries.size());
  for (const auto& e : entries) {
    if (auto p = e.contributing_point()) index.emplace(e.key.str(), *p);
  }
  return index;
}

void write_review_queue(std::ostream& out, std::span<const GeocodeEntry> pending,
                        std::span<const std::string> sources) {
  out << "key\toccurrences";
  for (const auto& s : sources) out << '\t' << s << "_lat\t" << s << "_lon";
  out << "\tdisagreement_km\tverdict\n";
  for (const auto& e : pending) {
    out << e.key.str() << '\t' << e.occurrences;
    for (const auto& s : sources) {
      if (const Candidate* c = e.candidate(s)) {
        out << '\t' << format_fixed(c->point.lat(), 6) << '\t' << format_fixed(c->point.lon(), 6);
      } else {
        out << "\t\t";
      }
    }
    const auto d = disagreement_km(e);
    out << '\t' << (d ? format_fixed(*d, 3) : std::string()) << "\t\n";
  }
}

std::vector<ReviewRow> read_review_verdicts(const std::filesystem::path& path) {
  const Table table = read_tsv(path);
  const auto key_col = table.require_column("key", path);
  const auto verdict_col = table.require_column("verdict", path);
  std::vector<ReviewRow> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    try {
      auto verdict = parse_verdict(row[verdict_col]);
      if (!verdict) continue;
      out.push_back({AddressKey::parse(row[key_col]), std::move(*verdict)});
    } catch (const std::exception& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Accuracy audit

std::vector<AuditItem> audit_sample(std::span<const GeocodeEntry> entries, std::size_t n,
                                    std::uint64_t seed) {
  std::vector<AuditItem> population;
  for (const auto& e : entries) {
    if (auto p = e.contributing_point()) population.push_back({e.key, *p});
  }
  if (n > population.size()) {
    throw std::invalid_argument("audit sample of " + std::to_string(n) + " exceeds " +
                                std::to_string(population.size()) + " resolved entries");
  }
  // Sampling is defined over key order so input order does not matter.
  std::sort(population.begin(), population.end(),
            [](const AuditItem& a, const AuditItem& b) { return a.key < b.key; });

  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, population.size() - i));
    std::swap(population[i], population[j]);
  }
  population.erase(population.begin() + static_cast<std::ptrdiff_t>(n), population.end());
  return population;
}

AuditReport audit_compare(std::span<const VerifiedPoint> verified, const CoordinateIndex& resolved,
                          double threshold_km) {
  AuditReport report;
  for (const auto& v : verified) {
    const auto it = resolved.find(v.key.str());
    if (it == resolved.end()) {
      ++report.not_resolved;
      continue;
    }
    ++report.compared;
    const double d = great_circle_distance(v.verified, it->second);
    if (d > threshold_km) report.mismatches.push_back({v.key, d});
  }
  return report;
}

void write_audit_sample(std::ostream& out, std::span<const AuditItem> sample) {
  out << "key\tlat\tlon\tverified_lat\tverified_lon\n";
  for (const auto& item : sample) {
    out << item.key.str() << '\t' << format_fixed(item.resolved.lat(), 6) << '\t'
        << format_fixed(item.resolved.lon(), 6) << "\t\t\n";
  }
}

std::vector<VerifiedPoint> read_verified_points(const std::filesystem::path& path) {
  const Table table = read_tsv(path);
  const auto key_col = table.require_column("key", path);
  auto lat_col = table.column("verified_lat");
  auto lon_col = table.column("verified_lon");
  if (!lat_col || !lon_col) {
    lat_col = table.require_column("lat", path);
    lon_col = table.require_column("lon", path);
  }
  std::vector<VerifiedPoint> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[*lat_col].empty() && row[*lon_col].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    const auto point = GeoPoint::make(parse_double(row[*lat_col], where + " verified_lat"),
                                      parse_double(row[*lon_col], where + " verified_lon"));
    if (!point) throw DataError(where + ": coordinates out of range");
    try {
      out.push_back({AddressKey::parse(row[key_col]), *point});
    } catch (const std::invalid_argument& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return out;
}

}  // namespace geocollab
