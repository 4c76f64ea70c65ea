#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "geocollab/errors.hpp"
#include "geocollab/gazetteer.hpp"
#include "geocollab/io.hpp"
#include "test_util.hpp"

using namespace geocollab;
using testutil::equator_km;

namespace {

GeocodeEntry two_source_entry(double distance_km, std::uint64_t occurrences) {
  GeocodeEntry e;
  e.key = AddressKey::parse("somewhere||xx");
  e.occurrences = occurrences;
  e.candidates = {{"google", GeoPoint(0.0, 0.0)}, {"yahoo", equator_km(distance_km)}};
  return e;
}

ReconcilePolicy google_first() {
  ReconcilePolicy p;
  p.preferred_source = "google";
  return p;
}

}  // namespace

TEST_CASE("rank_addresses_by_occurrence") {
  using testutil::publication;
  using testutil::unlocated;
  std::vector<Publication> corpus;
  for (int i = 0; i < 5; ++i) corpus.push_back(publication("l" + std::to_string(i), 2000, {unlocated("Leiden", "Netherlands")}));
  for (int i = 0; i < 3; ++i) corpus.push_back(publication("d" + std::to_string(i), 2000, {unlocated("Delft", "Netherlands")}));

  const auto ranked = rank_addresses_by_occurrence(corpus);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0] == KeyCount{AddressKey::parse("leiden||netherlands"), 5});
  CHECK(ranked[1] == KeyCount{AddressKey::parse("delft||netherlands"), 3});
  CHECK(rank_addresses_by_occurrence({}).empty());

  SUBCASE("top_k leaves the rest unknown") {
    auto source = std::make_unique<GazetteerSource>("google");
    source->insert(AddressKey::parse("leiden||netherlands"), GeoPoint(52.16, 4.49));
    source->insert(AddressKey::parse("delft||netherlands"), GeoPoint(52.01, 4.36));
    std::vector<std::unique_ptr<GeocoderClient>> clients;
    clients.push_back(std::move(source));
    ReconcilePolicy policy;
    policy.top_k_addresses = 1;
    const auto entries = geocode_ranked(ranked, clients, policy);
    CHECK(entries[0].status == GeocodeStatus::resolved_auto);
    CHECK(entries[1].status == GeocodeStatus::unknown);
    CHECK(entries[1].candidates.empty());
  }
}

TEST_CASE("ties are broken by key") {
  OccurrenceCounter counter;
  counter.add(AddressKey::parse("b||x"), 2);
  counter.add(AddressKey::parse("a||x"), 2);
  counter.add(AddressKey::parse("c||x"), 3);
  const auto ranked = counter.ranked();
  CHECK(ranked[0].key.str() == "c||x");
  CHECK(ranked[1].key.str() == "a||x");
  CHECK(ranked[2].key.str() == "b||x");
}

TEST_CASE("reconcile threshold table") {
  struct Row {
    double km;
    std::uint64_t occurrences;
    GeocodeStatus expected;
  };
  const Row rows[] = {
      {60, 300, GeocodeStatus::pending_review_strict},
      {80, 150, GeocodeStatus::resolved_auto},
      {120, 150, GeocodeStatus::pending_review_cursory},
      {10, 10000, GeocodeStatus::resolved_auto},
      {60, 200, GeocodeStatus::resolved_auto},     // exactly 200 goes to the cursory branch
      {120, 200, GeocodeStatus::pending_review_cursory},
      {120, 201, GeocodeStatus::pending_review_strict},
  };
  for (const auto& r : rows) {
    CAPTURE(r.km);
    CAPTURE(r.occurrences);
    const auto out = reconcile(two_source_entry(r.km, r.occurrences), google_first());
    CHECK(out.status == r.expected);
    CHECK(out.resolved.has_value() == is_resolved(r.expected));
    if (out.resolved) CHECK(*out.resolved == GeoPoint(0.0, 0.0));
  }
}

TEST_CASE("reconcile with fewer than two sources") {
  GeocodeEntry one;
  one.key = AddressKey::parse("x||y");
  one.occurrences = 5000;
  one.candidates = {{"yahoo", GeoPoint(1.0, 2.0)}};
  const auto r = reconcile(one, google_first());
  CHECK(r.status == GeocodeStatus::resolved_auto);
  CHECK(*r.resolved == GeoPoint(1.0, 2.0));

  GeocodeEntry none;
  none.key = AddressKey::parse("x||y");
  const auto u = reconcile(none, google_first());
  CHECK(u.status == GeocodeStatus::unknown);
  CHECK_FALSE(u.resolved);
}

TEST_CASE("reconcile prefers the configured source") {
  auto e = two_source_entry(5, 10);
  ReconcilePolicy policy;
  policy.preferred_source = "yahoo";
  CHECK(*reconcile(e, policy).resolved == equator_km(5));
  policy.preferred_source.clear();
  CHECK(*reconcile(e, policy).resolved == GeoPoint(0.0, 0.0));
}

TEST_CASE("reconcile is monotone in disagreement and flips at the occurrence boundary") {
  const auto policy = google_first();
  auto pending_rank = [](GeocodeStatus s) { return is_pending(s) ? 1 : 0; };
  for (std::uint64_t occ : {1ull, 150ull, 200ull, 201ull, 5000ull}) {
    int last = 0;
    for (double km = 0.0; km <= 500.0; km += 2.5) {
      const int now = pending_rank(reconcile(two_source_entry(km, occ), policy).status);
      REQUIRE(now >= last);
      last = now;
    }
  }
  for (double km : {50.5, 75.0, 100.0}) {
    CHECK(reconcile(two_source_entry(km, 200), policy).status == GeocodeStatus::resolved_auto);
    CHECK(reconcile(two_source_entry(km, 201), policy).status == GeocodeStatus::pending_review_strict);
  }
}

TEST_CASE("reconcile policy validation") {
  ReconcilePolicy p;
  CHECK_NOTHROW(p.validate());
  p.strict_distance_km = 150;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.cursory_distance_km = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("apply_review") {
  auto pending = reconcile(two_source_entry(60, 300), google_first());
  REQUIRE(pending.status == GeocodeStatus::pending_review_strict);

  const auto supplied = apply_review(pending, SupplyPoint{GeoPoint(24.7, 46.7)});
  CHECK(supplied.status == GeocodeStatus::resolved_manual);
  CHECK(*supplied.resolved == GeoPoint(24.7, 46.7));

  const auto unknown = apply_review(pending, MarkUnknown{});
  CHECK(unknown.status == GeocodeStatus::unknown);
  CHECK_FALSE(unknown.resolved);

  const auto confirmed = apply_review(pending, ConfirmSource{"yahoo"});
  CHECK(*confirmed.resolved == equator_km(60));

  CHECK_THROWS_AS(apply_review(pending, ConfirmSource{"bing"}), ReviewError);
  const auto resolved = reconcile(two_source_entry(10, 10), google_first());
  CHECK_THROWS_AS(apply_review(resolved, MarkUnknown{}), ReviewError);
  CHECK_THROWS_AS(apply_review(supplied, MarkUnknown{}), ReviewError);
}

TEST_CASE("pending entries never contribute coordinates") {
  std::vector<GeocodeEntry> entries{reconcile(two_source_entry(60, 300), google_first()),
                                    reconcile(two_source_entry(120, 10), google_first()),
                                    reconcile(two_source_entry(1, 10), google_first())};
  entries[2].key = AddressKey::parse("fine||xx");
  const auto index = build_coordinate_index(entries);
  CHECK(index.size() == 1);
  CHECK(index.contains("fine||xx"));
}

TEST_CASE("parse_verdict") {
  CHECK(std::holds_alternative<MarkUnknown>(*parse_verdict("unknown")));
  CHECK(std::get<ConfirmSource>(*parse_verdict("confirm:google")).source == "google");
  CHECK(std::get<ConfirmSource>(*parse_verdict(" yahoo ")).source == "yahoo");
  CHECK(std::get<SupplyPoint>(*parse_verdict("24.7,46.7")).point == GeoPoint(24.7, 46.7));
  CHECK_FALSE(parse_verdict("").has_value());
  CHECK_FALSE(parse_verdict("   ").has_value());
  CHECK_THROWS(parse_verdict("95,10"));
}

TEST_CASE("gazetteer files") {
  testutil::TempDir dir;
  testutil::write_file(dir / "a.tsv",
                       "key\tlat\tlon\tsource\n"
                       "leiden||netherlands\t52.16\t4.49\tgoogle\n"
                       "leiden||netherlands\t52.10\t4.50\tyahoo\n"
                       "# comment\n"
                       "delft||netherlands\t52.01\t4.36\tgoogle\n");
  testutil::write_file(dir / "b.tsv",
                       "source\tkey\tlat\tlon\n"
                       "bing\tdelft||netherlands\t52.0\t4.3\n");
  const std::vector<std::filesystem::path> paths{dir / "a.tsv", dir / "b.tsv"};
  const auto clients = load_gazetteer(paths);
  REQUIRE(clients.size() == 3);
  CHECK(clients[0]->name() == "google");
  CHECK(clients[1]->name() == "yahoo");
  CHECK(clients[2]->name() == "bing");
  const auto cands = query_sources(AddressKey::parse("delft||netherlands"), clients);
  REQUIRE(cands.size() == 2);
  CHECK(cands[0].source == "google");
  CHECK(cands[1].source == "bing");

  const std::vector<std::filesystem::path> missing{dir / "nope.tsv"};
  CHECK_THROWS_AS(load_gazetteer(missing), ConfigError);
  testutil::write_file(dir / "bad.tsv", "key\tlat\tlon\tsource\nleiden||nl\t99\t4\tgoogle\n");
  const std::vector<std::filesystem::path> bad{dir / "bad.tsv"};
  CHECK_THROWS_AS(load_gazetteer(bad), DataError);
}

TEST_CASE("cache lines round-trip") {
  Rng rng(5);
  const GeocodeStatus statuses[] = {GeocodeStatus::resolved_auto, GeocodeStatus::resolved_manual,
                                    GeocodeStatus::pending_review_strict,
                                    GeocodeStatus::pending_review_cursory, GeocodeStatus::unknown};
  std::vector<GeocodeEntry> entries;
  for (int i = 0; i < 200; ++i) {
    GeocodeEntry e;
    e.key = AddressKey::from_parts("city " + std::to_string(i), i % 3 ? "" : "st", "land");
    e.occurrences = uniform_below(rng, 100000);
    const auto ncand = uniform_below(rng, 3);
    if (ncand > 0) e.candidates.push_back({"zeta", testutil::random_point(rng)});
    if (ncand > 1) e.candidates.push_back({"alpha", testutil::random_point(rng)});
    e.status = statuses[uniform_below(rng, 5)];
    if (is_resolved(e.status)) e.resolved = testutil::random_point(rng);
    entries.push_back(e);
  }
  testutil::TempDir dir;
  write_cache(dir / "cache.jsonl", entries);
  CHECK(read_cache(dir / "cache.jsonl") == entries);

  CHECK_THROWS_AS(parse_cache_line(R"({"key":"a||b","occurrences":1,"candidates":{},"resolved":null,"status":"resolved_auto"})"),
                  DataError);
  CHECK_THROWS_AS(parse_cache_line("{"), DataError);
}

TEST_CASE("review queue export and verdict import") {
  std::vector<GeocodeEntry> pending{reconcile(two_source_entry(120, 150), google_first())};
  const std::vector<std::string> sources{"google", "yahoo"};
  std::ostringstream out;
  write_review_queue(out, pending, sources);
  const std::string text = out.str();
  CHECK(text.starts_with("key\toccurrences\tgoogle_lat\tgoogle_lon\tyahoo_lat\tyahoo_lon\tdisagreement_km\tverdict\n"));
  CHECK(text.find("somewhere||xx\t150\t0.000000\t0.000000\t0.000000\t1.079186\t120.000\t\n") !=
        std::string::npos);

  // A reviewer fills in the last column.
  testutil::TempDir dir;
  std::string edited = text;
  edited.insert(edited.size() - 1, "24.7,46.7");
  testutil::write_file(dir / "queue.tsv", edited);
  const auto rows = read_review_verdicts(dir / "queue.tsv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].key.str() == "somewhere||xx");
  CHECK(std::get<SupplyPoint>(rows[0].verdict).point == GeoPoint(24.7, 46.7));

  testutil::write_file(dir / "untouched.tsv", text);
  CHECK(read_review_verdicts(dir / "untouched.tsv").empty());
}

TEST_CASE("audit_sample") {
  std::vector<GeocodeEntry> entries;
  for (int i = 0; i < 11000; ++i) {
    GeocodeEntry e;
    e.key = AddressKey::from_parts("c" + std::to_string(i), "", "x");
    e.status = i % 10 == 0 ? GeocodeStatus::unknown : GeocodeStatus::resolved_auto;
    if (is_resolved(e.status)) e.resolved = GeoPoint(0.0, 0.0);
    entries.push_back(e);
  }
  const auto a = audit_sample(entries, 150, 42);
  const auto b = audit_sample(entries, 150, 42);
  REQUIRE(a.size() == 150);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].key == b[i].key);

  std::set<std::string> distinct;
  for (const auto& item : a) distinct.insert(item.key.str());
  CHECK(distinct.size() == 150);
  for (const auto& k : distinct) CHECK(k.rfind("c", 0) == 0);

  // Input order does not matter.
  auto shuffled = entries;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto c = audit_sample(shuffled, 150, 42);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].key == c[i].key);

  CHECK(audit_sample(entries, 0, 1).empty());
  CHECK_THROWS_AS(audit_sample(entries, 9901, 1), std::invalid_argument);
  CHECK(audit_sample(entries, 9900, 1).size() == 9900);
}

TEST_CASE("audit_sample is roughly uniform") {
  std::vector<GeocodeEntry> entries;
  for (int i = 0; i < 20; ++i) {
    GeocodeEntry e;
    e.key = AddressKey::from_parts("c" + std::to_string(i), "", "x");
    e.status = GeocodeStatus::resolved_auto;
    e.resolved = GeoPoint(0.0, 0.0);
    entries.push_back(e);
  }
  std::map<std::string, int> hits;
  const int trials = 4000;
  for (int seed = 0; seed < trials; ++seed) {
    for (const auto& item : audit_sample(entries, 5, static_cast<std::uint64_t>(seed))) ++hits[item.key.str()];
  }
  // expected 1000 each; chi-square with 19 dof, 0.999 quantile is about 43.8
  double chi2 = 0.0;
  for (const auto& [k, n] : hits) chi2 += (n - 1000.0) * (n - 1000.0) / 1000.0;
  CHECK(hits.size() == 20);
  CHECK(chi2 < 43.8);
}

TEST_CASE("audit_compare counts distant verifications") {
  CoordinateIndex resolved;
  std::vector<VerifiedPoint> verified;
  for (int i = 0; i < 150; ++i) {
    const auto key = AddressKey::from_parts("c" + std::to_string(i), "", "x");
    resolved.emplace(key.str(), GeoPoint(0.0, 0.0));
    const double off = i < 4 ? 51.0 + i * 100.0 : (i == 4 ? 50.0 : 3.0);
    verified.push_back({key, equator_km(off)});
  }
  verified.push_back({AddressKey::parse("ghost||x"), GeoPoint(1, 1)});
  const auto report = audit_compare(verified, resolved);
  CHECK(report.compared == 150);
  CHECK(report.not_resolved == 1);
  CHECK(report.mismatches.size() == 4);
  CHECK(audit_compare(verified, resolved, 10.0).mismatches.size() == 5);
}
