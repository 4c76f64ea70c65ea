#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "geocollab/aggregate.hpp"
#include "geocollab/errors.hpp"
#include "test_util.hpp"

using namespace geocollab;
using testutil::equator_km;
using testutil::located;
using testutil::unlocated;

namespace {

double share_of(const FractionalAssignment& a, std::string_view unit) {
  for (const auto& s : a.shares)
    if (s.unit == unit) return s.weight;
  return 0.0;
}

double share_sum(const FractionalAssignment& a) {
  double s = 0.0;
  for (const auto& x : a.shares) s += x.weight;
  return s;
}

Publication with_categories(Publication p, std::vector<std::string> cats) {
  p.subject_categories = std::move(cats);
  return p;
}

std::vector<Publication> random_corpus(Rng& rng, std::size_t n, double unknown_share) {
  static const char* countries[] = {"netherlands", "germany", "usa", "japan", "brazil", "kenya"};
  std::vector<GeoPoint> sites;
  for (int i = 0; i < 30; ++i) sites.push_back(testutil::random_point(rng));
  std::vector<Publication> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Address> addrs;
    const auto k = 1 + uniform_below(rng, 7);
    for (std::size_t j = 0; j < k; ++j) {
      const auto site = uniform_below(rng, sites.size());
      const std::string city = "c" + std::to_string(site);
      const std::string country = countries[site % 6];
      if (uniform_unit(rng) < unknown_share) {
        addrs.push_back(unlocated(city, country));
      } else {
        addrs.push_back(located(city, country, sites[site]));
      }
    }
    auto p = testutil::publication("p" + std::to_string(i), 2000 + static_cast<int>(uniform_below(rng, 3)),
                                   std::move(addrs));
    const auto ncat = 1 + uniform_below(rng, 3);
    p.subject_categories.clear();
    for (std::size_t c = 0; c < ncat; ++c) p.subject_categories.push_back("K" + std::to_string(uniform_below(rng, 8)));
    out.push_back(std::move(p));
  }
  return out;
}

FieldScheme eight_category_scheme() {
  FieldScheme s;
  for (int c = 0; c < 7; ++c) s.add("K" + std::to_string(c), "F" + std::to_string(c % 3), c % 3 == 2 ? "SHA" : "NCM");
  return s;  // K7 stays unmapped
}

double naive_dispersion(const std::vector<GeoPoint>& occurrences, bool include_self) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < occurrences.size(); ++i) {
    for (std::size_t j = 0; j < occurrences.size(); ++j) {
      if (!include_self && i == j) continue;
      num += great_circle_distance(occurrences[i], occurrences[j]);
      den += 1.0;
    }
  }
  return num / den;
}

}  // namespace

TEST_CASE("country fractions") {
  using testutil::publication;
  const auto half = fractionalize_countries(publication("a", 2000, {unlocated("x", "nl"), unlocated("y", "de")}));
  CHECK(share_of(half, "nl") == 0.5);
  CHECK(share_of(half, "de") == 0.5);

  const auto p31 = publication("b", 2000, {unlocated("x", "nl"), unlocated("y", "nl"), unlocated("z", "nl"),
                                           unlocated("w", "de")});
  const auto prop = fractionalize_countries(p31);
  CHECK(share_of(prop, "nl") == 0.75);
  CHECK(share_of(prop, "de") == 0.25);
  REQUIRE(prop.shares.size() == 2);
  CHECK(prop.shares[0].unit == "de");

  const auto equal = fractionalize_countries(p31, CountryWeighting::equal_country);
  CHECK(share_of(equal, "nl") == 0.5);
  CHECK(share_of(equal, "de") == 0.5);

  const auto single = fractionalize_countries(publication("c", 2000, {unlocated("x", "nl"), unlocated("y", "nl")}));
  REQUIRE(single.shares.size() == 1);
  CHECK(single.shares[0].weight == 1.0);

  CHECK(parse_country_weighting("equal-country") == CountryWeighting::equal_country);
  CHECK_THROWS_AS(parse_country_weighting("whole"), ConfigError);
}

TEST_CASE("proportional shares match a replication oracle") {
  Rng rng(31);
  for (const auto& p : random_corpus(rng, 500, 0.0)) {
    const auto a = fractionalize_countries(p);
    CHECK(std::abs(share_sum(a) - 1.0) <= 1e-12);
    std::map<std::string, int> tally;
    for (const auto& addr : p.addresses) ++tally[addr.country];
    for (const auto& [country, n] : tally)
      CHECK(share_of(a, country) == doctest::Approx(double(n) / p.addresses.size()).epsilon(1e-15));
    const auto e = fractionalize_countries(p, CountryWeighting::equal_country);
    CHECK(std::abs(share_sum(e) - 1.0) <= 1e-12);
    CHECK(e.shares.size() == tally.size());
  }
}

TEST_CASE("field fractions") {
  const auto scheme = eight_category_scheme();
  const auto base = testutil::publication("a", 2000, {unlocated("x", "nl")});
  std::vector<std::string> unmapped;
  const auto f = fractionalize_fields(with_categories(base, {"K0", "K3", "K1"}), scheme, false, &unmapped);
  CHECK(share_of(f, "F0") == doctest::Approx(2.0 / 3.0));
  CHECK(share_of(f, "F1") == doctest::Approx(1.0 / 3.0));
  CHECK(unmapped.empty());

  const auto b = fractionalize_fields(with_categories(base, {"K0", "K2"}), scheme, true);
  CHECK(share_of(b, "NCM") == 0.5);
  CHECK(share_of(b, "SHA") == 0.5);

  const auto u = fractionalize_fields(with_categories(base, {"K7", "K0"}), scheme, false, &unmapped);
  CHECK(share_of(u, std::string(kUnclassified)) == 0.5);
  CHECK(unmapped == std::vector<std::string>{"K7"});

  const auto none = fractionalize_fields(with_categories(base, {}), scheme);
  REQUIRE(none.shares.size() == 1);
  CHECK(none.shares[0].unit == kUnclassified);
  CHECK(none.shares[0].weight == 1.0);
}

TEST_CASE("field scheme validation") {
  FieldScheme s;
  s.add("C1", "F1", "ET");
  CHECK_NOTHROW(s.add("C1", "F1", "ET"));
  CHECK_THROWS_AS(s.add("C1", "F2", "ET"), DataError);
  CHECK_THROWS_AS(s.add("C2", "F1", "MLA"), DataError);
  CHECK_THROWS_AS(s.add("C3", "F3", "XYZ"), DataError);
  CHECK_THROWS_AS(s.add("C3", std::string(kUnclassified), "ET"), DataError);
  CHECK(*s.field_of("C1") == "F1");
  CHECK(*s.broad_of_field("F1") == "ET");
  CHECK_FALSE(s.field_of("C9"));

  testutil::TempDir dir;
  testutil::write_file(dir / "s.tsv", "category_code\tfield_code\tbroad_field_code\nA\tF\tNCM\nB\tF\tNCM\n");
  CHECK(FieldScheme::load(dir / "s.tsv").size() == 2);
  testutil::write_file(dir / "bad.tsv", "category_code\tfield_code\tbroad_field_code\nA\tF\tNCM\nB\tF\tET\n");
  CHECK_THROWS_AS(FieldScheme::load(dir / "bad.tsv"), DataError);
  testutil::write_file(dir / "cols.tsv", "category\tfield\nA\tF\n");
  CHECK_THROWS_AS(FieldScheme::load(dir / "cols.tsv"), DataError);
  CHECK_THROWS_AS(FieldScheme::load(dir / "missing.tsv"), ConfigError);
  CHECK_THROWS_AS(CellAggregator({Dimension::field}, nullptr), ConfigError);
}

TEST_CASE("two-field toy corpus against hand sums") {
  FieldScheme scheme;
  scheme.add("A1", "FA", "NCM");
  scheme.add("A2", "FA", "NCM");
  scheme.add("B1", "FB", "ET");
  const auto o = GeoPoint(0.0, 0.0);
  using testutil::publication;
  // GCDs: 100, 300, 0, 1100, 2000 km.
  std::vector<Publication> corpus{
      with_categories(publication("1", 2001, {located("a", "x", o), located("b", "x", equator_km(100))}), {"A1"}),
      with_categories(publication("2", 2001, {located("a", "x", o), located("b", "x", equator_km(300))}), {"A1", "B1"}),
      with_categories(publication("3", 2001, {located("a", "x", o)}), {"B1"}),
      with_categories(publication("4", 2001, {located("a", "x", o), located("b", "x", equator_km(1100))}),
                      {"A1", "A2", "B1"}),
      with_categories(publication("5", 2001, {located("a", "x", o), located("b", "x", equator_km(2000))}), {"A2"}),
  };
  const auto agg = aggregate_cells(corpus, {Dimension::field}, &scheme);
  const auto& cells = agg.cells(Dimension::field);
  REQUIRE(cells.size() == 2);
  const auto fa = cells.at({"FA", 2001}).summary();
  const auto fb = cells.at({"FB", 2001}).summary();
  // FA weights 1, 0.5, 0, 2/3, 1; FB weights 0, 0.5, 1, 1/3, 0.
  CHECK(fa.frac_pubs == doctest::Approx(1 + 0.5 + 2.0 / 3.0 + 1));
  CHECK(fb.frac_pubs == doctest::Approx(0.5 + 1 + 1.0 / 3.0));
  CHECK(*fa.mgcd_km == doctest::Approx((100 + 150 + 1100 * 2.0 / 3.0 + 2000) / (1 + 0.5 + 2.0 / 3.0 + 1)).epsilon(1e-9));
  CHECK(*fb.mgcd_km == doctest::Approx((150 + 0 + 1100 / 3.0) / (0.5 + 1 + 1.0 / 3.0)).epsilon(1e-9));
  CHECK(*fa.pct_ldc == doctest::Approx(100.0 * (2.0 / 3.0 + 1) / (1 + 0.5 + 2.0 / 3.0 + 1)));
  CHECK(*fb.pct_mldc == doctest::Approx(100.0 * (0.5 + 1.0 / 3.0) / (0.5 + 1 + 1.0 / 3.0)));
}

TEST_CASE("conservation and consistency across partitions") {
  Rng rng(32);
  const auto scheme = eight_category_scheme();
  for (double unknown : {0.0, 0.3}) {
    const auto corpus = random_corpus(rng, 2000, unknown);
    const auto agg = aggregate_cells(corpus, {Dimension::all, Dimension::country, Dimension::field,
                                              Dimension::broad_field}, &scheme);
    const auto global = collapse_years(agg.cells(Dimension::all), {2000, 2002}).at("all").summary();
    CHECK(global.frac_pubs == doctest::Approx(2000.0).epsilon(1e-12));
    for (auto d : {Dimension::country, Dimension::field, Dimension::broad_field}) {
      CAPTURE(to_string(d));
      double pubs = 0.0, gcd_w = 0.0, weighted = 0.0;
      for (const auto& [unit, acc] : collapse_years(agg.cells(d), {2000, 2002})) {
        const auto s = acc.summary();
        pubs += s.frac_pubs;
        gcd_w += s.gcd_weight;
        if (s.mgcd_km) weighted += s.gcd_weight * *s.mgcd_km;
      }
      CHECK(std::abs(pubs - 2000.0) <= 1e-9 * 2000.0);
      CHECK(std::abs(gcd_w - global.gcd_weight) <= 1e-9 * global.gcd_weight);
      CHECK(std::abs(weighted / gcd_w - *global.mgcd_km) <= 1e-9 * *global.mgcd_km);
    }
  }
}

TEST_CASE("unmapped categories are reported once per publication") {
  const auto scheme = eight_category_scheme();
  const auto base = testutil::publication("a", 2000, {unlocated("x", "nl")});
  CellAggregator agg({Dimension::field, Dimension::broad_field}, &scheme);
  agg.add(with_categories(base, {"K7", "K7", "K0"}));
  agg.add(with_categories(base, {"K7"}));
  CellAggregator other({Dimension::field, Dimension::broad_field}, &scheme);
  other.add(with_categories(base, {"K7"}));
  agg.merge(other);
  CHECK(agg.unmapped_categories() == std::map<std::string, std::uint64_t>{{"K7", 3}});
  CHECK(agg.cells(Dimension::field).at({std::string(kUnclassified), 2000}).weight() == doctest::Approx(2 + 2.0 / 3.0));
}

TEST_CASE("merged aggregators equal a single pass") {
  Rng rng(33);
  const auto scheme = eight_category_scheme();
  const auto corpus = random_corpus(rng, 600, 0.2);
  const std::vector<Dimension> dims{Dimension::all, Dimension::country, Dimension::field};
  const auto whole = aggregate_cells(corpus, dims, &scheme);
  CellAggregator a(dims, &scheme), b(dims, &scheme);
  for (std::size_t i = 0; i < corpus.size(); ++i) (i < 250 ? a : b).add(corpus[i]);
  a.merge(b);
  for (auto d : dims) {
    REQUIRE(a.cells(d).size() == whole.cells(d).size());
    for (const auto& [key, acc] : whole.cells(d)) {
      const auto x = acc.summary();
      const auto y = a.cells(d).at(key).summary();
      CHECK(y.frac_pubs == doctest::Approx(x.frac_pubs).epsilon(1e-12));
      if (x.mgcd_km) CHECK(*y.mgcd_km == doctest::Approx(*x.mgcd_km).epsilon(1e-12));
    }
  }
}

TEST_CASE("growth arithmetic on reference endpoints") {
  CHECK(annual_growth_rate(334, 1553, 29) == doctest::Approx(5.442248).epsilon(1e-6));
  CHECK(annual_growth_rate(6031, 7008, 29) == doctest::Approx(0.519065).epsilon(1e-5));
  CHECK(annual_growth_rate(1131, 1553, 9) == doctest::Approx(3.585981).epsilon(1e-6));
  CHECK(annual_growth_rate(6554, 7008, 9) == doctest::Approx(0.746963).epsilon(1e-5));
  CHECK(annual_growth(1131, 1553, 9) == doctest::Approx(46.889).epsilon(1e-4));
  CHECK(annual_growth(334, 1553, 29) == doctest::Approx(42.034).epsilon(1e-4));
  CHECK(annual_growth(500, 500, 7) == 0.0);
  CHECK(annual_growth_rate(500, 500, 7) == 0.0);
  CHECK(annual_growth_rate(100, 200, 10) == doctest::Approx(7.177346).epsilon(1e-6));

  CHECK_THROWS_AS(annual_growth_rate(0, 10, 5), DataError);
  CHECK_THROWS_AS(annual_growth_rate(-1, 10, 5), DataError);
  CHECK_THROWS_AS(annual_growth(1, 10, 0), DataError);
}

TEST_CASE("growth rate compounds back to the end value") {
  Rng rng(34);
  for (int t = 0; t < 2000; ++t) {
    const double v0 = uniform_real(rng, 1.0, 10000.0);
    const double v1 = uniform_real(rng, 1.0, 10000.0);
    const int years = 1 + static_cast<int>(uniform_below(rng, 40));
    const double rate = annual_growth_rate(v0, v1, years) / 100.0;
    CHECK(std::abs(v0 * std::pow(1.0 + rate, years) - v1) <= 1e-9 * v1);
  }
}

TEST_CASE("series growth") {
  std::vector<TrendPoint> series;
  for (auto [year, km] : {std::pair{2000, 1131.0}, {2005, 1300.0}, {2009, 1553.0}}) {
    TrendPoint t;
    t.year = year;
    t.summary.mgcd_km = km;
    t.summary.frac_pubs = 10.0;
    series.push_back(t);
  }
  CHECK(annual_growth(series, Metric::mgcd, 2000, 2009) == doctest::Approx(46.889).epsilon(1e-4));
  CHECK(annual_growth_rate(series, Metric::mgcd, 2000, 2009) == doctest::Approx(3.585981).epsilon(1e-6));
  CHECK(annual_growth(series, Metric::frac_pubs, 2000, 2009) == 0.0);
  CHECK_THROWS_AS(annual_growth(series, Metric::mgcd, 2000, 2008), DataError);
  CHECK_THROWS_AS(annual_growth(series, Metric::mgcd, 2009, 2000), DataError);
  CHECK_THROWS_AS(annual_growth(series, Metric::pct_ldc, 2000, 2009), DataError);
  CHECK(parse_metric("mgcd_km") == Metric::mgcd);
  CHECK_THROWS_AS(parse_metric("median"), ConfigError);
}

TEST_CASE("dispersion examples") {
  const std::vector<LocationCount> pair{{GeoPoint(0.0, 0.0), 1}, {equator_km(100), 1}};
  CHECK(dispersion(pair) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(dispersion(pair, SelfPairs::exclude) == doctest::Approx(100.0).epsilon(1e-12));

  const std::vector<LocationCount> single{{GeoPoint(10.0, 10.0), 17}};
  CHECK(dispersion(single) == 0.0);
  CHECK_THROWS_AS(dispersion(single, SelfPairs::exclude), DataError);
  CHECK_THROWS_AS(dispersion(std::vector<LocationCount>{}), DataError);
  CHECK_THROWS_AS(dispersion(std::vector<LocationCount>{{GeoPoint(0.0, 0.0), 0}}), DataError);
}

TEST_CASE("grouped dispersion equals the expanded occurrence list") {
  Rng rng(35);
  for (int t = 0; t < 40; ++t) {
    std::vector<LocationCount> grouped;
    std::vector<GeoPoint> expanded;
    const auto u = 2 + uniform_below(rng, 40);
    for (std::size_t i = 0; i < u && expanded.size() < 480; ++i) {
      const auto p = testutil::random_point(rng);
      const auto n = 1 + uniform_below(rng, 20);
      grouped.push_back({p, n});
      for (std::size_t k = 0; k < n; ++k) expanded.push_back(p);
    }
    const double naive = naive_dispersion(expanded, true);
    CHECK(std::abs(dispersion(grouped) - naive) <= 1e-9 * naive);

    // Excluding self pairs at location level drops every pair of co-located occurrences.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grouped.size(); ++i)
      for (std::size_t j = 0; j < grouped.size(); ++j) {
        if (i == j) continue;
        const double w = double(grouped[i].count) * double(grouped[j].count);
        num += w * great_circle_distance(grouped[i].point, grouped[j].point);
        den += w;
      }
    CHECK(std::abs(dispersion(grouped, SelfPairs::exclude) - num / den) <= 1e-9 * (num / den));

    const double d = dispersion(grouped);
    CHECK(d >= 0.0);
    CHECK(d <= kEarthRadiusKm * M_PI);
  }
}

TEST_CASE("splitting a location leaves dispersion unchanged") {
  Rng rng(36);
  for (int t = 0; t < 200; ++t) {
    std::vector<LocationCount> locs;
    const auto u = 1 + uniform_below(rng, 30);
    for (std::size_t i = 0; i < u; ++i) locs.push_back({testutil::random_point(rng), 2 + uniform_below(rng, 50)});
    const double before = dispersion(locs);
    auto split = locs;
    const auto v = uniform_below(rng, split.size());
    const auto n1 = 1 + uniform_below(rng, split[v].count - 1);
    split.push_back({split[v].point, split[v].count - n1});
    split[v].count = n1;
    CHECK(std::abs(dispersion(split) - before) <= 1e-9 * std::max(before, 1.0));
  }
}

TEST_CASE("dispersion does not depend on the thread count") {
  Rng rng(37);
  std::vector<LocationCount> locs;
  for (int i = 0; i < 900; ++i) locs.push_back({testutil::random_point(rng), 1 + uniform_below(rng, 1000)});
  const double one = dispersion(locs, SelfPairs::include, 1);
  CHECK(dispersion(locs, SelfPairs::include, 2) == one);
  CHECK(dispersion(locs, SelfPairs::include, 4) == one);
  CHECK(dispersion(locs, SelfPairs::include, 7) == one);
}

TEST_CASE("map classes") {
  struct Row {
    double pubs;
    std::optional<double> mgcd;
    MapClass expected;
  };
  const Row rows[] = {
      {250, 4069.0, MapClass::red},       {150, 4069.0, MapClass::white},
      {150, 500.0, MapClass::white},      {300, 500.0, MapClass::dark_blue},
      {300, std::nullopt, MapClass::white}, {199.999, 800.0, MapClass::white},
      {200, 0.0, MapClass::dark_blue},    {200, 999.999, MapClass::dark_blue},
      {200, 1000.0, MapClass::light_blue}, {200, 1999.9, MapClass::light_blue},
      {200, 2000.0, MapClass::green},     {200, 2999.9, MapClass::green},
      {200, 3000.0, MapClass::yellow},    {200, 4000.0, MapClass::yellow},
      {200, 4000.001, MapClass::red},     {1e6, 19000.0, MapClass::red},
  };
  for (const auto& r : rows) {
    CAPTURE(r.pubs);
    CAPTURE(r.mgcd.value_or(-1));
    CHECK(classify_country(r.pubs, r.mgcd) == r.expected);
  }
  const auto map = classify_country_map({{"new zealand", {250, 4069.0}}, {"tuvalu", {3, 9000.0}}});
  CHECK(map.at("new zealand") == MapClass::red);
  CHECK(map.at("tuvalu") == MapClass::white);
  CHECK(to_string(MapClass::light_blue) == "light_blue");
}
