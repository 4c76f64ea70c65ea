#include <doctest.h>

#include "geocollab/model.hpp"
#include "test_util.hpp"

using namespace geocollab;

TEST_CASE("normalize_address builds canonical keys") {
  CHECK(normalize_address("Leiden", std::nullopt, "Netherlands").key().str() == "leiden||netherlands");
  CHECK(normalize_address("New York", "NY", "USA").key().str() == "new york|ny|usa");
  CHECK(normalize_address("LEIDEN ", std::nullopt, "netherlands").key() ==
        normalize_address("Leiden", std::nullopt, "Netherlands").key());
}

TEST_CASE("region is kept only for region-significant countries") {
  CHECK(normalize_address("Toronto", "ON", "Canada").key().str() == "toronto|on|canada");
  CHECK(normalize_address("Leiden", "ZH", "Netherlands").key().str() == "leiden||netherlands");

  RegionPolicy custom;
  custom.region_countries = {"australia"};
  CHECK(normalize_address("Perth", "WA", "Australia", custom).key().str() == "perth|wa|australia");
  CHECK(normalize_address("Boston", "MA", "USA", custom).key().str() == "boston||usa");
}

TEST_CASE("fold_token folds case, diacritics and whitespace") {
  CHECK(fold_token("  São   Paulo ") == "sao paulo");
  CHECK(fold_token("ZÜRICH") == "zurich");
  CHECK(fold_token("Kraków") == "krakow");
  CHECK(fold_token("Łódź") == "lodz");
  CHECK(fold_token("Straße") == "strasse");
  CHECK(fold_token("Île-de-France") == "ile-de-france");
  CHECK(fold_token("a|b\tc") == "a b c");
  CHECK(fold_token("東京") == "東京");
  CHECK(fold_token("") == "");
  CHECK(fold_token(" \t ") == "");
}

TEST_CASE("normalization is idempotent and insensitive to case and spacing") {
  Rng rng(11);
  const std::string alphabet = "abcXYZ éÉü  -.";
  for (int i = 0; i < 500; ++i) {
    std::string city, country = "C";
    const auto len = uniform_below(rng, 12);
    for (std::uint64_t k = 0; k < len; ++k) {
      // pick whole code points from the alphabet
      const std::size_t pos = uniform_below(rng, alphabet.size());
      const unsigned char c = static_cast<unsigned char>(alphabet[pos]);
      if (c >= 0x80) {
        const std::size_t start = (c & 0xC0) == 0x80 ? pos - 1 : pos;
        city += alphabet.substr(start, 2);
      } else {
        city.push_back(static_cast<char>(c));
      }
    }
    const Address once = normalize_address(city, std::nullopt, country);
    const Address twice = normalize_address(once.city, std::nullopt, once.country);
    REQUIRE(once.key() == twice.key());

    std::string noisy = "  ";
    for (char c : city) {
      noisy.push_back(c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
      if (c == ' ') noisy += "  ";
    }
    noisy += " ";
    REQUIRE(normalize_address(noisy, std::nullopt, " c ").key() == once.key());
  }
}

TEST_CASE("empty country is rejected") {
  CHECK_THROWS_AS(normalize_address("Leiden", std::nullopt, ""), InvalidAddress);
  CHECK_THROWS_AS(normalize_address("Leiden", std::nullopt, "  "), InvalidAddress);
}

TEST_CASE("empty city makes the address ungeocodable") {
  const Address a = normalize_address("", std::nullopt, "Netherlands");
  CHECK_FALSE(a.geocodable());
  CHECK(a.key().str() == "||netherlands");
}

TEST_CASE("AddressKey parsing and components") {
  const auto k = AddressKey::parse("new york|ny|usa");
  CHECK(k.city() == "new york");
  CHECK(k.region() == "ny");
  CHECK(k.country() == "usa");
  const auto nl = AddressKey::from_parts("leiden", "", "netherlands");
  CHECK(nl.region().empty());
  CHECK(nl.country() == "netherlands");
  CHECK_THROWS_AS(AddressKey::parse("leiden|netherlands"), std::invalid_argument);
  CHECK_THROWS_AS(AddressKey::parse("a|b|c|d"), std::invalid_argument);
  CHECK_THROWS_AS(AddressKey::parse("leiden||"), std::invalid_argument);
}

TEST_CASE("doc type parsing") {
  CHECK(parse_doc_type("Article") == DocType::article);
  CHECK(parse_doc_type("review") == DocType::review);
  CHECK(parse_doc_type("editorial") == DocType::other);
}

TEST_CASE("admit_publication") {
  using testutil::publication;
  using testutil::unlocated;
  const CorpusFilter filter;
  const std::vector<Address> two{unlocated("Leiden", "NL"), unlocated("Delft", "NL")};

  CHECK(admit_publication(publication("a", 2005, two), filter));
  CHECK(classify_admission(publication("b", 2005, two, DocType::other), filter) == Admission::wrong_type);
  CHECK(classify_admission(publication("c", 2005, {}), filter) == Admission::no_address);
  CHECK(classify_admission(publication("d", 1979, two), filter) == Admission::out_of_window);
  CHECK(admit_publication(publication("e", 2005, two, DocType::review), filter));

  auto reprint = unlocated("Leiden", "NL");
  reprint.is_reprint = true;
  CHECK_FALSE(admit_publication(publication("f", 2005, {reprint}), filter));
  CHECK(admit_publication(publication("g", 1995, {reprint}), filter));
}
