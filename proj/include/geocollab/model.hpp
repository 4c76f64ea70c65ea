// Publication and address records, and address canonicalization.
#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "geocollab/geo.hpp"

namespace geocollab {

/// Trim, case-fold, fold Latin diacritics to ASCII and collapse internal
/// whitespace. The key separator and control characters become spaces.
std::string fold_token(std::string_view text);

/// Canonical "city|region|country" key. Region is empty unless the country
/// is region-significant.
class AddressKey {
 public:
  static constexpr char kSeparator = '|';

  AddressKey() = default;

  /// Parts must already be folded (see fold_token).
  static AddressKey from_parts(std::string_view city, std::string_view region,
                               std::string_view country);
  /// Parses a serialized key; throws std::invalid_argument unless it has
  /// exactly two separators and a non-empty country.
  static AddressKey parse(std::string_view text);

  const std::string& str() const noexcept { return value_; }
  std::string_view city() const noexcept;
  std::string_view region() const noexcept;
  std::string_view country() const noexcept;

  friend auto operator<=>(const AddressKey&, const AddressKey&) = default;

 private:
  explicit AddressKey(std::string value) : value_(std::move(value)) {}
  std::string value_;
};

/// Countries whose addresses keep state/province information.
struct RegionPolicy {
  std::set<std::string, std::less<>> region_countries{
      "us", "usa", "united states", "united states of america", "canada"};

  bool is_region_significant(std::string_view folded_country) const {
    return region_countries.contains(folded_country);
  }
};

struct Address {
  std::string raw;
  std::string city;
  std::string region;
  std::string country;
  bool is_reprint = false;
  std::optional<GeoPoint> coords;

  AddressKey key() const { return AddressKey::from_parts(city, region, country); }
  bool geocodable() const noexcept { return !city.empty(); }
};

class InvalidAddress : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws InvalidAddress when the country folds to an empty token.
Address normalize_address(std::string_view raw_city, std::optional<std::string_view> raw_region,
                          std::string_view raw_country, const RegionPolicy& policy = {});

enum class DocType { article, review, other };

DocType parse_doc_type(std::string_view text) noexcept;
std::string_view to_string(DocType type) noexcept;

struct Publication {
  std::string id;
  int year = 0;
  DocType doc_type = DocType::other;
  std::string journal_id;
  std::vector<std::string> subject_categories;
  int author_count = 1;
  std::vector<Address> addresses;
};

struct YearWindow {
  int first = 0;
  int last = 0;

  bool contains(int year) const noexcept { return year >= first && year <= last; }
  int span() const noexcept { return last - first + 1; }
};

struct CorpusFilter {
  YearWindow years{1980, 2009};
  std::set<DocType> allowed_types{DocType::article, DocType::review};
  int reprint_cutoff_year = 1997;
  std::optional<YearWindow> fixed_journal_window;
};

enum class Admission { admitted, wrong_type, out_of_window, no_address };

/// Number of addresses left once reprint addresses are dropped for
/// publications after the cutoff year.
std::size_t surviving_address_count(const Publication& p, int reprint_cutoff_year) noexcept;

Admission classify_admission(const Publication& p, const CorpusFilter& filter) noexcept;

inline bool admit_publication(const Publication& p, const CorpusFilter& filter) noexcept {
  return classify_admission(p, filter) == Admission::admitted;
}

}  // namespace geocollab

template <>
struct std::hash<geocollab::AddressKey> {
  std::size_t operator()(const geocollab::AddressKey& k) const noexcept {
    return std::hash<std::string>{}(k.str());
  }
};
