#include "geocollab/model.hpp"

#include <array>
#include <cstdint>

namespace geocollab {

namespace {

// Lowercase ASCII base letter for U+00C0..U+00FF. '\0' = no single-letter
// fold (handled separately), ' ' = treat as whitespace.
constexpr std::string_view kLatin1{
    "aaaaaa\0ceeeeiiiidnooooo\0ouuuuy\0\0"
    "aaaaaa\0ceeeeiiiidnooooo ouuuuy\0y",
    64};

// U+0100..U+017F. '1' marks the ij ligature, '2' the oe ligature.
constexpr std::string_view kLatinExtA =
    "aaaaaaccccccccddddeeeeeeeeeegggggggghhhhiiiiiiiiii11jjkkkllllllllll"
    "nnnnnnnnnoooooo22rrrrrrssssssssttttttuuuuuuuuuuuuwwyyyzzzzzzs";

static_assert(kLatin1.size() == 64);
static_assert(kLatinExtA.size() == 128);

// Decodes one UTF-8 sequence at text[i]; returns the code point and advances
// i. Invalid sequences yield the raw byte value and advance by one.
std::uint32_t next_code_point(std::string_view text, std::size_t& i, std::size_t& length) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  const unsigned char lead = byte(i);
  std::size_t n = 0;
  std::uint32_t cp = 0;
  if (lead < 0x80) {
    n = 1;
    cp = lead;
  } else if ((lead & 0xE0) == 0xC0) {
    n = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    n = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    n = 4;
    cp = lead & 0x07;
  }
  bool ok = n > 0 && i + n <= text.size();
  for (std::size_t k = 1; ok && k < n; ++k) {
    if ((byte(i + k) & 0xC0) != 0x80) ok = false;
    cp = (cp << 6) | (byte(i + k) & 0x3F);
  }
  if (!ok) {
    length = 1;
    ++i;
    return 0xFFFFFFFFu;
  }
  length = n;
  i += n;
  return cp;
}

void append_folded(std::string& out, std::uint32_t cp, std::string_view original) {
  if (cp < 0x80) {
    const char c = static_cast<char>(cp);
    if (c == AddressKey::kSeparator || cp < 0x20 || cp == 0x7F) {
      out.push_back(' ');
    } else if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      out.push_back(c);
    }
    return;
  }
  if (cp == 0xA0) {
    out.push_back(' ');
    return;
  }
  if (cp >= 0xC0 && cp <= 0xFF) {
    const char base = kLatin1[cp - 0xC0];
    if (base != '\0') {
      out.push_back(base);
      return;
    }
    switch (cp) {
      case 0xC6: case 0xE6: out += "ae"; return;
      case 0xD7: out.push_back('x'); return;
      case 0xDE: case 0xFE: out += "th"; return;
      case 0xDF: out += "ss"; return;
      default: break;
    }
  }
  if (cp >= 0x100 && cp <= 0x17F) {
    const char base = kLatinExtA[cp - 0x100];
    if (base == '1') {
      out += "ij";
    } else if (base == '2') {
      out += "oe";
    } else {
      out.push_back(base);
    }
    return;
  }
  out.append(original);
}

}  // namespace

std::string fold_token(std::string_view text) {
  std::string folded;
  folded.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = i;
    std::size_t length = 0;
    const std::uint32_t cp = next_code_point(text, i, length);
    append_folded(folded, cp, text.substr(start, length));
  }

  std::string out;
  out.reserve(folded.size());
  bool pending_space = false;
  for (const char c : folded) {
    if (c == ' ' || c == '\t') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

AddressKey AddressKey::from_parts(std::string_view city, std::string_view region,
                                  std::string_view country) {
  std::string value;
  value.reserve(city.size() + region.size() + country.size() + 2);
  value.append(city);
  value.push_back(kSeparator);
  value.append(region);
  value.push_back(kSeparator);
  value.append(country);
  return AddressKey(std::move(value));
}

AddressKey AddressKey::parse(std::string_view text) {
  const auto first = text.find(kSeparator);
  const auto second = first == std::string_view::npos ? first : text.find(kSeparator, first + 1);
  if (second == std::string_view::npos || text.find(kSeparator, second + 1) != std::string_view::npos) {
    throw std::invalid_argument("address key needs exactly two '|' separators: " + std::string(text));
  }
  if (second + 1 == text.size()) {
    throw std::invalid_argument("address key has empty country: " + std::string(text));
  }
  return AddressKey(std::string(text));
}

std::string_view AddressKey::city() const noexcept {
  const std::string_view v = value_;
  return v.substr(0, v.find(kSeparator));
}

std::string_view AddressKey::region() const noexcept {
  const std::string_view v = value_;
  const auto first = v.find(kSeparator);
  const auto second = v.find(kSeparator, first + 1);
  return v.substr(first + 1, second - first - 1);
}

std::string_view AddressKey::country() const noexcept {
  const std::string_view v = value_;
  return v.substr(v.rfind(kSeparator) + 1);
}

Address normalize_address(std::string_view raw_city, std::optional<std::string_view> raw_region,
                          std::string_view raw_country, const RegionPolicy& policy) {
  Address address;
  address.country = fold_token(raw_country);
  if (address.country.empty()) {
    throw InvalidAddress("address has no country");
  }
  address.city = fold_token(raw_city);
  if (raw_region && policy.is_region_significant(address.country)) {
    address.region = fold_token(*raw_region);
  }

  address.raw.append(raw_city);
  if (raw_region && !raw_region->empty()) {
    address.raw.append(", ");
    address.raw.append(*raw_region);
  }
  address.raw.append(", ");
  address.raw.append(raw_country);
  return address;
}

DocType parse_doc_type(std::string_view text) noexcept {
  const std::string folded = fold_token(text);
  if (folded == "article") return DocType::article;
  if (folded == "review") return DocType::review;
  return DocType::other;
}

std::string_view to_string(DocType type) noexcept {
  switch (type) {
    case DocType::article: return "article";
    case DocType::review: return "review";
    case DocType::other: return "other";
  }
  return "other";
}

std::size_t surviving_address_count(const Publication& p, int reprint_cutoff_year) noexcept {
  if (p.year <= reprint_cutoff_year) return p.addresses.size();
  std::size_t n = 0;
  for (const auto& a : p.addresses) {
    if (!a.is_reprint) ++n;
  }
  return n;
}

Admission classify_admission(const Publication& p, const CorpusFilter& filter) noexcept {
  if (!filter.allowed_types.contains(p.doc_type)) return Admission::wrong_type;
  if (!filter.years.contains(p.year)) return Admission::out_of_window;
  if (surviving_address_count(p, filter.reprint_cutoff_year) == 0) return Admission::no_address;
  return Admission::admitted;
}

}  // namespace geocollab
