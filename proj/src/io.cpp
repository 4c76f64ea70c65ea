#include "geocollab/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "geocollab/errors.hpp"

namespace geocollab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Tabular helpers

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::optional<std::size_t> Table::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::size_t Table::require_column(std::string_view name, const std::filesystem::path& path) const {
  if (auto c = column(name)) return *c;
  throw DataError(path.string() + ": missing column '" + std::string(name) + "'");
}

Table read_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    for (auto f : split(line, '\t')) fields.emplace_back(f);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    fields.resize(std::max(fields.size(), table.header.size()));
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  return table;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out(buf);
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw DataError("invalid number for " + std::string(what) + ": '" + s + "'");
  }
  return v;
}

long long parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

// ---------------------------------------------------------------------------
// Publication records

namespace {

const json& require(const json& obj, const char* field) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw MalformedRecord(std::string("missing field '") + field + "'");
  return *it;
}

std::string as_string(const json& v, const char* field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw MalformedRecord(std::string("field '") + field + "' must be a string");
}

long long as_int(const json& v, const char* field) {
  if (!v.is_number_integer()) {
    throw MalformedRecord(std::string("field '") + field + "' must be an integer");
  }
  return v.get<long long>();
}

Address parse_address(const json& a, const RegionPolicy& policy) {
  if (!a.is_object()) throw MalformedRecord("address must be an object");
  std::string city;
  if (auto it = a.find("city"); it != a.end() && !it->is_null()) city = as_string(*it, "city");
  std::optional<std::string> region;
  if (auto it = a.find("region"); it != a.end() && !it->is_null()) region = as_string(*it, "region");
  const auto& country = require(a, "country");
  if (country.is_null()) throw InvalidAddress("address has no country");
  bool reprint = false;
  if (auto it = a.find("is_reprint"); it != a.end() && !it->is_null()) {
    if (!it->is_boolean()) throw MalformedRecord("field 'is_reprint' must be a boolean");
    reprint = it->get<bool>();
  }
  std::optional<std::string_view> region_view;
  if (region) region_view = *region;
  Address out = normalize_address(city, region_view, as_string(country, "country"), policy);
  out.is_reprint = reprint;
  return out;
}

}  // namespace

Publication parse_record(std::string_view line, const RegionPolicy& policy) {
  json doc = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw MalformedRecord("not valid JSON");
  if (!doc.is_object()) throw MalformedRecord("record must be a JSON object");

  Publication p;
  p.id = as_string(require(doc, "id"), "id");
  const long long year = as_int(require(doc, "year"), "year");
  if (year < -9999 || year > 9999) throw MalformedRecord("year out of range");
  p.year = static_cast<int>(year);

  const auto& type = require(doc, "doc_type");
  if (!type.is_string()) throw MalformedRecord("field 'doc_type' must be a string");
  p.doc_type = parse_doc_type(type.get_ref<const std::string&>());

  p.journal_id = as_string(require(doc, "journal_id"), "journal_id");

  const auto& cats = require(doc, "subject_categories");
  if (!cats.is_array()) throw MalformedRecord("field 'subject_categories' must be an array");
  p.subject_categories.reserve(cats.size());
  for (const auto& c : cats) p.subject_categories.push_back(as_string(c, "subject_categories"));

  const long long authors = as_int(require(doc, "author_count"), "author_count");
  if (authors < 1 || authors > 1'000'000) throw MalformedRecord("author_count must be positive");
  p.author_count = static_cast<int>(authors);

  const auto& addresses = require(doc, "addresses");
  if (!addresses.is_array()) throw MalformedRecord("field 'addresses' must be an array");
  p.addresses.reserve(addresses.size());
  for (const auto& a : addresses) p.addresses.push_back(parse_address(a, policy));
  return p;
}

Publication apply_reprint_rule(Publication p, int cutoff_year) {
  if (p.year > cutoff_year) {
    std::erase_if(p.addresses, [](const Address& a) { return a.is_reprint; });
  }
  return p;
}

void IngestReport::merge(const IngestReport& o) {
  total += o.total;
  admitted += o.admitted;
  rejected_by_type += o.rejected_by_type;
  rejected_by_year += o.rejected_by_year;
  rejected_no_address += o.rejected_no_address;
  rejected_by_journal += o.rejected_by_journal;
  invalid_address += o.invalid_address;
  malformed += o.malformed;
}

LineOutcome process_line(std::string_view line, const CorpusFilter& filter,
                         const RegionPolicy& policy, const JournalSet* journals,
                         IngestReport& report) {
  if (line.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
  ++report.total;
  Publication p;
  try {
    p = parse_record(line, policy);
  } catch (const InvalidAddress&) {
    ++report.invalid_address;
    return {};
  } catch (const MalformedRecord&) {
    ++report.malformed;
    return {};
  }
  p = apply_reprint_rule(std::move(p), filter.reprint_cutoff_year);
  switch (classify_admission(p, filter)) {
    case Admission::wrong_type: ++report.rejected_by_type; return {};
    case Admission::out_of_window: ++report.rejected_by_year; return {};
    case Admission::no_address: ++report.rejected_no_address; return {};
    case Admission::admitted: break;
  }
  if (journals && !journals->contains(p.journal_id)) {
    ++report.rejected_by_journal;
    return {};
  }
  ++report.admitted;
  return {std::move(p)};
}

CorpusReader::CorpusReader(const std::filesystem::path& path) : buffer_(1 << 20) {
  in_.rdbuf()->pubsetbuf(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  in_.open(path, std::ios::binary);
  if (!in_) throw ConfigError("cannot open corpus " + path.string());
}

bool CorpusReader::read_chunk(std::vector<std::string>& lines, std::size_t max_lines) {
  lines.resize(max_lines);
  std::size_t n = 0;
  while (n < max_lines && std::getline(in_, lines[n])) ++n;
  if (in_.bad()) throw DataError("read error in corpus");
  lines.resize(n);
  return n > 0;
}

IngestReport ingest(const std::filesystem::path& path, const CorpusFilter& filter,
                    const RegionPolicy& policy,
                    const std::function<void(Publication&)>& visit) {
  struct Empty {};
  return ingest<Empty>(
      path, filter, policy, IngestOptions{}, [] { return Empty{}; },
      [&](Empty&, Publication& p) { visit(p); }, [](Empty&&) {});
}

std::vector<Publication> read_corpus(const std::filesystem::path& path, const CorpusFilter& filter,
                                     const RegionPolicy& policy, IngestReport* report) {
  std::vector<Publication> out;
  const auto r = ingest(path, filter, policy, [&](Publication& p) { out.push_back(std::move(p)); });
  if (report) *report = r;
  return out;
}

void JournalPresence::add(const std::string& journal_id, int year) {
  if (!window_.contains(year)) return;
  auto& seen = years_[journal_id];
  if (seen.empty()) seen.assign(static_cast<std::size_t>(window_.span()), false);
  seen[static_cast<std::size_t>(year - window_.first)] = true;
}

void JournalPresence::merge(const JournalPresence& other) {
  for (const auto& [journal, seen] : other.years_) {
    auto& mine = years_[journal];
    if (mine.empty()) {
      mine = seen;
      continue;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) mine[i] = mine[i] || seen[i];
  }
}

JournalSet JournalPresence::permanent() const {
  JournalSet out;
  for (const auto& [journal, seen] : years_) {
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) out.insert(journal);
  }
  return out;
}

std::vector<Publication> fixed_journal_filter(std::span<const Publication> corpus,
                                              YearWindow window) {
  JournalPresence presence(window);
  for (const auto& p : corpus) presence.add(p.journal_id, p.year);
  const JournalSet keep = presence.permanent();
  std::vector<Publication> out;
  for (const auto& p : corpus) {
    if (keep.contains(p.journal_id)) out.push_back(p);
  }
  return out;
}

SchemaReport check_schema(const std::filesystem::path& path, std::size_t max_issues) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus " + path.string());
  SchemaReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    ++report.lines;
    try {
      (void)parse_record(line);
      ++report.valid;
    } catch (const std::exception& e) {
      if (report.issues.size() < max_issues) report.issues.push_back({line_no, e.what()});
    }
  }
  return report;
}

}  // namespace geocollab
