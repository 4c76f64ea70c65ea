// Corpus ingestion, filtering and small tabular-file helpers.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "geocollab/model.hpp"

namespace geocollab {

// ---------------------------------------------------------------------------
// Tabular helpers

/// Splits on a single-character delimiter; keeps empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based line numbers in the source file, parallel to rows.
  std::vector<std::size_t> line_numbers;

  /// Index of a header column, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
  /// Like column() but throws DataError naming the file.
  std::size_t require_column(std::string_view name, const std::filesystem::path& path) const;
};

/// Reads a tab-separated file with a header row. Blank lines and lines
/// starting with '#' are skipped. Throws ConfigError if the file cannot be
/// opened.
Table read_tsv(const std::filesystem::path& path);

/// Fixed-point formatting used at report emission; never prints "-0".
std::string format_fixed(double value, int decimals);

double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

/// Opens a file for writing, creating parent directories. Throws ConfigError.
std::ofstream open_output(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Publication records

class MalformedRecord : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses one JSON-lines record. Throws MalformedRecord for structural
/// problems and InvalidAddress when an address has no country.
Publication parse_record(std::string_view line, const RegionPolicy& policy = {});

/// Drops reprint addresses of publications published after the cutoff year.
Publication apply_reprint_rule(Publication p, int cutoff_year);

struct IngestReport {
  std::uint64_t total = 0;
  std::uint64_t admitted = 0;
  std::uint64_t rejected_by_type = 0;
  std::uint64_t rejected_by_year = 0;
  std::uint64_t rejected_no_address = 0;
  std::uint64_t rejected_by_journal = 0;
  std::uint64_t invalid_address = 0;
  std::uint64_t malformed = 0;

  void merge(const IngestReport& other);
  friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

/// Journals kept by the fixed-journal filter.
using JournalSet = std::unordered_set<std::string>;

struct IngestOptions {
  unsigned threads = 1;
  std::size_t chunk_lines = 8192;
  /// When set, admitted publications outside this set are rejected.
  const JournalSet* journals = nullptr;
};

/// Outcome of pushing one raw line through parsing and filtering. Only an
/// admitted line carries a publication.
struct LineOutcome {
  std::optional<Publication> publication;
};

/// Parses, applies the reprint rule and filters one line, tallying into report.
LineOutcome process_line(std::string_view line, const CorpusFilter& filter,
                         const RegionPolicy& policy, const JournalSet* journals,
                         IngestReport& report);

/// Sequential reader yielding chunks of raw lines.
class CorpusReader {
 public:
  /// Throws ConfigError if the file cannot be opened.
  explicit CorpusReader(const std::filesystem::path& path);

  /// Replaces `lines` with up to max_lines lines; false once nothing is left.
  bool read_chunk(std::vector<std::string>& lines, std::size_t max_lines);

 private:
  std::ifstream in_;
  std::vector<char> buffer_;
};

/// Streams the corpus through filtering and hands each admitted publication
/// to `visit` on a per-chunk State. Chunks are processed by up to
/// opts.threads workers and folded into the caller in file order, so results
/// are identical for any thread count. Memory holds at most `threads` chunks.
template <class State>
IngestReport ingest(const std::filesystem::path& path, const CorpusFilter& filter,
                    const RegionPolicy& policy, const IngestOptions& opts,
                    const std::function<State()>& make_state,
                    const std::function<void(State&, Publication&)>& visit,
                    const std::function<void(State&&)>& fold) {
  CorpusReader reader(path);
  IngestReport report;
  const unsigned workers = opts.threads == 0 ? 1u : opts.threads;

  auto run_chunk = [&](const std::vector<std::string>& lines) {
    std::pair<State, IngestReport> result{make_state(), IngestReport{}};
    for (const auto& line : lines) {
      auto outcome = process_line(line, filter, policy, opts.journals, result.second);
      if (outcome.publication) visit(result.first, *outcome.publication);
    }
    return result;
  };

  std::vector<std::vector<std::string>> batch(workers);
  bool more = true;
  while (more) {
    std::size_t filled = 0;
    for (; filled < workers; ++filled) {
      if (!reader.read_chunk(batch[filled], opts.chunk_lines)) {
        more = false;
        break;
      }
    }
    if (filled == 0) break;

    if (workers == 1 || filled == 1) {
      for (std::size_t i = 0; i < filled; ++i) {
        auto [state, chunk_report] = run_chunk(batch[i]);
        report.merge(chunk_report);
        fold(std::move(state));
      }
      continue;
    }
    std::vector<std::future<std::pair<State, IngestReport>>> futures;
    futures.reserve(filled);
    for (std::size_t i = 0; i < filled; ++i) {
      futures.push_back(std::async(std::launch::async, run_chunk, std::cref(batch[i])));
    }
    for (auto& f : futures) {
      auto [state, chunk_report] = f.get();
      report.merge(chunk_report);
      fold(std::move(state));
    }
  }
  return report;
}

/// Convenience wrapper: one visitor call per admitted publication, in order.
IngestReport ingest(const std::filesystem::path& path, const CorpusFilter& filter,
                    const RegionPolicy& policy,
                    const std::function<void(Publication&)>& visit);

/// Loads every admitted publication into memory (small corpora and tests).
std::vector<Publication> read_corpus(const std::filesystem::path& path, const CorpusFilter& filter,
                                     const RegionPolicy& policy = {},
                                     IngestReport* report = nullptr);

/// Tracks in which years of a window each journal published.
class JournalPresence {
 public:
  explicit JournalPresence(YearWindow window) : window_(window) {}

  void add(const std::string& journal_id, int year);
  void merge(const JournalPresence& other);
  /// Journals with at least one publication in every year of the window.
  JournalSet permanent() const;

 private:
  YearWindow window_;
  std::unordered_map<std::string, std::vector<bool>> years_;
};

/// Keeps publications whose journal is present in every year of the window.
std::vector<Publication> fixed_journal_filter(std::span<const Publication> corpus,
                                              YearWindow window);

/// Schema check result: line numbers and messages of bad records.
struct SchemaIssue {
  std::size_t line = 0;
  std::string message;
};

struct SchemaReport {
  std::uint64_t lines = 0;
  std::uint64_t valid = 0;
  std::vector<SchemaIssue> issues;
};

SchemaReport check_schema(const std::filesystem::path& path, std::size_t max_issues = 100);

}  // namespace geocollab
