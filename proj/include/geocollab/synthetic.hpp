// Seeded synthetic corpora: research sites on the sphere, publications with
// planted collaboration patterns, matching gazetteer and field scheme files.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "geocollab/geo.hpp"
#include "geocollab/model.hpp"
#include "geocollab/random.hpp"

namespace geocollab {

struct SyntheticOptions {
  std::uint64_t publications = 10000;
  unsigned countries = 12;
  unsigned sites_per_country = 8;
  YearWindow years{1980, 2009};
  std::uint64_t seed = 1;
  unsigned max_addresses = 8;
  unsigned journals = 40;
  unsigned categories = 24;
  /// Emit a second gazetteer source with small jitter.
  bool second_source = true;
  /// Share of sites absent from every gazetteer source.
  double missing_fraction = 0.0;
  /// Share of sites the second source places 60-400 km away.
  double conflict_fraction = 0.0;
  double non_article_fraction = 0.05;
  double reprint_fraction = 0.05;
};

struct SyntheticSite {
  std::string city;
  std::string region;
  std::string country;
  GeoPoint point;
};

struct SyntheticWorld {
  SyntheticOptions options;
  std::vector<SyntheticSite> sites;
  /// Site indices per country, country order as in `countries`.
  std::vector<std::vector<std::size_t>> sites_by_country;
  std::vector<std::string> countries;
};

SyntheticWorld make_world(const SyntheticOptions& options);

/// One publication with coords already attached from the site points.
/// Publication i depends only on the world, the seed and i.
Publication synthesize_publication(const SyntheticWorld& world, std::uint64_t index);

/// JSON-lines rendering in the corpus record format.
std::string render_record(const Publication& p);

struct SyntheticFiles {
  std::filesystem::path corpus;
  std::filesystem::path gazetteer;
  std::filesystem::path field_scheme;
  std::uint64_t publications = 0;
  std::size_t sites = 0;
};

/// Writes corpus.jsonl, gazetteer.tsv and field_scheme.tsv into out_dir,
/// streaming publications so memory does not grow with corpus size.
SyntheticFiles write_synthetic(const SyntheticOptions& options, const std::filesystem::path& out_dir);

}  // namespace geocollab
