#include "geocollab/commands.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "geocollab/errors.hpp"

namespace geocollab {

namespace {

using nlohmann::ordered_json;

IngestOptions ingest_options(const RunConfig& c, const JournalSet* journals) {
  IngestOptions opts;
  opts.threads = std::max(1u, c.threads);
  opts.chunk_lines = std::max<std::size_t>(1, c.chunk_lines);
  opts.journals = journals;
  return opts;
}

void require_corpus(const RunConfig& c) {
  if (c.corpus.empty()) throw ConfigError("no corpus file given");
  if (!std::filesystem::exists(c.corpus)) throw ConfigError("corpus not found: " + c.corpus.string());
}

std::optional<JournalSet> permanent_journals(const RunConfig& c) {
  if (!c.filter.fixed_journal_window) return std::nullopt;
  const YearWindow window = *c.filter.fixed_journal_window;
  if (window.first > window.last) throw ConfigError("fixed-journal window is empty");
  JournalPresence presence(window);
  ingest<JournalPresence>(
      c.corpus, c.filter, c.regions, ingest_options(c, nullptr),
      [window] { return JournalPresence(window); },
      [](JournalPresence& s, Publication& p) { s.add(p.journal_id, p.year); },
      [&](JournalPresence&& s) { presence.merge(s); });
  return presence.permanent();
}

CoordinateIndex load_index(const RunConfig& c) {
  if (!std::filesystem::exists(c.cache)) {
    throw ConfigError("geocode cache not found: " + c.cache.string() + " (run geocode first)");
  }
  return build_coordinate_index(read_cache(c.cache));
}

std::optional<FieldScheme> load_scheme_for(const RunConfig& c, const std::vector<Dimension>& dims) {
  const bool needs = std::any_of(dims.begin(), dims.end(), [](Dimension d) {
    return d == Dimension::field || d == Dimension::broad_field;
  });
  if (!needs) return std::nullopt;
  if (!c.field_scheme) throw ConfigError("field partitions need --field-scheme");
  return FieldScheme::load(*c.field_scheme);
}

struct AggregatePass {
  CellAggregator cells;
  IngestReport report;
};

AggregatePass aggregate_corpus(const RunConfig& c, const std::vector<Dimension>& dims,
                               const FieldScheme* scheme) {
  require_corpus(c);
  const CoordinateIndex index = load_index(c);
  const auto journals = permanent_journals(c);
  CellAggregator total(dims, scheme, c.weighting);
  const IngestReport report = ingest<CellAggregator>(
      c.corpus, c.filter, c.regions, ingest_options(c, journals ? &*journals : nullptr),
      [&] { return CellAggregator(dims, scheme, c.weighting); },
      [&](CellAggregator& agg, Publication& p) {
        resolve_coordinates(p, index);
        agg.add(p);
      },
      [&](CellAggregator&& agg) { total.merge(agg); });
  return {std::move(total), report};
}

std::string optional_fixed(const std::optional<double>& v, int decimals) {
  return v ? format_fixed(*v, decimals) : std::string();
}

ordered_json report_json(const IngestReport& r) {
  ordered_json j;
  j["total"] = r.total;
  j["admitted"] = r.admitted;
  j["rejected_by_type"] = r.rejected_by_type;
  j["rejected_by_year"] = r.rejected_by_year;
  j["rejected_no_address"] = r.rejected_no_address;
  j["rejected_by_journal"] = r.rejected_by_journal;
  j["invalid_address"] = r.invalid_address;
  j["malformed"] = r.malformed;
  return j;
}

void log_report(std::ostream& log, const IngestReport& r) {
  log << "records: " << r.total << " read, " << r.admitted << " admitted, " << r.rejected_by_type
      << " wrong type, " << r.rejected_by_year << " outside years, " << r.rejected_no_address
      << " without address, " << r.rejected_by_journal << " outside fixed journals, "
      << r.invalid_address << " invalid address, " << r.malformed << " malformed\n";
}

void set_metric(IndicatorSummary& s, Metric m, double v) {
  switch (m) {
    case Metric::frac_pubs: s.frac_pubs = v; break;
    case Metric::mgcd: s.mgcd_km = v; break;
    case Metric::pct_mldc: s.pct_mldc = v; break;
    case Metric::pct_ldc: s.pct_ldc = v; break;
    case Metric::pct_vldc: s.pct_vldc = v; break;
    case Metric::pct_copub: s.pct_copub = v; break;
    case Metric::pct_intl_copub: s.pct_intl_copub = v; break;
    case Metric::mean_authors: s.mean_authors = v; break;
  }
}

}  // namespace

void resolve_coordinates(Publication& p, const CoordinateIndex& index) {
  for (auto& a : p.addresses) {
    a.coords.reset();
    if (!a.geocodable()) continue;
    const auto it = index.find(a.key().str());
    if (it != index.end()) a.coords = it->second;
  }
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string summary_columns(const IndicatorSummary& s) {
  std::string out = format_fixed(s.frac_pubs, 4);
  out += ',' + optional_fixed(s.mgcd_km, 1);
  out += ',' + optional_fixed(s.pct_mldc, 2);
  out += ',' + optional_fixed(s.pct_ldc, 2);
  out += ',' + optional_fixed(s.pct_vldc, 2);
  out += ',' + optional_fixed(s.pct_copub, 2);
  out += ',' + optional_fixed(s.pct_intl_copub, 2);
  out += ',' + optional_fixed(s.mean_authors, 2);
  return out;
}

// ---------------------------------------------------------------------------

GeocodeSummary cmd_geocode(const RunConfig& config, std::ostream& log) {
  require_corpus(config);
  if (config.gazetteers.empty()) throw ConfigError("no gazetteer file given");
  try {
    config.policy.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto clients = load_gazetteer(config.gazetteers);
  if (clients.empty()) throw DataError("gazetteer files contain no rows");
  ReconcilePolicy policy = config.policy;
  if (policy.preferred_source.empty()) {
    policy.preferred_source = clients.front()->name();
  } else if (std::none_of(clients.begin(), clients.end(),
                          [&](const auto& c) { return c->name() == policy.preferred_source; })) {
    throw ConfigError("preferred source '" + policy.preferred_source + "' not in gazetteer");
  }
  std::vector<std::string> source_names;
  for (const auto& c : clients) source_names.push_back(c->name());

  struct Tally {
    OccurrenceCounter counter;
    std::uint64_t total = 0;
    std::uint64_t ungeocodable = 0;
  };
  Tally tally;
  GeocodeSummary summary;
  summary.ingest = ingest<Tally>(
      config.corpus, config.filter, config.regions, ingest_options(config, nullptr),
      [] { return Tally{}; },
      [](Tally& t, Publication& p) {
        for (const auto& a : p.addresses) {
          ++t.total;
          if (a.geocodable()) {
            t.counter.add(a.key());
          } else {
            ++t.ungeocodable;
          }
        }
      },
      [&](Tally&& t) {
        tally.counter.merge(t.counter);
        tally.total += t.total;
        tally.ungeocodable += t.ungeocodable;
      });

  std::unordered_map<std::string, GeocodeEntry> cached;
  if (std::filesystem::exists(config.cache)) {
    for (auto& e : read_cache(config.cache)) cached.emplace(e.key.str(), std::move(e));
  }

  const auto ranked = tally.counter.ranked();
  std::vector<GeocodeEntry> entries;
  entries.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    GeocodeEntry entry;
    entry.key = ranked[i].key;
    entry.occurrences = ranked[i].occurrences;
    if (i >= policy.top_k_addresses) {
      entries.push_back(std::move(entry));
      continue;
    }
    const auto hit = cached.find(entry.key.str());
    if (hit != cached.end() && !hit->second.candidates.empty()) {
      entry.candidates = hit->second.candidates;
    } else {
      entry.candidates = query_sources(entry.key, clients);
      ++summary.queried;
    }
    entry = reconcile(std::move(entry), policy);
    // Earlier review verdicts survive re-runs while the candidates are unchanged.
    if (hit != cached.end() && hit->second.candidates == entry.candidates) {
      const auto prior = hit->second.status;
      if (prior == GeocodeStatus::resolved_manual ||
          (prior == GeocodeStatus::unknown && is_pending(entry.status))) {
        entry.status = prior;
        entry.resolved = hit->second.resolved;
      }
    }
    entries.push_back(std::move(entry));
  }

  if (config.review_verdicts) {
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < entries.size(); ++i) position.emplace(entries[i].key.str(), i);
    for (const auto& row : read_review_verdicts(*config.review_verdicts)) {
      const auto it = position.find(row.key.str());
      if (it == position.end() || !is_pending(entries[it->second].status)) {
        ++summary.verdicts_ignored;
        log << "warning: verdict for " << row.key.str() << " ignored (entry not pending)\n";
        continue;
      }
      try {
        entries[it->second] = apply_review(entries[it->second], row.verdict);
        ++summary.verdicts_applied;
      } catch (const ReviewError& e) {
        throw DataError(e.what());
      }
    }
  }

  summary.total_occurrences = tally.total;
  summary.ungeocodable_occurrences = tally.ungeocodable;
  summary.unique_addresses = ranked.size();
  summary.considered = std::min(ranked.size(), policy.top_k_addresses);
  std::vector<GeocodeEntry> pending;
  for (const auto& e : entries) {
    switch (e.status) {
      case GeocodeStatus::resolved_auto: ++summary.resolved_auto; break;
      case GeocodeStatus::resolved_manual: ++summary.resolved_manual; break;
      case GeocodeStatus::pending_review_strict: ++summary.pending_strict; break;
      case GeocodeStatus::pending_review_cursory: ++summary.pending_cursory; break;
      case GeocodeStatus::unknown: ++summary.unknown; break;
    }
    if (is_resolved(e.status)) summary.resolved_occurrences += e.occurrences;
    if (is_pending(e.status)) pending.push_back(e);
  }
  summary.coverage_pct =
      tally.total == 0 ? 0.0 : 100.0 * static_cast<double>(summary.resolved_occurrences) /
                                   static_cast<double>(tally.total);

  std::sort(entries.begin(), entries.end(),
            [](const GeocodeEntry& a, const GeocodeEntry& b) { return a.key < b.key; });
  write_cache(config.cache, entries);

  summary.review_queue = config.out_dir / "review_queue.tsv";
  {
    auto out = open_output(summary.review_queue);
    write_review_queue(out, pending, source_names);
  }

  log_report(log, summary.ingest);
  log << "unique addresses: " << summary.unique_addresses << " (" << summary.considered
      << " geocoded, " << summary.queried << " looked up)\n"
      << "resolved: " << summary.resolved_auto << " auto, " << summary.resolved_manual
      << " manual; pending review: " << summary.pending_strict << " strict, "
      << summary.pending_cursory << " cursory; unknown: " << summary.unknown << '\n'
      << "address coverage: " << format_fixed(summary.coverage_pct, 2) << "% of "
      << summary.total_occurrences << " address occurrences\n";
  if (config.review_verdicts) {
    log << "review verdicts: " << summary.verdicts_applied << " applied, "
        << summary.verdicts_ignored << " ignored\n";
  }
  log << "cache: " << config.cache.string() << "\nreview queue: " << summary.review_queue.string()
      << '\n';
  return summary;
}

IndicatorsResult cmd_indicators(const RunConfig& config, std::ostream& log) {
  const auto scheme = load_scheme_for(config, config.partitions);
  auto pass = aggregate_corpus(config, config.partitions, scheme ? &*scheme : nullptr);
  IndicatorsResult result{pass.report, std::move(pass.cells), {}};

  log_report(log, result.ingest);
  if (result.ingest.admitted == 0) log << "warning: no admitted publications\n";

  for (const auto d : result.cells.dimensions()) {
    const auto path = config.out_dir / ("indicators_" + std::string(to_string(d)) + ".csv");
    auto out = open_output(path);
    out << "cell,year," << kSummaryHeader << '\n';
    for (const auto& [key, acc] : result.cells.cells(d)) {
      out << csv_field(key.unit) << ',' << key.year << ',' << summary_columns(acc.summary()) << '\n';
    }
    result.files.push_back(path);
    log << "wrote " << path.string() << '\n';
  }

  ordered_json meta;
  meta["distance_indicator_denominator"] = "publications with a defined GCD";
  meta["thresholds_km"] = {kMldcThresholdKm, kLdcThresholdKm, kVldcThresholdKm};
  meta["fractional_weighting"] = to_string(config.weighting);
  if (config.filter.fixed_journal_window) {
    meta["fixed_journal_window"] = {config.filter.fixed_journal_window->first,
                                    config.filter.fixed_journal_window->last};
  }
  meta["ingest"] = report_json(result.ingest);
  ordered_json unmapped = ordered_json::object();
  for (const auto& [code, n] : result.cells.unmapped_categories()) unmapped[code] = n;
  meta["unmapped_categories"] = std::move(unmapped);
  if (!result.cells.unmapped_categories().empty()) {
    log << "warning: " << result.cells.unmapped_categories().size()
        << " subject categories missing from the field scheme (counted as " << kUnclassified
        << ")\n";
  }
  const auto meta_path = config.out_dir / "indicators_meta.json";
  open_output(meta_path) << meta.dump(2) << '\n';
  result.files.push_back(meta_path);
  return result;
}

std::vector<TrendPoint> read_series_csv(const std::filesystem::path& path, Metric metric) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open series " + path.string());
  std::string line;
  std::vector<TrendPoint> series;
  std::optional<std::size_t> year_col, value_col;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (!year_col) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "year") year_col = i;
        if (fields[i] == "value" || fields[i] == to_string(metric)) value_col = i;
      }
      if (!year_col || !value_col) {
        throw DataError(path.string() + ": series needs 'year' and 'value' columns");
      }
      continue;
    }
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() <= std::max(*year_col, *value_col)) throw DataError(where + ": short row");
    TrendPoint point;
    point.year = static_cast<int>(parse_int(fields[*year_col], where + " year"));
    set_metric(point.summary, metric, parse_double(fields[*value_col], where + " value"));
    if (!series.empty() && point.year <= series.back().year) {
      throw DataError(where + ": years must increase");
    }
    series.push_back(point);
  }
  return series;
}

TrendResult cmd_trend(const RunConfig& config, const TrendRequest& request, std::ostream& log) {
  TrendResult result;
  if (request.series_file) {
    result.series = read_series_csv(*request.series_file, request.metric);
  } else {
    const std::vector<Dimension> dims{request.dimension};
    const auto scheme = load_scheme_for(config, dims);
    const auto pass = aggregate_corpus(config, dims, scheme ? &*scheme : nullptr);
    log_report(log, pass.report);
    const std::string unit = request.dimension == Dimension::all ? "all" : request.unit;
    result.series = trend_series(pass.cells.cells(request.dimension), unit);
    if (result.series.empty()) throw DataError("no publications for cell '" + unit + "'");
  }

  const auto trend_path = config.out_dir / "trend.csv";
  {
    auto out = open_output(trend_path);
    out << "year," << kSummaryHeader << '\n';
    for (const auto& t : result.series) out << t.year << ',' << summary_columns(t.summary) << '\n';
  }
  log << "wrote " << trend_path.string() << '\n';

  const auto value = [&](int year) {
    const auto it = std::find_if(result.series.begin(), result.series.end(),
                                 [&](const TrendPoint& t) { return t.year == year; });
    if (it == result.series.end()) throw DataError("year " + std::to_string(year) + " not in series");
    const auto v = metric_value(it->summary, request.metric);
    if (!v) {
      throw DataError(std::string(to_string(request.metric)) + " undefined in " + std::to_string(year));
    }
    return *v;
  };
  if (request.y0 >= request.y1) throw DataError("trend endpoints need y0 < y1");
  result.value_y0 = value(request.y0);
  result.value_y1 = value(request.y1);
  const int span = request.y1 - request.y0;
  result.annual_growth = annual_growth(result.value_y0, result.value_y1, span);
  result.annual_growth_rate_pct = annual_growth_rate(result.value_y0, result.value_y1, span);

  const auto growth_path = config.out_dir / "trend_growth.csv";
  open_output(growth_path) << "metric,y0,y1,value_y0,value_y1,annual_growth,annual_growth_rate_pct\n"
                           << to_string(request.metric) << ',' << request.y0 << ',' << request.y1
                           << ',' << format_fixed(result.value_y0, 3) << ','
                           << format_fixed(result.value_y1, 3) << ','
                           << format_fixed(result.annual_growth, 3) << ','
                           << format_fixed(result.annual_growth_rate_pct, 3) << '\n';
  log << to_string(request.metric) << ' ' << request.y0 << " -> " << request.y1 << ": "
      << format_fixed(result.value_y0, 1) << " -> " << format_fixed(result.value_y1, 1)
      << ", annual growth " << format_fixed(result.annual_growth, 1) << " per year, annual growth rate "
      << format_fixed(result.annual_growth_rate_pct, 2) << "%\n";
  return result;
}

DispersionResult cmd_dispersion(const RunConfig& config, std::vector<int> years, std::ostream& log) {
  require_corpus(config);
  if (years.empty()) throw ConfigError("no dispersion years given");
  std::sort(years.begin(), years.end());
  years.erase(std::unique(years.begin(), years.end()), years.end());

  const CoordinateIndex index = load_index(config);
  const auto journals = permanent_journals(config);
  using Counts = std::map<int, std::unordered_map<std::string, std::uint64_t>>;
  Counts counts;
  const auto report = ingest<Counts>(
      config.corpus, config.filter, config.regions,
      ingest_options(config, journals ? &*journals : nullptr), [] { return Counts{}; },
      [&](Counts& c, Publication& p) {
        if (!std::binary_search(years.begin(), years.end(), p.year)) return;
        auto& year_counts = c[p.year];
        for (const auto& a : p.addresses) {
          if (!a.geocodable()) continue;
          auto key = a.key().str();
          if (index.contains(key)) ++year_counts[std::move(key)];
        }
      },
      [&](Counts&& c) {
        for (auto& [year, m] : c) {
          auto& target = counts[year];
          for (auto& [key, n] : m) target[key] += n;
        }
      });
  log_report(log, report);

  DispersionResult result;
  for (const int year : years) {
    DispersionRow row{year, std::nullopt, 0, 0};
    if (const auto it = counts.find(year); it != counts.end() && !it->second.empty()) {
      std::vector<std::pair<std::string, std::uint64_t>> sorted(it->second.begin(), it->second.end());
      std::sort(sorted.begin(), sorted.end());
      std::vector<LocationCount> locations;
      locations.reserve(sorted.size());
      for (const auto& [key, n] : sorted) {
        locations.push_back({index.at(key), n});
        row.occurrences += n;
      }
      row.locations = locations.size();
      try {
        row.dispersion_km = dispersion(locations, config.self_pairs, config.threads);
      } catch (const DataError& e) {
        log << "warning: year " << year << ": " << e.what() << '\n';
      }
    } else {
      log << "warning: year " << year << " has no resolved addresses\n";
    }
    result.rows.push_back(row);
  }

  const auto path = config.out_dir / "dispersion.csv";
  {
    auto out = open_output(path);
    out << "year,dispersion_km,occurrences,locations\n";
    for (const auto& r : result.rows) {
      out << r.year << ',' << optional_fixed(r.dispersion_km, 1) << ',' << r.occurrences << ','
          << r.locations << '\n';
    }
  }
  log << "wrote " << path.string() << '\n';

  const auto& first = result.rows.front();
  const auto& last = result.rows.back();
  if (result.rows.size() >= 2 && first.dispersion_km && last.dispersion_km) {
    const int span = last.year - first.year;
    result.annual_growth = annual_growth(*first.dispersion_km, *last.dispersion_km, span);
    if (*first.dispersion_km > 0.0) {
      result.annual_growth_rate_pct =
          annual_growth_rate(*first.dispersion_km, *last.dispersion_km, span);
    }
    const auto growth_path = config.out_dir / "dispersion_growth.csv";
    open_output(growth_path) << "y0,y1,annual_growth_km,annual_growth_rate_pct\n"
                             << first.year << ',' << last.year << ','
                             << format_fixed(*result.annual_growth, 3) << ','
                             << optional_fixed(result.annual_growth_rate_pct, 3) << '\n';
    log << "dispersion " << first.year << " -> " << last.year << ": annual growth "
        << format_fixed(*result.annual_growth, 1) << " km per year";
    if (result.annual_growth_rate_pct) {
      log << ", annual growth rate " << format_fixed(*result.annual_growth_rate_pct, 2) << '%';
    }
    log << '\n';
  }
  return result;
}

std::vector<MapRow> cmd_map_classes(const RunConfig& config, std::ostream& log) {
  if (config.map_window.first > config.map_window.last) throw ConfigError("map window is empty");
  const std::vector<Dimension> dims{Dimension::country};
  const auto pass = aggregate_corpus(config, dims, nullptr);
  log_report(log, pass.report);

  std::vector<MapRow> rows;
  for (const auto& [country, acc] : collapse_years(pass.cells.cells(Dimension::country),
                                                   config.map_window)) {
    const auto s = acc.summary();
    rows.push_back({country, s.frac_pubs, s.mgcd_km, classify_country(s.frac_pubs, s.mgcd_km)});
  }

  const auto path = config.out_dir / "map_classes.csv";
  auto out = open_output(path);
  out << "country,frac_pubs,mgcd_km,class\n";
  for (const auto& r : rows) {
    out << csv_field(r.country) << ',' << format_fixed(r.frac_pubs, 4) << ','
        << optional_fixed(r.mgcd_km, 1) << ',' << to_string(r.map_class) << '\n';
  }
  log << "wrote " << path.string() << " (" << rows.size() << " countries, window "
      << config.map_window.first << '-' << config.map_window.last << ")\n";
  return rows;
}

std::vector<AuditItem> cmd_audit_sample(const RunConfig& config, std::size_t n, std::uint64_t seed,
                                        std::ostream& log) {
  if (!std::filesystem::exists(config.cache)) {
    throw ConfigError("geocode cache not found: " + config.cache.string());
  }
  const auto entries = read_cache(config.cache);
  std::vector<AuditItem> sample;
  try {
    sample = audit_sample(entries, n, seed);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  const auto path = config.out_dir / "audit_sample.tsv";
  auto out = open_output(path);
  write_audit_sample(out, sample);
  log << "wrote " << sample.size() << " sampled addresses to " << path.string() << '\n';
  return sample;
}

AuditReport cmd_audit_compare(const RunConfig& config, const std::filesystem::path& verified,
                              double threshold_km, std::ostream& log) {
  const CoordinateIndex index = load_index(config);
  const auto points = read_verified_points(verified);
  const AuditReport report = audit_compare(points, index, threshold_km);

  const auto path = config.out_dir / "audit_report.tsv";
  auto out = open_output(path);
  out << "key\tdistance_km\n";
  for (const auto& m : report.mismatches) {
    out << m.key.str() << '\t' << format_fixed(m.distance_km, 3) << '\n';
  }
  log << "compared " << report.compared << " addresses; " << report.mismatches.size()
      << " farther than " << format_fixed(threshold_km, 1) << " km";
  if (report.not_resolved) log << "; " << report.not_resolved << " without resolved coordinates";
  log << "\nwrote " << path.string() << '\n';
  return report;
}

SchemaReport cmd_schema_check(const std::filesystem::path& corpus, std::ostream& log) {
  const SchemaReport report = check_schema(corpus);
  log << report.lines << " records, " << report.valid << " valid, " << report.lines - report.valid
      << " invalid\n";
  for (const auto& issue : report.issues) {
    log << corpus.string() << ':' << issue.line << ": " << issue.message << '\n';
  }
  return report;
}

SyntheticFiles cmd_gen_synthetic(const SyntheticOptions& options, const std::filesystem::path& out_dir,
                                 std::ostream& log) {
  const SyntheticFiles files = write_synthetic(options, out_dir);
  log << "wrote " << files.publications << " publications over " << files.sites << " sites to "
      << files.corpus.string() << "\ngazetteer: " << files.gazetteer.string()
      << "\nfield scheme: " << files.field_scheme.string() << '\n';
  return files;
}

}  // namespace geocollab
