// Copyright 2026 The selfsort Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsort/counted_sort.hpp"
#include "selfsort/generators.hpp"
#include "selfsort/instance_io.hpp"
#include "selfsort/linear_sorter.hpp"
#include "selfsort/mixture_sorter.hpp"
#include "selfsort/model_io.hpp"
#include "selfsort/parallel.hpp"
#include "selfsort/spec_io.hpp"

namespace selfsort {

enum class ReportFormat { kCsv, kJsonLines };

inline std::string to_string(ReportFormat f) { return f == ReportFormat::kCsv ? "csv" : "jsonl"; }

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "jsonl" || s == "json-lines") return ReportFormat::kJsonLines;
  throw Error(ErrorKind::SpecError, "format: expected csv or jsonl, got '" + s + "'");
}

/// Everything needed to rerun a benchmark. The spec document itself is
/// embedded so a report does not depend on files that may change.
struct RunConfig {
  std::string command = "bench";
  std::string spec_path;
  std::string model_path;  // empty: train from the spec
  std::string kind;        // "linear" or "mixture"; empty picks from the spec
  nlohmann::json spec;
  std::uint64_t seed = 1;
  double epsilon = 0.5;
  std::size_t m = 1;
  std::size_t count = 1000;
  std::size_t jobs = 1;
  ReportFormat format = ReportFormat::kCsv;
};

inline nlohmann::json config_to_json(const RunConfig& c) {
  return {{"command", c.command}, {"spec_path", c.spec_path}, {"model_path", c.model_path},
          {"kind", c.kind},       {"spec", c.spec},           {"seed", c.seed},
          {"epsilon", c.epsilon}, {"m", c.m},                 {"count", c.count},
          {"jobs", c.jobs},       {"format", to_string(c.format)}};
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  try {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.spec_path = j.at("spec_path").get<std::string>();
    c.model_path = j.at("model_path").get<std::string>();
    c.kind = j.at("kind").get<std::string>();
    c.spec = j.at("spec");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.epsilon = j.at("epsilon").get<double>();
    c.m = j.at("m").get<std::size_t>();
    c.count = j.at("count").get<std::size_t>();
    c.jobs = j.at("jobs").get<std::size_t>();
    c.format = parse_report_format(j.at("format").get<std::string>());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("report config: ") + e.what());
  }
}

/// One operation-phase instance, self-improving sorter next to the baseline.
struct BenchRow {
  std::uint64_t instance = 0;
  std::uint64_t sorter_comparisons = 0;
  std::uint64_t lookup_comparisons = 0;
  std::uint64_t merge_comparisons = 0;
  std::uint64_t verify_comparisons = 0;
  std::uint64_t fallback_comparisons = 0;
  std::uint64_t baseline_comparisons = 0;
  std::uint64_t tree_fallbacks = 0;
  std::uint64_t correctness_fallback = 0;
  std::uint64_t correct = 0;
  std::uint64_t nonempty_intervals = 0;
  std::uint64_t max_occupancy = 0;
  std::uint64_t occupancy_sum = 0;
  double occupancy_nlogn = 0.0;
  std::uint64_t wall_ns = 0;
};

namespace detail {

struct RowField {
  const char* name;
  std::uint64_t BenchRow::*integer;
  double BenchRow::*real;
  bool deterministic;
};

inline const std::vector<RowField>& row_fields() {
  static const std::vector<RowField> fields = {
      {"instance", &BenchRow::instance, nullptr, true},
      {"sorter_comparisons", &BenchRow::sorter_comparisons, nullptr, true},
      {"lookup_comparisons", &BenchRow::lookup_comparisons, nullptr, true},
      {"merge_comparisons", &BenchRow::merge_comparisons, nullptr, true},
      {"verify_comparisons", &BenchRow::verify_comparisons, nullptr, true},
      {"fallback_comparisons", &BenchRow::fallback_comparisons, nullptr, true},
      {"baseline_comparisons", &BenchRow::baseline_comparisons, nullptr, true},
      {"tree_fallbacks", &BenchRow::tree_fallbacks, nullptr, true},
      {"correctness_fallback", &BenchRow::correctness_fallback, nullptr, true},
      {"correct", &BenchRow::correct, nullptr, true},
      {"nonempty_intervals", &BenchRow::nonempty_intervals, nullptr, true},
      {"max_occupancy", &BenchRow::max_occupancy, nullptr, true},
      {"occupancy_sum", &BenchRow::occupancy_sum, nullptr, true},
      {"occupancy_nlogn", nullptr, &BenchRow::occupancy_nlogn, true},
      {"wall_ns", &BenchRow::wall_ns, nullptr, false},
  };
  return fields;
}

inline double field_value(const BenchRow& row, const RowField& f) {
  return f.integer ? static_cast<double>(row.*(f.integer)) : row.*(f.real);
}

}  // namespace detail

inline std::vector<std::string> report_columns() {
  std::vector<std::string> out;
  for (const auto& f : detail::row_fields()) out.emplace_back(f.name);
  return out;
}

struct BenchSummary {
  std::string kind;
  std::size_t n = 0;
  std::size_t instances = 0;
  double mean_sorter = 0.0;
  double mean_baseline = 0.0;
  double ratio = 0.0;  // mean_sorter / mean_baseline
  double mean_lookup = 0.0;
  double mean_merge = 0.0;
  double mean_verify = 0.0;
  double mean_fallback = 0.0;
  std::uint64_t tree_fallbacks = 0;
  std::uint64_t correctness_fallbacks = 0;
  std::uint64_t correct = 0;
  double mean_interval_occupancy = 0.0;  // E[|Z_r|] or E[|N_r|], averaged over all r
  double max_interval_occupancy = 0.0;   // max over r of the same expectation
  double mean_nonempty_occupancy = 0.0;  // occupancy of a non-empty interval, on average
  std::uint64_t max_occupancy = 0;
  double mean_occupancy_nlogn = 0.0;
  double max_occupancy_nlogn = 0.0;
  double perm_entropy_bits = -1.0;  // n <= 8 only
};

inline nlohmann::json summary_to_json(const BenchSummary& s) {
  nlohmann::json j = {{"kind", s.kind},
                      {"n", s.n},
                      {"instances", s.instances},
                      {"mean_sorter", s.mean_sorter},
                      {"mean_baseline", s.mean_baseline},
                      {"ratio", s.ratio},
                      {"mean_lookup", s.mean_lookup},
                      {"mean_merge", s.mean_merge},
                      {"mean_verify", s.mean_verify},
                      {"mean_fallback", s.mean_fallback},
                      {"tree_fallbacks", s.tree_fallbacks},
                      {"correctness_fallbacks", s.correctness_fallbacks},
                      {"correct", s.correct},
                      {"mean_interval_occupancy", s.mean_interval_occupancy},
                      {"max_interval_occupancy", s.max_interval_occupancy},
                      {"mean_nonempty_occupancy", s.mean_nonempty_occupancy},
                      {"max_occupancy", s.max_occupancy},
                      {"mean_occupancy_nlogn", s.mean_occupancy_nlogn},
                      {"max_occupancy_nlogn", s.max_occupancy_nlogn}};
  if (s.perm_entropy_bits >= 0.0) j["perm_entropy_bits"] = s.perm_entropy_bits;
  return j;
}

struct BenchResult {
  RunConfig config;
  std::vector<BenchRow> rows;
  BenchSummary summary;
};

/// True when order is a permutation of the positions that lists values in
/// the same order as a plain sort.
inline bool matches_oracle(std::span<const double> values, std::span<const std::uint32_t> order) {
  if (order.size() != values.size()) return false;
  std::vector<char> seen(values.size(), 0);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] >= values.size() || seen[order[k]]) return false;
    seen[order[k]] = 1;
    if (values[order[k]] != sorted[k]) return false;
  }
  return true;
}

/// Compares a learned partition with the classes and degenerates a spec
/// declares, ignoring order and class coefficients.
inline bool partition_matches(const LinearClassSpec& spec, const ClassPartition& learned) {
  std::vector<std::size_t> want_degenerate;
  for (const auto& d : spec.degenerates) want_degenerate.push_back(d.first);
  std::sort(want_degenerate.begin(), want_degenerate.end());
  std::vector<std::size_t> got_degenerate;
  for (const auto& d : learned.degenerates) got_degenerate.push_back(d.first);
  if (want_degenerate != got_degenerate) return false;
  std::vector<std::vector<std::size_t>> want;
  for (const auto& cls : spec.classes) {
    want.push_back(cls.indices);
    std::sort(want.back().begin(), want.back().end());
  }
  std::sort(want.begin(), want.end());
  auto got = learned.classes;
  std::sort(got.begin(), got.end());
  return want == got;
}

/// Draws training instances from the spec with the run seed and fits the
/// requested model kind.
inline SorterModel train_from_spec(const DistributionSpec& spec, const std::string& kind, std::uint64_t seed,
                                   double epsilon, std::size_t m) {
  Sampler sampler(spec, seed);
  InstanceSource source = [&sampler]() -> std::optional<Instance> { return sampler.next(); };
  if (kind == "linear") return train_linear(source, LinearTrainOptions{epsilon});
  if (kind == "mixture") return train_mixture(source, MixtureTrainOptions{m, epsilon});
  throw Error(ErrorKind::SpecError, "kind: expected linear or mixture, got '" + kind + "'");
}

inline std::string default_kind(const DistributionSpec& spec) {
  return std::holds_alternative<LinearClassSpec>(spec) ? "linear" : "mixture";
}

/// Per-thread sorting state for either model kind.
class ModelSorter {
 public:
  explicit ModelSorter(const SorterModel& model) : model_(model) {
    if (const auto* lin = std::get_if<LinearSorterModel>(&model_)) {
      linear_.emplace(*lin);
    } else {
      mixture_.emplace(std::get<MixtureSorterModel>(model_));
    }
  }

  std::vector<std::uint32_t> sort(std::span<const double> x, SortReport& report, const SortOptions& options = {}) {
    if (linear_) return sort_linear(std::get<LinearSorterModel>(model_), x, *linear_, report, options);
    return sort_mixture(std::get<MixtureSorterModel>(model_), *mixture_, x, report, options);
  }

 private:
  const SorterModel& model_;
  std::optional<LinearScratch> linear_;
  std::optional<MixtureScratch> mixture_;
};

inline std::size_t model_intervals(const SorterModel& model) {
  return std::visit([](const auto& m) { return m.vlist.interval_count(); }, model);
}

/// Operation instances come from worker w's stream, seeded seed + 1 + w,
/// over a contiguous block of instance ids; training uses seed itself.
inline BenchResult run_bench(const RunConfig& config) {
  BenchResult result;
  result.config = config;
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) throw Error(ErrorKind::SpecError, "epsilon: must lie in (0,1)");
  const DistributionSpec spec = spec_from_json(config.spec);
  const std::size_t n = spec_length(spec);
  if (result.config.kind.empty()) result.config.kind = default_kind(spec);
  const SorterModel model = config.model_path.empty()
                                ? train_from_spec(spec, result.config.kind, config.seed, config.epsilon, config.m)
                                : load_model(config.model_path);
  if (model_length(model) != n) {
    throw Error(ErrorKind::DimensionMismatch, "model has n=" + std::to_string(model_length(model)) +
                                                  " but the spec has n=" + std::to_string(n));
  }
  result.config.kind = std::holds_alternative<LinearSorterModel>(model) ? "linear" : "mixture";

  const std::size_t intervals = model_intervals(model);
  const std::size_t jobs = std::max<std::size_t>(config.jobs, 1);
  result.rows.resize(config.count);
  std::vector<std::vector<std::uint64_t>> per_interval(jobs, std::vector<std::uint64_t>(intervals, 0));

  run_blocks(config.count, jobs, [&](const WorkBlock& block) {
    Sampler sampler(spec, config.seed + 1 + block.worker);
    ModelSorter sorter(model);
    auto& occupancy = per_interval[block.worker];
    for (std::size_t id = block.begin; id < block.end; ++id) {
      const Instance x = sampler.next();
      SortReport report;
      const auto order = sorter.sort(x, report, SortOptions{true});
      ComparisonCounter baseline;
      baseline_merge_sort(x, baseline);

      BenchRow& row = result.rows[id];
      row.instance = id;
      row.sorter_comparisons = report.total_comparisons();
      row.lookup_comparisons = report.lookup_comparisons;
      row.merge_comparisons = report.merge_comparisons;
      row.verify_comparisons = report.verify_comparisons;
      row.fallback_comparisons = report.fallback_comparisons;
      row.baseline_comparisons = baseline.count;
      row.tree_fallbacks = report.tree_fallbacks;
      row.correctness_fallback = report.correctness_fallback ? 1 : 0;
      row.correct = matches_oracle(x, order) ? 1 : 0;
      row.nonempty_intervals = report.nonempty_intervals;
      row.max_occupancy = report.max_occupancy;
      row.occupancy_sum = report.occupancy_sum;
      row.occupancy_nlogn = report.occupancy_nlogn;
      row.wall_ns = report.wall_ns;
      for (const auto& [r, size] : report.occupancy) occupancy[r] += size;
    }
  });

  BenchSummary& s = result.summary;
  s.kind = result.config.kind;
  s.n = n;
  s.instances = config.count;
  std::uint64_t nonempty = 0;
  std::uint64_t occupied = 0;
  for (const BenchRow& row : result.rows) {
    s.mean_sorter += static_cast<double>(row.sorter_comparisons);
    s.mean_baseline += static_cast<double>(row.baseline_comparisons);
    s.mean_lookup += static_cast<double>(row.lookup_comparisons);
    s.mean_merge += static_cast<double>(row.merge_comparisons);
    s.mean_verify += static_cast<double>(row.verify_comparisons);
    s.mean_fallback += static_cast<double>(row.fallback_comparisons);
    s.tree_fallbacks += row.tree_fallbacks;
    s.correctness_fallbacks += row.correctness_fallback;
    s.correct += row.correct;
    s.max_occupancy = std::max(s.max_occupancy, row.max_occupancy);
    s.mean_occupancy_nlogn += row.occupancy_nlogn;
    s.max_occupancy_nlogn = std::max(s.max_occupancy_nlogn, row.occupancy_nlogn);
    nonempty += row.nonempty_intervals;
    occupied += row.occupancy_sum;
  }
  if (config.count > 0) {
    const double t = static_cast<double>(config.count);
    for (double* v : {&s.mean_sorter, &s.mean_baseline, &s.mean_lookup, &s.mean_merge, &s.mean_verify,
                      &s.mean_fallback, &s.mean_occupancy_nlogn}) {
      *v /= t;
    }
    s.ratio = s.mean_baseline > 0.0 ? s.mean_sorter / s.mean_baseline : 0.0;
    double total = 0.0;
    for (std::size_t r = 0; r < intervals; ++r) {
      std::uint64_t sum = 0;
      for (const auto& occ : per_interval) sum += occ[r];
      const double mean = static_cast<double>(sum) / t;
      total += mean;
      s.max_interval_occupancy = std::max(s.max_interval_occupancy, mean);
    }
    s.mean_interval_occupancy = total / static_cast<double>(intervals);
    s.mean_nonempty_occupancy = nonempty > 0 ? static_cast<double>(occupied) / static_cast<double>(nonempty) : 0.0;
  }
  if (n <= kMaxOracleLength && config.count > 0) {
    s.perm_entropy_bits = estimate_perm_entropy(spec, config.count, config.seed + 1 + jobs);
  }
  return result;
}

inline void write_report(std::ostream& out, const BenchResult& result) {
  const auto& fields = detail::row_fields();
  if (result.config.format == ReportFormat::kCsv) {
    out << "# config " << config_to_json(result.config).dump() << '\n';
    for (std::size_t f = 0; f < fields.size(); ++f) out << (f ? "," : "") << fields[f].name;
    out << '\n';
    for (const BenchRow& row : result.rows) {
      for (std::size_t f = 0; f < fields.size(); ++f) {
        if (f) out << ',';
        if (fields[f].integer) {
          out << row.*(fields[f].integer);
        } else {
          out << format_double(row.*(fields[f].real));
        }
      }
      out << '\n';
    }
    out << "# summary " << summary_to_json(result.summary).dump() << '\n';
  } else {
    out << nlohmann::json{{"config", config_to_json(result.config)}}.dump() << '\n';
    for (const BenchRow& row : result.rows) {
      nlohmann::json j = nlohmann::json::object();
      for (const auto& f : fields) {
        if (f.integer) {
          j[f.name] = row.*(f.integer);
        } else {
          j[f.name] = row.*(f.real);
        }
      }
      out << j.dump() << '\n';
    }
    out << nlohmann::json{{"summary", summary_to_json(result.summary)}}.dump() << '\n';
  }
}

/// A report read back from disk: its config and each row as field -> value.
struct ParsedReport {
  RunConfig config;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline ParsedReport read_report(std::istream& in) {
  ParsedReport report;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "report: empty file");
  const std::string csv_prefix = "# config ";
  if (line.rfind(csv_prefix, 0) == 0) {
    report.config = config_from_json(detail::parse_json_text(line.substr(csv_prefix.size()), ErrorKind::ParseError));
    if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "report: missing header");
    std::stringstream header(line);
    for (std::string col; std::getline(header, col, ',');) report.columns.push_back(col);
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      std::vector<double> values;
      std::stringstream cells(line);
      for (std::string cell; std::getline(cells, cell, ',');) {
        values.push_back(parse_double(cell, "report line " + std::to_string(line_no)));
      }
      if (values.size() != report.columns.size()) {
        throw Error(ErrorKind::ParseError, "report line " + std::to_string(line_no) + ": wrong column count");
      }
      report.rows.push_back(std::move(values));
    }
    return report;
  }
  const auto first = detail::parse_json_text(line, ErrorKind::ParseError);
  if (!first.is_object() || !first.contains("config")) throw Error(ErrorKind::ParseError, "report: missing config");
  report.config = config_from_json(first.at("config"));
  report.columns = report_columns();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = detail::parse_json_text(line, ErrorKind::ParseError);
    if (j.contains("summary")) continue;
    std::vector<double> values;
    for (const auto& col : report.columns) {
      if (!j.contains(col) || !j.at(col).is_number()) {
        throw Error(ErrorKind::ParseError, "report row: missing field '" + col + "'");
      }
      values.push_back(j.at(col).get<double>());
    }
    report.rows.push_back(std::move(values));
  }
  return report;
}

inline ParsedReport read_report_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read '" + path + "'");
  return read_report(in);
}

/// Rerun a parsed report's config. Returns the number of rows whose
/// deterministic fields differ (0 means a bit-exact reproduction).
inline std::size_t replay_mismatches(const ParsedReport& report, BenchResult* rerun_out = nullptr) {
  BenchResult rerun = run_bench(report.config);
  const auto& fields = detail::row_fields();
  std::size_t mismatches = rerun.rows.size() == report.rows.size()
                               ? 0
                               : std::max(rerun.rows.size(), report.rows.size()) -
                                     std::min(rerun.rows.size(), report.rows.size());
  for (std::size_t i = 0; i < std::min(rerun.rows.size(), report.rows.size()); ++i) {
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
      const auto it = std::find_if(fields.begin(), fields.end(),
                                   [&](const detail::RowField& f) { return report.columns[c] == f.name; });
      if (it == fields.end() || !it->deterministic) continue;
      if (detail::field_value(rerun.rows[i], *it) != report.rows[i][c]) {
        ++mismatches;
        break;
      }
    }
  }
  if (rerun_out) *rerun_out = std::move(rerun);
  return mismatches;
}

}  // namespace selfsort
