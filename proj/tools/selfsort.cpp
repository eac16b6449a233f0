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

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selfsort/selfsort.hpp"

namespace {

using namespace selfsort;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string spec;
  std::string model;
  std::string in;
  std::string out;
  std::string report;
  std::string replay;
  std::string format;
  std::uint64_t seed = 1;
  double epsilon = 0.5;
  std::size_t m = 1;
  bool m_given = false;
  std::size_t count = 0;
  std::size_t jobs = 1;
};

// Output file or stdout when the path is empty or "-".
class Sink {
 public:
  explicit Sink(const std::string& path, bool binary = false) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
    if (!*file_) throw Error(ErrorKind::SpecError, "cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

class Source {
 public:
  explicit Source(const std::string& path) {
    if (path.empty()) throw Error(ErrorKind::SpecError, "--in: an instance stream is required");
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw Error(ErrorKind::SpecError, "--in: cannot read '" + path + "'");
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorKind::SpecError, std::string(flag) + ": required");
}

int cmd_gen(const Options& o) {
  require(o.spec, "--spec");
  const auto spec = load_spec(o.spec);
  StreamFormat format = StreamFormat::kText;
  if (o.format == "binary") {
    format = StreamFormat::kBinary;
  } else if (!o.format.empty() && o.format != "text") {
    throw Error(ErrorKind::SpecError, "--format: gen writes text or binary");
  }
  const std::size_t count = o.count == 0 ? 1 : o.count;
  Sampler sampler(spec, o.seed);
  Sink sink(o.out, format == StreamFormat::kBinary);
  InstanceWriter writer(sink.stream(), sampler.n(), count, format);
  for (std::size_t i = 0; i < count; ++i) writer.write(sampler.next());
  return kExitOk;
}

// A mixture spec carries its own m; --m overrides it.
std::size_t effective_m(const Options& o, const DistributionSpec& spec) {
  if (o.m_given) return o.m;
  if (const auto* mix = std::get_if<MixtureSpec>(&spec)) return mix->m;
  return o.m;
}

InstanceSource training_source(const Options& o, std::unique_ptr<Source>& file, std::unique_ptr<InstanceReader>& reader,
                               std::unique_ptr<Sampler>& sampler) {
  if (!o.in.empty()) {
    file = std::make_unique<Source>(o.in);
    reader = std::make_unique<InstanceReader>(file->stream());
    return reader->as_source();
  }
  if (o.spec.empty()) throw Error(ErrorKind::SpecError, "--in or --spec: training data is required");
  sampler = std::make_unique<Sampler>(load_spec(o.spec), o.seed);
  return [s = sampler.get()]() -> std::optional<Instance> { return s->next(); };
}

int cmd_train(const Options& o, bool linear) {
  require(o.out, "--out");
  std::unique_ptr<Source> file;
  std::unique_ptr<InstanceReader> reader;
  std::unique_ptr<Sampler> sampler;
  InstanceSource source = training_source(o, file, reader, sampler);
  const std::size_t m = sampler ? effective_m(o, sampler->spec()) : o.m;
  SorterModel model = linear ? SorterModel(train_linear(source, LinearTrainOptions{o.epsilon}))
                             : SorterModel(train_mixture(source, MixtureTrainOptions{m, o.epsilon}));
  save_model(model, o.out);
  std::cerr << "trained " << (linear ? "linear" : "mixture") << " model, n=" << model_length(model) << '\n';
  return kExitOk;
}

ReportFormat report_format(const Options& o) { return parse_report_format(o.format.empty() ? "csv" : o.format); }

int cmd_sort(const Options& o) {
  require(o.model, "--model");
  const SorterModel model = load_model(o.model);
  Source file(o.in);
  InstanceReader reader(file.stream());
  if (reader.n() != model_length(model)) {
    throw Error(ErrorKind::DimensionMismatch, "stream has n=" + std::to_string(reader.n()) +
                                                  " but the model has n=" + std::to_string(model_length(model)));
  }
  Sink sink(o.out);
  std::unique_ptr<Sink> report_sink;
  const ReportFormat format = report_format(o);
  if (!o.report.empty()) report_sink = std::make_unique<Sink>(o.report);
  if (report_sink && format == ReportFormat::kCsv) {
    report_sink->stream() << "instance,total_comparisons,lookup_comparisons,merge_comparisons,verify_comparisons,"
                             "fallback_comparisons,tree_fallbacks,correctness_fallback,wall_ns\n";
  }
  ModelSorter sorter(model);
  std::uint64_t instances = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t fallbacks = 0;
  while (auto x = reader.next()) {
    SortReport report;
    const auto order = sorter.sort(*x, report);
    for (std::size_t k = 0; k < order.size(); ++k) sink.stream() << (k ? " " : "") << order[k];
    sink.stream() << '\n';
    if (report_sink) {
      const nlohmann::json row = {{"instance", instances},
                                  {"total_comparisons", report.total_comparisons()},
                                  {"lookup_comparisons", report.lookup_comparisons},
                                  {"merge_comparisons", report.merge_comparisons},
                                  {"verify_comparisons", report.verify_comparisons},
                                  {"fallback_comparisons", report.fallback_comparisons},
                                  {"tree_fallbacks", report.tree_fallbacks},
                                  {"correctness_fallback", report.correctness_fallback ? 1 : 0},
                                  {"wall_ns", report.wall_ns}};
      if (format == ReportFormat::kJsonLines) {
        report_sink->stream() << row.dump() << '\n';
      } else {
        report_sink->stream() << instances << ',' << report.total_comparisons() << ',' << report.lookup_comparisons
                              << ',' << report.merge_comparisons << ',' << report.verify_comparisons << ','
                              << report.fallback_comparisons << ',' << report.tree_fallbacks << ','
                              << (report.correctness_fallback ? 1 : 0) << ',' << report.wall_ns << '\n';
      }
    }
    ++instances;
    comparisons += report.total_comparisons();
    fallbacks += report.correctness_fallback ? 1 : 0;
  }
  std::cerr << "sorted " << instances << " instances, mean comparisons "
            << (instances ? static_cast<double>(comparisons) / static_cast<double>(instances) : 0.0)
            << ", correctness fallbacks " << fallbacks << '\n';
  return kExitOk;
}

int cmd_verify(const Options& o) {
  require(o.model, "--model");
  const SorterModel model = load_model(o.model);
  Source file(o.in);
  InstanceReader reader(file.stream());
  if (reader.n() != model_length(model)) {
    throw Error(ErrorKind::DimensionMismatch, "stream has n=" + std::to_string(reader.n()) +
                                                  " but the model has n=" + std::to_string(model_length(model)));
  }
  ModelSorter sorter(model);
  std::uint64_t total = 0;
  std::uint64_t sorted = 0;
  while (auto x = reader.next()) {
    SortReport report;
    const auto order = sorter.sort(*x, report);
    ++total;
    if (matches_oracle(*x, order)) ++sorted;
  }
  std::cout << "sorted: " << sorted << "/" << total << '\n';
  bool ok = sorted == total;
  if (!o.spec.empty()) {
    const auto spec = load_spec(o.spec);
    const auto* lin_spec = std::get_if<LinearClassSpec>(&spec);
    const auto* lin_model = std::get_if<LinearSorterModel>(&model);
    if (lin_spec && lin_model) {
      const bool match = partition_matches(*lin_spec, lin_model->partition);
      std::cout << "partition: " << (match ? "match" : "mismatch") << '\n';
      ok = ok && match;
    }
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_bench(const Options& o) {
  if (!o.replay.empty()) {
    const ParsedReport report = read_report_file(o.replay);
    BenchResult rerun;
    const std::size_t mismatches = replay_mismatches(report, &rerun);
    std::cout << "replay: " << report.rows.size() << " rows, " << mismatches << " mismatched\n";
    return mismatches == 0 ? kExitOk : kExitVerifyFailed;
  }
  require(o.spec, "--spec");
  RunConfig config;
  config.spec_path = o.spec;
  config.model_path = o.model;
  const auto spec = load_spec(o.spec);
  config.spec = spec_to_json(spec);
  config.seed = o.seed;
  config.epsilon = o.epsilon;
  config.m = effective_m(o, spec);
  config.count = o.count == 0 ? 1000 : o.count;
  config.jobs = o.jobs;
  config.format = report_format(o);
  const BenchResult result = run_bench(config);
  if (!o.out.empty()) {
    Sink sink(o.out);
    write_report(sink.stream(), result);
  }
  std::cout << summary_to_json(result.summary).dump(2) << '\n';
  return result.summary.correct == result.summary.instances ? kExitOk : kExitVerifyFailed;
}

void print_depths(const std::vector<FreqBST>& trees) {
  double sum = 0.0;
  double worst = 0.0;
  std::size_t deepest = 0;
  for (const auto& t : trees) {
    const double d = t.empty() ? 0.0 : t.expected_depth();
    sum += d;
    worst = std::max(worst, d);
    deepest = std::max(deepest, t.max_depth());
  }
  std::cout << "tree expected depth: mean " << (trees.empty() ? 0.0 : sum / static_cast<double>(trees.size()))
            << ", max " << worst << "\n";
  std::cout << "tree max depth: " << deepest << "\n";
  std::cout << "tree expected depths:";
  for (const auto& t : trees) std::cout << ' ' << (t.empty() ? 0.0 : t.expected_depth());
  std::cout << '\n';
}

int cmd_inspect(const Options& o) {
  require(o.model, "--model");
  const SorterModel model = load_model(o.model);
  if (const auto* lin = std::get_if<LinearSorterModel>(&model)) {
    std::cout << "kind: linear\n";
    std::cout << "n: " << lin->n << "\nepsilon: " << lin->epsilon << "\n";
    std::cout << "intervals: " << lin->vlist.interval_count() << "\n";
    std::cout << "depth cutoff: " << lin->cutoff() << "\n";
    std::cout << "degenerates: " << lin->partition.degenerates.size() << "\n";
    std::cout << "classes: " << lin->class_count() << "\n";
    std::cout << "class sizes:";
    for (const auto& c : lin->partition.classes) std::cout << ' ' << c.size();
    std::cout << "\nslab counts:";
    for (const auto& s : lin->slabs) std::cout << ' ' << s.slab_count();
    std::cout << '\n';
    print_depths(lin->trees);
  } else {
    const auto& mix = std::get<MixtureSorterModel>(model);
    std::cout << "kind: mixture\n";
    std::cout << "n: " << mix.n << "\nm: " << mix.m << "\nepsilon: " << mix.epsilon << "\n";
    std::cout << "intervals: " << mix.interval_count() << "\n";
    std::cout << "depth cutoff: " << mix.cutoff() << "\n";
    std::cout << "buckets: " << mix.n << "\n";
    std::cout << "bucket sizes:";
    for (std::size_t b = 0; b < mix.n; ++b) std::cout << ' ' << mix.bucket_size(b);
    std::cout << '\n';
    print_depths(mix.trees);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selfsort: self-improving sorter harness"};
  app.require_subcommand(1);
  Options o;

  std::vector<CLI::Option*> m_options;
  auto add_common = [&o, &m_options](CLI::App* sub) {
    sub->add_option("--spec", o.spec, "distribution spec file");
    sub->add_option("--model", o.model, "model file");
    sub->add_option("--in", o.in, "instance stream (- for stdin)");
    sub->add_option("--out", o.out, "output path (- for stdout)");
    sub->add_option("--seed", o.seed, "64-bit seed");
    sub->add_option("--epsilon", o.epsilon, "epsilon in (0,1)");
    m_options.push_back(sub->add_option("--m", o.m, "intervals per bucket (mixture; defaults to the spec's m)"));
    sub->add_option("--count", o.count, "number of instances");
    sub->add_option("--format", o.format, "text|binary for streams, csv|jsonl for reports");
    sub->add_option("--jobs", o.jobs, "worker threads");
  };

  auto* gen = app.add_subcommand("gen", "sample instances from a spec");
  auto* train_lin = app.add_subcommand("train-linear", "train a hidden-linear-classes model");
  auto* train_mix = app.add_subcommand("train-mixture", "train a product-mixture model");
  auto* sort = app.add_subcommand("sort", "sort a stream with a trained model");
  auto* verify = app.add_subcommand("verify", "check sorted output against an oracle sort");
  auto* bench = app.add_subcommand("bench", "compare comparison counts against merge sort");
  auto* inspect = app.add_subcommand("inspect", "print model statistics");
  for (auto* sub : {gen, train_lin, train_mix, sort, verify, bench, inspect}) add_common(sub);
  sort->add_option("--report", o.report, "per-instance report path");
  bench->add_option("--replay", o.replay, "rerun a report's embedded config and compare counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  for (const auto* opt : m_options) o.m_given = o.m_given || opt->count() > 0;

  try {
    if (*gen) return cmd_gen(o);
    if (*train_lin) return cmd_train(o, true);
    if (*train_mix) return cmd_train(o, false);
    if (*sort) return cmd_sort(o);
    if (*verify) return cmd_verify(o);
    if (*bench) return cmd_bench(o);
    if (*inspect) return cmd_inspect(o);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
