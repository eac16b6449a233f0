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

// Runs every acceptance criterion and prints one PASS or FAIL line each.
// Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "selfsort/bench.hpp"

namespace {

using namespace selfsort;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0, double e = 0.0) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d, e);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

RunConfig bench_config(const DistributionSpec& spec, std::uint64_t seed, double epsilon, std::size_t m,
                       std::size_t count, std::size_t jobs = 1, ReportFormat format = ReportFormat::kCsv) {
  RunConfig c;
  c.spec = spec_to_json(spec);
  c.seed = seed;
  c.epsilon = epsilon;
  c.m = m;
  c.count = count;
  c.jobs = jobs;
  c.format = format;
  return c;
}

Outcome correctness() {
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t instances = 0;
  std::uint64_t correct = 0;
  std::uint64_t fallbacks = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto linear = fixtures::random_linear(1000 + s, 2 + s % 5, 3 + s % 6, s % 4);
    const std::size_t m = 1 + s % 4;
    const auto mixture = fixtures::random_mixture(2000 + s, 16 + 4 * s, m, 1 + s % m);
    for (const auto& [spec, mm] : {std::pair<DistributionSpec, std::size_t>{linear, 1},
                                   std::pair<DistributionSpec, std::size_t>{mixture, m}}) {
      const auto result = run_bench(bench_config(spec, s + 1, 0.5, mm, 250));
      instances += result.summary.instances;
      correct += result.summary.correct;
      fallbacks += result.summary.correctness_fallbacks;
    }
  }
  const double elapsed = seconds_since(start);
  const double rate = static_cast<double>(fallbacks) / static_cast<double>(instances);
  Outcome o;
  o.pass = instances >= 10000 && correct == instances && rate <= 0.01 && elapsed < 120.0;
  o.detail = fmt("%.0f instances over 40 specs, %.0f sorted correctly, correctness-fallback rate %.4f, %.1f s",
                 static_cast<double>(instances), static_cast<double>(correct), rate, elapsed);
  return o;
}

Outcome class_recovery() {
  int matched = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto spec = fixtures::random_linear(5000 + seed, 5, 9, 5);
    Sampler sampler(spec, seed);
    const auto model = train_linear(sampler.take(linear_batch_plan(spec.n, 0.5).total()));
    if (partition_matches(spec, model.partition)) ++matched;
  }
  return {matched >= 95, fmt("n=50, 5 classes of 9 plus 5 degenerates: %.0f/100 partitions recovered", matched)};
}

double random_shuffle_baseline(std::size_t n, int trials) {
  std::mt19937_64 rng(17);
  std::vector<double> x(n);
  std::iota(x.begin(), x.end(), 0.0);
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::shuffle(x.begin(), x.end(), rng);
    ComparisonCounter c;
    baseline_merge_sort(x, c);
    total += static_cast<double>(c.count);
  }
  return total / trials;
}

struct AdaptivityRuns {
  BenchResult linear;
  BenchResult mixture;
};

AdaptivityRuns adaptivity_runs() {
  AdaptivityRuns runs;
  runs.linear = run_bench(bench_config(fixtures::banded_linear(1024, 8), 3, 0.5, 1, 10000));
  runs.mixture = run_bench(bench_config(fixtures::banded_mixture(1024, 4, 4), 4, 0.75, 4, 10000));
  return runs;
}

Outcome linear_adaptivity(const BenchResult& r) {
  const auto& s = r.summary;
  Outcome o;
  o.pass = s.correct == s.instances && s.mean_sorter <= 6.0 * 1024 && s.mean_baseline >= 9000.0;
  o.detail = fmt("n=1024, 8 banded classes, eps=0.5: %.1f comparisons vs merge sort %.1f, ratio %.3f "
                 "(merge sort on random shuffles: %.1f)",
                 s.mean_sorter, s.mean_baseline, s.ratio, random_shuffle_baseline(1024, 1000));
  return o;
}

Outcome mixture_adaptivity(const BenchResult& r) {
  const auto& s = r.summary;
  Outcome o;
  o.pass = s.correct == s.instances && s.mean_sorter <= 8.0 * 1024 && s.mean_baseline >= 9000.0;
  o.detail = fmt("n=1024, m=4, 4 banded components, eps=0.75: %.1f comparisons vs merge sort %.1f, ratio %.3f, "
                 "%.1f tree fallbacks per instance",
                 s.mean_sorter, s.mean_baseline, s.ratio,
                 static_cast<double>(s.tree_fallbacks) / static_cast<double>(s.instances));
  return o;
}

Outcome occupancy(const AdaptivityRuns& runs) {
  const auto& a = runs.linear.summary;
  const auto& b = runs.mixture.summary;
  const double bound = 8.0 * 1024;
  Outcome o;
  o.pass = a.instances >= 10000 && b.instances >= 10000 && a.mean_interval_occupancy <= 4.0 &&
           b.mean_interval_occupancy <= 4.0 && a.max_occupancy_nlogn <= bound && b.max_occupancy_nlogn <= bound;
  o.detail = fmt("mean over r of E|Z_r| %.3f (linear), %.3f (mixture); max sum |N_r| log |N_r| %.0f, %.0f of %.0f",
                 a.mean_interval_occupancy, b.mean_interval_occupancy, a.max_occupancy_nlogn, b.max_occupancy_nlogn,
                 bound) +
             fmt("; max over r of E|Z_r| %.3f, %.3f", a.max_interval_occupancy, b.max_interval_occupancy);
  return o;
}

Outcome structure_oracles() {
  std::string failure;
  const std::string veb = oracles::check_veb(1000, 1, 100000);
  if (!veb.empty()) failure += "vEB " + veb + "; ";

  std::mt19937_64 rng(1);
  std::vector<ClassLine> lines;
  VList v;
  for (int seed = 0; seed < 2000 && failure.empty(); ++seed) {
    oracles::random_arrangement(rng, seed >= 1000, lines, v);
    const std::string slab = oracles::check_slabs(lines, v);
    if (!slab.empty()) failure += "slab arrangement " + std::to_string(seed) + ": " + slab + "; ";
  }

  std::mt19937_64 wrng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto w = oracles::random_weights(wrng, trial);
    const std::string depth = oracles::check_depths(FreqBST(oracles::unit_keys(w), 64), w);
    if (!depth.empty()) {
      failure += "tree " + std::to_string(trial) + ": " + depth + "; ";
      break;
    }
  }

  std::mt19937_64 prng(11);
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> small(-20, 20);
  for (int trial = 0; trial < 100000; ++trial) {
    std::vector<double> b(static_cast<std::size_t>(len(prng)));
    for (auto& x : b) x = small(prng) * 0.5;
    std::sort(b.begin(), b.end());
    const double x = small(prng) * 0.5 + (trial % 3 == 0 ? 0.25 : 0.0);
    if (VList(b).predecessor_index(x) != oracles::predecessor_scan(b, x)) {
      failure += "predecessor trial " + std::to_string(trial) + "; ";
      break;
    }
  }
  return {failure.empty(), failure.empty() ? "vEB 1e5 ops, slabs over 2000 arrangements, 1000 weight vectors, "
                                             "1e5 predecessor queries: all agree"
                                           : failure};
}

Outcome entropy_oracle() {
  MixtureSpec bands;
  bands.n = 6;
  MixtureComponent c;
  for (int i = 0; i < 6; ++i) c.marginals.push_back(UniformDist{double(5 - i), 5.5 - i});
  bands.components.push_back(c);
  MixtureSpec constant;
  constant.n = 4;
  MixtureComponent k;
  for (int i = 0; i < 4; ++i) k.marginals.push_back(ConstantDist{double(i % 2)});
  constant.components.push_back(k);
  MixtureSpec coin;
  coin.n = 2;
  coin.components.push_back({1.0, {UniformDist{0, 1}, UniformDist{0, 1}}});
  const double h_bands = estimate_perm_entropy(bands, 100000, 1);
  const double h_constant = estimate_perm_entropy(constant, 100000, 2);
  const double h_coin = estimate_perm_entropy(coin, 100000, 3);
  Outcome o;
  o.pass = std::abs(h_bands) <= 0.01 && std::abs(h_constant) <= 0.01 && std::abs(h_coin - 1.0) <= 0.05;
  o.detail = fmt("deterministic orders %.4f and %.4f bits, two iid uniforms %.4f bits", h_bands, h_constant, h_coin);
  return o;
}

std::size_t replay(const BenchResult& result) {
  std::stringstream s;
  write_report(s, result);
  return replay_mismatches(read_report(s));
}

Outcome reproducibility(const AdaptivityRuns& runs) {
  std::size_t rows = 0;
  std::size_t mismatched = 0;
  const BenchResult small[] = {
      run_bench(bench_config(fixtures::random_linear(8, 3, 4, 2), 5, 0.5, 1, 2000, 2, ReportFormat::kCsv)),
      run_bench(bench_config(fixtures::random_mixture(9, 20, 3, 2), 6, 0.5, 3, 2000, 3, ReportFormat::kJsonLines)),
  };
  for (const BenchResult* r : {&small[0], &small[1], &runs.linear, &runs.mixture}) {
    rows += r->rows.size();
    mismatched += replay(*r);
  }
  return {mismatched == 0, fmt("%.0f rows replayed from 4 reports, %.0f mismatched", static_cast<double>(rows),
                               static_cast<double>(mismatched))};
}

}  // namespace

int main() {
  const auto report = [](int id, const char* name, const Outcome& o) {
    std::printf("criterion %d %s: %s: %s\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    return o.pass;
  };
  bool ok = true;
  ok &= report(1, "correctness", correctness());
  ok &= report(2, "class recovery", class_recovery());
  const AdaptivityRuns runs = adaptivity_runs();
  ok &= report(3, "linear adaptivity", linear_adaptivity(runs.linear));
  ok &= report(4, "mixture adaptivity", mixture_adaptivity(runs.mixture));
  ok &= report(5, "interval occupancy", occupancy(runs));
  ok &= report(6, "structure oracles", structure_oracles());
  ok &= report(7, "entropy oracle", entropy_oracle());
  ok &= report(8, "reproducibility", reproducibility(runs));
  return ok ? 0 : 1;
}
