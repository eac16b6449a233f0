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
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "selfsort/core.hpp"
#include "selfsort/error.hpp"

namespace selfsort {

using Rng = std::mt19937_64;

struct UniformDist {
  double a = 0.0;
  double b = 1.0;
};
struct GaussianDist {
  double mean = 0.0;
  double sd = 1.0;
};
struct DiscreteDist {
  std::vector<double> values;
  std::vector<double> probs;
};
struct ConstantDist {
  double value = 0.0;
};

using ScalarDist = std::variant<UniformDist, GaussianDist, DiscreteDist, ConstantDist>;

inline double sample_scalar(const ScalarDist& dist, Rng& rng) {
  return std::visit(
      [&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDist>) {
          return std::uniform_real_distribution<double>(d.a, d.b)(rng);
        } else if constexpr (std::is_same_v<T, GaussianDist>) {
          return std::normal_distribution<double>(d.mean, d.sd)(rng);
        } else if constexpr (std::is_same_v<T, DiscreteDist>) {
          std::discrete_distribution<std::size_t> pick(d.probs.begin(), d.probs.end());
          return d.values[pick(rng)];
        } else {
          return d.value;
        }
      },
      dist);
}

/// Largest probability the distribution places on a single value.
inline double max_point_mass(const ScalarDist& dist) {
  if (const auto* d = std::get_if<DiscreteDist>(&dist)) {
    std::map<double, double> mass;
    for (std::size_t k = 0; k < d->values.size(); ++k) mass[d->values[k]] += d->probs[k];
    double best = 0.0;
    for (const auto& [value, p] : mass) best = std::max(best, p);
    return best;
  }
  return std::holds_alternative<ConstantDist>(dist) ? 1.0 : 0.0;
}

inline double scalar_cdf(const ScalarDist& dist, double x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDist>) {
          return std::clamp((x - d.a) / (d.b - d.a), 0.0, 1.0);
        } else if constexpr (std::is_same_v<T, GaussianDist>) {
          return 0.5 * std::erfc(-(x - d.mean) / (d.sd * std::sqrt(2.0)));
        } else if constexpr (std::is_same_v<T, DiscreteDist>) {
          double c = 0.0;
          for (std::size_t k = 0; k < d.values.size(); ++k) {
            if (d.values[k] <= x) c += d.probs[k];
          }
          return c;
        } else {
          return x >= d.value ? 1.0 : 0.0;
        }
      },
      dist);
}

inline void validate_scalar(const ScalarDist& dist, const std::string& path) {
  auto fail = [&path](const std::string& field, const std::string& why) {
    throw Error(ErrorKind::SpecError, path + "." + field + ": " + why);
  };
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDist>) {
          if (!std::isfinite(d.a) || !std::isfinite(d.b) || !(d.a < d.b)) fail("a", "uniform needs finite a < b");
        } else if constexpr (std::is_same_v<T, GaussianDist>) {
          if (!std::isfinite(d.mean)) fail("mean", "must be finite");
          if (!std::isfinite(d.sd) || !(d.sd > 0.0)) fail("sd", "must be positive");
        } else if constexpr (std::is_same_v<T, DiscreteDist>) {
          if (d.values.empty()) fail("values", "must not be empty");
          if (d.values.size() != d.probs.size()) fail("probs", "length must match values");
          double total = 0.0;
          for (std::size_t k = 0; k < d.probs.size(); ++k) {
            if (!std::isfinite(d.values[k])) fail("values[" + std::to_string(k) + "]", "must be finite");
            if (!(d.probs[k] > 0.0)) fail("probs[" + std::to_string(k) + "]", "must be positive");
            total += d.probs[k];
          }
          if (std::abs(total - 1.0) > 1e-9) fail("probs", "must sum to 1");
        } else {
          if (!std::isfinite(d.value)) fail("value", "must be finite");
        }
      },
      dist);
}

/// Indices of one hidden class are distinct linear functions of one shared
/// random parameter.
struct LinearClass {
  std::vector<std::size_t> indices;
  std::vector<Line> coeffs;
  ScalarDist parameter = UniformDist{};
};

struct LinearClassSpec {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, double>> degenerates;
  std::vector<LinearClass> classes;
  double rho = 0.5;
};

struct MixtureComponent {
  double weight = 1.0;
  std::vector<ScalarDist> marginals;
};

/// Hidden mixture of product distributions. A plain product distribution is
/// the single-component case.
struct MixtureSpec {
  std::size_t n = 0;
  std::size_t m = 1;
  std::vector<MixtureComponent> components;
};

using DistributionSpec = std::variant<LinearClassSpec, MixtureSpec>;

inline std::size_t spec_length(const DistributionSpec& spec) {
  return std::visit([](const auto& s) { return s.n; }, spec);
}

inline void validate(const LinearClassSpec& spec) {
  auto fail = [](const std::string& path, const std::string& why) {
    throw Error(ErrorKind::SpecError, path + ": " + why);
  };
  if (spec.n == 0) fail("n", "must be positive");
  if (!(spec.rho > 0.0 && spec.rho < 1.0)) fail("rho", "must lie in (0,1)");
  std::vector<int> seen(spec.n, 0);
  for (std::size_t d = 0; d < spec.degenerates.size(); ++d) {
    const auto& [index, value] = spec.degenerates[d];
    const std::string path = "degenerates[" + std::to_string(d) + "]";
    if (index >= spec.n) fail(path + ".index", "out of range");
    if (!std::isfinite(value)) fail(path + ".value", "must be finite");
    if (seen[index]++) fail(path + ".index", "index listed twice");
  }
  for (std::size_t k = 0; k < spec.classes.size(); ++k) {
    const auto& cls = spec.classes[k];
    const std::string path = "classes[" + std::to_string(k) + "]";
    if (cls.indices.empty()) fail(path + ".indices", "must not be empty");
    if (cls.indices.size() != cls.coeffs.size()) fail(path + ".coeffs", "length must match indices");
    std::set<std::pair<double, double>> lines;
    for (std::size_t j = 0; j < cls.indices.size(); ++j) {
      const std::string ipath = path + ".indices[" + std::to_string(j) + "]";
      const std::string cpath = path + ".coeffs[" + std::to_string(j) + "]";
      if (cls.indices[j] >= spec.n) fail(ipath, "out of range");
      if (seen[cls.indices[j]]++) fail(ipath, "index already assigned");
      const Line& line = cls.coeffs[j];
      if (!std::isfinite(line.slope) || line.slope == 0.0) fail(cpath + ".slope", "must be finite and nonzero");
      if (!std::isfinite(line.intercept)) fail(cpath + ".intercept", "must be finite");
      if (!lines.emplace(line.slope, line.intercept).second) fail(cpath, "duplicate line within class");
    }
    validate_scalar(cls.parameter, path + ".parameter");
    if (max_point_mass(cls.parameter) > 1.0 - spec.rho + 1e-12) {
      fail(path + ".parameter", "places more than 1 - rho mass on one value");
    }
  }
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (!seen[i]) fail("n", "index " + std::to_string(i) + " is neither degenerate nor in a class");
  }
}

inline void validate(const MixtureSpec& spec) {
  auto fail = [](const std::string& path, const std::string& why) {
    throw Error(ErrorKind::SpecError, path + ": " + why);
  };
  if (spec.n == 0) fail("n", "must be positive");
  if (spec.m == 0) fail("m", "must be positive");
  if (spec.components.empty()) fail("components", "must not be empty");
  if (spec.components.size() > spec.m) fail("components", "more components than the bound m");
  double total = 0.0;
  for (std::size_t q = 0; q < spec.components.size(); ++q) {
    const auto& comp = spec.components[q];
    const std::string path = "components[" + std::to_string(q) + "]";
    if (!(comp.weight > 0.0)) fail(path + ".weight", "must be positive");
    total += comp.weight;
    if (comp.marginals.size() != spec.n) fail(path + ".marginals", "length must equal n");
    for (std::size_t i = 0; i < comp.marginals.size(); ++i) {
      validate_scalar(comp.marginals[i], path + ".marginals[" + std::to_string(i) + "]");
    }
  }
  if (std::abs(total - 1.0) > 1e-9) fail("components", "weights must sum to 1");
}

inline void validate(const DistributionSpec& spec) {
  std::visit([](const auto& s) { validate(s); }, spec);
}

/// Draws instances from a spec. Deterministic given the seed.
class Sampler {
 public:
  Sampler(DistributionSpec spec, std::uint64_t seed) : spec_(std::move(spec)), rng_(seed) {
    validate(spec_);
    if (const auto* mix = std::get_if<MixtureSpec>(&spec_)) {
      std::vector<double> weights;
      for (const auto& c : mix->components) weights.push_back(c.weight);
      pick_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
    }
  }

  std::size_t n() const { return spec_length(spec_); }
  const DistributionSpec& spec() const { return spec_; }

  Instance next() {
    Instance out(n());
    if (const auto* lin = std::get_if<LinearClassSpec>(&spec_)) {
      for (const auto& [index, value] : lin->degenerates) out[index] = value;
      for (const auto& cls : lin->classes) {
        const double z = sample_scalar(cls.parameter, rng_);
        for (std::size_t j = 0; j < cls.indices.size(); ++j) out[cls.indices[j]] = cls.coeffs[j].at(z);
      }
    } else {
      const auto& mix = std::get<MixtureSpec>(spec_);
      const auto& comp = mix.components[pick_(rng_)];
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = sample_scalar(comp.marginals[i], rng_);
    }
    return out;
  }

  std::vector<Instance> take(std::size_t count) {
    std::vector<Instance> batch;
    batch.reserve(count);
    for (std::size_t k = 0; k < count; ++k) batch.push_back(next());
    return batch;
  }

 private:
  DistributionSpec spec_;
  Rng rng_;
  std::discrete_distribution<std::size_t> pick_;
};

inline constexpr std::size_t kMaxOracleLength = 8;

/// Plug-in estimate (bits) of the entropy of the rank permutation, for n <= 8.
inline double estimate_perm_entropy(const DistributionSpec& spec, std::size_t trials, std::uint64_t seed) {
  const std::size_t n = spec_length(spec);
  if (n > kMaxOracleLength) {
    throw Error(ErrorKind::TooLargeForOracle, "permutation entropy oracle supports n <= 8, got " + std::to_string(n));
  }
  if (trials == 0) throw Error(ErrorKind::SpecError, "trials: must be positive");
  Sampler sampler(spec, seed);
  std::unordered_map<std::uint32_t, std::size_t> freq;
  std::vector<std::uint32_t> order(n);
  for (std::size_t t = 0; t < trials; ++t) {
    const Instance x = sampler.next();
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&x](std::uint32_t a, std::uint32_t b) { return x[a] < x[b]; });
    std::uint32_t code = 0;
    for (const std::uint32_t i : order) code = code * 8 + i;
    ++freq[code];
  }
  double h = 0.0;
  for (const auto& [code, count] : freq) {
    const double p = static_cast<double>(count) / static_cast<double>(trials);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace selfsort
