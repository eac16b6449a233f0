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

// Spec builders shared by the unit tests and the acceptance binary.

#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "selfsort/generators.hpp"

namespace selfsort::fixtures {

inline std::size_t bit_reverse(std::size_t x, unsigned bits) {
  std::size_t r = 0;
  for (unsigned b = 0; b < bits; ++b) r |= ((x >> b) & 1u) << (bits - 1 - b);
  return r;
}

inline unsigned log2_exact(std::size_t n) {
  unsigned bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

/// classes classes of n / classes indices each. Position p holds the value
/// of rank bit_reverse(p), the worst input order for bottom-up merge sort.
/// Within class k, the line of rank j is (1 + 0.01 j) z + 1000 k + 3 j with
/// z ~ uniform(0, 1), so the lines never cross for z in [0, 1].
inline LinearClassSpec banded_linear(std::size_t n = 1024, std::size_t classes = 8) {
  const unsigned bits = log2_exact(n);
  const std::size_t size = n / classes;
  LinearClassSpec spec;
  spec.n = n;
  spec.rho = 0.5;
  spec.classes.resize(classes);
  for (auto& c : spec.classes) {
    c.indices.resize(size);
    c.coeffs.resize(size);
    c.parameter = UniformDist{0.0, 1.0};
  }
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t rank = bit_reverse(p, bits);
    const std::size_t k = rank / size;
    const std::size_t j = rank % size;
    spec.classes[k].indices[j] = p;
    spec.classes[k].coeffs[j] = Line{1.0 + 0.01 * static_cast<double>(j), 1000.0 * static_cast<double>(k) + 3.0 * static_cast<double>(j)};
  }
  return spec;
}

/// kappa components, each a deterministic order: position p in component q
/// is uniform on [rank, rank + 0.5) with rank = bit_reverse(p) xor q * stride.
inline MixtureSpec banded_mixture(std::size_t n = 1024, std::size_t m = 4, std::size_t kappa = 4) {
  const unsigned bits = log2_exact(n);
  MixtureSpec spec;
  spec.n = n;
  spec.m = m;
  const std::size_t stride = n / kappa;
  for (std::size_t q = 0; q < kappa; ++q) {
    MixtureComponent comp;
    comp.weight = 1.0 / static_cast<double>(kappa);
    for (std::size_t p = 0; p < n; ++p) {
      const double rank = static_cast<double>(bit_reverse(p, bits) ^ (q * stride));
      comp.marginals.push_back(UniformDist{rank, rank + 0.5});
    }
    spec.components.push_back(std::move(comp));
  }
  return spec;
}

/// Random linear-class spec: n = classes * size + degenerates, indices
/// shuffled, slopes bounded away from zero, uniform(0, 1) parameters.
inline LinearClassSpec random_linear(std::uint64_t seed, std::size_t classes, std::size_t size,
                                     std::size_t degenerates) {
  std::mt19937_64 rng(seed);
  LinearClassSpec spec;
  spec.n = classes * size + degenerates;
  spec.rho = 0.5;
  std::vector<std::size_t> order(spec.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> magnitude(0.5, 4.0);
  std::uniform_real_distribution<double> offset(-2.0, 2.0);
  std::bernoulli_distribution negative(0.3);
  std::size_t at = 0;
  for (std::size_t k = 0; k < classes; ++k) {
    LinearClass c;
    c.parameter = UniformDist{0.0, 1.0};
    for (std::size_t j = 0; j < size; ++j) {
      c.indices.push_back(order[at++]);
      const double slope = negative(rng) ? -magnitude(rng) : magnitude(rng);
      c.coeffs.push_back(Line{slope, offset(rng)});
    }
    spec.classes.push_back(std::move(c));
  }
  for (std::size_t d = 0; d < degenerates; ++d) spec.degenerates.emplace_back(order[at++], offset(rng));
  return spec;
}

/// Random mixture of kappa components with uniform or gaussian marginals.
inline MixtureSpec random_mixture(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t kappa) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-10.0, 10.0);
  std::uniform_real_distribution<double> width(0.1, 5.0);
  std::bernoulli_distribution gaussian(0.5);
  MixtureSpec spec;
  spec.n = n;
  spec.m = m;
  for (std::size_t q = 0; q < kappa; ++q) {
    MixtureComponent comp;
    comp.weight = 1.0 + static_cast<double>(q);
    for (std::size_t i = 0; i < n; ++i) {
      const double c = centre(rng);
      const double w = width(rng);
      if (gaussian(rng)) {
        comp.marginals.push_back(GaussianDist{c, w});
      } else {
        comp.marginals.push_back(UniformDist{c, c + w});
      }
    }
    spec.components.push_back(std::move(comp));
  }
  const double total = static_cast<double>(kappa * (kappa + 1) / 2);
  for (auto& comp : spec.components) comp.weight /= total;
  return spec;
}

}  // namespace selfsort::fixtures
