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
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsort/linear_sorter.hpp"
#include "selfsort/mixture_sorter.hpp"
#include "selfsort/spec_io.hpp"

namespace selfsort {

using SorterModel = std::variant<LinearSorterModel, MixtureSorterModel>;

inline std::size_t model_length(const SorterModel& model) {
  return std::visit([](const auto& m) { return m.n; }, model);
}

// Linear models keep each slab index as its first slab plus, per later
// slab, the position updates from the previous one. Trees are stored as
// (key, weight) pairs and rebuilt on load.

inline nlohmann::json model_to_json(const LinearSorterModel& model) {
  using nlohmann::json;
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "linear";
  j["n"] = model.n;
  j["epsilon"] = model.epsilon;
  j["vlist"] = std::vector<double>(model.vlist.boundaries().begin(), model.vlist.boundaries().end());
  j["degenerates"] = json::array();
  for (const auto& [index, value] : model.partition.degenerates) j["degenerates"].push_back({index, value});
  j["classes"] = json::array();
  for (std::size_t k = 0; k < model.class_count(); ++k) {
    const SlabIndex& slabs = model.slabs[k];
    json c;
    c["indices"] = model.partition.classes[k];
    c["lines"] = json::array();
    for (const std::size_t i : model.partition.classes[k]) {
      c["lines"].push_back({model.partition.lines[i].slope, model.partition.lines[i].intercept});
    }
    c["slab_boundaries"] = std::vector<double>(slabs.boundaries().begin(), slabs.boundaries().end());
    std::vector<std::uint32_t> first;
    for (const auto& e : slabs.raw_entries(0)) {
      first.push_back(e.line);
      first.push_back(e.label);
    }
    c["first_slab"] = std::move(first);
    std::vector<std::uint64_t> offsets{0};
    std::vector<std::uint32_t> updates;
    for (std::size_t s = 1; s < slabs.slab_count(); ++s) {
      for (const auto& d : slabs.deltas(s)) {
        updates.push_back(d.position);
        updates.push_back(d.entry.line);
        updates.push_back(d.entry.label);
      }
      offsets.push_back(updates.size() / 3);
    }
    c["update_offsets"] = std::move(offsets);
    c["updates"] = std::move(updates);
    c["tree"] = json::array();
    for (const auto& key : model.trees[k].keys()) c["tree"].push_back({key.id, key.weight});
    j["classes"].push_back(std::move(c));
  }
  return j;
}

inline nlohmann::json model_to_json(const MixtureSorterModel& model) {
  using nlohmann::json;
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "mixture";
  j["n"] = model.n;
  j["m"] = model.m;
  j["epsilon"] = model.epsilon;
  j["vlist"] = std::vector<double>(model.vlist.boundaries().begin(), model.vlist.boundaries().end());
  j["trees"] = json::array();
  for (const auto& tree : model.trees) {
    json t = json::array();
    for (const auto& key : tree.keys()) t.push_back({key.id, key.weight});
    j["trees"].push_back(std::move(t));
  }
  return j;
}

inline nlohmann::json model_to_json(const SorterModel& model) {
  return std::visit([](const auto& m) { return model_to_json(m); }, model);
}

namespace detail {

inline void model_check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ParseError, "model: " + what);
}

inline VList model_vlist(const nlohmann::json& j) {
  auto boundaries = number_array(j, "vlist", "model");
  model_check(std::is_sorted(boundaries.begin(), boundaries.end()), "vlist must be non-decreasing");
  return VList(std::move(boundaries));
}

inline LinearSorterModel linear_model_from_json(const nlohmann::json& j) {
  const std::size_t n = count_field(j, "n", "model");
  const double epsilon = number(j, "epsilon", "model");
  VList vlist = model_vlist(j);
  ClassPartition partition;
  partition.n = n;
  partition.lines.assign(n, Line{});
  for (const auto& d : array_field(j, "degenerates", "model")) {
    model_check(d.is_array() && d.size() == 2, "degenerate entries are [index, value]");
    partition.degenerates.emplace_back(d[0].get<std::size_t>(), d[1].get<double>());
  }
  std::vector<SlabIndex> slabs;
  std::vector<std::vector<std::uint64_t>> counts;
  const auto& classes = array_field(j, "classes", "model");
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const auto& c = classes[k];
    const std::string path = "classes[" + std::to_string(k) + "]";
    const auto indices = field(c, "indices", path).get<std::vector<std::size_t>>();
    const auto& lines = array_field(c, "lines", path);
    model_check(!indices.empty() && indices.size() == lines.size(), path + ": indices and lines differ in length");
    std::vector<ClassLine> class_lines;
    for (std::size_t q = 0; q < indices.size(); ++q) {
      model_check(indices[q] < n && lines[q].is_array() && lines[q].size() == 2, path + ": bad line entry");
      const Line line{lines[q][0].get<double>(), lines[q][1].get<double>()};
      partition.lines[indices[q]] = line;
      class_lines.push_back({indices[q], line});
    }
    partition.classes.push_back(indices);

    const auto first_flat = field(c, "first_slab", path).get<std::vector<std::uint32_t>>();
    model_check(first_flat.size() == 2 * indices.size(), path + ": first_slab has wrong length");
    std::vector<SlabEntry> first;
    for (std::size_t q = 0; q < first_flat.size(); q += 2) first.push_back({first_flat[q], first_flat[q + 1]});
    auto boundaries = number_array(c, "slab_boundaries", path);
    const auto offsets = field(c, "update_offsets", path).get<std::vector<std::uint64_t>>();
    const auto flat = field(c, "updates", path).get<std::vector<std::uint32_t>>();
    model_check(offsets.size() == boundaries.size() + 1 && flat.size() % 3 == 0 && offsets.back() * 3 == flat.size(),
                path + ": inconsistent slab updates");
    std::vector<std::vector<SlabDelta>> per_slab(boundaries.size());
    for (std::size_t s = 0; s < boundaries.size(); ++s) {
      model_check(offsets[s] <= offsets[s + 1], path + ": update offsets must be non-decreasing");
      for (std::uint64_t u = offsets[s]; u < offsets[s + 1]; ++u) {
        per_slab[s].push_back({flat[3 * u], SlabEntry{flat[3 * u + 1], flat[3 * u + 2]}});
      }
    }
    slabs.push_back(SlabIndex::from_deltas(std::move(class_lines), first, std::move(boundaries), per_slab));

    std::vector<std::uint64_t> slab_counts(slabs.back().slab_count(), 0);
    for (const auto& kw : array_field(c, "tree", path)) {
      model_check(kw.is_array() && kw.size() == 2, path + ": tree entries are [slab, weight]");
      const auto slab = kw[0].get<std::size_t>();
      model_check(slab < slab_counts.size(), path + ": tree key out of range");
      slab_counts[slab] = kw[1].get<std::uint64_t>();
    }
    counts.push_back(std::move(slab_counts));
  }
  return assemble_linear_model(n, epsilon, std::move(partition), std::move(vlist), std::move(slabs), counts);
}

inline MixtureSorterModel mixture_model_from_json(const nlohmann::json& j) {
  const std::size_t n = count_field(j, "n", "model");
  const std::size_t m = count_field(j, "m", "model");
  model_check(n > 0 && m > 0, "n and m must be positive");
  const double epsilon = number(j, "epsilon", "model");
  VList vlist = model_vlist(j);
  const auto& trees = array_field(j, "trees", "model");
  model_check(trees.size() == n, "expected one tree per position");
  std::vector<std::map<std::uint32_t, std::uint64_t>> counts(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& kw : trees[i]) {
      model_check(kw.is_array() && kw.size() == 2, "tree entries are [interval, weight]");
      const auto r = kw[0].get<std::uint32_t>();
      model_check(r < vlist.interval_count(), "tree key out of range");
      counts[i][r] = kw[1].get<std::uint64_t>();
    }
  }
  return assemble_mixture_model(n, m, epsilon, std::move(vlist), counts);
}

}  // namespace detail

inline SorterModel model_from_json(const nlohmann::json& j) {
  detail::check_version(j, ErrorKind::ParseError);
  const std::string kind = detail::field(j, "kind", "model").get<std::string>();
  try {
    if (kind == "linear") return detail::linear_model_from_json(j);
    if (kind == "mixture") return detail::mixture_model_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("model: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SpecError) throw;
    throw Error(ErrorKind::ParseError, e.what());
  }
  throw Error(ErrorKind::ParseError, "kind: unknown model kind '" + kind + "'");
}

inline SorterModel load_model(const std::string& path) {
  return model_from_json(detail::parse_json_text(read_file(path, ErrorKind::ParseError), ErrorKind::ParseError));
}

inline void save_model(const SorterModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write '" + path + "'");
  out << model_to_json(model).dump() << '\n';
}

}  // namespace selfsort
