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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsort/error.hpp"
#include "selfsort/generators.hpp"

namespace selfsort {

inline constexpr int kFormatVersion = 1;

namespace detail {

using nlohmann::json;

inline const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw Error(ErrorKind::SpecError, path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::SpecError, path + "." + key + ": missing");
  return *it;
}

inline double number(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) throw Error(ErrorKind::SpecError, path + "." + key + ": expected a number");
  return v.get<double>();
}

inline std::size_t count_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw Error(ErrorKind::SpecError, path + "." + key + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline const json& array_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) throw Error(ErrorKind::SpecError, path + "." + key + ": expected an array");
  return v;
}

inline std::vector<double> number_array(const json& obj, const char* key, const std::string& path) {
  std::vector<double> out;
  const json& arr = array_field(obj, key, path);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (!arr[k].is_number()) {
      throw Error(ErrorKind::SpecError, path + "." + key + "[" + std::to_string(k) + "]: expected a number");
    }
    out.push_back(arr[k].get<double>());
  }
  return out;
}

inline void check_version(const json& doc, ErrorKind kind) {
  const auto it = doc.find("format_version");
  if (it == doc.end()) throw Error(kind, "format_version: missing");
  if (!it->is_number_integer() || it->get<int>() != kFormatVersion) {
    throw Error(ErrorKind::VersionError, "format_version: expected " + std::to_string(kFormatVersion) +
                                             ", found " + it->dump());
  }
}

inline json parse_json_text(const std::string& text, ErrorKind kind) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(kind, std::string("malformed document: ") + e.what());
  }
}

}  // namespace detail

inline ScalarDist scalar_from_json(const nlohmann::json& j, const std::string& path) {
  const nlohmann::json& type = detail::field(j, "type", path);
  if (!type.is_string()) throw Error(ErrorKind::SpecError, path + ".type: expected a string");
  const std::string t = type.get<std::string>();
  ScalarDist dist;
  if (t == "uniform") {
    dist = UniformDist{detail::number(j, "a", path), detail::number(j, "b", path)};
  } else if (t == "gaussian") {
    dist = GaussianDist{detail::number(j, "mean", path), detail::number(j, "sd", path)};
  } else if (t == "discrete") {
    dist = DiscreteDist{detail::number_array(j, "values", path), detail::number_array(j, "probs", path)};
  } else if (t == "constant") {
    dist = ConstantDist{detail::number(j, "value", path)};
  } else {
    throw Error(ErrorKind::SpecError, path + ".type: unknown distribution '" + t + "'");
  }
  validate_scalar(dist, path);
  return dist;
}

inline nlohmann::json scalar_to_json(const ScalarDist& dist) {
  return std::visit(
      [](const auto& d) -> nlohmann::json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDist>) {
          return {{"type", "uniform"}, {"a", d.a}, {"b", d.b}};
        } else if constexpr (std::is_same_v<T, GaussianDist>) {
          return {{"type", "gaussian"}, {"mean", d.mean}, {"sd", d.sd}};
        } else if constexpr (std::is_same_v<T, DiscreteDist>) {
          return {{"type", "discrete"}, {"values", d.values}, {"probs", d.probs}};
        } else {
          return {{"type", "constant"}, {"value", d.value}};
        }
      },
      dist);
}

inline nlohmann::json spec_to_json(const DistributionSpec& spec) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  if (const auto* lin = std::get_if<LinearClassSpec>(&spec)) {
    j["kind"] = "linear";
    j["n"] = lin->n;
    j["rho"] = lin->rho;
    j["degenerates"] = nlohmann::json::array();
    for (const auto& [index, value] : lin->degenerates) j["degenerates"].push_back({{"index", index}, {"value", value}});
    j["classes"] = nlohmann::json::array();
    for (const auto& cls : lin->classes) {
      nlohmann::json c;
      c["indices"] = cls.indices;
      c["coeffs"] = nlohmann::json::array();
      for (const auto& line : cls.coeffs) c["coeffs"].push_back({{"slope", line.slope}, {"intercept", line.intercept}});
      c["parameter"] = scalar_to_json(cls.parameter);
      j["classes"].push_back(std::move(c));
    }
  } else {
    const auto& mix = std::get<MixtureSpec>(spec);
    j["kind"] = "mixture";
    j["n"] = mix.n;
    j["m"] = mix.m;
    j["components"] = nlohmann::json::array();
    for (const auto& comp : mix.components) {
      nlohmann::json c;
      c["weight"] = comp.weight;
      c["marginals"] = nlohmann::json::array();
      for (const auto& d : comp.marginals) c["marginals"].push_back(scalar_to_json(d));
      j["components"].push_back(std::move(c));
    }
  }
  return j;
}

/// Accepts kinds "linear", "mixture" and "product" (a one-component mixture).
inline DistributionSpec spec_from_json(const nlohmann::json& j) {
  detail::check_version(j, ErrorKind::SpecError);
  const nlohmann::json& kind_field = detail::field(j, "kind", "spec");
  if (!kind_field.is_string()) throw Error(ErrorKind::SpecError, "kind: expected a string");
  const std::string kind = kind_field.get<std::string>();
  const std::size_t n = detail::count_field(j, "n", "spec");
  if (kind == "linear") {
    LinearClassSpec spec;
    spec.n = n;
    spec.rho = detail::number(j, "rho", "spec");
    const auto& degs = detail::array_field(j, "degenerates", "spec");
    for (std::size_t d = 0; d < degs.size(); ++d) {
      const std::string path = "degenerates[" + std::to_string(d) + "]";
      spec.degenerates.emplace_back(detail::count_field(degs[d], "index", path), detail::number(degs[d], "value", path));
    }
    const auto& classes = detail::array_field(j, "classes", "spec");
    for (std::size_t k = 0; k < classes.size(); ++k) {
      const std::string path = "classes[" + std::to_string(k) + "]";
      LinearClass cls;
      const auto& indices = detail::array_field(classes[k], "indices", path);
      for (std::size_t q = 0; q < indices.size(); ++q) {
        if (!indices[q].is_number_unsigned()) {
          throw Error(ErrorKind::SpecError, path + ".indices[" + std::to_string(q) + "]: expected an index");
        }
        cls.indices.push_back(indices[q].get<std::size_t>());
      }
      const auto& coeffs = detail::array_field(classes[k], "coeffs", path);
      for (std::size_t q = 0; q < coeffs.size(); ++q) {
        const std::string cpath = path + ".coeffs[" + std::to_string(q) + "]";
        cls.coeffs.push_back(Line{detail::number(coeffs[q], "slope", cpath), detail::number(coeffs[q], "intercept", cpath)});
      }
      cls.parameter = scalar_from_json(detail::field(classes[k], "parameter", path), path + ".parameter");
      spec.classes.push_back(std::move(cls));
    }
    validate(spec);
    return spec;
  }
  MixtureSpec spec;
  spec.n = n;
  if (kind == "product") {
    spec.m = 1;
    MixtureComponent comp;
    const auto& marginals = detail::array_field(j, "marginals", "spec");
    for (std::size_t i = 0; i < marginals.size(); ++i) {
      comp.marginals.push_back(scalar_from_json(marginals[i], "marginals[" + std::to_string(i) + "]"));
    }
    spec.components.push_back(std::move(comp));
  } else if (kind == "mixture") {
    spec.m = detail::count_field(j, "m", "spec");
    const auto& comps = detail::array_field(j, "components", "spec");
    for (std::size_t q = 0; q < comps.size(); ++q) {
      const std::string path = "components[" + std::to_string(q) + "]";
      MixtureComponent comp;
      comp.weight = detail::number(comps[q], "weight", path);
      const auto& marginals = detail::array_field(comps[q], "marginals", path);
      for (std::size_t i = 0; i < marginals.size(); ++i) {
        comp.marginals.push_back(scalar_from_json(marginals[i], path + ".marginals[" + std::to_string(i) + "]"));
      }
      spec.components.push_back(std::move(comp));
    }
  } else {
    throw Error(ErrorKind::SpecError, "kind: unknown spec kind '" + kind + "'");
  }
  validate(spec);
  return spec;
}

inline DistributionSpec parse_spec(const std::string& text) {
  return spec_from_json(detail::parse_json_text(text, ErrorKind::SpecError));
}

inline std::string read_file(const std::string& path, ErrorKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(kind, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline DistributionSpec load_spec(const std::string& path) {
  return parse_spec(read_file(path, ErrorKind::SpecError));
}

}  // namespace selfsort
