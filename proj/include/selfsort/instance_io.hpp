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
#include <array>
#include <cmath>
#include <cstdio>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>

#include "selfsort/core.hpp"
#include "selfsort/error.hpp"

namespace selfsort {

// Instance stream files.
//
// Text:   "n=<int> count=<int>\n" then one instance per line, n values
//         separated by single spaces, shortest round-trip decimal form.
// Binary: "SISORT1\0", u32 n, u64 count, then count * n doubles; all
//         little-endian.

inline constexpr std::array<char, 8> kBinaryMagic = {'S', 'I', 'S', 'O', 'R', 'T', '1', '\0'};

enum class StreamFormat { kText, kBinary };

inline std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view token, const std::string& where) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw Error(ErrorKind::ParseError, where + ": not a number: '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) throw Error(ErrorKind::ParseError, where + ": value must be finite");
  return value;
}

namespace detail {

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
  const T le = to_little(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <typename T>
bool read_le(std::istream& in, T& v) {
  T raw;
  if (!in.read(reinterpret_cast<char*>(&raw), sizeof(T))) return false;
  v = to_little(raw);
  return true;
}

}  // namespace detail

class InstanceWriter {
 public:
  InstanceWriter(std::ostream& out, std::size_t n, std::uint64_t count, StreamFormat format)
      : out_(out), n_(n), format_(format) {
    if (format_ == StreamFormat::kText) {
      out_ << "n=" << n << " count=" << count << '\n';
    } else {
      out_.write(kBinaryMagic.data(), kBinaryMagic.size());
      detail::write_le<std::uint32_t>(out_, static_cast<std::uint32_t>(n));
      detail::write_le<std::uint64_t>(out_, count);
    }
  }

  void write(std::span<const double> x) {
    if (x.size() != n_) throw Error(ErrorKind::DimensionMismatch, "instance length differs from stream n");
    if (format_ == StreamFormat::kText) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out_ << ' ';
        out_ << format_double(x[i]);
      }
      out_ << '\n';
    } else {
      for (const double v : x) detail::write_le<double>(out_, v);
    }
  }

 private:
  std::ostream& out_;
  std::size_t n_;
  StreamFormat format_;
};

/// Reads either format, detected from the first bytes.
class InstanceReader {
 public:
  explicit InstanceReader(std::istream& in) : in_(in) {
    std::array<char, 8> head{};
    in_.read(head.data(), head.size());
    if (in_.gcount() == static_cast<std::streamsize>(head.size()) && head == kBinaryMagic) {
      format_ = StreamFormat::kBinary;
      std::uint32_t n = 0;
      if (!detail::read_le(in_, n) || !detail::read_le(in_, count_)) {
        throw Error(ErrorKind::ParseError, "truncated binary stream header");
      }
      n_ = n;
      return;
    }
    format_ = StreamFormat::kText;
    std::string line(head.data(), static_cast<std::size_t>(in_.gcount()));
    in_.clear();
    std::string rest;
    std::getline(in_, rest);
    line += rest;
    unsigned long long n = 0;
    unsigned long long count = 0;
    if (std::sscanf(line.c_str(), "n=%llu count=%llu", &n, &count) != 2) {
      throw Error(ErrorKind::ParseError, "line 1: expected 'n=<int> count=<int>'");
    }
    n_ = static_cast<std::size_t>(n);
    count_ = count;
  }

  std::size_t n() const noexcept { return n_; }
  std::uint64_t count() const noexcept { return count_; }
  StreamFormat format() const noexcept { return format_; }

  std::optional<Instance> next() {
    if (read_ >= count_) return std::nullopt;
    Instance x(n_);
    if (format_ == StreamFormat::kBinary) {
      for (auto& v : x) {
        if (!detail::read_le(in_, v)) throw Error(ErrorKind::ParseError, "truncated binary stream");
        if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, "non-finite value in binary stream");
      }
    } else {
      std::string line;
      const std::string where = "line " + std::to_string(read_ + 2);
      if (!std::getline(in_, line)) throw Error(ErrorKind::ParseError, where + ": stream ended early");
      std::string_view rest(line);
      for (std::size_t i = 0; i < n_; ++i) {
        while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        const std::size_t end = std::min(rest.find(' '), rest.size());
        if (end == 0) throw Error(ErrorKind::ParseError, where + ": expected " + std::to_string(n_) + " values");
        x[i] = parse_double(rest.substr(0, end), where);
        rest.remove_prefix(end);
      }
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\r')) rest.remove_prefix(1);
      if (!rest.empty()) throw Error(ErrorKind::ParseError, where + ": more than " + std::to_string(n_) + " values");
    }
    ++read_;
    return x;
  }

  InstanceSource as_source() {
    return [this]() { return next(); };
  }

 private:
  std::istream& in_;
  StreamFormat format_ = StreamFormat::kText;
  std::size_t n_ = 0;
  std::uint64_t count_ = 0;
  std::uint64_t read_ = 0;
};

}  // namespace selfsort
