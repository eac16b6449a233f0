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
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace selfsort {

/// Contiguous block [begin, end) of count items handed to worker w of jobs.
struct WorkBlock {
  std::size_t worker = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

inline std::vector<WorkBlock> split_work(std::size_t count, std::size_t jobs) {
  jobs = std::max<std::size_t>(jobs, 1);
  std::vector<WorkBlock> blocks;
  const std::size_t base = count / jobs;
  const std::size_t extra = count % jobs;
  std::size_t at = 0;
  for (std::size_t w = 0; w < jobs; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    blocks.push_back({w, at, at + len});
    at += len;
  }
  return blocks;
}

/// Runs body(block) for every block, one thread per block beyond the
/// first. The first exception thrown by any worker is rethrown.
template <typename Body>
void run_blocks(std::size_t count, std::size_t jobs, Body&& body) {
  const auto blocks = split_work(count, jobs);
  std::vector<std::exception_ptr> errors(blocks.size());
  std::vector<std::thread> threads;
  auto run = [&](std::size_t w) {
    try {
      body(blocks[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  for (std::size_t w = 1; w < blocks.size(); ++w) threads.emplace_back(run, w);
  run(0);
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace selfsort
