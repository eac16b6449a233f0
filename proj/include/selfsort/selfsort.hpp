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

#include "selfsort/bench.hpp"
#include "selfsort/core.hpp"
#include "selfsort/counted_sort.hpp"
#include "selfsort/error.hpp"
#include "selfsort/freq_bst.hpp"
#include "selfsort/generators.hpp"
#include "selfsort/instance_io.hpp"
#include "selfsort/linear_learner.hpp"
#include "selfsort/linear_sorter.hpp"
#include "selfsort/mixture_sorter.hpp"
#include "selfsort/model_io.hpp"
#include "selfsort/parallel.hpp"
#include "selfsort/persistent_array.hpp"
#include "selfsort/report.hpp"
#include "selfsort/slab_index.hpp"
#include "selfsort/spec_io.hpp"
#include "selfsort/veb.hpp"
