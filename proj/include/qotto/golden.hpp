// Copyright 2026 The qotto Authors
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

#include <functional>

namespace qotto::numeric {

struct ScalarOptimum {
  double x;
  double value;
  int evaluations;
};

// Golden-section search for the minimum of a unimodal f on [lo, hi]; stops
// once the bracket is narrower than `tol`. Returns the best point evaluated.
[[nodiscard]] ScalarOptimum golden_section_minimize(const std::function<double(double)>& f,
                                                    double lo, double hi, double tol);

[[nodiscard]] ScalarOptimum golden_section_maximize(const std::function<double(double)>& f,
                                                    double lo, double hi, double tol);

}  // namespace qotto::numeric
