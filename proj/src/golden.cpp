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

#include "qotto/golden.hpp"

#include <cmath>

#include "qotto/errors.hpp"

namespace qotto::numeric {

ScalarOptimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol) {
  if (!(hi >= lo) || !(tol > 0.0)) throw ArgumentError("golden_section: bad bracket or tolerance");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  ScalarOptimum best = fc <= fd ? ScalarOptimum{c, fc, 0} : ScalarOptimum{d, fd, 0};
  int evaluations = 2;
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc, 0};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd, 0};
    }
    ++evaluations;
  }
  best.evaluations = evaluations;
  return best;
}

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol) {
  ScalarOptimum r = golden_section_minimize([&](double x) { return -f(x); }, lo, hi, tol);
  r.value = -r.value;
  return r;
}

}  // namespace qotto::numeric
