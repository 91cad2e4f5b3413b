// tests/fst-util.h

// Copyright 2026  The tiny-transducer Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TT_TESTS_FST_UTIL_H_
#define TT_TESTS_FST_UTIL_H_

#include <random>

#include "tt/fst.h"

namespace tt::testing {

struct RandomFstOptions {
  int min_states = 2;
  int max_states = 6;
  int num_ilabels = 3;  // labels 1..n, 0 is epsilon
  int num_olabels = 3;
  double eps_prob = 0.2;
  double arc_prob = 0.45;
  double final_prob = 0.4;
  bool acyclic = true;
  // Output label as a fixed function of the input label (functional
  // transducer); epsilon inputs then carry epsilon outputs.
  bool functional = false;
  // All arc costs zero (final costs stay random). Cycles then have equal
  // weight, which keeps functional transducers determinizable.
  bool zero_arc_weights = false;
};

// Costs are multiples of 1/4 in [0, 2] so that sums are exact.
inline Fst RandomFst(const RandomFstOptions &o, std::mt19937 *rng) {
  std::uniform_int_distribution<int> nstates(o.min_states, o.max_states);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> quarter(0, 8);
  std::uniform_int_distribution<int> il(1, o.num_ilabels);
  std::uniform_int_distribution<int> ol(1, o.num_olabels);
  Fst f;
  int n = nstates(*rng);
  for (int i = 0; i < n; ++i) f.AddState();
  f.SetStart(0);
  for (StateId s = 0; s < n; ++s) {
    if (u(*rng) < o.final_prob || s == n - 1) f.SetFinal(s, quarter(*rng) / 4.0);
    for (StateId t = o.acyclic ? s + 1 : 0; t < n; ++t) {
      if (u(*rng) >= o.arc_prob) continue;
      Arc a;
      a.nextstate = t;
      a.weight = o.zero_arc_weights ? 0.0 : quarter(*rng) / 4.0;
      a.ilabel = u(*rng) < o.eps_prob ? kEpsilon : il(*rng);
      if (o.functional)
        a.olabel = a.ilabel == kEpsilon ? kEpsilon : (a.ilabel * 7) % o.num_olabels + 1;
      else
        a.olabel = u(*rng) < o.eps_prob ? kEpsilon : ol(*rng);
      // Epsilon self-loops would make the enumeration reference unbounded.
      if (s == t && (a.ilabel == kEpsilon || a.olabel == kEpsilon)) continue;
      f.AddArc(s, a);
    }
  }
  return f;
}

}  // namespace tt::testing

#endif  // TT_TESTS_FST_UTIL_H_
