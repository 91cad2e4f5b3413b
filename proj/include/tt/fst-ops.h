// tt/fst-ops.h

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

#ifndef TT_FST_OPS_H_
#define TT_FST_OPS_H_

#include <set>
#include <stdexcept>

#include "tt/fst.h"

namespace tt {

// Raised when determinization exceeds its state budget.
class DeterminizeBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when the output alphabet of the left operand is not a subset of the
// input alphabet of the right operand.
class AlphabetMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Removes states that are not both accessible and coaccessible. State order
// is preserved. An FST with no successful path becomes empty.
Fst Connect(const Fst &fst);

// Weighted composition with an epsilon filter so that each path of the result
// corresponds to exactly one pair of matching paths. Symbol tables are checked
// when both are present.
Fst Compose(const Fst &a, const Fst &b);

// Removes arcs labelled epsilon on both sides. Throws std::runtime_error on a
// negative-cost epsilon cycle.
Fst RmEpsilon(const Fst &fst);

struct DeterminizeOptions {
  // Maximum number of output states; 0 means 100 times the input state count.
  int64 max_states = 0;
};

// Determinizes a functional weighted transducer over the tropical semiring.
// Output labels may be delayed; at most one output label is placed on each
// arc and residual output at final states is flushed with epsilon-input arcs.
Fst Determinize(const Fst &fst, const DeterminizeOptions &opts = {});

// Merges states with identical futures, treating (ilabel, olabel, weight) as
// an opaque arc label. No weight pushing is done. States are renumbered in
// breadth-first order from the start.
Fst Minimize(const Fst &fst);

// Replaces every input label in `labels` by epsilon.
void RemoveInputLabels(Fst *fst, const std::set<Label> &labels);

// Sorts each state's arcs by (ilabel, olabel, nextstate, weight).
void ArcSort(Fst *fst);

// True when no state has two arcs with the same input label (epsilon
// included).
bool IsDeterministic(const Fst &fst);

}  // namespace tt

#endif  // TT_FST_OPS_H_
