// tt/search.h

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

#ifndef TT_SEARCH_H_
#define TT_SEARCH_H_

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <vector>

#include "tt/fst.h"

namespace tt {

// Per-frame label log-scores as seen by the search.
struct PosteriorFrame {
  int64 step = 0;
  std::vector<double> scores;  // log posterior per label
  double blank_log_score = 0.0;
};

// Log prior per label, subtracted from phone scores during search. All zero
// means no prior.
struct PhonePrior {
  std::vector<double> log_prior;

  static PhonePrior Uniform(int32 num_labels);
  // Lines "phone probability" with names from `phones` (graph input
  // symbols); unlisted labels keep a zero log prior. Probabilities must lie
  // in (0, 1].
  static PhonePrior Read(std::istream &is, const SymbolTable &phones,
                         int32 num_labels);
};

struct SearchOptions {
  double beam = 16.0;
  int32 max_active = 7000;
};

// Output-label history shared between tokens.
struct TraceNode {
  Label olabel;
  std::shared_ptr<const TraceNode> prev;
};

struct Token {
  StateId state = kNoState;
  double cost = 0.0;
  std::shared_ptr<const TraceNode> trace;
};

// Active tokens, at most one per state, sorted by state.
using TokenSet = std::vector<Token>;

class NoHypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Start token plus its epsilon closure.
TokenSet InitialTokens(const Fst &graph);

// One frame of token passing over `graph`, whose input label l stands for
// model label l - 1. Every token may stay in place for the blank cost
// -blank_log_score or follow a phone arc for arc.weight - score + log prior.
// Surviving tokens are closed over epsilon-input arcs and pruned to `beam`
// of the best cost and to `max_active` tokens. On equal cost the token
// reached from the lowest (source state, arc index) wins; staying in place
// counts as arc index -1.
TokenSet BeamSearchStep(const Fst &graph, const TokenSet &tokens,
                        const PosteriorFrame &frame, const PhonePrior &prior,
                        const SearchOptions &opts);

struct Hypothesis {
  std::vector<Label> olabels;
  double cost = 0.0;
};

// Best token including its final weight. Throws NoHypothesisError when no
// active token is in a final state.
Hypothesis BestPath(const Fst &graph, const TokenSet &tokens);

}  // namespace tt

#endif  // TT_SEARCH_H_
