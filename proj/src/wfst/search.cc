// src/wfst/search.cc

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

#include "tt/search.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace tt {

PhonePrior PhonePrior::Uniform(int32 num_labels) {
  return {std::vector<double>(num_labels, 0.0)};
}

PhonePrior PhonePrior::Read(std::istream &is, const SymbolTable &phones,
                            int32 num_labels) {
  PhonePrior prior = Uniform(num_labels);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string name;
    double p;
    if (!(ls >> name)) continue;
    if (!(ls >> p) || !(p > 0.0 && p <= 1.0))
      TT_ERR << "phone prior line " << lineno << ": expected 'phone probability'";
    Label id = phones.Find(name);
    if (id <= 0 || id > num_labels)
      TT_ERR << "phone prior line " << lineno << ": unknown phone '" << name << "'";
    prior.log_prior[id - 1] = std::log(p);
  }
  return prior;
}

namespace {

struct Candidate {
  double cost;
  StateId src;
  int32 arc;
  std::shared_ptr<const TraceNode> trace;
};

bool Better(double cost, StateId src, int32 arc, const Candidate &c) {
  if (cost != c.cost) return cost < c.cost;
  return std::tie(src, arc) < std::tie(c.src, c.arc);
}

std::shared_ptr<const TraceNode> Extend(const std::shared_ptr<const TraceNode> &t,
                                        Label olabel) {
  if (olabel == kEpsilon) return t;
  return std::make_shared<const TraceNode>(TraceNode{olabel, t});
}

// Relaxes epsilon-input arcs until no candidate improves.
void CloseOverEpsilon(const Fst &graph, std::unordered_map<StateId, Candidate> *cand) {
  std::vector<StateId> init;
  for (const auto &[s, c] : *cand) init.push_back(s);
  std::sort(init.begin(), init.end());
  std::deque<StateId> queue(init.begin(), init.end());
  int64 steps = 0;
  const int64 limit = 1000 + 100 * static_cast<int64>(graph.NumStates());
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    const Candidate c = cand->at(s);
    auto arcs = graph.Arcs(s);
    for (int32 i = 0; i < static_cast<int32>(arcs.size()); ++i) {
      const Arc &a = arcs[i];
      if (a.ilabel != kEpsilon) continue;
      if (++steps > limit) TT_ERR << "search: epsilon closure does not converge";
      double cost = c.cost + a.weight;
      auto it = cand->find(a.nextstate);
      if (it == cand->end()) {
        cand->emplace(a.nextstate, Candidate{cost, s, i, Extend(c.trace, a.olabel)});
        queue.push_back(a.nextstate);
      } else if (Better(cost, s, i, it->second)) {
        it->second = {cost, s, i, Extend(c.trace, a.olabel)};
        queue.push_back(a.nextstate);
      }
    }
  }
}

TokenSet Prune(const std::unordered_map<StateId, Candidate> &cand,
               const SearchOptions &opts) {
  TokenSet out;
  out.reserve(cand.size());
  double best = tropical::Zero();
  for (const auto &[s, c] : cand) best = std::min(best, c.cost);
  for (const auto &[s, c] : cand)
    if (c.cost <= best + opts.beam) out.push_back({s, c.cost, c.trace});
  if (opts.max_active > 0 && out.size() > static_cast<std::size_t>(opts.max_active)) {
    std::nth_element(out.begin(), out.begin() + opts.max_active, out.end(),
                     [](const Token &x, const Token &y) {
                       return std::tie(x.cost, x.state) < std::tie(y.cost, y.state);
                     });
    out.resize(opts.max_active);
  }
  std::sort(out.begin(), out.end(),
            [](const Token &x, const Token &y) { return x.state < y.state; });
  return out;
}

}  // namespace

TokenSet InitialTokens(const Fst &graph) {
  if (graph.Start() == kNoState) return {};
  std::unordered_map<StateId, Candidate> cand;
  cand.emplace(graph.Start(), Candidate{0.0, kNoState, -1, nullptr});
  CloseOverEpsilon(graph, &cand);
  return Prune(cand, {tropical::Zero(), 0});
}

TokenSet BeamSearchStep(const Fst &graph, const TokenSet &tokens,
                        const PosteriorFrame &frame, const PhonePrior &prior,
                        const SearchOptions &opts) {
  const int32 num_labels = static_cast<int32>(frame.scores.size());
  std::unordered_map<StateId, Candidate> cand;
  auto offer = [&](StateId dst, double cost, StateId src, int32 arc,
                   std::shared_ptr<const TraceNode> trace) {
    auto it = cand.find(dst);
    if (it == cand.end())
      cand.emplace(dst, Candidate{cost, src, arc, std::move(trace)});
    else if (Better(cost, src, arc, it->second))
      it->second = {cost, src, arc, std::move(trace)};
  };
  for (const Token &t : tokens) {
    offer(t.state, t.cost - frame.blank_log_score, t.state, -1, t.trace);
    auto arcs = graph.Arcs(t.state);
    for (int32 i = 0; i < static_cast<int32>(arcs.size()); ++i) {
      const Arc &a = arcs[i];
      if (a.ilabel == kEpsilon) continue;
      const int32 label = a.ilabel - 1;
      if (label >= num_labels)
        TT_ERR << "search: graph label " << a.ilabel << " outside the model's "
               << num_labels << " labels";
      double lp = prior.log_prior.empty() ? 0.0 : prior.log_prior[label];
      offer(a.nextstate, t.cost + a.weight - frame.scores[label] + lp, t.state, i,
            Extend(t.trace, a.olabel));
    }
  }
  CloseOverEpsilon(graph, &cand);
  return Prune(cand, opts);
}

Hypothesis BestPath(const Fst &graph, const TokenSet &tokens) {
  const Token *best = nullptr;
  double best_cost = tropical::Zero();
  for (const Token &t : tokens) {
    if (!graph.IsFinal(t.state)) continue;
    double c = t.cost + graph.Final(t.state);
    if (c < best_cost) {
      best_cost = c;
      best = &t;
    }
  }
  if (best == nullptr) throw NoHypothesisError("no active token reached a final state");
  Hypothesis h;
  h.cost = best_cost;
  for (const TraceNode *n = best->trace.get(); n != nullptr; n = n->prev.get())
    h.olabels.push_back(n->olabel);
  std::reverse(h.olabels.begin(), h.olabels.end());
  return h;
}

}  // namespace tt
