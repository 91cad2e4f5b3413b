// src/wfst/fst-ops.cc

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

#include "tt/fst-ops.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <tuple>

namespace tt {

namespace {

// Arc indices of one state grouped by input label.
class ArcIndex {
 public:
  explicit ArcIndex(const Fst &fst) : fst_(fst), built_(fst.NumStates()) {}

  std::span<const std::pair<Label, int32>> Matches(StateId s, Label ilabel) {
    auto &v = built_[s];
    if (!v) {
      v.emplace();
      auto arcs = fst_.Arcs(s);
      for (int32 i = 0; i < static_cast<int32>(arcs.size()); ++i)
        v->push_back({arcs[i].ilabel, i});
      std::stable_sort(v->begin(), v->end(), [](const auto &x, const auto &y) {
        return x.first < y.first;
      });
    }
    auto lo = std::lower_bound(v->begin(), v->end(), std::pair<Label, int32>(ilabel, -1));
    auto hi = lo;
    while (hi != v->end() && hi->first == ilabel) ++hi;
    return {lo, hi};
  }

 private:
  const Fst &fst_;
  std::vector<std::optional<std::vector<std::pair<Label, int32>>>> built_;
};

void CheckAlphabets(const Fst &a, const Fst &b) {
  if (a.osyms().empty() || b.isyms().empty()) return;
  for (const auto &[id, sym] : a.osyms().Items()) {
    if (id == kEpsilon) continue;
    if (b.isyms().Find(id) != sym)
      throw AlphabetMismatch("compose: symbol '" + sym + "' (id " +
                             std::to_string(id) +
                             ") of the left output alphabet is not in the "
                             "right input alphabet");
  }
}

}  // namespace

Fst Connect(const Fst &fst) {
  const StateId n = fst.NumStates();
  Fst out;
  out.isyms() = fst.isyms();
  out.osyms() = fst.osyms();
  if (fst.Start() == kNoState || n == 0) return out;

  std::vector<char> acc(n, 0), coacc(n, 0);
  std::vector<StateId> stack{fst.Start()};
  acc[fst.Start()] = 1;
  std::vector<std::vector<StateId>> rev(n);
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const Arc &a : fst.Arcs(s)) {
      rev[a.nextstate].push_back(s);
      if (!acc[a.nextstate]) {
        acc[a.nextstate] = 1;
        stack.push_back(a.nextstate);
      }
    }
  }
  for (StateId s = 0; s < n; ++s)
    if (acc[s] && fst.IsFinal(s)) {
      coacc[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : rev[s])
      if (!coacc[p]) {
        coacc[p] = 1;
        stack.push_back(p);
      }
  }
  if (!coacc[fst.Start()]) return out;

  std::vector<StateId> map(n, kNoState);
  for (StateId s = 0; s < n; ++s)
    if (acc[s] && coacc[s]) map[s] = out.AddState();
  out.SetStart(map[fst.Start()]);
  for (StateId s = 0; s < n; ++s) {
    if (map[s] == kNoState) continue;
    out.SetFinal(map[s], fst.Final(s));
    for (Arc a : fst.Arcs(s)) {
      if (map[a.nextstate] == kNoState) continue;
      a.nextstate = map[a.nextstate];
      out.AddArc(map[s], a);
    }
  }
  return out;
}

Fst Compose(const Fst &a, const Fst &b) {
  CheckAlphabets(a, b);
  Fst out;
  out.isyms() = a.isyms();
  out.osyms() = b.osyms();
  if (a.Start() == kNoState || b.Start() == kNoState) return out;

  // Filter state 0: free; 1: only the left side may move alone; 2: only the
  // right side may move alone.
  using Triple = std::tuple<StateId, StateId, int>;
  std::map<Triple, StateId> ids;
  std::deque<Triple> queue;
  auto get = [&](StateId p, StateId q, int f) {
    Triple t{p, q, f};
    auto it = ids.find(t);
    if (it != ids.end()) return it->second;
    StateId s = out.AddState();
    ids.emplace(t, s);
    queue.push_back(t);
    return s;
  };
  out.SetStart(get(a.Start(), b.Start(), 0));
  ArcIndex bindex(b);

  while (!queue.empty()) {
    auto [p, q, f] = queue.front();
    queue.pop_front();
    StateId s = ids.at({p, q, f});
    if (a.IsFinal(p) && b.IsFinal(q)) out.SetFinal(s, a.Final(p) + b.Final(q));

    for (const Arc &ea : a.Arcs(p)) {
      if (ea.olabel != kEpsilon) {
        for (auto [lab, j] : bindex.Matches(q, ea.olabel)) {
          const Arc &eb = b.Arcs(q)[j];
          out.AddArc(s, {ea.ilabel, eb.olabel, ea.weight + eb.weight,
                         get(ea.nextstate, eb.nextstate, 0)});
        }
        continue;
      }
      if (f == 0) {
        for (auto [lab, j] : bindex.Matches(q, kEpsilon)) {
          const Arc &eb = b.Arcs(q)[j];
          out.AddArc(s, {ea.ilabel, eb.olabel, ea.weight + eb.weight,
                         get(ea.nextstate, eb.nextstate, 0)});
        }
      }
      if (f != 2)
        out.AddArc(s, {ea.ilabel, kEpsilon, ea.weight, get(ea.nextstate, q, 1)});
    }
    if (f != 1) {
      for (auto [lab, j] : bindex.Matches(q, kEpsilon)) {
        const Arc &eb = b.Arcs(q)[j];
        out.AddArc(s, {kEpsilon, eb.olabel, eb.weight, get(p, eb.nextstate, 2)});
      }
    }
  }
  return Connect(out);
}

Fst RmEpsilon(const Fst &fst) {
  const StateId n = fst.NumStates();
  Fst out;
  out.isyms() = fst.isyms();
  out.osyms() = fst.osyms();
  if (fst.Start() == kNoState) return out;
  for (StateId s = 0; s < n; ++s) out.AddState();
  out.SetStart(fst.Start());

  auto is_eps = [](const Arc &a) {
    return a.ilabel == kEpsilon && a.olabel == kEpsilon;
  };
  std::vector<double> dist(n, tropical::Zero());
  std::vector<int64> relaxed(n, 0);
  std::vector<char> queued(n, 0);
  for (StateId p = 0; p < n; ++p) {
    // Shortest distances over epsilon arcs from p (label-correcting).
    std::vector<StateId> touched{p};
    std::deque<StateId> queue{p};
    dist[p] = 0.0;
    queued[p] = 1;
    while (!queue.empty()) {
      StateId s = queue.front();
      queue.pop_front();
      queued[s] = 0;
      for (const Arc &a : fst.Arcs(s)) {
        if (!is_eps(a)) continue;
        double d = dist[s] + a.weight;
        StateId t = a.nextstate;
        if (d < dist[t]) {
          if (dist[t] == tropical::Zero()) touched.push_back(t);
          dist[t] = d;
          if (++relaxed[t] > n || dist[p] < 0.0)
            throw std::runtime_error("RmEpsilon: negative-cost epsilon cycle");
          if (!queued[t]) {
            queued[t] = 1;
            queue.push_back(t);
          }
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    std::map<std::tuple<Label, Label, StateId>, std::size_t> seen;
    std::vector<Arc> arcs;
    double final = tropical::Zero();
    for (StateId q : touched) {
      if (fst.IsFinal(q)) final = std::min(final, dist[q] + fst.Final(q));
      for (const Arc &a : fst.Arcs(q)) {
        if (is_eps(a)) continue;
        Arc b = a;
        b.weight = dist[q] + a.weight;
        auto key = std::make_tuple(b.ilabel, b.olabel, b.nextstate);
        auto it = seen.find(key);
        if (it == seen.end()) {
          seen.emplace(key, arcs.size());
          arcs.push_back(b);
        } else if (b.weight < arcs[it->second].weight) {
          arcs[it->second].weight = b.weight;
        }
      }
    }
    out.SetFinal(p, final);
    out.MutableArcs(p) = std::move(arcs);
    for (StateId q : touched) {
      dist[q] = tropical::Zero();
      relaxed[q] = 0;
    }
  }
  return Connect(out);
}

namespace {

struct Element {
  StateId state;
  double weight;
  std::vector<Label> out;
};

using Subset = std::vector<Element>;

// Closure over epsilon-input arcs, merging elements that agree on (state,
// residual output) by minimum weight. Result is sorted by (state, output).
Subset EpsClosure(const Fst &fst, const Subset &seeds, int64 limit) {
  using Key = std::pair<StateId, std::vector<Label>>;
  std::map<Key, double> best;
  std::deque<Key> queue;
  for (const Element &e : seeds) {
    Key k{e.state, e.out};
    auto it = best.find(k);
    if (it == best.end()) {
      best.emplace(k, e.weight);
      queue.push_back(k);
    } else if (e.weight < it->second) {
      it->second = e.weight;
    }
  }
  int64 steps = 0;
  while (!queue.empty()) {
    Key k = std::move(queue.front());
    queue.pop_front();
    double w = best.at(k);
    for (const Arc &a : fst.Arcs(k.first)) {
      if (a.ilabel != kEpsilon) continue;
      if (++steps > limit)
        throw DeterminizeBudgetError("Determinize: epsilon closure too large");
      Key nk{a.nextstate, k.second};
      if (a.olabel != kEpsilon) nk.second.push_back(a.olabel);
      double nw = w + a.weight;
      auto it = best.find(nk);
      if (it == best.end()) {
        best.emplace(nk, nw);
        queue.push_back(std::move(nk));
      } else if (nw < it->second) {
        it->second = nw;
        queue.push_back(std::move(nk));
      }
    }
  }
  Subset out;
  out.reserve(best.size());
  for (auto &[k, w] : best) out.push_back({k.first, w, k.second});
  return out;
}

using SubsetKey = std::vector<std::tuple<StateId, int64, std::vector<Label>>>;

SubsetKey MakeKey(const Subset &s) {
  SubsetKey key;
  key.reserve(s.size());
  for (const Element &e : s)
    key.emplace_back(e.state, std::llround(e.weight * 1024.0), e.out);
  return key;
}

}  // namespace

Fst Determinize(const Fst &fst, const DeterminizeOptions &opts) {
  Fst out;
  out.isyms() = fst.isyms();
  out.osyms() = fst.osyms();
  if (fst.Start() == kNoState) return out;
  const int64 budget = opts.max_states > 0
                           ? opts.max_states
                           : 100 * std::max<int64>(1, fst.NumStates());
  const int64 closure_limit = 1000 * budget;

  std::map<SubsetKey, StateId> ids;
  std::vector<Subset> subsets;
  auto add_state = [&]() {
    if (out.NumStates() >= budget)
      throw DeterminizeBudgetError("Determinize: state budget of " +
                                   std::to_string(budget) + " exceeded");
    return out.AddState();
  };
  auto lookup = [&](Subset s) {
    SubsetKey key = MakeKey(s);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    StateId id = add_state();
    ids.emplace(std::move(key), id);
    if (static_cast<std::size_t>(id) >= subsets.size()) subsets.resize(id + 1);
    subsets[id] = std::move(s);
    return id;
  };

  out.SetStart(lookup(EpsClosure(fst, {{fst.Start(), 0.0, {}}}, closure_limit)));
  for (StateId d = 0; d < out.NumStates(); ++d) {
    if (static_cast<std::size_t>(d) >= subsets.size() || subsets[d].empty())
      continue;  // flush chain state
    const Subset subset = subsets[d];

    const Element *fin = nullptr;
    double fin_w = tropical::Zero();
    for (const Element &e : subset) {
      if (!fst.IsFinal(e.state)) continue;
      double w = e.weight + fst.Final(e.state);
      if (w < fin_w) {
        fin_w = w;
        fin = &e;
      }
    }
    if (fin != nullptr) {
      if (fin->out.empty()) {
        out.SetFinal(d, fin_w);
      } else {
        StateId prev = d;
        for (std::size_t i = 0; i < fin->out.size(); ++i) {
          StateId next = add_state();
          out.AddArc(prev, {kEpsilon, fin->out[i], i == 0 ? fin_w : 0.0, next});
          prev = next;
        }
        out.SetFinal(prev, 0.0);
      }
    }

    std::map<Label, Subset> moves;
    for (const Element &e : subset) {
      for (const Arc &a : fst.Arcs(e.state)) {
        if (a.ilabel == kEpsilon) continue;
        Element n{a.nextstate, e.weight + a.weight, e.out};
        if (a.olabel != kEpsilon) n.out.push_back(a.olabel);
        moves[a.ilabel].push_back(std::move(n));
      }
    }
    for (auto &[ilabel, seeds] : moves) {
      Subset next = EpsClosure(fst, seeds, closure_limit);
      double w = tropical::Zero();
      for (const Element &e : next) w = std::min(w, e.weight);
      Label emit = kEpsilon;
      bool common = !next.front().out.empty();
      for (const Element &e : next)
        if (e.out.empty() || e.out[0] != next.front().out[0]) common = false;
      if (common) emit = next.front().out[0];
      for (Element &e : next) {
        e.weight -= w;
        if (common) e.out.erase(e.out.begin());
      }
      out.AddArc(d, {ilabel, emit, w, lookup(std::move(next))});
    }
  }
  return out;
}

Fst Minimize(const Fst &in) {
  Fst fst = Connect(in);
  const StateId n = fst.NumStates();
  Fst out;
  out.isyms() = fst.isyms();
  out.osyms() = fst.osyms();
  if (n == 0) return out;

  std::vector<int32> cls(n);
  {
    std::map<double, int32> finals;
    for (StateId s = 0; s < n; ++s)
      cls[s] = finals.emplace(fst.Final(s), finals.size()).first->second;
  }
  using ArcSig = std::tuple<Label, Label, double, int32>;
  using Sig = std::pair<int32, std::vector<ArcSig>>;
  std::size_t num_classes = 0;
  while (true) {
    std::map<Sig, int32> sigs;
    std::vector<int32> next(n);
    for (StateId s = 0; s < n; ++s) {
      Sig sig{cls[s], {}};
      for (const Arc &a : fst.Arcs(s))
        sig.second.emplace_back(a.ilabel, a.olabel, a.weight, cls[a.nextstate]);
      std::sort(sig.second.begin(), sig.second.end());
      sig.second.erase(std::unique(sig.second.begin(), sig.second.end()),
                       sig.second.end());
      next[s] = sigs.emplace(std::move(sig), sigs.size()).first->second;
    }
    cls = std::move(next);
    if (sigs.size() == num_classes) break;
    num_classes = sigs.size();
  }

  std::vector<StateId> rep(num_classes, kNoState);
  for (StateId s = 0; s < n; ++s)
    if (rep[cls[s]] == kNoState) rep[cls[s]] = s;
  std::vector<StateId> order(num_classes, kNoState);
  std::deque<int32> queue{cls[fst.Start()]};
  order[cls[fst.Start()]] = out.AddState();
  out.SetStart(0);
  while (!queue.empty()) {
    int32 c = queue.front();
    queue.pop_front();
    StateId s = rep[c];
    StateId o = order[c];
    out.SetFinal(o, fst.Final(s));
    std::vector<ArcSig> done;
    for (const Arc &a : fst.Arcs(s)) {
      int32 dc = cls[a.nextstate];
      ArcSig sig{a.ilabel, a.olabel, a.weight, dc};
      if (std::find(done.begin(), done.end(), sig) != done.end()) continue;
      done.push_back(sig);
      if (order[dc] == kNoState) {
        order[dc] = out.AddState();
        queue.push_back(dc);
      }
      out.AddArc(o, {a.ilabel, a.olabel, a.weight, order[dc]});
    }
  }
  return out;
}

void RemoveInputLabels(Fst *fst, const std::set<Label> &labels) {
  for (StateId s = 0; s < fst->NumStates(); ++s)
    for (Arc &a : fst->MutableArcs(s))
      if (labels.count(a.ilabel)) a.ilabel = kEpsilon;
}

void ArcSort(Fst *fst) {
  for (StateId s = 0; s < fst->NumStates(); ++s) {
    auto &arcs = fst->MutableArcs(s);
    std::stable_sort(arcs.begin(), arcs.end(), [](const Arc &x, const Arc &y) {
      return std::tie(x.ilabel, x.olabel, x.nextstate, x.weight) <
             std::tie(y.ilabel, y.olabel, y.nextstate, y.weight);
    });
  }
}

bool IsDeterministic(const Fst &fst) {
  for (StateId s = 0; s < fst.NumStates(); ++s) {
    std::set<Label> seen;
    for (const Arc &a : fst.Arcs(s))
      if (!seen.insert(a.ilabel).second) return false;
  }
  return true;
}

}  // namespace tt
