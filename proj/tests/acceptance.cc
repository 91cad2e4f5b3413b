// tests/acceptance.cc

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

// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "decode-util.h"
#include "fst-util.h"
#include "oracles/alignment-search.h"
#include "oracles/batch-forward.h"
#include "oracles/edit-distance-bfs.h"
#include "oracles/fsd-reference.h"
#include "oracles/fst-enumerate.h"
#include "tt/graph.h"
#include "test-util.h"
#include "toy-corpus.h"
#include "tt/compress.h"
#include "tt/fst-ops.h"
#include "tt/metrics.h"
#include "tt/svd.h"

namespace tt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  // Records the first failed condition; later ones are ignored.
  void Expect(bool ok, const std::string &what) {
    if (!ok && pass) {
      pass = false;
      detail << "failed: " << what << "; ";
    }
  }
};

std::string Line(const std::string &id, const std::vector<std::string> &tokens) {
  std::string s = id;
  for (const std::string &t : tokens) s += " " + t;
  return s + "\n";
}

std::vector<std::string> WordNames(const Fst &g, const std::vector<int32> &ids) {
  std::vector<std::string> out;
  for (int32 w : ids) out.push_back(g.osyms().Find(w));
  return out;
}

std::vector<std::string> LabelNames(const ModelConfig &c, const std::vector<int32> &ids) {
  std::vector<std::string> out;
  for (int32 k : ids) out.push_back(c.LabelName(k));
  return out;
}

// Gamma above one never skips; transcripts must equal the plain
// frame-synchronous reference byte for byte.
void PsdFsdEquivalence(Verdict *v) {
  std::mt19937 rng(101);
  const ModelConfig c = testing::TinyConfig();
  int decodes = 0;
  for (int i = 0; i < 100; ++i) {
    TransducerModel m = testing::RandomModel(c, 5000 + i);
    Fst graph = testing::RandomWordLoopGraph(c, 6, &rng);
    Frames x = testing::RandomFrames(8 + i % 40, c.feat_dim, &rng);
    DecodeParams p;
    p.gamma_blank = DecodeParams::kFsdGamma;
    oracle::FsdOutput want = oracle::FsdReference(m, x, p.beta_blank, &graph, p.beam,
                                                  p.max_active);
    DecodeResult with_graph = DecodeUtterance(m, x, p, &graph);
    DecodeResult greedy = DecodeUtterance(m, x, p, nullptr);
    v->Expect(Line("u", with_graph.tokens) == Line("u", WordNames(graph, want.words)),
              "graph transcript of model " + std::to_string(i));
    v->Expect(Line("u", greedy.tokens) == Line("u", LabelNames(c, want.greedy)),
              "phone transcript of model " + std::to_string(i));
    v->Expect(BlankRate(with_graph.trace) == 0.0 && BlankRate(greedy.trace) == 0.0,
              "alpha is zero");
    decodes += 2;
  }
  v->detail << decodes << " decodes identical, alpha=0";
}

// Loop over one-phone words with random costs: every label sequence is a
// sentence, so no path needs a phone on a particular frame.
Fst PhoneWordLoop(const ModelConfig &c, std::mt19937 *rng) {
  std::uniform_int_distribution<int> cost(0, 8);
  std::vector<LexiconEntry> lex;
  std::ostringstream grammar;
  for (int32 k = 1; k < c.num_labels; ++k) {
    lex.push_back({"w" + std::to_string(k), {c.LabelName(k)}});
    grammar << lex.back().word << ' ' << cost(*rng) / 4.0 << '\n';
  }
  std::istringstream gs(grammar.str());
  return BuildDecodingGraph(lex, gs, c);
}

// 100-frame utterances with exactly 77 frames at blank probability 0.99.
// Non-blank mass on those frames is spread evenly, so a phone there costs
// more than any word it could complete and every competing path keeps
// blank on those frames.
void SearchEffortReduction(Verdict *v) {
  std::mt19937 rng(202);
  ModelConfig c;
  c.num_labels = 9;
  const int32 n = c.num_labels;
  double min_ratio = kInf, max_ratio = 0.0;
  for (int u = 0; u < 50; ++u) {
    Fst graph = PhoneWordLoop(c, &rng);
    std::vector<int> order(100);
    for (int t = 0; t < 100; ++t) order[t] = t;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> is_blank(100, false);
    for (int i = 0; i < 77; ++i) is_blank[order[i]] = true;
    std::uniform_int_distribution<int32> label(1, n - 1);
    std::vector<std::vector<double>> post;
    for (int t = 0; t < 100; ++t) {
      std::vector<double> p(n);
      if (is_blank[t]) {
        p.assign(n, 0.01 / (n - 1));
        p[0] = 0.99;
      } else {
        p.assign(n, 0.2 / (n - 2));
        p[0] = 0.2;
        p[label(rng)] = 0.6;
      }
      for (double &x : p) x = std::log(x);
      post.push_back(p);
    }
    DecodeParams psd;
    psd.beta_blank = 0.0;
    psd.gamma_blank = 0.95;
    DecodeParams fsd = psd;
    fsd.gamma_blank = DecodeParams::kFsdGamma;
    DecodeResult a = DecodePosteriors(c, post, psd, &graph);
    DecodeResult b = DecodePosteriors(c, post, fsd, &graph);
    double ratio = static_cast<double>(a.trace.wfst_steps) / a.trace.frames_total;
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    v->Expect(a.trace.wfst_steps == 23 && a.trace.frames_total == 100,
              "23 search steps in utterance " + std::to_string(u));
    v->Expect(a.tokens == b.tokens, "transcript equals FSD in utterance " + std::to_string(u));
    v->Expect(b.trace.wfst_steps == 100, "FSD steps every frame");
  }
  v->detail << "50 utterances, wfst_steps/T in [" << min_ratio << ", " << max_ratio
            << "], alpha=" << 1.0 - max_ratio << ", transcripts equal FSD";
}

void DeweightMonotonicity(Verdict *v, const testing::ToyCorpus &toy) {
  std::mt19937 rng(303);
  std::vector<std::pair<int32, std::vector<std::vector<double>>>> corpus;
  for (int u = 0; u < 200; ++u) {
    const int32 n = 2 + u % 10;
    std::vector<std::vector<double>> post;
    for (int t = 0, T = 5 + u % 60; t < T; ++t)
      post.push_back(testing::RandomLogScores(n, 3.0, &rng, t % 2 ? 4.0 : 0.0));
    corpus.emplace_back(n, std::move(post));
  }
  std::vector<std::size_t> totals;
  for (double beta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    std::size_t total = 0;
    for (std::size_t u = 0; u < corpus.size(); ++u) {
      ModelConfig c;
      c.num_labels = corpus[u].first;
      DecodeParams p;
      p.beta_blank = beta;
      total += DecodePosteriors(c, corpus[u].second, p, nullptr).trace.emitted_phones.size();
    }
    totals.push_back(total);
  }
  // Per-utterance monotonicity.
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    std::size_t prev = 0;
    for (double beta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      ModelConfig c;
      c.num_labels = corpus[u].first;
      DecodeParams p;
      p.beta_blank = beta;
      std::size_t e = DecodePosteriors(c, corpus[u].second, p, nullptr).trace.emitted_phones.size();
      v->Expect(e >= prev, "emitted count non-decreasing in utterance " + std::to_string(u));
      prev = e;
    }
  }
  auto deletions = [&toy](double beta) {
    DecodeParams p;
    p.beta_blank = beta;
    ErrorBreakdown e;
    for (const auto &[id, feats] : toy.utts)
      e += AlignAndCount(toy.ref_phones.at(id),
                         DecodeUtterance(toy.model, feats, p, nullptr).tokens);
    return e.deletions;
  };
  const int64 d0 = deletions(0.0), d2 = deletions(2.0);
  v->Expect(d2 < d0, "toy deletions decrease from beta 0 to 2");
  v->detail << "emitted totals";
  for (std::size_t t : totals) v->detail << ' ' << t;
  v->detail << " for beta 0,0.5,1,2,4; toy phone deletions " << d0 << " -> " << d2;
}

Fst RandomSearchGraph(std::mt19937 *rng) {
  testing::RandomFstOptions o;
  o.acyclic = false;
  o.max_states = 5;
  o.arc_prob = 0.35;
  Fst g = testing::RandomFst(o, rng);
  for (StateId s = 0; s < g.NumStates(); ++s)
    for (Arc &a : g.MutableArcs(s))
      if (a.ilabel != kEpsilon) a.ilabel += 1;
  return g;
}

PosteriorFrame RandomFrame(int32 n, int64 step, std::mt19937 *rng) {
  std::vector<double> z = testing::RandomLogScores(n, 2.0, rng);
  return MakePosteriorFrame(step, z, 0);
}

void WfstOracle(Verdict *v) {
  using oracle::Enumerate;
  using oracle::SameRelation;
  constexpr std::size_t kMaxIn = 6, kMaxOut = 8;
  std::mt19937 rng(404);
  int det_checked = 0;
  for (int i = 0; i < 200; ++i) {
    // Acyclic pairs: the relation is finite, so compare it whole.
    testing::RandomFstOptions o;
    o.max_states = 8;
    o.functional = i % 2 == 0;
    Fst a = testing::RandomFst(o, &rng), b = testing::RandomFst(o, &rng);
    Fst c = Compose(a, b);
    oracle::Relation want = oracle::ComposeRelations(Enumerate(a, 64, a.NumStates()),
                                                     Enumerate(b, 64, b.NumStates()));
    v->Expect(SameRelation(Enumerate(c, 64, c.NumStates() + 1), want, 1e-12),
              "compose pair " + std::to_string(i));
    if (o.functional) {
      Fst d = Determinize(RmEpsilon(c));
      Fst m = Minimize(d);
      v->Expect(IsDeterministic(d) && IsDeterministic(m), "deterministic output");
      v->Expect(SameRelation(Enumerate(d, 64, d.NumStates() + 1), want, 1e-9),
                "determinize pair " + std::to_string(i));
      v->Expect(SameRelation(Enumerate(m, 64, m.NumStates() + 1), want, 1e-9),
                "minimize pair " + std::to_string(i));
      ++det_checked;
    }
    // Cyclic functional machines, compared on pairs within the length
    // bounds.
    testing::RandomFstOptions cy;
    cy.max_states = 8;
    cy.acyclic = false;
    cy.functional = true;
    cy.zero_arc_weights = true;
    Fst f = testing::RandomFst(cy, &rng);
    Fst d = Determinize(f);
    Fst m = Minimize(d);
    auto rel = [](const Fst &x) { return oracle::BoundedRelation(x, kMaxIn, kMaxOut); };
    oracle::Relation base = rel(f);
    v->Expect(SameRelation(rel(d), base, 1e-9), "cyclic determinize " + std::to_string(i));
    v->Expect(SameRelation(rel(m), base, 1e-9), "cyclic minimize " + std::to_string(i));
  }
  // Infinite-beam search against exhaustive alignment enumeration.
  int searched = 0, compared_labels = 0;
  for (int i = 0; i < 200; ++i) {
    Fst g = RandomSearchGraph(&rng);
    const int T = 1 + i % 5;
    std::vector<PosteriorFrame> frames;
    for (int t = 0; t < T; ++t) frames.push_back(RandomFrame(4, t, &rng));
    const PhonePrior prior = PhonePrior::Uniform(4);
    oracle::ExhaustiveResult want = oracle::ExhaustiveDecode(
        Enumerate(g, T, (T + 1) * (g.NumStates() + 1)), frames, 0, prior);
    TokenSet tokens = InitialTokens(g);
    for (const PosteriorFrame &f : frames)
      tokens = BeamSearchStep(g, tokens, f, prior, {kInf, 0});
    if (want.cost == kInf) {
      bool threw = false;
      try {
        BestPath(g, tokens);
      } catch (const NoHypothesisError &) {
        threw = true;
      }
      v->Expect(threw, "no hypothesis case " + std::to_string(i));
      continue;
    }
    Hypothesis got = BestPath(g, tokens);
    v->Expect(std::abs(got.cost - want.cost) < 1e-9, "search cost " + std::to_string(i));
    if (want.num_optimal == 1) {
      v->Expect(got.olabels == want.olabels, "search output " + std::to_string(i));
      ++compared_labels;
    }
    ++searched;
  }
  v->detail << "200 compose pairs (" << det_checked << " also det/min), 200 cyclic det/min, "
            << searched << " searches matched (" << compared_labels << " with unique best)";
}

double FrobeniusSq(const Matrix &a, const Matrix &b) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      double d = static_cast<double>(a(r, c)) - b(r, c);
      s += d * d;
    }
  return s;
}

void SvdCriteria(Verdict *v) {
  const ModelConfig small;
  TransducerModel m = testing::RandomModel(small, 606);
  // Full rank.
  CompressionSpec full;
  full.rank = small.dfsmn_proj_dim;
  TransducerModel f = SvdCompress(m, full);
  double worst = 0.0;
  for (std::size_t l = 0; l < m.dfsmn.size(); ++l)
    for (auto [orig, fact] : {std::pair(&m.dfsmn[l].in_proj, &f.dfsmn[l].in_proj),
                              std::pair(&m.dfsmn[l].out_proj, &f.dfsmn[l].out_proj)}) {
      Matrix w = orig->ToDense(), r = fact->ToDense();
      for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j)
          worst = std::max(worst, std::abs(static_cast<double>(w(i, j)) - r(i, j)));
    }
  v->Expect(worst < 1e-4, "full-rank reconstruction");
  // Truncation error against the discarded spectrum.
  double worst_rel = 0.0;
  for (const char *name : {"dfsmn.0.in_proj", "dfsmn.0.out_proj"}) {
    const bool in = std::string(name).find("in_proj") != std::string::npos;
    const Matrix w = (in ? m.dfsmn[0].in_proj : m.dfsmn[0].out_proj).ToDense();
    const std::vector<double> s = Svd(w).s;
    for (int32 k : {1, 10, 70, 150}) {
      CompressionSpec spec;
      spec.targets = {name};
      spec.rank = k;
      TransducerModel t = SvdCompress(m, spec);
      double err = FrobeniusSq(w, (in ? t.dfsmn[0].in_proj : t.dfsmn[0].out_proj).ToDense());
      double tail = 0.0;
      for (std::size_t i = k; i < s.size(); ++i) tail += s[i] * s[i];
      worst_rel = std::max(worst_rel, std::abs(err - tail) / tail);
    }
  }
  v->Expect(worst_rel < 1e-3, "rank-k error equals discarded energy");
  // Parameter accounting for the Small topology.
  const int64 total = TransducerModel::Zeros(small).NumParameters();
  const int64 per_proj = static_cast<int64>(small.dfsmn_proj_dim) * small.encoder_dim;
  const int64 k = 70;
  const int64 expect = total - 2 * small.num_dfsmn_layers * per_proj +
                       2 * small.num_dfsmn_layers * k * (small.dfsmn_proj_dim + small.encoder_dim);
  CompressionSpec r70;
  r70.rank = k;
  CompressionReport rep70;
  TransducerModel c70 = SvdCompress(m, r70, &rep70);
  v->Expect(rep70.params_after == expect && c70.NumParameters() == expect,
            "rank 70 accounting");
  v->Expect(expect <= 900000, "rank 70 fits in 0.9M");
  CompressionReport rep_default;
  SvdCompress(m, CompressionSpec(), &rep_default);
  v->detail << "full-rank max err " << worst << ", worst tail-energy rel err " << worst_rel
            << ", Small params " << total << " -> " << rep70.params_after
            << " at rank 70, default energy " << CompressionSpec::kDefaultEnergy << " gives "
            << rep_default.params_after << " on Gaussian weights";
}

void StreamingAndInt8(Verdict *v) {
  const ModelConfig c = testing::TinyConfig();
  double worst = 0.0;
  for (int T = 1; T <= 100; ++T) {
    TransducerModel m = testing::RandomModel(c, 7000 + T);
    std::mt19937 rng(T);
    Frames x = testing::RandomFrames(T, c.feat_dim, &rng);
    Frames stream = EncodeUtterance(m, x);
    oracle::Seq batch = oracle::BatchEncoder(m, oracle::ToSeq(x));
    if (stream.size() != batch.size()) {
      v->Expect(false, "frame count at T=" + std::to_string(T));
      continue;
    }
    for (std::size_t t = 0; t < stream.size(); ++t)
      for (std::size_t d = 0; d < stream[t].size(); ++d)
        worst = std::max(worst, std::abs(stream[t][d] - batch[t][d]));
  }
  v->Expect(worst < 1e-4, "streaming equals batch");
  double worst_q = 0.0;
  for (ModelConfig qc : {testing::TinyConfig(), ModelConfig()}) {
    TransducerModel m = testing::RandomModel(qc, 808);
    std::mt19937 rng(808);
    Frames x = testing::RandomFrames(100, qc.feat_dim, &rng);
    worst_q = std::max(worst_q, testing::RelativeError(EncodeUtterance(m, x),
                                                       EncodeUtterance(QuantizeInt8(m), x)));
  }
  v->Expect(worst_q < 1e-2, "int8 relative error");
  v->detail << "T=1..100 max abs diff " << worst << "; int8 relative error " << worst_q;
}

void EditDistanceOracle(Verdict *v) {
  oracle::EditDistanceTable table(3, 6);
  const auto &s = table.strings();
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      ErrorBreakdown e = AlignAndCount<int>(std::span(s[a]), std::span(s[b]));
      if (e.errors() != table.Distance(a, b) ||
          e.ref_length != static_cast<int64>(s[a].size())) {
        v->Expect(false, "pair " + std::to_string(a) + "," + std::to_string(b));
      }
      ++pairs;
    }
  v->detail << pairs << " pairs over " << s.size() << " strings";
}

void GoldenEndToEnd(Verdict *v, const testing::ToyCorpus &toy) {
  std::string words, phones;
  const DecodeParams defaults;
  for (const auto &[id, feats] : toy.utts) {
    words += Line(id, DecodeUtterance(toy.model, feats, defaults, &toy.graph).tokens);
    phones += Line(id, DecodeUtterance(toy.model, feats, defaults, nullptr).tokens);
  }
  auto slurp = [](const std::string &p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  v->Expect(words == slurp(toy.dir + "/golden.words.txt"), "word transcripts");
  v->Expect(phones == slurp(toy.dir + "/golden.phones.txt"), "phone transcripts");
  v->detail << toy.utts.size() << " utterances byte-identical (words and phones)";
}

}  // namespace
}  // namespace tt

int main() {
  using namespace tt;
  struct Criterion {
    const char *name;
    double budget_s;
    std::function<void(Verdict *)> run;
  };
  testing::ToyCorpus toy;
  std::string toy_error;
  try {
    toy = testing::LoadToyCorpus(TT_TOY_DIR);
  } catch (const std::exception &e) {
    toy_error = e.what();
  }
  auto needs_toy = [&](auto fn) {
    return [&, fn](Verdict *v) {
      if (!toy_error.empty()) {
        v->Expect(false, "toy corpus: " + toy_error);
        return;
      }
      fn(v, toy);
    };
  };
  const std::vector<Criterion> criteria = {
      {"psd-fsd-equivalence", 30, PsdFsdEquivalence},
      {"search-effort-reduction", 10, SearchEffortReduction},
      {"deweight-monotonicity", 10, needs_toy(DeweightMonotonicity)},
      {"wfst-oracle-equivalence", 60, WfstOracle},
      {"svd-compression", 0, SvdCriteria},
      {"streaming-batch-and-int8", 0, StreamingAndInt8},
      {"edit-distance-oracle", 0, EditDistanceOracle},
      {"golden-end-to-end", 0, needs_toy(GoldenEndToEnd)},
  };
  int failed = 0;
  for (const Criterion &c : criteria) {
    Verdict v;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(&v);
    } catch (const std::exception &e) {
      v.Expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0) v.Expect(secs < c.budget_s, "runtime budget");
    std::printf("%s %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.name,
                v.detail.str().c_str(), secs);
    if (!v.pass) ++failed;
  }
  return failed ? 1 : 0;
}
