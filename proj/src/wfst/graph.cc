// src/wfst/graph.cc

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

#include "tt/graph.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>

#include "tt/fst-ops.h"

namespace tt {

namespace {

std::vector<std::string> Tokenize(const std::string &line) {
  std::istringstream ls(line);
  std::vector<std::string> out;
  std::string tok;
  while (ls >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void Fail(const std::string &what, int lineno) {
  throw GraphInputError(what + (lineno > 0 ? " at line " + std::to_string(lineno)
                                           : std::string()));
}

double ParseNumber(const std::string &s, int lineno) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) Fail("bad number '" + s + "'", lineno);
  return v;
}

bool IsReservedWord(const std::string &w) {
  return w == "<eps>" || w == "<s>" || w == "</s>" || (!w.empty() && w[0] == '#');
}

}  // namespace

std::vector<LexiconEntry> ReadLexicon(std::istream &is) {
  std::vector<LexiconEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto tok = Tokenize(line);
    if (tok.empty()) continue;
    if (tok.size() < 2) Fail("lexicon entry without phones", lineno);
    out.push_back({tok[0], {tok.begin() + 1, tok.end()}, lineno});
  }
  return out;
}

SymbolTable PhoneSymbols(const ModelConfig &config) {
  SymbolTable t = SymbolTable::WithEpsilon();
  for (int32 k = 0; k < config.num_labels; ++k) t.AddSymbol(config.LabelName(k), k + 1);
  return t;
}

Lexicon BuildLexicon(const std::vector<LexiconEntry> &entries,
                     const SymbolTable &phones, const std::string &blank_name) {
  Lexicon lex;
  Fst &fst = lex.fst;
  fst.isyms() = phones;
  fst.osyms() = SymbolTable::WithEpsilon();

  using Pron = std::vector<std::string>;
  std::map<Pron, int> count;
  std::set<Pron> prefixes;
  for (const LexiconEntry &e : entries) {
    if (e.phones.empty()) Fail("empty pronunciation for '" + e.word + "'", e.line);
    if (IsReservedWord(e.word)) Fail("reserved word '" + e.word + "' in lexicon", e.line);
    for (const std::string &p : e.phones)
      if (p == blank_name || p == "<eps>" || phones.Find(p) == kNoState)
        Fail("unknown phone '" + p + "' in pronunciation of '" + e.word + "'", e.line);
    ++count[e.phones];
    for (std::size_t n = 1; n < e.phones.size(); ++n)
      prefixes.emplace(e.phones.begin(), e.phones.begin() + n);
  }

  std::map<Pron, int> used;
  std::vector<int> aux(entries.size(), 0);
  int max_aux = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Pron &p = entries[i].phones;
    if (count[p] > 1 || prefixes.count(p)) {
      aux[i] = ++used[p];
      max_aux = std::max(max_aux, aux[i]);
    }
  }
  std::vector<Label> aux_ids(max_aux + 1, kNoState);
  for (int n = 1; n <= max_aux; ++n) {
    aux_ids[n] = fst.isyms().AddSymbol("#" + std::to_string(n));
    lex.disambig.insert(aux_ids[n]);
  }

  StateId start = fst.AddState();
  StateId end = fst.AddState();
  fst.SetStart(start);
  fst.SetFinal(end, 0.0);
  fst.AddArc(end, {kEpsilon, kEpsilon, 0.0, start});
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::vector<Label> in;
    for (const std::string &p : entries[i].phones) in.push_back(phones.Find(p));
    if (aux[i] > 0) in.push_back(aux_ids[aux[i]]);
    Label word = fst.osyms().AddSymbol(entries[i].word);
    StateId prev = start;
    for (std::size_t j = 0; j < in.size(); ++j) {
      StateId next = j + 1 == in.size() ? end : fst.AddState();
      fst.AddArc(prev, {in[j], j == 0 ? word : kEpsilon, 0.0, next});
      prev = next;
    }
  }
  return lex;
}

namespace {

Label WordId(const SymbolTable &words, const std::string &w, int lineno) {
  Label id = IsReservedWord(w) ? kNoState : words.Find(w);
  if (id == kNoState || id == kEpsilon) Fail("unknown word '" + w + "'", lineno);
  return id;
}

Fst WordListGrammar(const std::vector<std::pair<int, std::vector<std::string>>> &lines,
                    const SymbolTable &words) {
  Fst g;
  StateId s = g.AddState();
  g.SetStart(s);
  g.SetFinal(s, 0.0);
  for (const auto &[lineno, tok] : lines) {
    Label w = WordId(words, tok[0], lineno);
    g.AddArc(s, {w, w, ParseNumber(tok[1], lineno), s});
  }
  return g;
}

Fst PairGrammar(const std::vector<std::pair<int, std::vector<std::string>>> &lines,
                const SymbolTable &words) {
  Fst g;
  std::map<std::string, StateId> states;
  auto state = [&](const std::string &w) {
    auto it = states.find(w);
    if (it != states.end()) return it->second;
    StateId s = g.AddState();
    states.emplace(w, s);
    return s;
  };
  g.SetStart(state("<s>"));
  bool any_final = false;
  for (const auto &[lineno, tok] : lines) {
    const std::string &a = tok[0], &b = tok[1];
    if (a == "</s>" || b == "<s>") Fail("misplaced sentence boundary", lineno);
    if (a != "<s>") WordId(words, a, lineno);
    double cost = ParseNumber(tok[2], lineno);
    StateId src = state(a);
    if (b == "</s>") {
      g.SetFinal(src, std::min(g.Final(src), cost));
      any_final = true;
    } else {
      Label w = WordId(words, b, lineno);
      g.AddArc(src, {w, w, cost, state(b)});
    }
  }
  if (!any_final)
    for (StateId s = 0; s < g.NumStates(); ++s) g.SetFinal(s, 0.0);
  return g;
}

Fst ArpaGrammar(const std::vector<std::pair<int, std::vector<std::string>>> &lines,
                SymbolTable *words) {
  using Words = std::vector<std::string>;
  struct Entry {
    double logp;
    std::optional<double> bow;
  };
  std::map<int, int64> declared;
  std::map<Words, Entry> grams;
  std::map<int, int64> seen;
  int section = -1;  // -1 before \data\, 0 in \data\, n in \n-grams:
  bool ended = false;
  for (const auto &[lineno, tok] : lines) {
    if (ended) Fail("content after \\end\\", lineno);
    const std::string &first = tok[0];
    if (first == "\\data\\") {
      if (section != -1) Fail("repeated \\data\\", lineno);
      section = 0;
      continue;
    }
    if (section == -1) continue;
    if (first == "\\end\\") {
      ended = true;
      continue;
    }
    if (first.size() > 7 && first[0] == '\\' &&
        first.substr(first.size() - 7) == "-grams:") {
      int n = 0;
      try {
        n = std::stoi(first.substr(1));
      } catch (const std::exception &) {
        Fail("bad section header '" + first + "'", lineno);
      }
      if (n != section + 1 || !declared.count(n))
        Fail("unexpected section '" + first + "'", lineno);
      section = n;
      continue;
    }
    if (section == 0) {
      std::string joined;
      for (const auto &t : tok) joined += t;
      auto eq = joined.find('=');
      if (joined.rfind("ngram", 0) != 0 || eq == std::string::npos)
        Fail("bad \\data\\ line", lineno);
      int n = static_cast<int>(ParseNumber(joined.substr(5, eq - 5), lineno));
      int64 c = static_cast<int64>(ParseNumber(joined.substr(eq + 1), lineno));
      if (n < 1 || c < 0 || declared.count(n) || n != static_cast<int>(declared.size()) + 1)
        Fail("bad \\data\\ line", lineno);
      declared[n] = c;
      continue;
    }
    const int n = section;
    if (tok.size() != static_cast<std::size_t>(n) + 1 &&
        tok.size() != static_cast<std::size_t>(n) + 2)
      Fail("expected " + std::to_string(n) + "-gram entry", lineno);
    Entry e{ParseNumber(tok[0], lineno), std::nullopt};
    if (tok.size() == static_cast<std::size_t>(n) + 2)
      e.bow = ParseNumber(tok[n + 1], lineno);
    Words w(tok.begin() + 1, tok.begin() + 1 + n);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] == "<s>" && i != 0) Fail("<s> inside an n-gram", lineno);
      if (w[i] == "</s>" && i + 1 != w.size()) Fail("</s> inside an n-gram", lineno);
      if (w[i] != "<s>" && w[i] != "</s>" && IsReservedWord(w[i]))
        Fail("reserved word '" + w[i] + "'", lineno);
    }
    grams[w] = e;
    ++seen[n];
  }
  if (section == -1) Fail("missing \\data\\", 0);
  if (!ended) Fail("missing \\end\\", 0);
  for (const auto &[n, c] : declared)
    if (seen[n] != c)
      Fail(std::to_string(n) + "-gram count " + std::to_string(seen[n]) +
               " does not match header " + std::to_string(c),
           0);
  const int order = declared.empty() ? 0 : declared.rbegin()->first;
  if (order == 0) Fail("empty ARPA model", 0);

  for (const auto &[w, e] : grams)
    if (w.size() == 1 && w[0] != "<s>" && w[0] != "</s>") words->AddSymbol(w[0]);
  for (const auto &[w, e] : grams)
    for (const std::string &x : w)
      if (x != "<s>" && x != "</s>" && words->Find(x) == kNoState)
        Fail("word '" + x + "' has no unigram", 0);

  Fst g;
  std::map<Words, StateId> states;
  states[{}] = g.AddState();
  for (const auto &[w, e] : grams)
    if (static_cast<int>(w.size()) < order && w.back() != "</s>")
      states[w] = g.AddState();
  auto longest_suffix_state = [&](Words w) {
    while (!states.count(w)) w.erase(w.begin());
    return states.at(w);
  };
  g.SetStart(states.count({"<s>"}) ? states.at({"<s>"}) : states.at({}));

  const double k = std::numbers::ln10;
  bool any_final = false;
  for (const auto &[w, e] : grams) {
    Words hist(w.begin(), w.end() - 1);
    auto src = states.find(hist);
    if (src == states.end()) Fail("n-gram history without an entry", 0);
    const std::string &last = w.back();
    if (last == "<s>") continue;
    if (last == "</s>") {
      g.SetFinal(src->second, std::min(g.Final(src->second), -k * e.logp));
      any_final = true;
      continue;
    }
    Label id = words->Find(last);
    g.AddArc(src->second, {id, id, -k * e.logp, longest_suffix_state(w)});
  }
  for (const auto &[h, s] : states) {
    if (h.empty()) continue;
    const Entry &e = grams.at(h);
    g.AddArc(s, {kEpsilon, kEpsilon, e.bow ? -k * *e.bow : 0.0,
                 longest_suffix_state(Words(h.begin() + 1, h.end()))});
  }
  if (!any_final)
    for (StateId s = 0; s < g.NumStates(); ++s) g.SetFinal(s, 0.0);
  return g;
}

}  // namespace

Fst BuildGrammar(std::istream &is, SymbolTable *words) {
  std::vector<std::pair<int, std::vector<std::string>>> lines;
  bool arpa = false;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto tok = Tokenize(line);
    if (tok.empty()) continue;
    if (tok[0] == "\\data\\") arpa = true;
    lines.emplace_back(lineno, std::move(tok));
  }
  Fst g;
  if (arpa) {
    g = ArpaGrammar(lines, words);
  } else {
    if (lines.empty()) Fail("empty grammar", 0);
    const std::size_t width = lines.front().second.size();
    for (const auto &[n, tok] : lines) {
      if (tok.size() != width || (width != 2 && width != 3))
        Fail("expected 'word cost' or 'prev next cost'", n);
    }
    g = width == 2 ? WordListGrammar(lines, *words) : PairGrammar(lines, *words);
  }
  g.isyms() = *words;
  g.osyms() = *words;
  return g;
}

Fst BuildDecodingGraph(const std::vector<LexiconEntry> &lexicon,
                       std::istream &grammar, const ModelConfig &config) {
  SymbolTable phones = PhoneSymbols(config);
  Lexicon lex = BuildLexicon(lexicon, phones, config.LabelName(config.blank_id));
  SymbolTable words = lex.fst.osyms();
  Fst g = BuildGrammar(grammar, &words);
  lex.fst.osyms() = words;
  Fst lg = Compose(lex.fst, g);
  lg = RmEpsilon(lg);
  lg = Determinize(lg);
  lg = Minimize(lg);
  RemoveInputLabels(&lg, lex.disambig);
  lg = Connect(lg);
  if (lg.NumStates() == 0)
    throw GraphInputError("lexicon and grammar accept no sentence");
  lg.isyms() = phones;
  return lg;
}

}  // namespace tt
