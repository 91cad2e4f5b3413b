// src/wfst/fst.cc

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

#include "tt/fst.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tt {

SymbolTable SymbolTable::WithEpsilon() {
  SymbolTable t;
  t.AddSymbol("<eps>", kEpsilon);
  return t;
}

Label SymbolTable::AddSymbol(const std::string &symbol) {
  auto it = to_id_.find(symbol);
  if (it != to_id_.end()) return it->second;
  Label id = to_symbol_.empty() ? 0 : to_symbol_.rbegin()->first + 1;
  AddSymbol(symbol, id);
  return id;
}

void SymbolTable::AddSymbol(const std::string &symbol, Label id) {
  auto a = to_id_.find(symbol);
  auto b = to_symbol_.find(id);
  if (a != to_id_.end() && b != to_symbol_.end() && a->second == id) return;
  if (a != to_id_.end() || b != to_symbol_.end())
    throw std::invalid_argument("SymbolTable: conflicting binding " + symbol +
                                " <-> " + std::to_string(id));
  to_id_[symbol] = id;
  to_symbol_[id] = symbol;
}

Label SymbolTable::Find(const std::string &symbol) const {
  auto it = to_id_.find(symbol);
  return it == to_id_.end() ? kNoState : it->second;
}

std::string SymbolTable::Find(Label id) const {
  auto it = to_symbol_.find(id);
  return it == to_symbol_.end() ? std::string() : it->second;
}

Label SymbolTable::MaxId() const {
  return to_symbol_.empty() ? kNoState : to_symbol_.rbegin()->first;
}

std::vector<std::pair<Label, std::string>> SymbolTable::Items() const {
  return {to_symbol_.begin(), to_symbol_.end()};
}

void SymbolTable::WriteText(std::ostream &os) const {
  for (const auto &[id, sym] : to_symbol_) os << sym << ' ' << id << '\n';
}

SymbolTable SymbolTable::ReadText(std::istream &is) {
  SymbolTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string sym;
    long id;
    if (!(ls >> sym)) continue;
    if (!(ls >> id))
      throw std::invalid_argument("symbol table line " + std::to_string(lineno) +
                                  ": expected 'symbol id'");
    t.AddSymbol(sym, static_cast<Label>(id));
  }
  return t;
}

StateId Fst::AddState() {
  states_.emplace_back();
  return static_cast<StateId>(states_.size() - 1);
}

void Fst::SetStart(StateId s) { start_ = s; }

void Fst::SetFinal(StateId s, double weight) { states_[s].final = weight; }

void Fst::AddArc(StateId s, const Arc &arc) { states_[s].arcs.push_back(arc); }

std::size_t Fst::NumArcs() const {
  std::size_t n = 0;
  for (const State &s : states_) n += s.arcs.size();
  return n;
}

void Fst::Validate() const {
  if (states_.empty()) {
    if (start_ != kNoState) throw std::logic_error("Fst: start without states");
    return;
  }
  if (start_ < 0 || start_ >= NumStates())
    throw std::logic_error("Fst: invalid start state");
  for (StateId s = 0; s < NumStates(); ++s) {
    if (std::isnan(states_[s].final))
      throw std::logic_error("Fst: NaN final weight");
    for (const Arc &a : states_[s].arcs) {
      if (a.nextstate < 0 || a.nextstate >= NumStates())
        throw std::logic_error("Fst: arc to missing state from " +
                               std::to_string(s));
      if (std::isnan(a.weight)) throw std::logic_error("Fst: NaN arc weight");
    }
  }
}

std::string FormatWeight(double w) {
  if (std::isinf(w)) return w > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, ptr);
}

namespace {

double ParseWeight(const std::string &s, int lineno) {
  if (s == "Infinity" || s == "inf") return tropical::Zero();
  double w = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), w);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("fst text line " + std::to_string(lineno) +
                                ": bad weight '" + s + "'");
  return w;
}

long ParseId(const std::string &s, int lineno) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0)
    throw std::invalid_argument("fst text line " + std::to_string(lineno) +
                                ": bad integer '" + s + "'");
  return v;
}

void WriteState(const Fst &fst, StateId s, std::ostream &os) {
  for (const Arc &a : fst.Arcs(s)) {
    os << s << ' ' << a.nextstate << ' ' << a.ilabel << ' ' << a.olabel;
    if (a.weight != tropical::One()) os << ' ' << FormatWeight(a.weight);
    os << '\n';
  }
  if (fst.IsFinal(s)) {
    os << s;
    if (fst.Final(s) != tropical::One()) os << ' ' << FormatWeight(fst.Final(s));
    os << '\n';
  }
}

}  // namespace

void WriteFstText(const Fst &fst, std::ostream &os) {
  if (fst.Start() == kNoState) return;
  WriteState(fst, fst.Start(), os);
  for (StateId s = 0; s < fst.NumStates(); ++s)
    if (s != fst.Start()) WriteState(fst, s, os);
}

Fst ReadFstText(std::istream &is) {
  Fst fst;
  auto ensure = [&fst](long s) {
    while (fst.NumStates() <= s) fst.AddState();
  };
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> f;
    std::string tok;
    while (ls >> tok) f.push_back(tok);
    if (f.empty()) continue;
    long src = ParseId(f[0], lineno);
    ensure(src);
    if (fst.Start() == kNoState) fst.SetStart(static_cast<StateId>(src));
    if (f.size() <= 2) {
      fst.SetFinal(src, f.size() == 2 ? ParseWeight(f[1], lineno) : 0.0);
    } else if (f.size() == 4 || f.size() == 5) {
      Arc a;
      long dst = ParseId(f[1], lineno);
      ensure(dst);
      a.nextstate = static_cast<StateId>(dst);
      a.ilabel = static_cast<Label>(ParseId(f[2], lineno));
      a.olabel = static_cast<Label>(ParseId(f[3], lineno));
      a.weight = f.size() == 5 ? ParseWeight(f[4], lineno) : 0.0;
      fst.AddArc(src, a);
    } else {
      throw std::invalid_argument("fst text line " + std::to_string(lineno) +
                                  ": expected 1, 2, 4 or 5 fields");
    }
  }
  fst.Validate();
  return fst;
}

void WriteGraphDir(const Fst &fst, const std::string &dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream g(fs::path(dir) / "graph.fst.txt");
  std::ofstream p(fs::path(dir) / "phones.txt");
  std::ofstream w(fs::path(dir) / "words.txt");
  if (!g || !p || !w) TT_ERR << "cannot write graph files under " << dir;
  WriteFstText(fst, g);
  fst.isyms().WriteText(p);
  fst.osyms().WriteText(w);
}

Fst ReadGraphDir(const std::string &dir) {
  namespace fs = std::filesystem;
  std::ifstream g(fs::path(dir) / "graph.fst.txt");
  std::ifstream p(fs::path(dir) / "phones.txt");
  std::ifstream w(fs::path(dir) / "words.txt");
  if (!g || !p || !w) TT_ERR << "missing graph files under " << dir;
  Fst fst = ReadFstText(g);
  fst.isyms() = SymbolTable::ReadText(p);
  fst.osyms() = SymbolTable::ReadText(w);
  return fst;
}

}  // namespace tt
