// tt/fst.h

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

#ifndef TT_FST_H_
#define TT_FST_H_

#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tt/base.h"

namespace tt {

using Label = int32;
using StateId = int32;

inline constexpr Label kEpsilon = 0;
inline constexpr StateId kNoState = -1;

// Tropical semiring over costs (negated log probabilities): plus is min,
// times is +, zero is +inf and one is 0.
namespace tropical {
inline constexpr double Zero() { return std::numeric_limits<double>::infinity(); }
inline constexpr double One() { return 0.0; }
inline double Plus(double a, double b) { return a < b ? a : b; }
inline double Times(double a, double b) { return a + b; }
}  // namespace tropical

struct Arc {
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  double weight = 0.0;
  StateId nextstate = kNoState;
  bool operator==(const Arc &) const = default;
};

// Bijective symbol <-> id map. Id 0 is conventionally "<eps>".
class SymbolTable {
 public:
  SymbolTable() = default;
  // Table holding only "<eps>" = 0.
  static SymbolTable WithEpsilon();

  // Returns the existing id for `symbol` or assigns the next free id.
  Label AddSymbol(const std::string &symbol);
  // Throws if either side is already bound differently.
  void AddSymbol(const std::string &symbol, Label id);

  // kNoState when absent.
  Label Find(const std::string &symbol) const;
  // Empty when absent.
  std::string Find(Label id) const;
  bool Contains(Label id) const { return to_symbol_.count(id) > 0; }

  std::size_t size() const { return to_id_.size(); }
  bool empty() const { return to_id_.empty(); }
  Label MaxId() const;
  // (id, symbol) in increasing id order.
  std::vector<std::pair<Label, std::string>> Items() const;

  void WriteText(std::ostream &os) const;
  static SymbolTable ReadText(std::istream &is);

  bool operator==(const SymbolTable &) const = default;

 private:
  std::map<std::string, Label> to_id_;
  std::map<Label, std::string> to_symbol_;
};

// Mutable vector-backed weighted transducer.
class Fst {
 public:
  StateId AddState();
  void SetStart(StateId s);
  void SetFinal(StateId s, double weight);
  void AddArc(StateId s, const Arc &arc);
  void ReserveStates(std::size_t n) { states_.reserve(n); }

  StateId Start() const { return start_; }
  StateId NumStates() const { return static_cast<StateId>(states_.size()); }
  // tropical::Zero() when not final.
  double Final(StateId s) const { return states_[s].final; }
  bool IsFinal(StateId s) const { return states_[s].final != tropical::Zero(); }
  std::span<const Arc> Arcs(StateId s) const { return states_[s].arcs; }
  std::vector<Arc> &MutableArcs(StateId s) { return states_[s].arcs; }
  std::size_t NumArcs() const;

  SymbolTable &isyms() { return isyms_; }
  const SymbolTable &isyms() const { return isyms_; }
  SymbolTable &osyms() { return osyms_; }
  const SymbolTable &osyms() const { return osyms_; }

  // Throws std::logic_error if an arc points to a missing state, the start
  // is invalid or a weight is NaN.
  void Validate() const;

  bool operator==(const Fst &) const = default;

 private:
  struct State {
    double final = tropical::Zero();
    std::vector<Arc> arcs;
    bool operator==(const State &) const = default;
  };
  StateId start_ = kNoState;
  std::vector<State> states_;
  SymbolTable isyms_;
  SymbolTable osyms_;
};

// Text format shared with common FST toolkits: arc lines
// "src dst ilabel olabel [weight]" and final lines "state [weight]"; the
// source of the first line is the start state. A weight equal to one (0) is
// omitted.
void WriteFstText(const Fst &fst, std::ostream &os);
Fst ReadFstText(std::istream &is);

// Shortest text form that reads back to the same double.
std::string FormatWeight(double w);

// Writes `<dir>/graph.fst.txt`, `<dir>/phones.txt` and `<dir>/words.txt`.
void WriteGraphDir(const Fst &fst, const std::string &dir);
Fst ReadGraphDir(const std::string &dir);

}  // namespace tt

#endif  // TT_FST_H_
