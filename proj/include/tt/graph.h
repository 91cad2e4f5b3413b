// tt/graph.h

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

#ifndef TT_GRAPH_H_
#define TT_GRAPH_H_

#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tt/fst.h"
#include "tt/model.h"

namespace tt {

// Malformed lexicon or grammar input. The message carries the line number.
class GraphInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LexiconEntry {
  std::string word;
  std::vector<std::string> phones;
  int line = 0;  // source line for messages; 0 if unknown
};

// One entry per line: "word phone1 phone2 ...". Repeated words give
// alternative pronunciations.
std::vector<LexiconEntry> ReadLexicon(std::istream &is);

// Input symbols of a decoding graph for `config`: "<eps>" = 0 and model label
// k = k + 1, named by ModelConfig::LabelName.
SymbolTable PhoneSymbols(const ModelConfig &config);

struct Lexicon {
  Fst fst;
  // Input ids of the auxiliary "#n" symbols appended to `fst.isyms()`.
  std::set<Label> disambig;
};

// Builds the pronunciation transducer over `phones`. Each pronunciation is a
// chain from the start state to a shared end state; the word is emitted on
// the first arc and the end state loops back to the start by epsilon.
// Pronunciations that are identical to, or a prefix of, another one get a
// trailing "#n" symbol. Word ids are assigned in order of first appearance.
Lexicon BuildLexicon(const std::vector<LexiconEntry> &entries,
                     const SymbolTable &phones, const std::string &blank_name);

// Builds a grammar acceptor over `words`. Three text forms are accepted:
//  * ARPA back-off n-gram (detected by a "\data\" line). Unknown words are
//    added to `words`.
//  * word list, lines "word cost": a single-state loop.
//  * word pairs, lines "prev next cost" with "<s>" and "</s>" marking the
//    sentence boundaries.
// Costs are negated natural-log probabilities. Unknown words in the two plain
// forms are an error.
Fst BuildGrammar(std::istream &is, SymbolTable *words);

// Lexicon and grammar composed, epsilon-removed, determinized and minimized,
// with auxiliary symbols replaced by epsilon.
Fst BuildDecodingGraph(const std::vector<LexiconEntry> &lexicon,
                       std::istream &grammar, const ModelConfig &config);

}  // namespace tt

#endif  // TT_GRAPH_H_
