// tests/oracles/edit-distance-bfs.h

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

#ifndef TT_TESTS_ORACLES_EDIT_DISTANCE_BFS_H_
#define TT_TESTS_ORACLES_EDIT_DISTANCE_BFS_H_

// Edit distance by breadth-first search over the graph whose nodes are all
// strings up to a length bound and whose edges are single insertions,
// deletions and substitutions. An optimal script can delete first and
// insert last, so no intermediate string exceeds the longer endpoint.

#include <deque>
#include <map>
#include <vector>

namespace tt::oracle {

class EditDistanceTable {
 public:
  EditDistanceTable(int alphabet, int max_len) : alphabet_(alphabet) {
    std::vector<int> cur;
    Enumerate(&cur, max_len);
    for (std::size_t i = 0; i < strings_.size(); ++i) index_[strings_[i]] = i;
    const std::size_t n = strings_.size();
    dist_.assign(n * n, -1);
    for (std::size_t s = 0; s < n; ++s) Bfs(s, max_len);
  }

  const std::vector<std::vector<int>> &strings() const { return strings_; }
  int Distance(std::size_t a, std::size_t b) const { return dist_[a * strings_.size() + b]; }

 private:
  void Enumerate(std::vector<int> *cur, int max_len) {
    strings_.push_back(*cur);
    if (static_cast<int>(cur->size()) == max_len) return;
    for (int c = 0; c < alphabet_; ++c) {
      cur->push_back(c);
      Enumerate(cur, max_len);
      cur->pop_back();
    }
  }

  void Bfs(std::size_t src, int max_len) {
    const std::size_t n = strings_.size();
    int *row = &dist_[src * n];
    row[src] = 0;
    std::deque<std::size_t> queue{src};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      const std::vector<int> &s = strings_[u];
      auto visit = [&](const std::vector<int> &t) {
        std::size_t v = index_.at(t);
        if (row[v] < 0) {
          row[v] = row[u] + 1;
          queue.push_back(v);
        }
      };
      for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<int> t = s;
        t.erase(t.begin() + i);
        visit(t);
        for (int c = 0; c < alphabet_; ++c) {
          if (c == s[i]) continue;
          t = s;
          t[i] = c;
          visit(t);
        }
      }
      if (static_cast<int>(s.size()) < max_len)
        for (std::size_t i = 0; i <= s.size(); ++i)
          for (int c = 0; c < alphabet_; ++c) {
            std::vector<int> t = s;
            t.insert(t.begin() + i, c);
            visit(t);
          }
    }
  }

  int alphabet_;
  std::vector<std::vector<int>> strings_;
  std::map<std::vector<int>, std::size_t> index_;
  std::vector<int> dist_;
};

}  // namespace tt::oracle

#endif  // TT_TESTS_ORACLES_EDIT_DISTANCE_BFS_H_
