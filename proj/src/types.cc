// tqa/types.cc

// Copyright 2026  The tqa authors

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

#include "tqa/types.h"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <string>

namespace tqa {

PhoneSet::PhoneSet(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  if (symbols_.empty())
    throw ValidationError("phone set is empty");
  for (size_t k = 0; k < symbols_.size(); ++k) {
    if (symbols_[k].empty())
      throw ValidationError("empty phone label at index " + std::to_string(k));
    auto [it, inserted] = index_.emplace(symbols_[k], static_cast<int>(k));
    if (!inserted)
      throw ValidationError("duplicate phone label: " + symbols_[k]);
  }
}

int PhoneSet::Find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  return it == index_.end() ? -1 : it->second;
}

int PhoneSet::Index(std::string_view label) const {
  int k = Find(label);
  if (k < 0)
    throw ValidationError("unknown phone label: " + std::string(label));
  return k;
}

void Posteriorgram::ValidateStochastic(double tol) const {
  for (int t = 0; t < num_frames_; ++t) {
    double sum = 0.0;
    for (int k = 0; k < num_phones_; ++k) {
      double v = At(t, k);
      if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v))
        throw ValidationError("posteriorgram entry out of [0,1] at frame " +
                              std::to_string(t));
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      throw ValidationError("row not stochastic at frame " +
                            std::to_string(t) + ": sum " +
                            std::to_string(sum));
  }
}

void Alignment::Validate(int num_phones) const {
  for (const auto &seg : segments) {
    if (seg.duration <= 0)
      throw ValidationError("zero duration segment in utterance " + utt_id);
    if (seg.phone < 0 || seg.phone >= num_phones)
      throw ValidationError("phone index out of range in utterance " + utt_id);
  }
}

void StateToPhoneMap::Validate(int num_phones) const {
  for (size_t s = 0; s < phone_of_state.size(); ++s) {
    if (phone_of_state[s] < 0 || phone_of_state[s] >= num_phones)
      throw ValidationError("state " + std::to_string(s) +
                            " maps to no phone in the inventory");
  }
}

void Lexicon::Validate(int num_phones) const {
  for (const auto &[word, prons] : entries) {
    if (word.empty()) throw ValidationError("empty word in lexicon");
    if (prons.empty())
      throw ValidationError("word with no pronunciation: " + word);
    for (const auto &pron : prons) {
      if (pron.empty())
        throw ValidationError("empty pronunciation for word: " + word);
      for (int p : pron) {
        if (p < 0 || p >= num_phones)
          throw ValidationError("pronunciation phone out of range for word: " +
                                word);
      }
    }
  }
}

std::vector<int> WordLattice::Validate() const {
  if (num_nodes <= 0) throw ValidationError("lattice has no nodes");
  if (final_nodes.empty()) throw ValidationError("lattice has no final node");

  std::vector<std::vector<int>> out_arcs(num_nodes);
  std::vector<int> in_degree(num_nodes, 0);
  for (size_t a = 0; a < arcs.size(); ++a) {
    const Arc &arc = arcs[a];
    if (arc.from < 0 || arc.from >= num_nodes || arc.to < 0 ||
        arc.to >= num_nodes)
      throw ValidationError("arc endpoint out of range");
    if (!std::isfinite(arc.score))
      throw ValidationError("non-finite arc score");
    out_arcs[arc.from].push_back(static_cast<int>(a));
    in_degree[arc.to]++;
  }
  for (int f : final_nodes)
    if (f < 0 || f >= num_nodes)
      throw ValidationError("final node out of range");

  // Kahn topological sort; leftovers mean a cycle.
  std::vector<int> order;
  order.reserve(num_nodes);
  std::deque<int> queue;
  std::vector<int> degree = in_degree;
  for (int v = 0; v < num_nodes; ++v)
    if (degree[v] == 0) queue.push_back(v);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (int a : out_arcs[v])
      if (--degree[arcs[a].to] == 0) queue.push_back(arcs[a].to);
  }
  if (static_cast<int>(order.size()) != num_nodes)
    throw ValidationError("cycle detected in lattice");

  // Every arc must lie on some start->final path.
  std::vector<bool> reach(num_nodes, false), coreach(num_nodes, false);
  reach[kStartNode] = true;
  for (int v : order)
    if (reach[v])
      for (int a : out_arcs[v]) reach[arcs[a].to] = true;
  for (int f : final_nodes) coreach[f] = true;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    for (int a : out_arcs[*it])
      if (coreach[arcs[a].to]) coreach[*it] = true;
  for (const Arc &arc : arcs)
    if (!reach[arc.from] || !coreach[arc.to])
      throw ValidationError("arc not on any start->final path");

  return order;
}

}  // namespace tqa
