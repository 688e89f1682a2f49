// src/decode.cc

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

#include "tqa/decode.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "tqa/common.h"

namespace tqa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Lexicon prefix tree. Node 0 is the root; a token occupying any other node
// emits that node's phone. Words hang off the node completing their
// pronunciation, so homophones share a node and fan out at word end.
struct PrefixTree {
  struct Node {
    int phone = -1;
    std::vector<std::pair<int, int>> children;  // (phone, node id)
    std::vector<std::string> words;
  };
  std::vector<Node> nodes;
};

PrefixTree BuildTree(const Lexicon &lex) {
  PrefixTree tree;
  tree.nodes.emplace_back();
  for (const auto &[word, prons] : lex.entries) {
    for (const auto &pron : prons) {
      int at = 0;
      for (int phone : pron) {
        int next = -1;
        for (const auto &c : tree.nodes[at].children)
          if (c.first == phone) {
            next = c.second;
            break;
          }
        if (next < 0) {
          next = static_cast<int>(tree.nodes.size());
          tree.nodes.push_back({phone, {}, {}});
          tree.nodes[at].children.push_back({phone, next});
        }
        at = next;
      }
      auto &words = tree.nodes[at].words;
      if (std::find(words.begin(), words.end(), word) == words.end())
        words.push_back(word);
    }
  }
  return tree;
}

struct BoundaryNode {
  int frame = 0;
  std::vector<std::string> hist;
  double best = kNegInf;
};

}  // namespace

void DecodeConfig::Validate() const {
  if (!(beam > 0.0)) throw ConfigError("beam must be > 0");
  if (max_active < 1) throw ConfigError("max_active must be >= 1");
  if (!std::isfinite(lm_weight) || !std::isfinite(word_insertion_penalty))
    throw ConfigError("lm_weight and word_insertion_penalty must be finite");
}

WordLattice BeamDecode(const Posteriorgram &q, const Lexicon &lex,
                       const NGramModel &lm, const DecodeConfig &cfg) {
  cfg.Validate();
  if (q.NumFrames() < 1) throw ValidationError("posteriorgram has no frames");
  q.ValidateStochastic(kFileRowSumTol);
  if (lex.entries.empty()) throw ValidationError("empty lexicon");
  lex.Validate(q.NumPhones());

  const int T = q.NumFrames();
  const PrefixTree tree = BuildTree(lex);
  const size_t hist_len = lm.order > 1 ? lm.order - 1 : 0;

  std::vector<BoundaryNode> nodes;
  std::map<std::pair<int, std::vector<std::string>>, int> node_ids;
  auto intern_node = [&](int frame, std::vector<std::string> hist) {
    auto [it, fresh] = node_ids.try_emplace({frame, std::move(hist)},
                                            static_cast<int>(nodes.size()));
    if (fresh) nodes.push_back({frame, it->first.second, kNegInf});
    return it->second;
  };

  std::vector<std::string> start_hist{std::string(kSentenceBegin)};
  while (start_hist.size() > hist_len) start_hist.erase(start_hist.begin());
  const int start = intern_node(0, start_hist);
  nodes[start].best = 0.0;
  std::vector<int> fresh_nodes{start};

  // The acoustic emission is floored so a zero posterior prunes naturally
  // through the beam instead of infecting scores with -inf.
  auto emit = [&](int t, int phone) {
    return std::log(std::max(q.At(t, phone), kProbFloor));
  };

  // Token key: (prefix-tree node, lattice node the current word left from).
  // The LM history lives on the lattice node, so recombination inside a
  // word is exact.
  std::map<std::pair<int, int>, double> active;
  struct PendingArc {
    int from = 0, to = 0;
    std::string word;
    double score = 0.0;
  };
  std::vector<PendingArc> pending;

  for (int t = 0; t < T; ++t) {
    std::map<std::pair<int, int>, double> next;
    auto relax = [&next](int tree_node, int origin, double total) {
      auto [it, fresh] = next.try_emplace({tree_node, origin}, total);
      if (!fresh && total > it->second) it->second = total;
    };
    for (const auto &[key, total] : active) {
      const auto &[tree_node, origin] = key;
      relax(tree_node, origin, total + emit(t, tree.nodes[tree_node].phone));
      for (const auto &[phone, child] : tree.nodes[tree_node].children)
        relax(child, origin, total + emit(t, phone));
    }
    for (int id : fresh_nodes)
      for (const auto &[phone, child] : tree.nodes[0].children)
        relax(child, id, nodes[id].best + emit(t, phone));
    fresh_nodes.clear();
    if (next.empty())
      throw DecodeError("no active hypothesis at frame " + std::to_string(t));

    double best = kNegInf;
    for (const auto &[key, total] : next) best = std::max(best, total);
    std::vector<std::pair<std::pair<int, int>, double>> kept;
    for (const auto &[key, total] : next)
      if (total >= best - cfg.beam) kept.push_back({key, total});
    if (static_cast<int>(kept.size()) > cfg.max_active) {
      std::stable_sort(kept.begin(), kept.end(),
                       [](const auto &a, const auto &b) {
                         return a.second > b.second;
                       });
      kept.resize(cfg.max_active);
      std::sort(kept.begin(), kept.end(),
                [](const auto &a, const auto &b) { return a.first < b.first; });
    }

    active.clear();
    for (const auto &[key, total] : kept) {
      active.emplace(key, total);
      const auto &[tree_node, origin] = key;
      for (const std::string &word : tree.nodes[tree_node].words) {
        const double lp = lm.LogProb(nodes[origin].hist, word);
        const double end_total =
            total + cfg.lm_weight * lp + cfg.word_insertion_penalty;
        std::vector<std::string> hist = nodes[origin].hist;
        hist.push_back(word);
        while (hist.size() > hist_len) hist.erase(hist.begin());
        const int to = intern_node(t + 1, std::move(hist));
        pending.push_back({origin, to, word, end_total - nodes[origin].best});
        if (end_total > nodes[to].best) nodes[to].best = end_total;
        if (nodes[to].frame == t + 1 &&
            std::find(fresh_nodes.begin(), fresh_nodes.end(), to) ==
                fresh_nodes.end())
          fresh_nodes.push_back(to);
      }
    }
  }

  if (fresh_nodes.empty())
    throw DecodeError("no hypothesis reached the final frame");

  // Epsilon arcs gather every surviving sentence end into one final node.
  const int final_node = static_cast<int>(nodes.size());
  nodes.push_back({T, {}, kNegInf});
  for (int id : fresh_nodes) {
    const double lp = lm.LogProb(nodes[id].hist, std::string(kSentenceEnd));
    pending.push_back({id, final_node, std::string(kEpsilonWord),
                       cfg.lm_weight * lp});
  }

  // Keep only arcs on a start -> final path. Forward reachability holds by
  // construction; backward reachability drops word ends whose continuations
  // all fell out of the beam.
  std::vector<char> coreach(nodes.size(), 0);
  coreach[final_node] = 1;
  // pending arcs always point forward in creation time, so one reverse sweep
  // settles coreachability.
  for (auto it = pending.rbegin(); it != pending.rend(); ++it)
    if (coreach[it->to]) coreach[it->from] = 1;

  WordLattice lattice;
  std::vector<int> renumber(nodes.size(), -1);
  for (size_t id = 0; id < nodes.size(); ++id)
    if (coreach[id]) renumber[id] = lattice.num_nodes++;
  for (const auto &arc : pending)
    if (coreach[arc.from] && coreach[arc.to])
      lattice.arcs.push_back(
          {renumber[arc.from], renumber[arc.to], arc.word, arc.score});
  lattice.final_nodes.push_back(renumber[final_node]);
  lattice.Validate();
  return lattice;
}

BestPathResult BestPath(const WordLattice &lattice) {
  const std::vector<int> order = lattice.Validate();
  std::vector<double> best(lattice.num_nodes, kNegInf);
  std::vector<int> back(lattice.num_nodes, -1);
  std::vector<std::vector<int>> out(lattice.num_nodes);
  for (size_t a = 0; a < lattice.arcs.size(); ++a)
    out[lattice.arcs[a].from].push_back(static_cast<int>(a));

  best[WordLattice::kStartNode] = 0.0;
  for (int u : order) {
    if (best[u] == kNegInf) continue;
    for (int a : out[u]) {
      const WordLattice::Arc &arc = lattice.arcs[a];
      if (best[u] + arc.score > best[arc.to]) {
        best[arc.to] = best[u] + arc.score;
        back[arc.to] = a;
      }
    }
  }

  int final_node = -1;
  for (int f : lattice.final_nodes)
    if (final_node < 0 || best[f] > best[final_node]) final_node = f;
  if (final_node < 0 || best[final_node] == kNegInf)
    throw DecodeError("lattice has no start->final path");

  BestPathResult result;
  result.score = best[final_node];
  for (int at = final_node; back[at] >= 0;) {
    const WordLattice::Arc &arc = lattice.arcs[back[at]];
    if (arc.word != kEpsilonWord) result.words.push_back(arc.word);
    at = arc.from;
  }
  std::reverse(result.words.begin(), result.words.end());
  return result;
}

OracleResult OracleWer(const WordLattice &lattice,
                       const std::vector<std::string> &ref) {
  const std::vector<int> order = lattice.Validate();
  const int R = static_cast<int>(ref.size());
  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  std::vector<std::vector<long long>> dist(
      lattice.num_nodes, std::vector<long long>(R + 1, kInf));
  std::vector<std::vector<int>> out(lattice.num_nodes);
  for (size_t a = 0; a < lattice.arcs.size(); ++a)
    out[lattice.arcs[a].from].push_back(static_cast<int>(a));

  dist[WordLattice::kStartNode][0] = 0;
  for (int u : order) {
    auto &du = dist[u];
    // Deletions: skip reference words without moving in the lattice.
    for (int j = 1; j <= R; ++j) du[j] = std::min(du[j], du[j - 1] + 1);
    for (int a : out[u]) {
      const WordLattice::Arc &arc = lattice.arcs[a];
      auto &dv = dist[arc.to];
      if (arc.word == kEpsilonWord) {
        for (int j = 0; j <= R; ++j) dv[j] = std::min(dv[j], du[j]);
        continue;
      }
      for (int j = 0; j <= R; ++j) {
        dv[j] = std::min(dv[j], du[j] + 1);  // insertion
        if (j < R)
          dv[j + 1] =
              std::min(dv[j + 1], du[j] + (arc.word == ref[j] ? 0 : 1));
      }
    }
  }

  long long edits = kInf;
  for (int f : lattice.final_nodes) edits = std::min(edits, dist[f][R]);
  OracleResult result;
  result.edits = edits;
  result.ref_len = R;
  result.rate =
      static_cast<double>(edits) / static_cast<double>(std::max(R, 1));
  return result;
}

}  // namespace tqa
