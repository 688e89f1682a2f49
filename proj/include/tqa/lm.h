// tqa/lm.h

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
//
// N-gram language modeling. The per-utterance detector builds a 4-gram
// interpolated Kneser-Ney model (single discount per order, continuation
// counts below the top order) from one transcript, then mixes it with a
// top-N background unigram. Everything is in natural-log space in memory;
// the ARPA text serialization converts to log10 as that format expects.

#ifndef TQA_LM_H_
#define TQA_LM_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tqa/types.h"

namespace tqa {

using Gram = std::vector<std::string>;

// Raw n-gram occurrence counts for orders 1..order over sentences wrapped in
// <s>/</s>. counts[k-1] maps k-grams to counts.
struct CountTable {
  int order = 0;
  std::vector<std::map<Gram, long long>> counts;

  const std::map<Gram, long long> &Order(int k) const {
    return counts.at(k - 1);
  }
};

// Counts every k-gram, k = 1..order, of "<s> tokens... </s>".
CountTable CountNgrams(const std::vector<std::string> &tokens, int order);

// Adds one wrapped sentence into an existing table (corpus accumulation).
void AccumulateNgrams(const std::vector<std::string> &tokens,
                      CountTable *table);

// Good-Turing style discount estimate n1/(n1 + 2*n2) over a count table's
// counts-of-counts; falls back to 0.5 whenever n1 or n2 is zero (routine on
// single-utterance data, where the formula degenerates).
double EstimateKnDiscount(const std::map<Gram, long long> &counts);

// Backoff n-gram model in ARPA organization: a stored k-gram carries the
// (already interpolated) log-probability of its last word given the first
// k-1, plus the log backoff weight used when it acts as a context for
// longer grams. vocab holds the predictable words (never <s>).
struct NGramModel {
  struct Entry {
    double logp = 0.0;
    double logbow = 0.0;
  };

  int order = 0;
  std::vector<std::string> vocab;              // sorted, includes <unk>
  std::vector<std::map<Gram, Entry>> table;    // table[k-1]: stored k-grams

  bool InVocab(const std::string &word) const;

  // log p(word | context) with standard backoff; context is truncated to
  // the last order-1 tokens, unknown target words map to <unk>. Finite for
  // every input.
  double LogProb(std::span<const std::string> context,
                 const std::string &word) const;

  // Sum of word log-probs through the sentence, <s> context at the start
  // and a final </s> prediction included.
  double SentenceLogProb(const std::vector<std::string> &words) const;

  // exp(-SentenceLogProb / (len + 1)).
  double Perplexity(const std::vector<std::string> &words) const;

  // Checks sum_w p(w|h) = 1 within tol for the empty context and every
  // stored gram of order < n, enumerating the vocabulary. Skipped (throws
  // ConfigError) when |vocab| > 10000 — enumeration is quadratic.
  void ValidateNormalization(double tol = 1e-6) const;
};

// Interpolated unmodified Kneser-Ney over the table: the top order keeps raw
// counts, lower orders use continuation counts (grams starting with <s> keep
// raw counts — nothing can precede <s>), and the recursion bottoms out at a
// uniform distribution over the predictable vocabulary. One discount per
// order: `discount` if given, else EstimateKnDiscount of that order's
// effective counts.
NGramModel TrainKneserNey(const CountTable &counts,
                          std::optional<double> discount = std::nullopt);

// Maximum-likelihood unigram over the n most frequent corpus words (ties
// broken lexicographically), with <unk> carrying the residual mass (floored
// at 1e-10 when the n words cover everything).
NGramModel TopFrequentUnigram(const std::vector<Transcript> &corpus, int n);

// The per-utterance biased model: p(w|h) = lambda*p_utt(w|h) +
// (1-lambda)*p_bg(w), materialized over the union vocabulary and
// renormalized per context. Contexts are those of the utterance 4-gram;
// every row is stored in full, so backoff only fires for unseen histories.
NGramModel BuildBiasedLm(const Transcript &transcript,
                         const NGramModel &background, double lambda = 0.9,
                         int order = 4);

// ARPA text format (log10, %.7f, grams in sorted order).
std::string WriteArpa(const NGramModel &model);
NGramModel ReadArpa(std::string_view text);

}  // namespace tqa

#endif  // TQA_LM_H_
