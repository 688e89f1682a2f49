// tqa/lm.cc

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

#include "tqa/lm.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace tqa {

namespace {

constexpr double kLog10 = 2.302585092994046;  // ln(10)
// Conventional ARPA placeholder for the unpredictable <s> token.
constexpr double kSentenceBeginLogProb = -99.0 * kLog10;

std::string JoinGram(const Gram &g) {
  std::string out;
  for (size_t i = 0; i < g.size(); ++i) {
    if (i) out += ' ';
    out += g[i];
  }
  return out;
}

}  // namespace

void AccumulateNgrams(const std::vector<std::string> &tokens,
                      CountTable *table) {
  if (table->order < 1 || table->order > 4)
    throw ConfigError("n-gram order must be in [1,4]");
  if (table->counts.empty()) table->counts.resize(table->order);

  std::vector<std::string> wrapped;
  wrapped.reserve(tokens.size() + 2);
  wrapped.push_back(kSentenceBegin);
  for (const auto &w : tokens) {
    if (w.empty()) throw ValidationError("empty word in sentence");
    if (w == kSentenceBegin || w == kSentenceEnd)
      throw ValidationError("sentence contains a reserved boundary token");
    wrapped.push_back(w);
  }
  wrapped.push_back(kSentenceEnd);

  for (int k = 1; k <= table->order; ++k)
    for (size_t i = 0; i + k <= wrapped.size(); ++i)
      ++table->counts[k - 1][Gram(wrapped.begin() + i,
                                  wrapped.begin() + i + k)];
}

CountTable CountNgrams(const std::vector<std::string> &tokens, int order) {
  CountTable table;
  table.order = order;
  AccumulateNgrams(tokens, &table);
  return table;
}

double EstimateKnDiscount(const std::map<Gram, long long> &counts) {
  long long n1 = 0, n2 = 0;
  for (const auto &[g, c] : counts) {
    if (c == 1) ++n1;
    if (c == 2) ++n2;
  }
  // The Good-Turing formula needs both counts-of-counts; on single-utterance
  // tables one of them is routinely zero.
  if (n1 == 0 || n2 == 0) return 0.5;
  return static_cast<double>(n1) / (static_cast<double>(n1) + 2.0 * n2);
}

bool NGramModel::InVocab(const std::string &word) const {
  return std::binary_search(vocab.begin(), vocab.end(), word);
}

double NGramModel::LogProb(std::span<const std::string> context,
                           const std::string &word) const {
  const std::string unk = kUnknownWord;
  const std::string &w = InVocab(word) ? word : unk;
  const size_t max_ctx = static_cast<size_t>(order - 1);
  if (context.size() > max_ctx)
    context = context.subspan(context.size() - max_ctx);

  double acc = 0.0;
  for (size_t start = 0;; ++start) {
    std::span<const std::string> ctx = context.subspan(start);
    Gram g(ctx.begin(), ctx.end());
    g.push_back(w);
    const auto &tab = table[ctx.size()];
    auto it = tab.find(g);
    if (it != tab.end()) return acc + it->second.logp;
    if (ctx.empty())
      throw Error("vocabulary word missing from the unigram table: " + w);
    auto cit = table[ctx.size() - 1].find(Gram(ctx.begin(), ctx.end()));
    if (cit != table[ctx.size() - 1].end()) acc += cit->second.logbow;
  }
}

double NGramModel::SentenceLogProb(
    const std::vector<std::string> &words) const {
  std::vector<std::string> history = {kSentenceBegin};
  double total = 0.0;
  for (const auto &w : words) {
    total += LogProb(history, w);
    history.push_back(w);
  }
  total += LogProb(history, kSentenceEnd);
  return total;
}

double NGramModel::Perplexity(const std::vector<std::string> &words) const {
  return std::exp(-SentenceLogProb(words) /
                  static_cast<double>(words.size() + 1));
}

void NGramModel::ValidateNormalization(double tol) const {
  if (vocab.size() > 10000)
    throw ConfigError("vocabulary too large to enumerate");
  std::vector<Gram> contexts = {{}};
  for (int k = 1; k < order; ++k)
    for (const auto &[g, e] : table[k - 1]) contexts.push_back(g);
  for (const auto &ctx : contexts) {
    double sum = 0.0;
    for (const auto &w : vocab) sum += std::exp(LogProb(ctx, w));
    if (std::abs(sum - 1.0) > tol)
      throw ValidationError("context '" + JoinGram(ctx) + "' sums to " +
                            std::to_string(sum));
  }
}

NGramModel TrainKneserNey(const CountTable &counts,
                          std::optional<double> discount) {
  const int n = counts.order;
  if (n < 1 || n > 4) throw ConfigError("n-gram order must be in [1,4]");
  if (counts.counts.empty() || counts.Order(1).empty())
    throw ValidationError("empty count table");
  if (discount && !(*discount > 0.0 && *discount < 1.0))
    throw ConfigError("discount must lie in (0,1)");

  // Effective counts: raw at the top order; below it a gram's count is the
  // number of distinct predecessors it was seen with (continuation count).
  // Grams starting with <s> keep raw counts — nothing ever precedes <s>, so
  // their continuation count would vanish.
  std::vector<std::map<Gram, long long>> eff(n);
  eff[n - 1] = counts.Order(n);
  for (int k = n - 1; k >= 1; --k) {
    for (const auto &[g, c] : counts.Order(k))
      if (g.front() == kSentenceBegin) eff[k - 1][g] = c;
    for (const auto &[g, c] : counts.Order(k + 1))
      ++eff[k - 1][Gram(g.begin() + 1, g.end())];
  }

  NGramModel model;
  model.order = n;
  model.table.resize(n);
  {
    std::set<std::string> vocab_set{kSentenceEnd, kUnknownWord};
    for (const auto &[g, c] : counts.Order(1))
      if (g.front() != kSentenceBegin) vocab_set.insert(g.front());
    model.vocab.assign(vocab_set.begin(), vocab_set.end());
  }

  std::vector<double> d(n);
  for (int k = 1; k <= n; ++k)
    d[k - 1] = discount ? *discount : EstimateKnDiscount(eff[k - 1]);

  // Unigram level: discounted (continuation) counts interpolated with the
  // uniform distribution over the predictable vocabulary.
  long long total1 = 0, types1 = 0;
  for (const auto &w : model.vocab) {
    auto it = eff[0].find({w});
    if (it != eff[0].end()) {
      total1 += it->second;
      ++types1;
    }
  }
  if (total1 == 0) throw ValidationError("no unigram mass");
  const double gamma1 =
      d[0] * static_cast<double>(types1) / static_cast<double>(total1);
  const double uniform = 1.0 / static_cast<double>(model.vocab.size());
  for (const auto &w : model.vocab) {
    auto it = eff[0].find({w});
    double c = it == eff[0].end() ? 0.0 : static_cast<double>(it->second);
    double p = std::max(c - d[0], 0.0) / static_cast<double>(total1) +
               gamma1 * uniform;
    model.table[0][{w}] = {std::log(p), 0.0};
  }
  if (counts.Order(1).count({std::string(kSentenceBegin)}))
    model.table[0][{std::string(kSentenceBegin)}] = {kSentenceBeginLogProb,
                                                     0.0};

  for (int k = 2; k <= n; ++k) {
    const auto &tab = eff[k - 1];
    auto it = tab.begin();
    while (it != tab.end()) {
      // Grams sharing a context are adjacent under lexicographic order.
      Gram ctx(it->first.begin(), it->first.end() - 1);
      long long total = 0, types = 0;
      auto run_end = it;
      while (run_end != tab.end() &&
             std::equal(ctx.begin(), ctx.end(), run_end->first.begin(),
                        run_end->first.end() - 1)) {
        total += run_end->second;
        ++types;
        ++run_end;
      }
      const double gamma =
          d[k - 1] * static_cast<double>(types) / static_cast<double>(total);
      for (auto g = it; g != run_end; ++g) {
        std::span<const std::string> tail(ctx.data() + 1, ctx.size() - 1);
        double p_low = std::exp(model.LogProb(tail, g->first.back()));
        double p = std::max(static_cast<double>(g->second) - d[k - 1], 0.0) /
                       static_cast<double>(total) +
                   gamma * p_low;
        model.table[k - 1][g->first] = {std::log(p), 0.0};
      }
      auto ce = model.table[k - 2].find(ctx);
      if (ce == model.table[k - 2].end())
        throw Error("internal: context '" + JoinGram(ctx) + "' not stored");
      ce->second.logbow = std::log(gamma);
      it = run_end;
    }
  }
  return model;
}

NGramModel TopFrequentUnigram(const std::vector<Transcript> &corpus, int n) {
  if (n < 1) throw ConfigError("top-word count must be >= 1");
  std::map<std::string, long long> freq;
  long long total = 0;
  for (const auto &t : corpus)
    for (const auto &w : t.words) {
      if (w == kSentenceBegin || w == kSentenceEnd)
        throw ValidationError("transcript contains a reserved token");
      ++freq[w];
      ++total;
    }
  if (total == 0) throw ValidationError("empty corpus");

  // Sort by count descending; stable sort over the lexicographic map order
  // breaks ties toward the smaller word.
  std::vector<std::pair<std::string, long long>> by_freq(freq.begin(),
                                                         freq.end());
  std::stable_sort(
      by_freq.begin(), by_freq.end(),
      [](const auto &a, const auto &b) { return a.second > b.second; });
  const size_t keep = std::min<size_t>(n, by_freq.size());

  long long kept_mass = 0;
  for (size_t i = 0; i < keep; ++i) kept_mass += by_freq[i].second;
  const long long residual = total - kept_mass;

  NGramModel model;
  model.order = 1;
  model.table.resize(1);
  {
    std::set<std::string> vocab_set{kUnknownWord};
    for (size_t i = 0; i < keep; ++i) vocab_set.insert(by_freq[i].first);
    model.vocab.assign(vocab_set.begin(), vocab_set.end());
  }
  const double denom = static_cast<double>(total);
  double unk_p, scale = 1.0;
  if (residual > 0) {
    unk_p = static_cast<double>(residual) / denom;
  } else {
    // Closed vocabulary: keep <unk> queryable with a floor, squeezing the
    // kept words by the complementary factor so the mass stays 1.
    unk_p = 1e-10;
    scale = 1.0 - 1e-10;
  }
  model.table[0][{std::string(kUnknownWord)}] = {std::log(unk_p), 0.0};
  for (size_t i = 0; i < keep; ++i)
    model.table[0][{by_freq[i].first}] = {
        std::log(scale * static_cast<double>(by_freq[i].second) / denom),
        0.0};
  return model;
}

NGramModel BuildBiasedLm(const Transcript &transcript,
                         const NGramModel &background, double lambda,
                         int order) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ConfigError("interpolation weight must lie in (0,1)");
  if (transcript.words.empty())
    throw ValidationError("cannot build a biased model from empty transcript " +
                          transcript.utt_id);
  NGramModel utt = TrainKneserNey(CountNgrams(transcript.words, order));

  NGramModel model;
  model.order = order;
  model.table.resize(order);
  {
    std::set<std::string> vocab_set(utt.vocab.begin(), utt.vocab.end());
    vocab_set.insert(background.vocab.begin(), background.vocab.end());
    model.vocab.assign(vocab_set.begin(), vocab_set.end());
  }

  // Each component contributes mass only over its own vocabulary — mapping
  // the other side's words onto <unk> would hand every one of them the full
  // <unk> probability and inflate the row. Mixed this way the row sums to
  // lambda + (1-lambda) = 1; the renormalization below only scrubs the
  // floating-point residue.
  std::vector<double> bg_p(model.vocab.size(), 0.0);
  std::vector<bool> in_utt(model.vocab.size());
  for (size_t i = 0; i < model.vocab.size(); ++i) {
    if (background.InVocab(model.vocab[i]))
      bg_p[i] = std::exp(background.LogProb({}, model.vocab[i]));
    in_utt[i] = utt.InVocab(model.vocab[i]);
  }

  std::vector<Gram> contexts = {{}};
  for (int k = 1; k < order; ++k)
    for (const auto &[g, e] : utt.table[k - 1]) contexts.push_back(g);

  std::vector<double> row(model.vocab.size());
  for (const auto &ctx : contexts) {
    double sum = 0.0;
    for (size_t i = 0; i < model.vocab.size(); ++i) {
      row[i] = (in_utt[i]
                    ? lambda * std::exp(utt.LogProb(ctx, model.vocab[i]))
                    : 0.0) +
               (1.0 - lambda) * bg_p[i];
      sum += row[i];
    }
    auto &tab = model.table[ctx.size()];
    for (size_t i = 0; i < model.vocab.size(); ++i) {
      Gram g = ctx;
      g.push_back(model.vocab[i]);
      tab[std::move(g)] = {std::log(row[i] / sum), 0.0};
    }
  }
  if (utt.table[0].count({std::string(kSentenceBegin)}))
    model.table[0][{std::string(kSentenceBegin)}] = {kSentenceBeginLogProb,
                                                     0.0};
  return model;
}

std::string WriteArpa(const NGramModel &model) {
  std::string out = "\\data\\\n";
  for (int k = 1; k <= model.order; ++k)
    out += "ngram " + std::to_string(k) + "=" +
           std::to_string(model.table[k - 1].size()) + "\n";
  char buf[64];
  for (int k = 1; k <= model.order; ++k) {
    out += "\n\\" + std::to_string(k) + "-grams:\n";
    for (const auto &[g, e] : model.table[k - 1]) {
      std::snprintf(buf, sizeof(buf), "%.7f", e.logp / kLog10);
      out += buf;
      out += '\t';
      out += JoinGram(g);
      if (k < model.order) {
        std::snprintf(buf, sizeof(buf), "\t%.7f", e.logbow / kLog10);
        out += buf;
      }
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  return out;
}

NGramModel ReadArpa(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  long long line_no = 0;
  auto next_line = [&](bool required) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    if (required) throw ParseError("unexpected end of ARPA file", line_no);
    return false;
  };

  next_line(true);
  if (line != "\\data\\") throw ParseError("missing \\data\\ header", line_no);
  std::vector<long long> sizes;
  while (next_line(true) && line.rfind("ngram ", 0) == 0) {
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("malformed ngram size line", line_no);
    sizes.push_back(std::stoll(line.substr(eq + 1)));
  }
  if (sizes.empty() || sizes.size() > 4)
    throw ParseError("ARPA order must be in [1,4]", line_no);

  NGramModel model;
  model.order = static_cast<int>(sizes.size());
  model.table.resize(model.order);
  for (int k = 1; k <= model.order; ++k) {
    std::string header = "\\" + std::to_string(k) + "-grams:";
    if (line != header)
      throw ParseError("expected " + header, line_no);
    for (long long i = 0; i < sizes[k - 1]; ++i) {
      next_line(true);
      std::vector<std::string> fields;
      size_t pos = 0;
      while (pos <= line.size()) {
        size_t tab = line.find('\t', pos);
        if (tab == std::string::npos) {
          fields.push_back(line.substr(pos));
          break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
      }
      bool has_bow = k < model.order;
      if (fields.size() != (has_bow ? 3u : 2u))
        throw ParseError("malformed ARPA entry", line_no);
      Gram g;
      std::istringstream words(fields[1]);
      std::string w;
      while (words >> w) g.push_back(w);
      if (static_cast<int>(g.size()) != k)
        throw ParseError("gram order mismatch", line_no);
      NGramModel::Entry e;
      e.logp = std::stod(fields[0]) * kLog10;
      if (has_bow) e.logbow = std::stod(fields[2]) * kLog10;
      model.table[k - 1][std::move(g)] = e;
    }
    next_line(true);
  }
  if (line != "\\end\\") throw ParseError("missing \\end\\", line_no);

  std::set<std::string> vocab_set;
  for (const auto &[g, e] : model.table[0])
    if (g.front() != kSentenceBegin) vocab_set.insert(g.front());
  model.vocab.assign(vocab_set.begin(), vocab_set.end());
  if (!model.InVocab(kUnknownWord))
    throw ParseError("ARPA model lacks an <unk> unigram", line_no);
  return model;
}

}  // namespace tqa
