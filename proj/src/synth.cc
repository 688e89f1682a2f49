// src/synth.cc

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

#include "tqa/synth.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <thread>
#include <utility>

#include "tqa/io.h"
#include "tqa/rng.h"

namespace tqa {

namespace {

void CheckRange(const IntRange &r, const char *what) {
  if (r.lo < 1 || r.hi < r.lo)
    throw ConfigError(std::string(what) + " must be a non-empty positive range");
}

std::string ZeroPadded(const char *prefix, int i, int width) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, std::min(width, 19), i);
  return buf;
}

int DigitsFor(int n) {
  int width = 1;
  for (int x = n - 1; x >= 10; x /= 10) ++width;
  return width;
}

// Streams of the corpus seed; see the header comment.
uint64_t LexiconSeed(uint64_t seed) { return SplitSeed(seed, 0); }
uint64_t TruthSeed(uint64_t seed, int u) {
  return SplitSeed(seed, 3 * static_cast<uint64_t>(u) + 1);
}
uint64_t CorruptSeed(uint64_t seed, int u) {
  return SplitSeed(seed, 3 * static_cast<uint64_t>(u) + 2);
}
uint64_t PosteriorSeed(uint64_t seed, int u) {
  return SplitSeed(seed, 3 * static_cast<uint64_t>(u) + 3);
}

PhoneSet MakePhones(int k) {
  std::vector<std::string> symbols;
  symbols.reserve(k);
  for (int i = 0; i < k; ++i) {
    std::string s(1, static_cast<char>('a' + i % 26));
    s += std::to_string(i / 26 + 1);
    symbols.push_back(std::move(s));
  }
  return PhoneSet(std::move(symbols));
}

// Distinct pronunciations available under cfg, saturating well above any
// plausible lexicon size.
double DistinctPronunciations(const CorpusConfig &cfg) {
  double total = 0.0;
  for (int len = cfg.phones_per_word.lo; len <= cfg.phones_per_word.hi; ++len) {
    total += std::pow(static_cast<double>(cfg.num_phones), len);
    if (total > 1e15) return 1e15;
  }
  return total;
}

std::vector<std::vector<int>> DrawPronunciations(const CorpusConfig &cfg,
                                                 int need, Rng *rng) {
  const double total = DistinctPronunciations(cfg);
  if (static_cast<double>(need) > total)
    throw ConfigError("lexicon_size exceeds the distinct pronunciation count");

  // Dense demand: enumerate and shuffle instead of rejection-sampling a
  // nearly exhausted space.
  if (total <= 1e6 && static_cast<double>(need) > total / 4.0) {
    std::vector<std::vector<int>> all;
    for (int len = cfg.phones_per_word.lo; len <= cfg.phones_per_word.hi;
         ++len) {
      std::vector<int> pron(len, 0);
      for (;;) {
        all.push_back(pron);
        int i = len - 1;
        while (i >= 0 && ++pron[i] == cfg.num_phones) pron[i--] = 0;
        if (i < 0) break;
      }
    }
    rng->Shuffle(&all);
    all.resize(need);
    return all;
  }

  std::set<std::vector<int>> used;
  std::vector<std::vector<int>> prons;
  long long attempts = 200LL * need + 1000;
  while (static_cast<int>(prons.size()) < need) {
    if (--attempts < 0)
      throw Error("pronunciation sampling exhausted; lexicon too dense");
    const int len = static_cast<int>(
        rng->UniformRange(cfg.phones_per_word.lo, cfg.phones_per_word.hi));
    std::vector<int> pron(len);
    for (int &p : pron)
      p = static_cast<int>(rng->UniformInt(cfg.num_phones));
    if (used.insert(pron).second) prons.push_back(std::move(pron));
  }
  return prons;
}

const std::vector<int> &PronOf(const Lexicon &lex, const std::string &word) {
  auto it = lex.entries.find(word);
  if (it == lex.entries.end() || it->second.empty())
    throw ValidationError("word not in lexicon: " + word);
  return it->second[0];
}

void FairDivide(const std::vector<int> &phones, long long budget,
                std::vector<Alignment::Segment> *out) {
  const long long m = static_cast<long long>(phones.size());
  for (long long i = 0; i < m; ++i) {
    const int dur =
        static_cast<int>(budget * (i + 1) / m - budget * i / m);
    out->push_back({phones[i], dur});
  }
}

}  // namespace

void CorpusConfig::Validate() const {
  if (num_utterances < 1)
    throw ConfigError("num_utterances must be positive");
  if (lexicon_size < 2) throw ConfigError("lexicon_size must be at least 2");
  if (num_phones < 1) throw ConfigError("num_phones must be positive");
  CheckRange(words_per_utterance, "words_per_utterance");
  CheckRange(phones_per_word, "phones_per_word");
  CheckRange(frames_per_phone, "frames_per_phone");
  if (homophone_pairs < 0 || 2 * homophone_pairs > lexicon_size)
    throw ConfigError("homophone_pairs must fit within lexicon_size");
}

void NoiseConfig::Validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("alpha must lie in (0, 1]");
  if (!(spread > 0.0) || !std::isfinite(spread))
    throw ConfigError("spread must be positive and finite");
  if (duration_jitter < 0)
    throw ConfigError("duration_jitter must be non-negative");
}

void ErrorRates::Validate() const {
  for (double r : {insertion, deletion, substitution})
    if (!(r >= 0.0 && r < 1.0))
      throw ConfigError("error rates must lie in [0, 1)");
  if (!(clustering > 0.0 && clustering <= 1.0))
    throw ConfigError("clustering must lie in (0, 1]");
  if (!(PerWord() < 1.0))
    throw ConfigError("insertion + deletion + substitution must be < 1");
  if (!(PerWord() < clustering))
    throw ConfigError(
        "per-word rate must stay below the clustering gate so conditional "
        "rates remain probabilities");
}

TrueCorpus GenCorpus(const CorpusConfig &cfg) {
  cfg.Validate();

  TrueCorpus corpus;
  corpus.phones = MakePhones(cfg.num_phones);

  Rng lex_rng(LexiconSeed(cfg.seed));
  const int unique = cfg.lexicon_size - cfg.homophone_pairs;
  std::vector<std::vector<int>> prons = DrawPronunciations(cfg, unique,
                                                           &lex_rng);
  const int name_width = DigitsFor(cfg.lexicon_size);
  std::vector<std::string> words(cfg.lexicon_size);
  for (int i = 0; i < cfg.lexicon_size; ++i) {
    words[i] = ZeroPadded("w", i, name_width);
    // Homophone words reuse the pronunciation of an earlier word.
    corpus.lexicon.entries[words[i]] = {prons[i < unique ? i : i - unique]};
  }
  corpus.lexicon.Validate(cfg.num_phones);

  const int id_width = std::max(4, DigitsFor(cfg.num_utterances));
  corpus.transcripts.reserve(cfg.num_utterances);
  corpus.alignments.reserve(cfg.num_utterances);
  for (int u = 0; u < cfg.num_utterances; ++u) {
    Rng rng(TruthSeed(cfg.seed, u));
    Transcript t;
    t.utt_id = ZeroPadded("utt", u, id_width);
    const int len = static_cast<int>(rng.UniformRange(
        cfg.words_per_utterance.lo, cfg.words_per_utterance.hi));
    Alignment a;
    a.utt_id = t.utt_id;
    for (int w = 0; w < len; ++w) {
      const auto &word = words[rng.UniformInt(words.size())];
      t.words.push_back(word);
      for (int phone : corpus.lexicon.entries.at(word)[0])
        a.segments.push_back(
            {phone, static_cast<int>(rng.UniformRange(
                        cfg.frames_per_phone.lo, cfg.frames_per_phone.hi))});
    }
    corpus.transcripts.push_back(std::move(t));
    corpus.alignments.push_back(std::move(a));
  }
  return corpus;
}

Posteriorgram GenPosteriors(const Alignment &ali, const NoiseConfig &noise,
                            int num_phones, uint64_t seed) {
  noise.Validate();
  ali.Validate(num_phones);
  if (ali.segments.empty())
    throw ValidationError("empty alignment: " + ali.utt_id);
  const int T = ali.TotalFrames();
  const int S = static_cast<int>(ali.segments.size());

  Rng rng(seed);

  // Jitter the internal boundaries, clamped so every segment keeps at least
  // one frame and the total stays T.
  std::vector<int> bound(S + 1, 0);
  for (int i = 0; i < S; ++i)
    bound[i + 1] = bound[i] + ali.segments[i].duration;
  if (noise.duration_jitter > 0) {
    for (int i = 1; i < S; ++i) {
      const int delta = static_cast<int>(
          rng.UniformRange(-noise.duration_jitter, noise.duration_jitter));
      bound[i] = std::clamp(bound[i] + delta, bound[i - 1] + 1, T - (S - i));
    }
  }

  Posteriorgram q(T, num_phones);
  if (noise.alpha == 1.0) {
    for (int s = 0; s < S; ++s)
      for (int t = bound[s]; t < bound[s + 1]; ++t)
        q.At(t, ali.segments[s].phone) = 1.0;
    return q;
  }

  // Confusion support of each phone: itself plus its (up to) three nearest
  // neighbors by index, a deterministic stand-in for phonetic similarity.
  const int c = std::min(3, num_phones - 1);
  std::vector<std::vector<int>> support(num_phones);
  for (int k = 0; k < num_phones; ++k) {
    std::vector<int> others;
    for (int j = 0; j < num_phones; ++j)
      if (j != k) others.push_back(j);
    std::sort(others.begin(), others.end(), [k](int a, int b) {
      const int da = std::abs(a - k), db = std::abs(b - k);
      return da != db ? da < db : a < b;
    });
    support[k].push_back(k);
    support[k].insert(support[k].end(), others.begin(), others.begin() + c);
  }
  std::vector<double> conc(1 + c);
  conc[0] = noise.spread * noise.alpha;
  for (int i = 1; i <= c; ++i)
    conc[i] = noise.spread * (1.0 - noise.alpha) / c;

  for (int s = 0; s < S; ++s) {
    const int k = ali.segments[s].phone;
    for (int t = bound[s]; t < bound[s + 1]; ++t) {
      if (c == 0) {  // single-phone inventory
        q.At(t, k) = 1.0;
        continue;
      }
      const std::vector<double> draw = rng.Dirichlet(conc);
      for (size_t i = 0; i < draw.size(); ++i)
        q.At(t, support[k][i]) = draw[i];
    }
  }
  return q;
}

CorruptionResult CorruptTranscript(const Transcript &truth,
                                   const ErrorRates &rates, const Lexicon &lex,
                                   uint64_t seed) {
  rates.Validate();
  const int W = static_cast<int>(truth.words.size());

  CorruptionResult out;
  out.observed.utt_id = truth.utt_id;
  out.breakdown.ref_len = W;

  std::vector<std::string> words;
  words.reserve(lex.entries.size());
  for (const auto &[w, prons] : lex.entries) words.push_back(w);
  if (words.size() < 2)
    throw ValidationError("corruption needs at least two lexicon words");

  Rng rng(seed);
  if (W == 0 || !rng.Bernoulli(rates.clustering)) {
    out.observed.words = truth.words;
    out.breakdown.hits = W;
    return out;
  }

  const double pi = rates.insertion / rates.clustering;
  const double pd = rates.deletion / rates.clustering;
  const double ps = rates.substitution / rates.clustering;

  std::vector<std::string> subst(W);  // replacement word, empty if none
  std::vector<bool> deleted(W, false);
  int num_ins = 0;
  for (int i = 0; i < W; ++i) {
    const double u = rng.UniformDouble();
    if (u < pi) {
      ++num_ins;
    } else if (u < pi + pd) {
      deleted[i] = true;
      ++out.breakdown.deletions;
    } else if (u < pi + pd + ps) {
      const auto at = std::lower_bound(words.begin(), words.end(),
                                       truth.words[i]);
      if (at == words.end() || *at != truth.words[i])
        throw ValidationError("transcript word not in lexicon: " +
                              truth.words[i]);
      const size_t idx = static_cast<size_t>(at - words.begin());
      const size_t r = rng.UniformInt(words.size() - 1);
      subst[i] = words[r < idx ? r : r + 1];
      ++out.breakdown.substitutions;
    }
  }

  std::vector<std::vector<std::string>> ins_at(W + 1);
  for (int j = 0; j < num_ins; ++j) {
    const auto &word = words[rng.UniformInt(words.size())];
    ins_at[rng.UniformInt(W + 1)].push_back(word);
  }
  out.breakdown.insertions = num_ins;
  out.breakdown.hits =
      W - out.breakdown.deletions - out.breakdown.substitutions;

  for (int g = 0; g <= W; ++g) {
    for (const auto &word : ins_at[g]) {
      out.edits.push_back({AppliedEdit::Kind::kInsertion, g, word});
      out.observed.words.push_back(word);
    }
    if (g == W) break;
    if (deleted[g]) {
      out.edits.push_back({AppliedEdit::Kind::kDeletion, g, ""});
    } else if (!subst[g].empty()) {
      out.edits.push_back({AppliedEdit::Kind::kSubstitution, g, subst[g]});
      out.observed.words.push_back(subst[g]);
    } else {
      out.observed.words.push_back(truth.words[g]);
    }
  }

  out.label =
      out.breakdown.Edits() > 0 ? Label::kErroneous : Label::kCorrect;
  return out;
}

Alignment ObservedAlignment(const Alignment &ali_true, const Transcript &truth,
                            const std::vector<AppliedEdit> &edits,
                            const Lexicon &lex) {
  const int W = static_cast<int>(truth.words.size());
  const int T = ali_true.TotalFrames();

  // Per-word spans of the true alignment, checked against the lexicon.
  struct Span {
    size_t first = 0;
    size_t count = 0;
    long long frames = 0;
  };
  std::vector<Span> spans(W);
  size_t seg = 0;
  for (int w = 0; w < W; ++w) {
    const std::vector<int> &pron = PronOf(lex, truth.words[w]);
    spans[w].first = seg;
    spans[w].count = pron.size();
    for (size_t i = 0; i < pron.size(); ++i, ++seg) {
      if (seg >= ali_true.segments.size() ||
          ali_true.segments[seg].phone != pron[i])
        throw ValidationError("alignment does not spell the transcript: " +
                              ali_true.utt_id);
      spans[w].frames += ali_true.segments[seg].duration;
    }
  }
  if (seg != ali_true.segments.size())
    throw ValidationError("alignment has trailing segments: " +
                          ali_true.utt_id);

  // One block per observed word. true_word >= 0 marks an untouched word whose
  // exact true segments survive; everything else splits its budget evenly.
  struct Block {
    std::vector<int> phones;
    long long budget = 0;
    int true_word = -1;
  };
  std::vector<Block> blocks;
  long long carry = 0;  // frames freed before the first block existed
  auto push = [&](Block b) {
    if (carry > 0) {
      b.budget += carry;
      b.true_word = -1;
      carry = 0;
    }
    blocks.push_back(std::move(b));
  };
  auto release = [&](long long frames) {
    if (blocks.empty()) {
      carry += frames;
    } else {
      blocks.back().budget += frames;
      blocks.back().true_word = -1;
    }
  };

  size_t e = 0;
  for (int g = 0; g <= W; ++g) {
    while (e < edits.size() && edits[e].pos == g &&
           edits[e].kind == AppliedEdit::Kind::kInsertion) {
      push({PronOf(lex, edits[e].word), 0, -1});
      ++e;
    }
    if (g == W) break;
    if (e < edits.size() && edits[e].pos == g &&
        edits[e].kind == AppliedEdit::Kind::kDeletion) {
      release(spans[g].frames);
      ++e;
    } else if (e < edits.size() && edits[e].pos == g &&
               edits[e].kind == AppliedEdit::Kind::kSubstitution) {
      push({PronOf(lex, edits[e].word), spans[g].frames, -1});
      ++e;
    } else {
      push({PronOf(lex, truth.words[g]), spans[g].frames, g});
    }
  }
  if (e != edits.size())
    throw ValidationError("edit positions out of range: " + ali_true.utt_id);

  Alignment out;
  out.utt_id = ali_true.utt_id;

  // Everything deleted: no transcript left to align, so park the whole
  // utterance on phone 0. Downstream treats the utterance as one long
  // mismatch, which is what an empty transcript deserves.
  if (blocks.empty()) {
    out.segments.push_back({0, T});
    return out;
  }

  // Zero-budget blocks (insertions) share frames with the next real word;
  // trailing ones share with the last.
  std::vector<std::vector<size_t>> groups;
  std::vector<size_t> open;
  for (size_t i = 0; i < blocks.size(); ++i) {
    open.push_back(i);
    if (blocks[i].budget > 0) {
      groups.push_back(open);
      open.clear();
    }
  }
  if (!open.empty())
    groups.back().insert(groups.back().end(), open.begin(), open.end());

  bool feasible = true;
  for (const auto &group : groups) {
    long long budget = 0;
    std::vector<int> phones;
    for (size_t i : group) {
      budget += blocks[i].budget;
      phones.insert(phones.end(), blocks[i].phones.begin(),
                    blocks[i].phones.end());
    }
    if (budget < static_cast<long long>(phones.size())) {
      feasible = false;
      break;
    }
    if (group.size() == 1 && blocks[group[0]].true_word >= 0) {
      const Span &s = spans[blocks[group[0]].true_word];
      for (size_t i = 0; i < s.count; ++i)
        out.segments.push_back(ali_true.segments[s.first + i]);
    } else {
      FairDivide(phones, budget, &out.segments);
    }
  }

  if (!feasible) {
    // Some region is too short for its phones; spread the whole utterance
    // instead, or truncate when even that cannot fit.
    out.segments.clear();
    std::vector<int> phones;
    for (const auto &b : blocks)
      phones.insert(phones.end(), b.phones.begin(), b.phones.end());
    if (static_cast<long long>(phones.size()) <= T) {
      FairDivide(phones, T, &out.segments);
    } else {
      for (int t = 0; t < T; ++t) out.segments.push_back({phones[t], 1});
    }
  }
  return out;
}

SynthSpec PresetSpec(std::string_view name) {
  SynthSpec spec;  // "default"
  spec.rates = {0.0101, 0.0069, 0.0242, 1.0};
  if (name == "default") return spec;
  if (name == "fig2") {
    spec.corpus.num_utterances = 11903;
    spec.corpus.words_per_utterance = {10, 10};
    spec.rates.clustering = 0.16;
    return spec;
  }
  if (name == "clean") {
    spec.corpus.num_utterances = 200;
    spec.noise = {1.0, 8.0, 0};
    spec.rates = {0.0, 0.0, 0.0, 1.0};
    return spec;
  }
  throw ConfigError("unknown preset: " + std::string(name));
}

SynthSummary SynthesizeCorpus(const std::string &dir, const SynthSpec &spec,
                              int jobs) {
  spec.corpus.Validate();
  spec.noise.Validate();
  spec.rates.Validate();
  if (jobs < 1) throw ConfigError("jobs must be positive");

  TrueCorpus corpus = GenCorpus(spec.corpus);
  const int N = spec.corpus.num_utterances;

  std::vector<Transcript> observed(N);
  std::vector<Alignment> observed_ali(N);
  std::vector<EditBreakdown> breakdowns(N);
  std::string labels;
  SynthSummary summary;
  summary.num_utterances = N;
  for (int u = 0; u < N; ++u) {
    CorruptionResult c =
        CorruptTranscript(corpus.transcripts[u], spec.rates, corpus.lexicon,
                          CorruptSeed(spec.corpus.seed, u));
    observed_ali[u] = ObservedAlignment(corpus.alignments[u],
                                        corpus.transcripts[u], c.edits,
                                        corpus.lexicon);
    breakdowns[u] = c.breakdown;
    if (c.label == Label::kErroneous) ++summary.num_erroneous;
    labels += c.observed.utt_id;
    labels += '\t';
    labels += LabelName(c.label);
    labels += '\t';
    labels += std::to_string(c.breakdown.Edits());
    labels += '\n';
    observed[u] = std::move(c.observed);
  }
  summary.applied = CorpusReport(breakdowns);

  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "post");

  std::string phones_txt;
  for (const auto &s : corpus.phones.Symbols()) {
    phones_txt += s;
    phones_txt += '\n';
  }
  WriteStringToFile(dir + "/phones.txt", phones_txt);
  WriteStringToFile(dir + "/lexicon.txt",
                    FormatLexicon(corpus.lexicon, corpus.phones));
  WriteStringToFile(dir + "/text_true.tsv",
                    FormatTranscripts(corpus.transcripts));
  WriteStringToFile(dir + "/text.tsv", FormatTranscripts(observed));
  WriteStringToFile(dir + "/ali_true.tsv",
                    FormatAlignments(corpus.alignments, corpus.phones));
  WriteStringToFile(dir + "/ali.tsv",
                    FormatAlignments(observed_ali, corpus.phones));
  WriteStringToFile(dir + "/labels.tsv", labels);

  std::atomic<size_t> next{0};
  std::vector<std::string> failures(N);
  std::vector<long long> frames(N, 0);
  auto worker = [&]() {
    for (;;) {
      const size_t u = next.fetch_add(1);
      if (u >= static_cast<size_t>(N)) return;
      try {
        Posteriorgram q =
            GenPosteriors(corpus.alignments[u], spec.noise,
                          spec.corpus.num_phones,
                          PosteriorSeed(spec.corpus.seed, static_cast<int>(u)));
        frames[u] = q.NumFrames();
        WriteStringToFile(
            dir + "/post/" + corpus.alignments[u].utt_id + ".post",
            WritePosteriorgram(q));
      } catch (const std::exception &ex) {
        failures[u] = ex.what();
      }
    }
  };
  const int n_threads = std::min<int>(jobs, N);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto &th : pool) th.join();

  for (int u = 0; u < N; ++u) {
    if (!failures[u].empty())
      throw Error("synthesis failed for " + corpus.alignments[u].utt_id +
                  ": " + failures[u]);
    summary.total_frames += frames[u];
  }
  return summary;
}

}  // namespace tqa
