// src/pipeline.cc

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

#include "tqa/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <string_view>
#include <thread>

#include "tqa/align.h"
#include "tqa/io.h"
#include "tqa/kl-detect.h"
#include "tqa/lm.h"

namespace tqa {

namespace {

// Runs fn(u) for u in [0, n) on `jobs` threads into preallocated slots;
// per-utterance exceptions land in the failure slot instead of escaping.
template <typename Fn>
void ForEachUtterance(int n, int jobs, std::vector<std::string> *failures,
                      Fn fn) {
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int u = next.fetch_add(1);
      if (u >= n) return;
      try {
        fn(u);
      } catch (const std::exception &ex) {
        (*failures)[u] = ex.what();
      }
    }
  };
  const int n_threads = std::max(1, std::min(jobs, n));
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto &th : pool) th.join();
}

DetectReport Collect(const std::vector<Transcript> &text,
                     const std::vector<LabeledScore> &slots,
                     const std::vector<std::string> &failures) {
  DetectReport report;
  for (size_t u = 0; u < text.size(); ++u) {
    if (failures[u].empty()) {
      report.scores.push_back(slots[u]);
    } else {
      report.failures.push_back(text[u].utt_id + "\t" + failures[u]);
    }
  }
  return report;
}

LabeledScore MakeScore(const CorpusOnDisk &corpus, const std::string &utt_id,
                       double score) {
  LabeledScore s;
  s.utt_id = utt_id;
  s.score = score;
  auto it = corpus.labels.find(utt_id);
  if (it != corpus.labels.end()) {
    s.has_label = true;
    s.label = it->second;
  }
  return s;
}

}  // namespace

CorpusOnDisk LoadCorpus(const std::string &dir) {
  CorpusOnDisk corpus;
  corpus.dir = dir;
  corpus.phones = ParsePhoneSet(ReadFileToString(dir + "/phones.txt"));
  corpus.lexicon =
      ParseLexicon(ReadFileToString(dir + "/lexicon.txt"), corpus.phones);
  corpus.lexicon.Validate(corpus.phones.NumPhones());
  corpus.text = ParseTranscripts(ReadFileToString(dir + "/text.tsv"));
  std::sort(corpus.text.begin(), corpus.text.end(),
            [](const Transcript &a, const Transcript &b) {
              return a.utt_id < b.utt_id;
            });
  for (auto &ali :
       ParseAlignments(ReadFileToString(dir + "/ali.tsv"), corpus.phones)) {
    std::string id = ali.utt_id;
    corpus.ali.emplace(std::move(id), std::move(ali));
  }
  // labels.tsv ("utt_id<TAB>label[<TAB>edits]") is optional.
  if (std::filesystem::exists(dir + "/labels.tsv")) {
    const std::string text = ReadFileToString(dir + "/labels.tsv");
    size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
      size_t eol = text.find('\n', pos);
      if (eol == std::string::npos) eol = text.size();
      const std::string_view line(text.data() + pos, eol - pos);
      pos = eol + 1;
      ++line_no;
      if (line.empty()) continue;
      const size_t tab1 = line.find('\t');
      if (tab1 == std::string_view::npos || tab1 == 0)
        throw ParseError("labels.tsv: expected utt_id<TAB>label", line_no);
      size_t tab2 = line.find('\t', tab1 + 1);
      if (tab2 == std::string_view::npos) tab2 = line.size();
      const std::string_view name = line.substr(tab1 + 1, tab2 - tab1 - 1);
      Label label;
      if (name == LabelName(Label::kCorrect)) {
        label = Label::kCorrect;
      } else if (name == LabelName(Label::kErroneous)) {
        label = Label::kErroneous;
      } else {
        throw ParseError("labels.tsv: unknown label: " + std::string(name),
                         line_no);
      }
      corpus.labels[std::string(line.substr(0, tab1))] = label;
    }
  }
  return corpus;
}

DetectReport RunKlDetection(const CorpusOnDisk &corpus,
                            const KlDetectOptions &opt) {
  if (opt.half_window < 0)
    throw ConfigError("half_window must be non-negative");
  if (!(opt.floor > 0.0)) throw ConfigError("floor must be positive");
  if (opt.reestimate) opt.graph.Validate();
  const int n = static_cast<int>(corpus.text.size());
  const int num_phones = corpus.phones.NumPhones();

  std::vector<LabeledScore> slots(n);
  std::vector<std::string> failures(n);
  ForEachUtterance(n, opt.jobs, &failures, [&](int u) {
    const std::string &utt_id = corpus.text[u].utt_id;
    auto it = corpus.ali.find(utt_id);
    if (it == corpus.ali.end())
      throw ValidationError("no alignment for utterance");
    Posteriorgram p =
        AlignmentToPosteriorgram(it->second, num_phones, opt.epsilon);
    Posteriorgram q =
        ReadPosteriorgram(ReadFileToString(corpus.PosteriorPath(utt_id)));
    if (opt.reestimate) q = LatticeReestimate(q, opt.graph);
    KLTrack track = ComputeKlTrack(p, q, opt.floor, utt_id);
    KLTrack smoothed = MedianSmooth(track, {opt.half_window});
    slots[u] = MakeScore(corpus, utt_id, UtteranceScore(smoothed));
  });
  return Collect(corpus.text, slots, failures);
}

DetectReport RunBiasedDetection(const CorpusOnDisk &corpus,
                                const BiasedDetectOptions &opt) {
  opt.decode.Validate();
  const int n = static_cast<int>(corpus.text.size());

  NGramModel shared;  // background unigram, or the general-LM baseline
  if (opt.general_lm) {
    CountTable counts;
    counts.order = opt.general_order;
    for (const auto &t : corpus.text) AccumulateNgrams(t.words, &counts);
    shared = TrainKneserNey(counts);
  } else {
    shared = TopFrequentUnigram(corpus.text, opt.top_n);
  }

  std::vector<LabeledScore> slots(n);
  std::vector<std::string> failures(n);
  ForEachUtterance(n, opt.jobs, &failures, [&](int u) {
    const Transcript &t = corpus.text[u];
    Posteriorgram q =
        ReadPosteriorgram(ReadFileToString(corpus.PosteriorPath(t.utt_id)));
    double rate;
    try {
      WordLattice lattice;
      if (opt.general_lm) {
        lattice = BeamDecode(q, corpus.lexicon, shared, opt.decode);
      } else {
        NGramModel biased =
            BuildBiasedLm(t, shared, opt.lambda, opt.order);
        lattice = BeamDecode(q, corpus.lexicon, biased, opt.decode);
      }
      rate = OracleWer(lattice, t.words).ClampedRate();
    } catch (const DecodeError &) {
      // A starved search is the narrow-beam limit of pruning monotonicity:
      // the lattice is empty, so the oracle rate takes its maximal value.
      rate = 1.0;
    }
    slots[u] = MakeScore(corpus, t.utt_id, rate);
  });
  return Collect(corpus.text, slots, failures);
}

EvaluateResult Evaluate(
    const std::vector<std::pair<std::string, std::vector<LabeledScore>>>
        &score_sets,
    const EvaluateOptions &opt) {
  if (score_sets.empty()) throw ValidationError("no score sets to evaluate");
  EvaluateResult result;
  std::vector<NamedCurve> named;
  for (const auto &[name, scores] : score_sets) {
    SweepSpec sweep = opt.sweep;
    if (opt.auto_sweep) {
      bool unit_range = true;
      for (const auto &s : scores)
        unit_range = unit_range && s.score >= 0.0 && s.score <= 1.0;
      sweep = unit_range ? SweepSpec::WerSweep() : SweepSpec::KlSweep();
    }
    EvaluateResult::Entry entry;
    entry.name = name;
    entry.sweep = sweep;
    entry.curve = ComputeDetCurve(scores, sweep);
    entry.eer = ComputeEer(entry.curve);
    named.push_back({name, entry.curve});
    result.entries.push_back(std::move(entry));
  }
  result.svg = RenderDetSvg(named);
  return result;
}

std::string FormatEerTable(const EvaluateResult &result) {
  std::string out = "detector\teer\tthreshold\tcrossing\n";
  char buf[96];
  for (const auto &e : result.entries) {
    std::snprintf(buf, sizeof(buf), "%s\t%.2f%%\t%.6f\t%s\n", e.name.c_str(),
                  100.0 * e.eer.eer, e.eer.threshold,
                  e.eer.degenerate ? "degenerate" : "exact");
    out += buf;
  }
  return out;
}

void WriteManifest(
    const std::string &path, const std::string &command,
    const std::vector<std::pair<std::string, std::string>> &entries,
    double wall_seconds) {
  std::string out;
  out += "command\t" + command + "\n";
  out += "tool_version\t";
  out += kToolVersion;
  out += "\n";
  for (const auto &[key, value] : entries)
    out += key + "\t" + value + "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "wall_clock_sec\t%.3f\n", wall_seconds);
  out += buf;
  WriteStringToFile(path, out);
}

}  // namespace tqa
