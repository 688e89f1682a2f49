// tqa/pipeline.h

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
// Batch orchestration over corpus directories: both detectors run one
// utterance at a time on a worker pool, collect one score per utterance, and
// quarantine per-utterance failures instead of aborting the batch. Scores
// come back ordered by utterance id regardless of scheduling.

#ifndef TQA_PIPELINE_H_
#define TQA_PIPELINE_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tqa/decode.h"
#include "tqa/eval.h"
#include "tqa/phone-rec.h"
#include "tqa/types.h"

namespace tqa {

// The light parts of a corpus directory; posteriorgrams stay on disk and are
// read per utterance.
struct CorpusOnDisk {
  std::string dir;
  PhoneSet phones;
  Lexicon lexicon;
  std::vector<Transcript> text;            // observed transcripts, id order
  std::map<std::string, Alignment> ali;    // observed alignments by id
  std::map<std::string, Label> labels;     // empty when labels.tsv is absent

  std::string PosteriorPath(const std::string &utt_id) const {
    return dir + "/post/" + utt_id + ".post";
  }
};

// Requires phones.txt, lexicon.txt, text.tsv, and ali.tsv; labels.tsv is
// optional (scores then carry no ground truth).
CorpusOnDisk LoadCorpus(const std::string &dir);

struct DetectReport {
  std::vector<LabeledScore> scores;    // successful utterances, id order
  std::vector<std::string> failures;   // "utt_id<TAB>what went wrong"
};

struct KlDetectOptions {
  int half_window = 7;                     // median window = 2N+1 frames
  double floor = kProbFloor;
  double epsilon = kDefaultOneHotEpsilon;  // alignment one-hot smoothing
  bool reestimate = true;                  // lattice-smooth the posteriors
  PhoneGraphConfig graph;                  // recognizer, when reestimating
  int jobs = 1;
};

// Scores every utterance with the standard deviation of its median-smoothed
// symmetric KL track between the alignment posteriorgram and the classifier
// posteriors.
DetectReport RunKlDetection(const CorpusOnDisk &corpus,
                            const KlDetectOptions &opt);

struct BiasedDetectOptions {
  double lambda = 0.9;   // transcript weight in the biased LM
  int top_n = 100;       // background unigram size
  int order = 4;         // biased LM order
  DecodeConfig decode;
  // Baseline arm: decode everything under one corpus-level LM instead of the
  // per-utterance biased one.
  bool general_lm = false;
  int general_order = 3;
  int jobs = 1;
};

// Scores every utterance with the clamped lattice-oracle WER of a decode
// against its own transcript.
DetectReport RunBiasedDetection(const CorpusOnDisk &corpus,
                                const BiasedDetectOptions &opt);

struct EvaluateOptions {
  // When auto_sweep is set, score files contained in [0, 1] get the WER
  // sweep and everything else the KL sweep; otherwise `sweep` applies to all.
  bool auto_sweep = true;
  SweepSpec sweep;
};

struct EvaluateResult {
  struct Entry {
    std::string name;
    SweepSpec sweep;
    DetCurve curve;
    EerResult eer;
  };
  std::vector<Entry> entries;
  std::string svg;  // all curves overlaid
};

// Throws ValidationError when a score set is single-class or unlabeled.
EvaluateResult Evaluate(
    const std::vector<std::pair<std::string, std::vector<LabeledScore>>>
        &score_sets,
    const EvaluateOptions &opt);

// "name<TAB>eer%<TAB>threshold<TAB>exact|degenerate" rows.
std::string FormatEerTable(const EvaluateResult &result);

// One key-value line per entry plus command, tool version, and wall clock.
// Reruns are byte-identical except for the wall-clock line.
void WriteManifest(
    const std::string &path, const std::string &command,
    const std::vector<std::pair<std::string, std::string>> &entries,
    double wall_seconds);

}  // namespace tqa

#endif  // TQA_PIPELINE_H_
