// tqa/eval.h

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
// Scoring and evaluation: word-level Levenshtein with an I/D/S breakdown,
// corpus error-rate aggregation, DET curves and interpolated EER.

#ifndef TQA_EVAL_H_
#define TQA_EVAL_H_

#include <string>
#include <vector>

#include "tqa/types.h"

namespace tqa {

// Alignment tally for one (hyp, ref) pair. hits + deletions + substitutions
// always equals ref_len.
struct EditBreakdown {
  long long insertions = 0;
  long long deletions = 0;
  long long substitutions = 0;
  long long hits = 0;
  long long ref_len = 0;

  long long Edits() const { return insertions + deletions + substitutions; }
  bool operator==(const EditBreakdown &other) const = default;
};

// Minimum-edit alignment with unit costs. When costs tie the backtrace
// prefers substitution over insertion over deletion, so the breakdown is
// deterministic and golden-testable.
EditBreakdown LevenshteinAlign(const std::vector<std::string> &hyp,
                               const std::vector<std::string> &ref);

struct CorpusSummary {
  long long num_sentences = 0;
  long long total_ref_len = 0;
  long long insertions = 0;
  long long deletions = 0;
  long long substitutions = 0;
  long long sentences_with_errors = 0;
  double wer = 0.0;       // (ins+del+sub) / total_ref_len
  double ser = 0.0;       // sentences with >= 1 edit / num_sentences
  double ins_rate = 0.0;  // per-type counts / total_ref_len
  double del_rate = 0.0;
  double sub_rate = 0.0;
};

// Pools counts before dividing — never an average of per-sentence ratios.
CorpusSummary CorpusReport(const std::vector<EditBreakdown> &breakdowns);
std::string FormatCorpusSummary(const CorpusSummary &summary);

// Detection error tradeoff under "erroneous iff score > threshold": FPR is
// the fraction of correct utterances flagged, FNR the fraction of erroneous
// ones missed. FPR never increases and FNR never decreases along the sweep.
struct DetCurve {
  struct Point {
    double threshold = 0.0;
    double fpr = 0.0;
    double fnr = 0.0;
  };
  std::vector<Point> points;
};

// Evenly spaced inclusive sweep. Defaults match the two detector score
// ranges: [0,1] for WER-type scores and [0,20] for KL-std scores.
struct SweepSpec {
  double lo = 0.0;
  double hi = 1.0;
  int num_points = 1001;

  static SweepSpec WerSweep() { return {0.0, 1.0, 1001}; }
  static SweepSpec KlSweep() { return {0.0, 20.0, 2001}; }
};

// Requires every score to carry a label and both classes to be present.
DetCurve ComputeDetCurve(const std::vector<LabeledScore> &scores,
                         const SweepSpec &sweep);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;  // sweep location of the crossing
  // True when FPR - FNR never changes sign along the curve; eer then holds
  // the midpoint rate at the point minimizing |FPR - FNR| and must be
  // treated as a bound, not an operating point.
  bool degenerate = false;
};

// Linear interpolation between the two sweep points bracketing the
// FPR = FNR crossing.
EerResult ComputeEer(const DetCurve &curve);

// "threshold<TAB>fpr<TAB>fnr" rows, %.6f.
std::string FormatDetCurveTsv(const DetCurve &curve);

// Inverse standard-normal CDF (Acklam's approximation), used to warp DET
// plot axes. Argument must lie strictly inside (0,1).
double Probit(double p);

struct NamedCurve {
  std::string name;
  DetCurve curve;
};

// Self-contained SVG, both axes warped by the inverse normal CDF as DET
// convention prescribes. No external resources.
std::string RenderDetSvg(const std::vector<NamedCurve> &curves);

}  // namespace tqa

#endif  // TQA_EVAL_H_
