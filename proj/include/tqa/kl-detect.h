// tqa/kl-detect.h

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
// Acoustic-side detector: frame-wise symmetric KL divergence between the
// alignment posteriorgram and the classifier posteriorgram, median-smoothed,
// scored by its standard deviation over the utterance.

#ifndef TQA_KL_DETECT_H_
#define TQA_KL_DETECT_H_

#include <span>
#include <string>
#include <vector>

#include "tqa/types.h"

namespace tqa {

// Per-frame divergence track, in nats. All values finite and >= 0.
struct KLTrack {
  std::string utt_id;
  std::vector<double> values;

  int NumFrames() const { return static_cast<int>(values.size()); }
};

struct SmoothingConfig {
  int half_window = 7;  // window = 2N+1 frames
};

// Symmetric KL divergence between two stochastic vectors. Both arguments are
// floored at `floor` and renormalized before the logs so zero coordinates
// stay finite. Each summand is written as (p_k - q_k)*(log p_k - log q_k),
// which is >= 0 term by term and makes FrameKl(p, q) == FrameKl(q, p) hold
// bitwise, not just approximately.
double FrameKl(std::span<const double> p, std::span<const double> q,
               double floor = kProbFloor);

// FrameKl applied frame-by-frame to two shape-matched posteriorgrams.
KLTrack ComputeKlTrack(const Posteriorgram &ref, const Posteriorgram &hyp,
                       double floor = kProbFloor,
                       const std::string &utt_id = "");

// Running median with window [t-N, t+N], truncated at the utterance edges
// rather than padded. Median of an even count is the mean of the two middle
// values.
KLTrack MedianSmooth(const KLTrack &track, const SmoothingConfig &cfg);

// Population standard deviation (divide by T) of the track. Dispersion, not
// level: a transcription error perturbs some frames much more than others,
// widening the track. Throws on an empty track.
double UtteranceScore(const KLTrack &track);

// Erroneous iff score > threshold; a tie classifies as correct.
Label Detect(double score, double threshold);

// Keeps only frames with keep[t] == true (used to drop silence frames before
// smoothing when so configured).
KLTrack FilterFrames(const KLTrack &track, const std::vector<bool> &keep);

}  // namespace tqa

#endif  // TQA_KL_DETECT_H_
