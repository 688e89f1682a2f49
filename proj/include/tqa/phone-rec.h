// tqa/phone-rec.h

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
// Uniform-prior phoneme recognizer: Viterbi segmentation over a flat phone
// loop (equal priors, so no prior term appears anywhere) with a per-switch
// penalty and a minimum segment duration, plus a lattice-style re-estimation
// pass that sharpens per-frame posteriors while pruning hypotheses the beam
// never keeps.

#ifndef TQA_PHONE_REC_H_
#define TQA_PHONE_REC_H_

#include <string>
#include <vector>

#include "tqa/types.h"

namespace tqa {

struct PhoneGraphConfig {
  double switch_penalty = 2.0;  // nats per phone change, >= 0
  int min_duration = 3;         // frames; the final segment may be shorter
  double beam = 8.0;            // pruning width in nats, > 0 (inf allowed)

  void Validate() const;
};

// One decoded phone run.
struct PhoneSegment {
  int phone = 0;
  int start = 0;
  int duration = 0;

  bool operator==(const PhoneSegment &other) const = default;
};

// Segments tile [0, T): each starts where the previous one ended, and
// adjacent segments carry different phones.
struct PhoneSegmentation {
  std::vector<PhoneSegment> segments;
  double log_score = 0.0;

  int TotalFrames() const;
  std::vector<int> FramePhones() const;
  // Same shape as a forced alignment, so segmentations round-trip through
  // the alignment text format.
  Alignment ToAlignment(const std::string &utt_id) const;
  void Validate(int num_phones, int min_duration) const;
};

// Log-score of an arbitrary frame labelling: sum of log q_t(phone_t) with
// switch_penalty subtracted at every phone change, accumulated left to
// right in the same order the decoder uses, so scores compare exactly.
double SegmentationScore(const Posteriorgram &q,
                         const std::vector<int> &frame_phones,
                         double switch_penalty);

// Best-scoring segmentation under cfg. Every segment except the last must
// last at least cfg.min_duration frames; ties prefer staying in the current
// phone, then the lower phone index.
PhoneSegmentation ViterbiDecode(const Posteriorgram &q,
                                const PhoneGraphConfig &cfg);

// Each frame keeps the phones whose best partial Viterbi score lands within
// cfg.beam of that frame's best; forward-backward over the surviving
// per-frame hypotheses (switch penalties applied; the duration constraint
// only shapes the pruning scores) yields occupation probabilities, floored
// and renormalized row by row.
Posteriorgram LatticeReestimate(const Posteriorgram &q,
                                const PhoneGraphConfig &cfg);

}  // namespace tqa

#endif  // TQA_PHONE_REC_H_
