// tqa/align.h

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

#ifndef TQA_ALIGN_H_
#define TQA_ALIGN_H_

#include <vector>

#include "tqa/types.h"

namespace tqa {

// Expands a forced alignment into a posteriorgram that is one-hot up to
// `epsilon`: the aligned phone gets 1 - epsilon and the remaining K - 1
// phones share epsilon uniformly. A strictly one-hot row makes the symmetric
// KL divergence infinite wherever the classifier puts mass elsewhere, so a
// small epsilon (default 1e-4) keeps divergences bounded without moving the
// row's argmax. Requires 0 <= epsilon < 1/K; rows sum to 1 exactly (the last
// element absorbs the rounding residual). With K == 1 the only legal row is
// (1.0) and epsilon is ignored.
Posteriorgram AlignmentToPosteriorgram(const Alignment &ali, int num_phones,
                                       double epsilon = kDefaultOneHotEpsilon);

// Collapses a T x S matrix of state-level posteriors onto the phone
// inventory: out[t][k] = sum of states[t][s] over states mapped to k.
// Per-row mass is preserved up to summation reordering.
Posteriorgram MergeStatePosteriors(const Posteriorgram &states,
                                   const StateToPhoneMap &map, int num_phones);

// Per-frame phone ids for an alignment, in frame order (length TotalFrames).
std::vector<int> FramePhones(const Alignment &ali);

}  // namespace tqa

#endif  // TQA_ALIGN_H_
