// tqa/align.cc

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

#include "tqa/align.h"

#include <string>

namespace tqa {

Posteriorgram AlignmentToPosteriorgram(const Alignment &ali, int num_phones,
                                       double epsilon) {
  ali.Validate(num_phones);
  const int k = num_phones;
  if (k == 1) {
    Posteriorgram post(ali.TotalFrames(), 1);
    for (int t = 0; t < post.NumFrames(); ++t) post.At(t, 0) = 1.0;
    return post;
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0 / k))
    throw ConfigError("one-hot epsilon must be in [0, 1/K), got " +
                      std::to_string(epsilon));

  const double hot = 1.0 - epsilon;
  const double cold = epsilon / (k - 1);
  Posteriorgram post(ali.TotalFrames(), k);
  int t = 0;
  for (const auto &seg : ali.segments) {
    for (int d = 0; d < seg.duration; ++d, ++t) {
      auto row = post.Row(t);
      double sum = 0.0;
      for (int j = 0; j < k - 1; ++j) {
        row[j] = (j == seg.phone) ? hot : cold;
        sum += row[j];
      }
      // Exact unit mass; the residual lands on whichever phone is last.
      row[k - 1] = 1.0 - sum;
    }
  }
  return post;
}

Posteriorgram MergeStatePosteriors(const Posteriorgram &states,
                                   const StateToPhoneMap &map,
                                   int num_phones) {
  if (map.NumStates() != states.NumPhones())
    throw ValidationError("state map covers " +
                          std::to_string(map.NumStates()) +
                          " states but posteriors have " +
                          std::to_string(states.NumPhones()) + " columns");
  map.Validate(num_phones);
  states.ValidateStochastic();

  Posteriorgram post(states.NumFrames(), num_phones);
  for (int t = 0; t < states.NumFrames(); ++t) {
    auto in = states.Row(t);
    auto out = post.Row(t);
    for (int s = 0; s < map.NumStates(); ++s)
      out[map.phone_of_state[s]] += in[s];
  }
  return post;
}

std::vector<int> FramePhones(const Alignment &ali) {
  std::vector<int> phones;
  phones.reserve(ali.TotalFrames());
  for (const auto &seg : ali.segments)
    for (int d = 0; d < seg.duration; ++d) phones.push_back(seg.phone);
  return phones;
}

}  // namespace tqa
