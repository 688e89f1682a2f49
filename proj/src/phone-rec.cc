// src/phone-rec.cc

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

#include "tqa/phone-rec.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tqa/common.h"

namespace tqa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void CheckInput(const Posteriorgram &q) {
  if (q.NumFrames() < 1)
    throw ValidationError("posteriorgram has no frames");
  q.ValidateStochastic(kFileRowSumTol);
}

// Forward trellis over (phone, capped run length) states. The run length
// saturates at min_duration: all the recursion needs to know is whether the
// current run may legally end. back[t][s] is the predecessor state, or -1
// in the first frame (and in cells no transition reaches).
struct Trellis {
  int num_phones = 0;
  int dur = 0;
  std::vector<std::vector<double>> score;  // [t][phone * dur + d - 1]
  std::vector<std::vector<int>> back;

  int Index(int k, int d) const { return k * dur + d - 1; }
};

Trellis RunForward(const Posteriorgram &q, const PhoneGraphConfig &cfg) {
  const int T = q.NumFrames(), K = q.NumPhones(), D = cfg.min_duration;
  Trellis tr;
  tr.num_phones = K;
  tr.dur = D;
  tr.score.assign(T, std::vector<double>(static_cast<size_t>(K) * D, kNegInf));
  tr.back.assign(T, std::vector<int>(static_cast<size_t>(K) * D, -1));

  for (int k = 0; k < K; ++k)
    tr.score[0][tr.Index(k, 1)] = std::log(q.At(0, k));

  for (int t = 1; t < T; ++t) {
    const std::vector<double> &prev = tr.score[t - 1];
    std::vector<double> &cur = tr.score[t];
    std::vector<int> &bp = tr.back[t];
    for (int k = 0; k < K; ++k) {
      const double c = std::log(q.At(t, k));
      // Runs grow by one frame, collapsing d-1 and d into d at the cap.
      for (int d = 2; d <= D; ++d) {
        int from = tr.Index(k, d - 1);
        double best = prev[from];
        if (d == D && prev[tr.Index(k, D)] > best) {
          from = tr.Index(k, D);
          best = prev[from];
        }
        cur[tr.Index(k, d)] = best + c;
        bp[tr.Index(k, d)] = from;
      }
      // A fresh run enters from any phone that met its minimum duration.
      // Ties keep the first candidate: stay (only possible when D == 1),
      // then switches from the lowest source phone up.
      const int cell = tr.Index(k, 1);
      bool seeded = false;
      if (D == 1) {
        cur[cell] = prev[cell] + c;
        bp[cell] = cell;
        seeded = true;
      }
      for (int j = 0; j < K; ++j) {
        if (j == k) continue;
        const double sc = (prev[tr.Index(j, D)] + c) - cfg.switch_penalty;
        if (!seeded || sc > cur[cell]) {
          cur[cell] = sc;
          bp[cell] = tr.Index(j, D);
          seeded = true;
        }
      }
    }
  }
  return tr;
}

}  // namespace

void PhoneGraphConfig::Validate() const {
  if (!(switch_penalty >= 0.0) || !std::isfinite(switch_penalty))
    throw ConfigError("switch_penalty must be finite and >= 0");
  if (min_duration < 1) throw ConfigError("min_duration must be >= 1");
  if (!(beam > 0.0)) throw ConfigError("beam must be > 0");
}

int PhoneSegmentation::TotalFrames() const {
  int total = 0;
  for (const auto &seg : segments) total += seg.duration;
  return total;
}

std::vector<int> PhoneSegmentation::FramePhones() const {
  std::vector<int> phones;
  phones.reserve(TotalFrames());
  for (const auto &seg : segments)
    phones.insert(phones.end(), seg.duration, seg.phone);
  return phones;
}

Alignment PhoneSegmentation::ToAlignment(const std::string &utt_id) const {
  Alignment ali;
  ali.utt_id = utt_id;
  for (const auto &seg : segments)
    ali.segments.push_back({seg.phone, seg.duration});
  return ali;
}

void PhoneSegmentation::Validate(int num_phones, int min_duration) const {
  if (segments.empty()) throw ValidationError("empty segmentation");
  int at = 0;
  for (size_t i = 0; i < segments.size(); ++i) {
    const PhoneSegment &seg = segments[i];
    if (seg.phone < 0 || seg.phone >= num_phones)
      throw ValidationError("segment phone out of range");
    if (seg.start != at) throw ValidationError("segments are not contiguous");
    if (seg.duration < 1) throw ValidationError("segment duration < 1");
    if (i + 1 < segments.size() && seg.duration < min_duration)
      throw ValidationError("non-final segment shorter than min_duration");
    if (i > 0 && segments[i - 1].phone == seg.phone)
      throw ValidationError("adjacent segments share a phone");
    at += seg.duration;
  }
}

double SegmentationScore(const Posteriorgram &q,
                         const std::vector<int> &frame_phones,
                         double switch_penalty) {
  if (static_cast<int>(frame_phones.size()) != q.NumFrames())
    throw ValidationError("frame labelling does not match the posteriorgram");
  double s = 0.0;
  for (size_t t = 0; t < frame_phones.size(); ++t) {
    const int k = frame_phones[t];
    if (k < 0 || k >= q.NumPhones())
      throw ValidationError("frame phone out of range");
    s += std::log(q.At(static_cast<int>(t), k));
    if (t > 0 && frame_phones[t] != frame_phones[t - 1]) s -= switch_penalty;
  }
  return s;
}

PhoneSegmentation ViterbiDecode(const Posteriorgram &q,
                                const PhoneGraphConfig &cfg) {
  cfg.Validate();
  CheckInput(q);
  const int T = q.NumFrames(), K = q.NumPhones(), D = cfg.min_duration;
  Trellis tr = RunForward(q, cfg);

  int state = 0;
  double best = kNegInf;
  bool seeded = false;
  for (int k = 0; k < K; ++k)
    for (int d = 1; d <= D; ++d) {
      const double sc = tr.score[T - 1][tr.Index(k, d)];
      if (!seeded || sc > best) {
        best = sc;
        state = tr.Index(k, d);
        seeded = true;
      }
    }

  PhoneSegmentation seg;
  seg.log_score = best;
  if (best == kNegInf) {
    // No finite-score path exists (zero-probability cells block every legal
    // segmentation). Everything ties at -inf; return the lowest-index
    // single segment.
    seg.segments.push_back({0, 0, T});
    return seg;
  }

  std::vector<int> phones(T);
  for (int t = T - 1; t >= 0; --t) {
    phones[t] = state / D;
    state = tr.back[t][state];
  }
  for (int t = 0; t < T; ++t) {
    if (!seg.segments.empty() && seg.segments.back().phone == phones[t]) {
      ++seg.segments.back().duration;
    } else {
      seg.segments.push_back({phones[t], t, 1});
    }
  }
  return seg;
}

Posteriorgram LatticeReestimate(const Posteriorgram &q,
                                const PhoneGraphConfig &cfg) {
  cfg.Validate();
  CheckInput(q);
  const int T = q.NumFrames(), K = q.NumPhones(), D = cfg.min_duration;
  Trellis tr = RunForward(q, cfg);

  // Per-frame survivor sets from the best partial score over run lengths.
  std::vector<std::vector<char>> alive(T, std::vector<char>(K, 0));
  for (int t = 0; t < T; ++t) {
    std::vector<double> v(K, kNegInf);
    double top = kNegInf;
    for (int k = 0; k < K; ++k) {
      for (int d = 1; d <= D; ++d)
        v[k] = std::max(v[k], tr.score[t][tr.Index(k, d)]);
      top = std::max(top, v[k]);
    }
    for (int k = 0; k < K; ++k) alive[t][k] = v[k] >= top - cfg.beam ? 1 : 0;
  }

  // Forward-backward over the surviving sausage. Weights are floored so a
  // surviving zero-probability cell cannot zero out a whole frame; each
  // pass rescales per frame by its sum, which cancels in the occupation
  // ratio below.
  const double stay = 1.0, sw = std::exp(-cfg.switch_penalty);
  auto weight = [&](int t, int k) {
    return std::max(q.At(t, k), kProbFloor);
  };
  std::vector<std::vector<double>> alpha(T, std::vector<double>(K, 0.0));
  std::vector<std::vector<double>> beta(T, std::vector<double>(K, 0.0));
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    if (alive[0][k]) alpha[0][k] = weight(0, k);
    sum += alpha[0][k];
  }
  for (int k = 0; k < K; ++k) alpha[0][k] /= sum;
  for (int t = 1; t < T; ++t) {
    sum = 0.0;
    for (int k = 0; k < K; ++k) {
      if (!alive[t][k]) continue;
      double acc = 0.0;
      for (int j = 0; j < K; ++j) {
        if (!alive[t - 1][j]) continue;
        acc += alpha[t - 1][j] * (j == k ? stay : sw);
      }
      alpha[t][k] = acc * weight(t, k);
      sum += alpha[t][k];
    }
    for (int k = 0; k < K; ++k) alpha[t][k] /= sum;
  }
  for (int k = 0; k < K; ++k) beta[T - 1][k] = alive[T - 1][k] ? 1.0 : 0.0;
  for (int t = T - 2; t >= 0; --t) {
    sum = 0.0;
    for (int k = 0; k < K; ++k) {
      if (!alive[t][k]) continue;
      double acc = 0.0;
      for (int j = 0; j < K; ++j) {
        if (!alive[t + 1][j]) continue;
        acc += (j == k ? stay : sw) * weight(t + 1, j) * beta[t + 1][j];
      }
      beta[t][k] = acc;
      sum += acc;
    }
    for (int k = 0; k < K; ++k) beta[t][k] /= sum;
  }

  Posteriorgram out(T, K);
  for (int t = 0; t < T; ++t) {
    double total = 0.0;
    for (int k = 0; k < K; ++k) total += alpha[t][k] * beta[t][k];
    double floored = 0.0;
    for (int k = 0; k < K; ++k) {
      out.At(t, k) = std::max(alpha[t][k] * beta[t][k] / total, kProbFloor);
      floored += out.At(t, k);
    }
    for (int k = 0; k < K; ++k) out.At(t, k) /= floored;
  }
  return out;
}

}  // namespace tqa
