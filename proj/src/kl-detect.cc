// tqa/kl-detect.cc

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

#include "tqa/kl-detect.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace tqa {

namespace {

void CheckStochastic(std::span<const double> v, const char *name) {
  double sum = 0.0;
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0))
      throw ValidationError(std::string(name) + " entry out of [0,1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kFileRowSumTol)
    throw ValidationError(std::string(name) + " is not stochastic: sum " +
                          std::to_string(sum));
}

}  // namespace

double FrameKl(std::span<const double> p, std::span<const double> q,
               double floor) {
  if (p.size() != q.size())
    throw ValidationError("FrameKl dimension mismatch: " +
                          std::to_string(p.size()) + " vs " +
                          std::to_string(q.size()));
  if (!(floor > 0.0)) throw ConfigError("probability floor must be > 0");
  CheckStochastic(p, "p");
  CheckStochastic(q, "q");

  const size_t k = p.size();
  double psum = 0.0, qsum = 0.0;
  for (size_t i = 0; i < k; ++i) {
    psum += std::max(p[i], floor);
    qsum += std::max(q[i], floor);
  }
  double d = 0.0;
  for (size_t i = 0; i < k; ++i) {
    double pi = std::max(p[i], floor) / psum;
    double qi = std::max(q[i], floor) / qsum;
    // (p-q) and (log p - log q) share a sign, so every term is >= 0 and the
    // sum is symmetric in (p, q) bit for bit.
    d += (pi - qi) * (std::log(pi) - std::log(qi));
  }
  return d;
}

KLTrack ComputeKlTrack(const Posteriorgram &ref, const Posteriorgram &hyp,
                       double floor, const std::string &utt_id) {
  if (ref.NumFrames() != hyp.NumFrames() ||
      ref.NumPhones() != hyp.NumPhones())
    throw ValidationError(
        "posteriorgram shape mismatch: " + std::to_string(ref.NumFrames()) +
        "x" + std::to_string(ref.NumPhones()) + " vs " +
        std::to_string(hyp.NumFrames()) + "x" +
        std::to_string(hyp.NumPhones()));
  KLTrack track;
  track.utt_id = utt_id;
  track.values.reserve(ref.NumFrames());
  for (int t = 0; t < ref.NumFrames(); ++t)
    track.values.push_back(FrameKl(ref.Row(t), hyp.Row(t), floor));
  return track;
}

KLTrack MedianSmooth(const KLTrack &track, const SmoothingConfig &cfg) {
  if (cfg.half_window < 0)
    throw ConfigError("smoothing half-window must be >= 0");
  const int t_max = track.NumFrames();
  const int n = cfg.half_window;
  KLTrack out;
  out.utt_id = track.utt_id;
  out.values.resize(t_max);
  std::vector<double> window;
  window.reserve(2 * n + 1);
  for (int t = 0; t < t_max; ++t) {
    int lo = std::max(0, t - n);
    int hi = std::min(t_max - 1, t + n);
    window.assign(track.values.begin() + lo, track.values.begin() + hi + 1);
    size_t mid = window.size() / 2;
    std::nth_element(window.begin(), window.begin() + mid, window.end());
    if (window.size() % 2 == 1) {
      out.values[t] = window[mid];
    } else {
      // Mean of the two middle values; the lower one is the max of the
      // partition left of mid.
      double upper = window[mid];
      double lower = *std::max_element(window.begin(), window.begin() + mid);
      out.values[t] = 0.5 * (lower + upper);
    }
  }
  return out;
}

double UtteranceScore(const KLTrack &track) {
  const int t_max = track.NumFrames();
  if (t_max == 0) throw ValidationError("cannot score an empty track");
  double mean = 0.0;
  for (double v : track.values) mean += v;
  mean /= t_max;
  double var = 0.0;
  for (double v : track.values) var += (v - mean) * (v - mean);
  var /= t_max;
  return std::sqrt(var);
}

Label Detect(double score, double threshold) {
  if (threshold < 0.0) throw ConfigError("threshold must be >= 0");
  return score > threshold ? Label::kErroneous : Label::kCorrect;
}

KLTrack FilterFrames(const KLTrack &track, const std::vector<bool> &keep) {
  if (keep.size() != track.values.size())
    throw ValidationError("frame mask length does not match track length");
  KLTrack out;
  out.utt_id = track.utt_id;
  for (size_t t = 0; t < keep.size(); ++t)
    if (keep[t]) out.values.push_back(track.values[t]);
  return out;
}

}  // namespace tqa
