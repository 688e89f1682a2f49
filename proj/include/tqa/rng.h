// tqa/rng.h

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

#ifndef TQA_RNG_H_
#define TQA_RNG_H_

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace tqa {

// Mixes a stream id into a seed so per-utterance generators are independent
// of scheduling order.
inline uint64_t SplitSeed(uint64_t seed, uint64_t stream) {
  // splitmix64 finalizer.
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic generator. std::mt19937_64 output is fixed by the standard;
// the distributions below are hand-rolled because the std:: distribution
// objects are not bit-portable across library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Raw() { return engine_(); }

  // Uniform integer in [0, n), unbiased via rejection.
  uint64_t UniformInt(uint64_t n) {
    assert(n > 0);
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform integer in [lo, hi] inclusive.
  int64_t UniformRange(int64_t lo, int64_t hi) {
    assert(lo <= hi);
    return lo + static_cast<int64_t>(
                    UniformInt(static_cast<uint64_t>(hi - lo) + 1));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double UniformDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1]; safe as a log() argument.
  double UniformPositive() { return 1.0 - UniformDouble(); }

  bool Bernoulli(double p) { return UniformDouble() < p; }

  // Standard normal via polar Box-Muller (spare cached).
  double Normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * UniformDouble() - 1.0;
      v = 2.0 * UniformDouble() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  // Gamma(shape, 1) by Marsaglia-Tsang, with the u^(1/a) boost for shape < 1.
  double Gamma(double shape) {
    assert(shape > 0.0);
    if (shape < 1.0) {
      double u = UniformPositive();
      return Gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = Normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = UniformPositive();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Dirichlet draw with per-component concentrations; result sums to 1.
  std::vector<double> Dirichlet(const std::vector<double> &alpha) {
    std::vector<double> g(alpha.size());
    double total = 0.0;
    for (size_t i = 0; i < alpha.size(); ++i) {
      g[i] = Gamma(alpha[i]);
      total += g[i];
    }
    if (total <= 0.0) {
      // All gammas underflowed; fall back to a point mass on one component.
      size_t i = UniformInt(alpha.size());
      for (size_t j = 0; j < g.size(); ++j) g[j] = (j == i) ? 1.0 : 0.0;
      return g;
    }
    for (double &x : g) x /= total;
    return g;
  }

  template <typename T>
  void Shuffle(std::vector<T> *v) {
    for (size_t i = v->size(); i > 1; --i) {
      size_t j = UniformInt(i);
      std::swap((*v)[i - 1], (*v)[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tqa

#endif  // TQA_RNG_H_
