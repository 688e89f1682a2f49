// tqa/common.h

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

#ifndef TQA_COMMON_H_
#define TQA_COMMON_H_

#include <stdexcept>
#include <string>

namespace tqa {

inline constexpr const char *kToolVersion = "0.1.0";

// Probability floor shared by KL scoring, the phone recognizer and the
// decoder's acoustic scores.
inline constexpr double kProbFloor = 1e-8;

// Mass spread off the aligned phone when converting a forced alignment to a
// posteriorgram; keeps symmetric KL finite without moving the argmax.
inline constexpr double kDefaultOneHotEpsilon = 1e-4;

// Row-sum tolerance for posteriorgrams built in memory (64-bit math).
inline constexpr double kRowSumTol = 1e-6;
// Row-sum tolerance when reading the f32 on-disk payload.
inline constexpr double kFileRowSumTol = 1e-4;

inline constexpr const char *kEpsilonWord = "<eps>";
inline constexpr const char *kSentenceBegin = "<s>";
inline constexpr const char *kSentenceEnd = "</s>";
inline constexpr const char *kUnknownWord = "<unk>";

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parse failure in a text or binary input; carries a 1-based line number
// (text formats) or byte offset (binary formats), -1 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string &msg, long long where = -1)
      : Error(where >= 0 ? msg + " (at line/byte " + std::to_string(where) + ")"
                         : msg),
        where_(where) {}
  long long where() const { return where_; }

 private:
  long long where_;
};

// A domain invariant does not hold (non-stochastic row, bad duration, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad run configuration (out-of-range option, infeasible corpus spec, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Beam search ended with no surviving hypothesis.
class DecodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace tqa

#endif  // TQA_COMMON_H_
