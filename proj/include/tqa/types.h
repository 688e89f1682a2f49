// tqa/types.h

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

#ifndef TQA_TYPES_H_
#define TQA_TYPES_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tqa/common.h"

namespace tqa {

// Ordered phone inventory; the index space for every distribution in the
// toolkit. Labels are unique, non-empty, and their order defines the index.
class PhoneSet {
 public:
  PhoneSet() = default;
  explicit PhoneSet(std::vector<std::string> symbols);

  int NumPhones() const { return static_cast<int>(symbols_.size()); }
  const std::string &Symbol(int k) const { return symbols_.at(k); }
  const std::vector<std::string> &Symbols() const { return symbols_; }

  // Returns the phone index or -1 when the label is not in the set.
  int Find(std::string_view label) const;
  // Returns the phone index; throws ValidationError on unknown labels.
  int Index(std::string_view label) const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

// T x K row-stochastic matrix of per-frame phone probabilities. Stored as
// doubles; the on-disk payload is f32 (see io.h).
class Posteriorgram {
 public:
  Posteriorgram() = default;
  Posteriorgram(int num_frames, int num_phones)
      : num_frames_(num_frames),
        num_phones_(num_phones),
        values_(static_cast<size_t>(num_frames) * num_phones, 0.0) {}

  int NumFrames() const { return num_frames_; }
  int NumPhones() const { return num_phones_; }

  std::span<double> Row(int t) {
    return {values_.data() + static_cast<size_t>(t) * num_phones_,
            static_cast<size_t>(num_phones_)};
  }
  std::span<const double> Row(int t) const {
    return {values_.data() + static_cast<size_t>(t) * num_phones_,
            static_cast<size_t>(num_phones_)};
  }
  double &At(int t, int k) {
    return values_[static_cast<size_t>(t) * num_phones_ + k];
  }
  double At(int t, int k) const {
    return values_[static_cast<size_t>(t) * num_phones_ + k];
  }

  // Throws ValidationError unless every entry is in [0,1] and every row sums
  // to 1 within tol.
  void ValidateStochastic(double tol = kRowSumTol) const;

  bool operator==(const Posteriorgram &other) const = default;

 private:
  int num_frames_ = 0;
  int num_phones_ = 0;
  std::vector<double> values_;
};

// Per-utterance forced alignment: (phone, duration) runs covering the
// utterance's frames.
struct Alignment {
  struct Segment {
    int phone = 0;
    int duration = 0;  // frames, > 0
  };

  std::string utt_id;
  std::vector<Segment> segments;

  int TotalFrames() const {
    int total = 0;
    for (const auto &seg : segments) total += seg.duration;
    return total;
  }

  // Throws ValidationError on non-positive durations or out-of-range phones.
  void Validate(int num_phones) const;

  bool operator==(const Alignment &other) const;
};

inline bool operator==(const Alignment::Segment &a,
                       const Alignment::Segment &b) {
  return a.phone == b.phone && a.duration == b.duration;
}
inline bool Alignment::operator==(const Alignment &other) const {
  return utt_id == other.utt_id && segments == other.segments;
}

// Maps acoustic-model states to phones, used when merging state-level
// posteriors down to the phone inventory.
struct StateToPhoneMap {
  std::vector<int> phone_of_state;  // length S, entries in [0, K)

  int NumStates() const { return static_cast<int>(phone_of_state.size()); }
  void Validate(int num_phones) const;
};

// One utterance's word sequence. An empty word list is legal but flagged
// degenerate by consumers that need a reference length.
struct Transcript {
  std::string utt_id;
  std::vector<std::string> words;

  bool operator==(const Transcript &other) const = default;
};

// word -> one or more pronunciations (phone-index sequences).
struct Lexicon {
  std::map<std::string, std::vector<std::vector<int>>> entries;

  void Validate(int num_phones) const;
  size_t NumWords() const { return entries.size(); }
};

// Acyclic weighted word graph. Node 0 is the start node; every arc must lie
// on some start->final path (enforced by the parser and the decoder).
struct WordLattice {
  struct Arc {
    int from = 0;
    int to = 0;
    std::string word;  // kEpsilonWord for epsilon arcs
    double score = 0.0;  // log-probability
  };

  int num_nodes = 0;
  std::vector<Arc> arcs;
  std::vector<int> final_nodes;

  static constexpr int kStartNode = 0;

  // Returns a topological order of all nodes; throws ValidationError when a
  // cycle exists, no final node is declared, a score is non-finite, or some
  // arc is not on a start->final path.
  std::vector<int> Validate() const;
};

enum class Label { kCorrect, kErroneous };

inline const char *LabelName(Label label) {
  return label == Label::kCorrect ? "correct" : "erroneous";
}

// One utterance's detector output, optionally paired with ground truth.
struct LabeledScore {
  std::string utt_id;
  double score = 0.0;
  bool has_label = false;
  Label label = Label::kCorrect;
};

}  // namespace tqa

#endif  // TQA_TYPES_H_
