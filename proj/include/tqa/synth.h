// tqa/synth.h

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
// Synthetic corpus generation: ground-truth transcripts and alignments, noisy
// classifier posteriors, and transcripts corrupted at configurable
// insertion/deletion/substitution rates.
//
// All randomness is derived from the corpus seed through fixed stream ids, so
// generation is reproducible and utterance-parallel: stream 0 draws the
// lexicon, and utterance u uses streams 3u+1 (text and alignment), 3u+2
// (transcript corruption), and 3u+3 (posteriors).

#ifndef TQA_SYNTH_H_
#define TQA_SYNTH_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tqa/eval.h"
#include "tqa/types.h"

namespace tqa {

// Inclusive integer range.
struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct CorpusConfig {
  int num_utterances = 2000;
  IntRange words_per_utterance{8, 12};
  int lexicon_size = 80;
  IntRange phones_per_word{2, 4};
  IntRange frames_per_phone{3, 20};
  int num_phones = 24;
  // Each pair adds a word sharing another word's pronunciation, the known
  // failure mode neither detector can resolve. Off by default.
  int homophone_pairs = 0;
  uint64_t seed = 2026;

  void Validate() const;
};

struct NoiseConfig {
  double alpha = 0.85;      // mean posterior mass kept on the true phone
  double spread = 8.0;      // Dirichlet concentration scale
  int duration_jitter = 2;  // segment boundaries wobble by up to this much

  void Validate() const;
};

// Per-word corruption probabilities. `clustering` is the fraction of
// sentences eligible for edits at all; the conditional per-word rates are
// scaled by 1/clustering so corpus-level word rates are unchanged while
// errors concentrate in fewer sentences.
struct ErrorRates {
  double insertion = 0.0;
  double deletion = 0.0;
  double substitution = 0.0;
  double clustering = 1.0;

  double PerWord() const { return insertion + deletion + substitution; }
  void Validate() const;
};

struct TrueCorpus {
  PhoneSet phones;
  Lexicon lexicon;
  std::vector<Transcript> transcripts;
  std::vector<Alignment> alignments;
};

// Draws the lexicon and per-utterance truth. Every alignment is one segment
// per pronunciation phone, durations uniform over frames_per_phone, so the
// phone sequence equals the concatenated pronunciations of the transcript.
TrueCorpus GenCorpus(const CorpusConfig &cfg);

// Simulates the classifier: segment boundaries are jittered (total frame
// count preserved), then each frame draws a Dirichlet over the true phone
// plus its three index-nearest confusables, with mean mass `alpha` on the
// true phone. alpha == 1 yields exact one-hot rows.
Posteriorgram GenPosteriors(const Alignment &ali, const NoiseConfig &noise,
                            int num_phones, uint64_t seed);

struct AppliedEdit {
  enum class Kind { kInsertion, kDeletion, kSubstitution };

  Kind kind = Kind::kSubstitution;
  // Index into the true word sequence; insertions use the gap index before
  // that word (pos == num words appends).
  int pos = 0;
  std::string word;  // inserted or replacing word; empty for deletions
};

struct CorruptionResult {
  Transcript observed;
  Label label = Label::kCorrect;  // erroneous iff >= 1 edit applied
  EditBreakdown breakdown;        // the applied edits, not a re-alignment
  std::vector<AppliedEdit> edits; // position order
};

// Applies one independent event draw per true word; substitutions pick a
// different lexicon word uniformly, insertions pick any lexicon word and a
// uniform gap.
CorruptionResult CorruptTranscript(const Transcript &truth,
                                   const ErrorRates &rates, const Lexicon &lex,
                                   uint64_t seed);

// Fabricates the forced alignment of the observed transcript against the
// true audio: kept words keep their true segments, substituted and inserted
// words split the frames of the region they displace, deleted words donate
// their frames to a neighbor. Total frames always equal the true total.
Alignment ObservedAlignment(const Alignment &ali_true, const Transcript &truth,
                            const std::vector<AppliedEdit> &edits,
                            const Lexicon &lex);

struct SynthSpec {
  CorpusConfig corpus;
  NoiseConfig noise;
  ErrorRates rates;
};

// Named presets: "default" (2,000 utterances, alpha 0.85, published I/D/S
// rates), "fig2" (11,903 utterances of 10 words with error clustering, which
// reproduces the published 15.2% sentence / 4.12% word error rates), and
// "clean" (alpha 1, rates 0 — the noise-free fixed point).
SynthSpec PresetSpec(std::string_view name);

struct SynthSummary {
  int num_utterances = 0;
  int num_erroneous = 0;
  long long total_frames = 0;
  CorpusSummary applied;  // pooled applied-edit rates against the truth
};

// Generates a corpus and writes it under dir: phones.txt, lexicon.txt,
// text_true.tsv, text.tsv, ali_true.tsv, ali.tsv, labels.tsv
// ("utt_id<TAB>label<TAB>edits"), and post/<utt_id>.post. Posterior
// generation runs on `jobs` threads; output is identical for any job count.
SynthSummary SynthesizeCorpus(const std::string &dir, const SynthSpec &spec,
                              int jobs = 1);

}  // namespace tqa

#endif  // TQA_SYNTH_H_
