// tqa/decode.h

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
// Lexicon-driven beam decoding of phone posteriors into word lattices, and
// the lattice-oracle word error rate. The decoder is a time-synchronous
// token passer over a lexicon prefix tree: inside a word, tokens pay the
// frame's log-posterior for the phone they sit on; at word ends they pay the
// scaled LM score plus the insertion adjustment and recombine on (boundary
// frame, truncated LM history) lattice nodes. Every surviving word end
// becomes a lattice arc, so the lattice keeps the close competitors, not
// just the best path.

#ifndef TQA_DECODE_H_
#define TQA_DECODE_H_

#include <string>
#include <vector>

#include "tqa/lm.h"
#include "tqa/types.h"

namespace tqa {

struct DecodeConfig {
  double beam = 10.0;       // nats below the frame best; > 0, inf allowed
  int max_active = 500;     // token cap per frame, >= 1
  double lm_weight = 1.0;   // scale on LM log-probs
  double word_insertion_penalty = 0.0;  // added per word; negative penalizes

  void Validate() const;
};

// Decodes Q against the lexicon under the model. The result is a valid
// lattice (start node 0, epsilon arcs into a single final node carrying the
// sentence-end LM score) that always contains the decoder's best path.
// Throws DecodeError when pruning starves the search before the last frame.
WordLattice BeamDecode(const Posteriorgram &q, const Lexicon &lex,
                       const NGramModel &lm, const DecodeConfig &cfg);

// Highest-scoring lattice path; epsilon arcs contribute score but no word.
struct BestPathResult {
  std::vector<std::string> words;
  double score = 0.0;
};
BestPathResult BestPath(const WordLattice &lattice);

// Minimum word edits between any lattice path and the reference. rate is
// edits over max(ref_len, 1) and may exceed 1 on insertion-heavy lattices;
// thresholding uses the clamped value.
struct OracleResult {
  long long edits = 0;
  long long ref_len = 0;
  double rate = 0.0;

  double ClampedRate() const { return rate < 1.0 ? rate : 1.0; }
};

OracleResult OracleWer(const WordLattice &lattice,
                       const std::vector<std::string> &ref);

}  // namespace tqa

#endif  // TQA_DECODE_H_
