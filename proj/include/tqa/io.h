// tqa/io.h

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
// Text formats are TAB-separated UTF-8 with LF line endings so golden files
// diff cleanly. The posteriorgram payload is f32 to halve corpus size; all
// in-memory math stays 64-bit.

#ifndef TQA_IO_H_
#define TQA_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "tqa/types.h"

namespace tqa {

// --- phone set: one label per line, order defines the index -------------

PhoneSet ParsePhoneSet(std::string_view text);

// --- posteriorgram: "TQAPOST1" magic, u32 T, u32 K (LE), T*K f32 ---------

std::string WritePosteriorgram(const Posteriorgram &post);
Posteriorgram ReadPosteriorgram(std::string_view bytes);

// --- alignments: "utt_id<TAB>phone:dur phone:dur ..." --------------------

std::vector<Alignment> ParseAlignments(std::string_view text,
                                       const PhoneSet &phones);
std::string FormatAlignment(const Alignment &ali, const PhoneSet &phones);
std::string FormatAlignments(const std::vector<Alignment> &alis,
                             const PhoneSet &phones);

// --- lattices: "from<TAB>to<TAB>word<TAB>score" plus "final<TAB>node" ----

WordLattice ParseLattice(std::string_view text);
std::string FormatLattice(const WordLattice &lattice);

// --- transcripts: "utt_id<TAB>word word ..." ------------------------------

std::vector<Transcript> ParseTranscripts(std::string_view text);
std::string FormatTranscripts(const std::vector<Transcript> &transcripts);

// --- lexicon: "word<TAB>phone phone ..." (one line per pronunciation) ----

Lexicon ParseLexicon(std::string_view text, const PhoneSet &phones);
std::string FormatLexicon(const Lexicon &lexicon, const PhoneSet &phones);

// --- scores: "utt_id<TAB>score[<TAB>label]" -------------------------------

std::vector<LabeledScore> ParseScores(std::string_view text);
std::string FormatScores(const std::vector<LabeledScore> &scores);

// --- file helpers ---------------------------------------------------------

std::string ReadFileToString(const std::string &path);
void WriteStringToFile(const std::string &path, std::string_view content);

}  // namespace tqa

#endif  // TQA_IO_H_
