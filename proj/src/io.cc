// tqa/io.cc

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

#include "tqa/io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace tqa {

namespace {

constexpr char kPostMagic[8] = {'T', 'Q', 'A', 'P', 'O', 'S', 'T', '1'};

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::string_view StripCr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::vector<std::string_view> SplitOn(std::string_view s, char sep) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  for (;;) {
    size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      fields.push_back(s.substr(pos));
      return fields;
    }
    fields.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

// Splits on runs of spaces, dropping empty tokens.
std::vector<std::string_view> SplitWords(std::string_view s) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
    size_t start = pos;
    while (pos < s.size() && s[pos] != ' ') ++pos;
    if (pos > start) out.push_back(s.substr(start, pos - start));
  }
  return out;
}

bool IsBlank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

long long ParseInt(std::string_view s, long long line_no, const char *what) {
  if (s.empty())
    throw ParseError(std::string("empty ") + what, line_no);
  char *end = nullptr;
  std::string buf(s);
  long long v = std::strtoll(buf.c_str(), &end, 10);
  if (end != buf.c_str() + buf.size())
    throw ParseError(std::string("bad ") + what + ": " + buf, line_no);
  return v;
}

double ParseDouble(std::string_view s, long long line_no, const char *what) {
  if (s.empty())
    throw ParseError(std::string("empty ") + what, line_no);
  char *end = nullptr;
  std::string buf(s);
  double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size())
    throw ParseError(std::string("bad ") + what + ": " + buf, line_no);
  return v;
}

void AppendDouble(std::string *out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  out->append(buf);
}

}  // namespace

PhoneSet ParsePhoneSet(std::string_view text) {
  std::vector<std::string> symbols;
  std::set<std::string> seen;
  long long line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = StripCr(raw);
    if (IsBlank(line)) continue;
    // Trim surrounding whitespace; the label is the full remaining token.
    size_t b = line.find_first_not_of(" \t");
    size_t e = line.find_last_not_of(" \t");
    std::string label(line.substr(b, e - b + 1));
    if (!seen.insert(label).second)
      throw ParseError("duplicate phone label: " + label, line_no);
    symbols.push_back(std::move(label));
  }
  if (symbols.empty()) throw ParseError("empty phone set file");
  return PhoneSet(std::move(symbols));
}

std::string WritePosteriorgram(const Posteriorgram &post) {
  std::string out;
  out.reserve(16 + static_cast<size_t>(post.NumFrames()) * post.NumPhones() *
                       sizeof(float));
  out.append(kPostMagic, sizeof(kPostMagic));
  uint32_t t = static_cast<uint32_t>(post.NumFrames());
  uint32_t k = static_cast<uint32_t>(post.NumPhones());
  unsigned char hdr[8] = {
      static_cast<unsigned char>(t), static_cast<unsigned char>(t >> 8),
      static_cast<unsigned char>(t >> 16), static_cast<unsigned char>(t >> 24),
      static_cast<unsigned char>(k), static_cast<unsigned char>(k >> 8),
      static_cast<unsigned char>(k >> 16), static_cast<unsigned char>(k >> 24)};
  out.append(reinterpret_cast<char *>(hdr), sizeof(hdr));
  for (int i = 0; i < post.NumFrames(); ++i) {
    for (int j = 0; j < post.NumPhones(); ++j) {
      float f = static_cast<float>(post.At(i, j));
      uint32_t bits;
      std::memcpy(&bits, &f, sizeof(bits));
      unsigned char b[4] = {static_cast<unsigned char>(bits),
                            static_cast<unsigned char>(bits >> 8),
                            static_cast<unsigned char>(bits >> 16),
                            static_cast<unsigned char>(bits >> 24)};
      out.append(reinterpret_cast<char *>(b), sizeof(b));
    }
  }
  return out;
}

Posteriorgram ReadPosteriorgram(std::string_view bytes) {
  if (bytes.size() < 16)
    throw ParseError("posteriorgram truncated before header",
                     static_cast<long long>(bytes.size()));
  if (std::memcmp(bytes.data(), kPostMagic, sizeof(kPostMagic)) != 0)
    throw ParseError("bad posteriorgram magic", 0);
  auto u32 = [&](size_t off) {
    const unsigned char *p =
        reinterpret_cast<const unsigned char *>(bytes.data() + off);
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) |
           (static_cast<uint32_t>(p[3]) << 24);
  };
  uint32_t t = u32(8), k = u32(12);
  size_t expected = 16 + static_cast<size_t>(t) * k * sizeof(float);
  if (bytes.size() != expected)
    throw ParseError("posteriorgram payload size mismatch: expected " +
                         std::to_string(expected) + " bytes, got " +
                         std::to_string(bytes.size()),
                     static_cast<long long>(bytes.size()));
  if (k == 0 || t == 0)
    throw ParseError("posteriorgram with zero dimension", 8);

  Posteriorgram post(static_cast<int>(t), static_cast<int>(k));
  size_t off = 16;
  for (uint32_t i = 0; i < t; ++i) {
    double sum = 0.0;
    for (uint32_t j = 0; j < k; ++j, off += 4) {
      uint32_t bits = u32(off);
      float f;
      std::memcpy(&f, &bits, sizeof(f));
      double v = static_cast<double>(f);
      if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v))
        throw ParseError("posteriorgram entry out of [0,1] at frame " +
                             std::to_string(i),
                         static_cast<long long>(off));
      post.At(static_cast<int>(i), static_cast<int>(j)) = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > kFileRowSumTol)
      throw ParseError("row not stochastic at frame " + std::to_string(i) +
                           ": sum " + std::to_string(sum),
                       static_cast<long long>(off));
  }
  return post;
}

std::vector<Alignment> ParseAlignments(std::string_view text,
                                       const PhoneSet &phones) {
  std::vector<Alignment> out;
  long long line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = StripCr(raw);
    if (IsBlank(line)) continue;
    auto fields = SplitOn(line, '\t');
    if (fields.size() != 2)
      throw ParseError("expected 'utt_id<TAB>phone:dur ...'", line_no);
    Alignment ali;
    ali.utt_id = std::string(fields[0]);
    if (ali.utt_id.empty()) throw ParseError("empty utterance id", line_no);
    for (std::string_view tok : SplitWords(fields[1])) {
      size_t colon = tok.rfind(':');
      if (colon == std::string_view::npos || colon == 0)
        throw ParseError("malformed segment token: " + std::string(tok),
                         line_no);
      std::string_view label = tok.substr(0, colon);
      int phone = phones.Find(label);
      if (phone < 0)
        throw ParseError("unknown phone label: " + std::string(label),
                         line_no);
      long long dur = ParseInt(tok.substr(colon + 1), line_no, "duration");
      if (dur <= 0)
        throw ParseError("zero or negative duration in segment: " +
                             std::string(tok),
                         line_no);
      ali.segments.push_back({phone, static_cast<int>(dur)});
    }
    if (ali.segments.empty())
      throw ParseError("alignment with no segments", line_no);
    out.push_back(std::move(ali));
  }
  return out;
}

std::string FormatAlignment(const Alignment &ali, const PhoneSet &phones) {
  std::string line = ali.utt_id;
  line += '\t';
  for (size_t i = 0; i < ali.segments.size(); ++i) {
    if (i) line += ' ';
    line += phones.Symbol(ali.segments[i].phone);
    line += ':';
    line += std::to_string(ali.segments[i].duration);
  }
  return line;
}

std::string FormatAlignments(const std::vector<Alignment> &alis,
                             const PhoneSet &phones) {
  std::string out;
  for (const auto &ali : alis) {
    out += FormatAlignment(ali, phones);
    out += '\n';
  }
  return out;
}

WordLattice ParseLattice(std::string_view text) {
  WordLattice lattice;
  int max_node = 0;
  long long line_no = 0;
  bool saw_line = false;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = StripCr(raw);
    if (IsBlank(line)) continue;
    saw_line = true;
    auto fields = SplitOn(line, '\t');
    if (fields[0] == "final") {
      if (fields.size() != 2)
        throw ParseError("expected 'final<TAB>node'", line_no);
      long long node = ParseInt(fields[1], line_no, "final node");
      lattice.final_nodes.push_back(static_cast<int>(node));
      max_node = std::max(max_node, static_cast<int>(node));
      continue;
    }
    if (fields.size() != 4)
      throw ParseError("expected 'from<TAB>to<TAB>word<TAB>score'", line_no);
    WordLattice::Arc arc;
    arc.from = static_cast<int>(ParseInt(fields[0], line_no, "from node"));
    arc.to = static_cast<int>(ParseInt(fields[1], line_no, "to node"));
    arc.word = std::string(fields[2]);
    if (arc.word.empty()) throw ParseError("empty word on arc", line_no);
    arc.score = ParseDouble(fields[3], line_no, "arc score");
    if (!std::isfinite(arc.score))
      throw ParseError("non-finite arc score", line_no);
    max_node = std::max({max_node, arc.from, arc.to});
    lattice.arcs.push_back(std::move(arc));
  }
  if (!saw_line) throw ParseError("empty lattice file");
  lattice.num_nodes = max_node + 1;
  lattice.Validate();
  return lattice;
}

std::string FormatLattice(const WordLattice &lattice) {
  std::string out;
  for (const auto &arc : lattice.arcs) {
    out += std::to_string(arc.from);
    out += '\t';
    out += std::to_string(arc.to);
    out += '\t';
    out += arc.word;
    out += '\t';
    AppendDouble(&out, arc.score);
    out += '\n';
  }
  for (int f : lattice.final_nodes) {
    out += "final\t";
    out += std::to_string(f);
    out += '\n';
  }
  return out;
}

std::vector<Transcript> ParseTranscripts(std::string_view text) {
  std::vector<Transcript> out;
  long long line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = StripCr(raw);
    if (IsBlank(line)) continue;
    auto fields = SplitOn(line, '\t');
    if (fields.empty() || fields.size() > 2)
      throw ParseError("expected 'utt_id<TAB>word ...'", line_no);
    Transcript t;
    t.utt_id = std::string(fields[0]);
    if (t.utt_id.empty()) throw ParseError("empty utterance id", line_no);
    if (fields.size() == 2)
      for (std::string_view w : SplitWords(fields[1]))
        t.words.emplace_back(w);
    out.push_back(std::move(t));
  }
  return out;
}

std::string FormatTranscripts(const std::vector<Transcript> &transcripts) {
  std::string out;
  for (const auto &t : transcripts) {
    out += t.utt_id;
    out += '\t';
    for (size_t i = 0; i < t.words.size(); ++i) {
      if (i) out += ' ';
      out += t.words[i];
    }
    out += '\n';
  }
  return out;
}

Lexicon ParseLexicon(std::string_view text, const PhoneSet &phones) {
  Lexicon lex;
  long long line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = StripCr(raw);
    if (IsBlank(line)) continue;
    auto fields = SplitOn(line, '\t');
    if (fields.size() != 2)
      throw ParseError("expected 'word<TAB>phone phone ...'", line_no);
    std::string word(fields[0]);
    if (word.empty()) throw ParseError("empty word", line_no);
    std::vector<int> pron;
    for (std::string_view tok : SplitWords(fields[1])) {
      int phone = phones.Find(tok);
      if (phone < 0)
        throw ParseError("unknown phone label: " + std::string(tok), line_no);
      pron.push_back(phone);
    }
    if (pron.empty()) throw ParseError("empty pronunciation", line_no);
    lex.entries[word].push_back(std::move(pron));
  }
  return lex;
}

std::string FormatLexicon(const Lexicon &lexicon, const PhoneSet &phones) {
  std::string out;
  for (const auto &[word, prons] : lexicon.entries) {
    for (const auto &pron : prons) {
      out += word;
      out += '\t';
      for (size_t i = 0; i < pron.size(); ++i) {
        if (i) out += ' ';
        out += phones.Symbol(pron[i]);
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<LabeledScore> ParseScores(std::string_view text) {
  std::vector<LabeledScore> out;
  long long line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = StripCr(raw);
    if (IsBlank(line)) continue;
    auto fields = SplitOn(line, '\t');
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError("expected 'utt_id<TAB>score[<TAB>label]'", line_no);
    LabeledScore s;
    s.utt_id = std::string(fields[0]);
    if (s.utt_id.empty()) throw ParseError("empty utterance id", line_no);
    s.score = ParseDouble(fields[1], line_no, "score");
    if (!std::isfinite(s.score) || s.score < 0.0)
      throw ParseError("score must be finite and non-negative", line_no);
    if (fields.size() == 3) {
      s.has_label = true;
      if (fields[2] == "correct")
        s.label = Label::kCorrect;
      else if (fields[2] == "erroneous")
        s.label = Label::kErroneous;
      else
        throw ParseError("label must be 'correct' or 'erroneous'", line_no);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string FormatScores(const std::vector<LabeledScore> &scores) {
  std::string out;
  for (const auto &s : scores) {
    out += s.utt_id;
    out += '\t';
    AppendDouble(&out, s.score);
    if (s.has_label) {
      out += '\t';
      out += LabelName(s.label);
    }
    out += '\n';
  }
  return out;
}

std::string ReadFileToString(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteStringToFile(const std::string &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("short write to file: " + path);
}

}  // namespace tqa
