// tests/eval-test.cc

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

#include "tqa/eval.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "doctest.h"
#include "tqa/rng.h"

namespace tqa {
namespace {

using Words = std::vector<std::string>;

// Exhaustive edit-script search: walks every monotone path through the edit
// lattice and keeps the cheapest cost plus every breakdown achieving it.
struct ScriptSearch {
  const Words &hyp, &ref;
  long long best_cost = 1 << 20;
  std::set<std::tuple<long long, long long, long long>> best_breakdowns;

  void Walk(size_t i, size_t j, long long ins, long long del, long long sub) {
    long long cost = ins + del + sub;
    if (cost > best_cost) return;
    if (i == hyp.size() && j == ref.size()) {
      if (cost < best_cost) {
        best_cost = cost;
        best_breakdowns.clear();
      }
      if (cost == best_cost) best_breakdowns.insert({ins, del, sub});
      return;
    }
    if (i < hyp.size() && j < ref.size())
      Walk(i + 1, j + 1, ins, del, sub + (hyp[i] == ref[j] ? 0 : 1));
    if (i < hyp.size()) Walk(i + 1, j, ins + 1, del, sub);
    if (j < ref.size()) Walk(i, j + 1, ins, del + 1, sub);
  }
};

Words RandomWords(Rng &rng, int max_len) {
  static const char *kVocab[] = {"a", "b", "c"};
  Words w;
  int len = static_cast<int>(rng.UniformInt(max_len + 1));
  for (int i = 0; i < len; ++i)
    w.push_back(kVocab[rng.UniformInt(3)]);
  return w;
}

TEST_CASE("identical sequences align with zero edits") {
  Words s = {"x", "y", "z"};
  EditBreakdown b = LevenshteinAlign(s, s);
  CHECK(b.Edits() == 0);
  CHECK(b.hits == 3);
  CHECK(b.ref_len == 3);
}

TEST_CASE("single-edit cases are classified correctly") {
  EditBreakdown del = LevenshteinAlign({"a", "c"}, {"a", "b", "c"});
  CHECK(del.deletions == 1);
  CHECK(del.hits == 2);
  CHECK(del.Edits() == 1);

  EditBreakdown ins = LevenshteinAlign({"a", "b", "c"}, {"a", "c"});
  CHECK(ins.insertions == 1);
  CHECK(ins.hits == 2);

  EditBreakdown sub = LevenshteinAlign({"a", "x", "c"}, {"a", "b", "c"});
  CHECK(sub.substitutions == 1);
  CHECK(sub.hits == 2);
}

TEST_CASE("ties resolve substitution over insertion over deletion") {
  // "b a" vs "a b" has three cost-2 alignments; the preferred one is two
  // substitutions.
  EditBreakdown b = LevenshteinAlign({"b", "a"}, {"a", "b"});
  CHECK(b.substitutions == 2);
  CHECK(b.insertions == 0);
  CHECK(b.deletions == 0);
  CHECK(b.hits == 0);
}

TEST_CASE("alignment matches exhaustive edit-script search") {
  Rng rng(SplitSeed(303, 0));
  for (int trial = 0; trial < 400; ++trial) {
    Words hyp = RandomWords(rng, 6);
    Words ref = RandomWords(rng, 6);
    EditBreakdown b = LevenshteinAlign(hyp, ref);
    CHECK(b.hits + b.deletions + b.substitutions == b.ref_len);

    ScriptSearch search{hyp, ref, 1 << 20, {}};
    search.Walk(0, 0, 0, 0, 0);
    CHECK(b.Edits() == search.best_cost);
    CHECK(search.best_breakdowns.count(
              {b.insertions, b.deletions, b.substitutions}) == 1);
  }
}

TEST_CASE("corpus report pools counts before dividing") {
  std::vector<EditBreakdown> clean(10);
  for (auto &b : clean) {
    b.ref_len = 10;
    b.hits = 10;
  }
  CorpusSummary s = CorpusReport(clean);
  CHECK(s.wer == 0.0);
  CHECK(s.ser == 0.0);

  clean[0].hits = 9;
  clean[0].substitutions = 1;
  s = CorpusReport(clean);
  CHECK(s.wer == doctest::Approx(0.01));
  CHECK(s.ser == doctest::Approx(0.10));
  CHECK(s.sub_rate == doctest::Approx(0.01));
  CHECK(s.ins_rate == 0.0);

  // Uneven sentence lengths: WER is total edits over total words, not a
  // mean of per-sentence rates.
  std::vector<EditBreakdown> uneven(2);
  uneven[0].ref_len = 1;
  uneven[0].substitutions = 1;
  uneven[1].ref_len = 99;
  uneven[1].hits = 99;
  CHECK(CorpusReport(uneven).wer == doctest::Approx(0.01));

  CHECK_THROWS_AS(CorpusReport({}), ValidationError);
  std::vector<EditBreakdown> empty_refs(1);
  CHECK_THROWS_AS(CorpusReport(empty_refs), ValidationError);
  std::vector<EditBreakdown> untiled(1);
  untiled[0].ref_len = 5;
  untiled[0].hits = 1;
  CHECK_THROWS_AS(CorpusReport(untiled), ValidationError);
}

std::vector<LabeledScore> MakeScores(const std::vector<double> &correct,
                                     const std::vector<double> &erroneous) {
  std::vector<LabeledScore> scores;
  int id = 0;
  for (double v : correct)
    scores.push_back({"c" + std::to_string(id++), v, true, Label::kCorrect});
  for (double v : erroneous)
    scores.push_back({"e" + std::to_string(id++), v, true, Label::kErroneous});
  return scores;
}

TEST_CASE("det curve endpoints and separability") {
  auto scores = MakeScores({2.0, 3.0}, {5.0, 6.0});
  DetCurve curve = ComputeDetCurve(scores, SweepSpec::KlSweep());
  // Threshold 0 is below every score: everything flagged.
  CHECK(curve.points.front().fpr == 1.0);
  CHECK(curve.points.front().fnr == 0.0);
  // Threshold 20 is above every score: nothing flagged.
  CHECK(curve.points.back().fpr == 0.0);
  CHECK(curve.points.back().fnr == 1.0);
  // Perfect separation: some point achieves (0, 0).
  bool perfect = false;
  for (const auto &p : curve.points)
    if (p.fpr == 0.0 && p.fnr == 0.0) perfect = true;
  CHECK(perfect);
  EerResult eer = ComputeEer(curve);
  CHECK(eer.eer == 0.0);
  CHECK(!eer.degenerate);
}

TEST_CASE("det curve rates are monotone in the threshold") {
  Rng rng(SplitSeed(303, 1));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> correct, erroneous;
    for (int i = 0; i < 50; ++i) {
      correct.push_back(rng.UniformDouble() * 18.0);
      erroneous.push_back(rng.UniformDouble() * 18.0 + 1.0);
    }
    DetCurve curve =
        ComputeDetCurve(MakeScores(correct, erroneous), SweepSpec::KlSweep());
    for (size_t i = 1; i < curve.points.size(); ++i) {
      CHECK(curve.points[i].fpr <= curve.points[i - 1].fpr);
      CHECK(curve.points[i].fnr >= curve.points[i - 1].fnr);
      CHECK(curve.points[i].fpr >= 0.0);
      CHECK(curve.points[i].fnr <= 1.0);
    }
  }
}

TEST_CASE("det curve rejects unlabeled or single-class inputs") {
  std::vector<LabeledScore> unlabeled = {{"u1", 1.0, false, Label::kCorrect}};
  CHECK_THROWS_AS(ComputeDetCurve(unlabeled, SweepSpec::WerSweep()),
                  ValidationError);
  auto one_class = MakeScores({1.0, 2.0}, {});
  CHECK_THROWS_AS(ComputeDetCurve(one_class, SweepSpec::KlSweep()),
                  ValidationError);
}

TEST_CASE("eer interpolates between bracketing sweep points") {
  // Two overlapping populations with a known crossing.
  auto scores = MakeScores({1.0, 2.0, 3.0, 4.0}, {2.5, 3.5, 4.5, 5.5});
  DetCurve curve = ComputeDetCurve(scores, SweepSpec::KlSweep());
  EerResult r = ComputeEer(curve);
  CHECK(!r.degenerate);
  CHECK(r.eer > 0.0);
  CHECK(r.eer < 1.0);
  // At the reported threshold the two interpolated rates meet.
  CHECK(r.eer == doctest::Approx(0.25).epsilon(0.15));
}

TEST_CASE("eer is invariant under an affine score map") {
  Rng rng(SplitSeed(303, 2));
  std::vector<double> correct, erroneous;
  for (int i = 0; i < 400; ++i) {
    correct.push_back(rng.UniformDouble() * 12.0);
    erroneous.push_back(rng.UniformDouble() * 12.0 + 4.0);
  }
  auto scores = MakeScores(correct, erroneous);
  EerResult base = ComputeEer(ComputeDetCurve(scores, SweepSpec::KlSweep()));

  auto mapped = scores;
  for (auto &s : mapped) s.score = 2.0 * s.score + 1.0;
  EerResult moved =
      ComputeEer(ComputeDetCurve(mapped, SweepSpec{1.0, 41.0, 2001}));
  CHECK(std::abs(base.eer - moved.eer) < 1e-9);
}

TEST_CASE("eer is stable under a denser sweep") {
  Rng rng(SplitSeed(303, 3));
  std::vector<double> correct, erroneous;
  for (int i = 0; i < 500; ++i) {
    correct.push_back(rng.UniformDouble());
    erroneous.push_back(std::min(1.0, rng.UniformDouble() + 0.2));
  }
  auto scores = MakeScores(correct, erroneous);
  EerResult coarse =
      ComputeEer(ComputeDetCurve(scores, SweepSpec{0.0, 1.0, 1001}));
  EerResult dense =
      ComputeEer(ComputeDetCurve(scores, SweepSpec{0.0, 1.0, 10001}));
  CHECK(std::abs(coarse.eer - dense.eer) < 0.005);
}

TEST_CASE("labels independent of scores give chance-level eer") {
  Rng rng(SplitSeed(303, 4));
  std::vector<LabeledScore> scores;
  for (int i = 0; i < 10000; ++i)
    scores.push_back({"u" + std::to_string(i), rng.UniformDouble() * 20.0,
                      true,
                      rng.Bernoulli(0.5) ? Label::kErroneous
                                         : Label::kCorrect});
  EerResult r = ComputeEer(ComputeDetCurve(scores, SweepSpec::KlSweep()));
  CHECK(r.eer == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("a curve that never crosses is flagged degenerate") {
  // Every score is 0, so nothing is ever flagged: FPR stays 0, FNR stays 1.
  auto scores = MakeScores({0.0, 0.0}, {0.0});
  EerResult r = ComputeEer(ComputeDetCurve(scores, SweepSpec::WerSweep()));
  CHECK(r.degenerate);
  CHECK(r.eer == doctest::Approx(0.5));
}

TEST_CASE("probit matches standard normal quantiles") {
  CHECK(Probit(0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(Probit(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(Probit(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-8));
  CHECK(Probit(0.001) == doctest::Approx(-3.090232306167813).epsilon(1e-8));
  CHECK(Probit(0.3) == doctest::Approx(-Probit(0.7)).epsilon(1e-9));
  CHECK_THROWS_AS(Probit(0.0), ConfigError);
  CHECK_THROWS_AS(Probit(1.0), ConfigError);
}

TEST_CASE("det tsv and svg outputs are well formed") {
  auto scores = MakeScores({0.1, 0.2}, {0.6, 0.7});
  DetCurve curve = ComputeDetCurve(scores, SweepSpec{0.0, 1.0, 11});
  std::string tsv = FormatDetCurveTsv(curve);
  CHECK(tsv.find("0.000000\t1.000000\t0.000000\n") == 0);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 11);

  std::string svg = RenderDetSvg({{"kl", curve}, {"wer", curve}});
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("kl") != std::string::npos);
  // Self-contained: the only URL is the SVG namespace itself.
  CHECK(svg.find("http", svg.find("xmlns") + 20) == std::string::npos);
}

}  // namespace
}  // namespace tqa
