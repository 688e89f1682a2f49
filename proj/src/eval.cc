// tqa/eval.cc

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
#include <cstdio>
#include <string>

namespace tqa {

namespace {

void AppendF(std::string *out, const char *fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  out->append(buf);
}

}  // namespace

EditBreakdown LevenshteinAlign(const std::vector<std::string> &hyp,
                               const std::vector<std::string> &ref) {
  const int n = static_cast<int>(hyp.size());
  const int m = static_cast<int>(ref.size());
  // d[i][j]: edits aligning hyp[0,i) with ref[0,j). Moves recorded for the
  // backtrace; ties resolve substitution > insertion > deletion.
  enum Move : unsigned char { kHit, kSub, kIns, kDel };
  std::vector<int> d(static_cast<size_t>(n + 1) * (m + 1));
  std::vector<unsigned char> move(d.size());
  auto at = [m](int i, int j) { return static_cast<size_t>(i) * (m + 1) + j; };

  for (int j = 1; j <= m; ++j) {
    d[at(0, j)] = j;
    move[at(0, j)] = kDel;
  }
  for (int i = 1; i <= n; ++i) {
    d[at(i, 0)] = i;
    move[at(i, 0)] = kIns;
    for (int j = 1; j <= m; ++j) {
      bool match = hyp[i - 1] == ref[j - 1];
      int diag = d[at(i - 1, j - 1)] + (match ? 0 : 1);
      int ins = d[at(i - 1, j)] + 1;
      int del = d[at(i, j - 1)] + 1;
      int best = std::min({diag, ins, del});
      d[at(i, j)] = best;
      if (diag == best)
        move[at(i, j)] = match ? kHit : kSub;
      else if (ins == best)
        move[at(i, j)] = kIns;
      else
        move[at(i, j)] = kDel;
    }
  }

  EditBreakdown out;
  out.ref_len = m;
  int i = n, j = m;
  while (i > 0 || j > 0) {
    switch (move[at(i, j)]) {
      case kHit:
        ++out.hits;
        --i;
        --j;
        break;
      case kSub:
        ++out.substitutions;
        --i;
        --j;
        break;
      case kIns:
        ++out.insertions;
        --i;
        break;
      case kDel:
        ++out.deletions;
        --j;
        break;
    }
  }
  return out;
}

CorpusSummary CorpusReport(const std::vector<EditBreakdown> &breakdowns) {
  if (breakdowns.empty())
    throw ValidationError("corpus report over an empty breakdown list");
  CorpusSummary s;
  s.num_sentences = static_cast<long long>(breakdowns.size());
  for (const auto &b : breakdowns) {
    if (b.hits + b.deletions + b.substitutions != b.ref_len)
      throw ValidationError("breakdown does not tile its reference");
    s.total_ref_len += b.ref_len;
    s.insertions += b.insertions;
    s.deletions += b.deletions;
    s.substitutions += b.substitutions;
    if (b.Edits() > 0) ++s.sentences_with_errors;
  }
  if (s.total_ref_len == 0)
    throw ValidationError("zero total reference length");
  double ref_len = static_cast<double>(s.total_ref_len);
  s.wer = static_cast<double>(s.insertions + s.deletions + s.substitutions) /
          ref_len;
  s.ins_rate = static_cast<double>(s.insertions) / ref_len;
  s.del_rate = static_cast<double>(s.deletions) / ref_len;
  s.sub_rate = static_cast<double>(s.substitutions) / ref_len;
  s.ser = static_cast<double>(s.sentences_with_errors) /
          static_cast<double>(s.num_sentences);
  return s;
}

std::string FormatCorpusSummary(const CorpusSummary &s) {
  std::string out;
  out += "sentences " + std::to_string(s.num_sentences) + "\n";
  out += "ref_words " + std::to_string(s.total_ref_len) + "\n";
  out += "WER ";
  AppendF(&out, "%.2f%%", 100.0 * s.wer);
  out += " (ins ";
  AppendF(&out, "%.2f%%", 100.0 * s.ins_rate);
  out += ", del ";
  AppendF(&out, "%.2f%%", 100.0 * s.del_rate);
  out += ", sub ";
  AppendF(&out, "%.2f%%", 100.0 * s.sub_rate);
  out += ")\nSER ";
  AppendF(&out, "%.2f%%", 100.0 * s.ser);
  out += "\n";
  return out;
}

DetCurve ComputeDetCurve(const std::vector<LabeledScore> &scores,
                         const SweepSpec &sweep) {
  if (sweep.num_points < 2 || !(sweep.hi > sweep.lo) || sweep.lo < 0.0)
    throw ConfigError("bad threshold sweep");
  std::vector<double> correct, erroneous;
  for (const auto &s : scores) {
    if (!s.has_label)
      throw ValidationError("unlabeled score for " + s.utt_id);
    (s.label == Label::kCorrect ? correct : erroneous).push_back(s.score);
  }
  if (correct.empty() || erroneous.empty())
    throw ValidationError(
        "DET curve needs both correct and erroneous utterances");
  std::sort(correct.begin(), correct.end());
  std::sort(erroneous.begin(), erroneous.end());

  DetCurve curve;
  curve.points.reserve(sweep.num_points);
  const double n_c = static_cast<double>(correct.size());
  const double n_e = static_cast<double>(erroneous.size());
  for (int j = 0; j < sweep.num_points; ++j) {
    double frac = static_cast<double>(j) / (sweep.num_points - 1);
    double t = sweep.lo + (sweep.hi - sweep.lo) * frac;
    // Flagged erroneous iff score > t; ties classify as correct.
    auto c_kept = std::upper_bound(correct.begin(), correct.end(), t) -
                  correct.begin();
    auto e_kept = std::upper_bound(erroneous.begin(), erroneous.end(), t) -
                  erroneous.begin();
    curve.points.push_back(
        {t, static_cast<double>(correct.size() - c_kept) / n_c,
         static_cast<double>(e_kept) / n_e});
  }
  return curve;
}

EerResult ComputeEer(const DetCurve &curve) {
  if (curve.points.empty()) throw ValidationError("empty DET curve");
  EerResult r;
  for (size_t i = 0; i < curve.points.size(); ++i) {
    const auto &p = curve.points[i];
    double g = p.fpr - p.fnr;
    if (g == 0.0) {
      r.eer = p.fpr;
      r.threshold = p.threshold;
      return r;
    }
    if (i + 1 < curve.points.size()) {
      const auto &q = curve.points[i + 1];
      double g_next = q.fpr - q.fnr;
      if ((g > 0.0) != (g_next > 0.0) && g_next != 0.0) {
        double alpha = g / (g - g_next);
        r.eer = p.fpr + alpha * (q.fpr - p.fpr);
        r.threshold = p.threshold + alpha * (q.threshold - p.threshold);
        return r;
      }
    }
  }
  // The sweep never crossed FPR = FNR; report the closest point, flagged.
  size_t best = 0;
  double best_gap = std::abs(curve.points[0].fpr - curve.points[0].fnr);
  for (size_t i = 1; i < curve.points.size(); ++i) {
    double gap = std::abs(curve.points[i].fpr - curve.points[i].fnr);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  r.eer = 0.5 * (curve.points[best].fpr + curve.points[best].fnr);
  r.threshold = curve.points[best].threshold;
  r.degenerate = true;
  return r;
}

std::string FormatDetCurveTsv(const DetCurve &curve) {
  std::string out;
  for (const auto &p : curve.points) {
    AppendF(&out, "%.6f", p.threshold);
    out += '\t';
    AppendF(&out, "%.6f", p.fpr);
    out += '\t';
    AppendF(&out, "%.6f", p.fnr);
    out += '\n';
  }
  return out;
}

double Probit(double p) {
  // Acklam's rational approximation to the inverse normal CDF; relative
  // error below 1.15e-9 across (0,1), plenty for axis warping.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (!(p > 0.0 && p < 1.0))
    throw ConfigError("Probit argument must be inside (0,1)");
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

std::string RenderDetSvg(const std::vector<NamedCurve> &curves) {
  if (curves.empty()) throw ConfigError("no curves to plot");
  constexpr double kLoRate = 1e-3, kHiRate = 1.0 - 1e-3;
  constexpr int kSize = 640, kMargin = 70;
  const double z_lo = Probit(kLoRate), z_hi = Probit(kHiRate);
  auto x_of = [&](double rate) {
    double z = Probit(std::clamp(rate, kLoRate, kHiRate));
    return kMargin + (z - z_lo) / (z_hi - z_lo) * (kSize - 2 * kMargin);
  };
  auto y_of = [&](double rate) {
    double z = Probit(std::clamp(rate, kLoRate, kHiRate));
    return kSize - kMargin - (z - z_lo) / (z_hi - z_lo) * (kSize - 2 * kMargin);
  };
  static const char *kColors[] = {"#00539c", "#b21e35", "#1f7a33", "#8a3fa8",
                                  "#c46a00"};
  static const double kTicks[] = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05,
                                  0.1,   0.2,   0.4,   0.6,  0.8,  0.9};

  std::string svg;
  auto addf = [&svg](const char *fmt, double v) { AppendF(&svg, fmt, v); };
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(kSize) + "\" height=\"" + std::to_string(kSize) +
         "\" viewBox=\"0 0 " + std::to_string(kSize) + " " +
         std::to_string(kSize) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (double tick : kTicks) {
    double x = x_of(tick), y = y_of(tick);
    addf("<line x1=\"%.1f", x);
    addf("\" x2=\"%.1f", x);
    svg += "\" y1=\"" + std::to_string(kMargin) + "\" y2=\"" +
           std::to_string(kSize - kMargin) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + std::to_string(kMargin) + "\" x2=\"" +
           std::to_string(kSize - kMargin) + "\"";
    addf(" y1=\"%.1f\"", y);
    addf(" y2=\"%.1f\"", y);
    svg += " stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    addf("<text x=\"%.1f", x);
    svg += "\" y=\"" + std::to_string(kSize - kMargin + 18) +
           "\" font-size=\"11\" font-family=\"sans-serif\" "
           "text-anchor=\"middle\">";
    addf(tick < 0.01 ? "%.1f" : "%.0f", 100.0 * tick);
    svg += "</text>\n";
    svg += "<text x=\"" + std::to_string(kMargin - 8) + "\"";
    addf(" y=\"%.1f\"", y + 4);
    svg += " font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">";
    addf(tick < 0.01 ? "%.1f" : "%.0f", 100.0 * tick);
    svg += "</text>\n";
  }

  // Frame and the FPR = FNR locus.
  svg += "<rect x=\"" + std::to_string(kMargin) + "\" y=\"" +
         std::to_string(kMargin) + "\" width=\"" +
         std::to_string(kSize - 2 * kMargin) + "\" height=\"" +
         std::to_string(kSize - 2 * kMargin) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";
  svg += "<line x1=\"" + std::to_string(kMargin) + "\" y1=\"" +
         std::to_string(kSize - kMargin) + "\" x2=\"" +
         std::to_string(kSize - kMargin) + "\" y2=\"" +
         std::to_string(kMargin) +
         "\" stroke=\"#999999\" stroke-dasharray=\"4 4\"/>\n";

  for (size_t idx = 0; idx < curves.size(); ++idx) {
    const char *color = kColors[idx % (sizeof(kColors) / sizeof(*kColors))];
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.8\" points=\"";
    for (const auto &p : curves[idx].curve.points) {
      addf("%.1f", x_of(p.fpr));
      svg += ',';
      addf("%.1f", y_of(p.fnr));
      svg += ' ';
    }
    svg += "\"/>\n";
    double ly = kMargin + 18.0 + 16.0 * static_cast<double>(idx);
    svg += "<rect x=\"" + std::to_string(kSize - kMargin - 150) + "\"";
    addf(" y=\"%.1f\"", ly - 9);
    svg += " width=\"12\" height=\"3\" fill=\"";
    svg += color;
    svg += "\"/>\n<text x=\"" + std::to_string(kSize - kMargin - 132) + "\"";
    addf(" y=\"%.1f\"", ly - 4);
    svg += " font-size=\"12\" font-family=\"sans-serif\">";
    svg += curves[idx].name;
    svg += "</text>\n";
  }

  svg += "<text x=\"" + std::to_string(kSize / 2) + "\" y=\"" +
         std::to_string(kSize - 20) +
         "\" font-size=\"13\" font-family=\"sans-serif\" "
         "text-anchor=\"middle\">false positive rate (%)</text>\n";
  svg += "<text x=\"20\" y=\"" + std::to_string(kSize / 2) +
         "\" font-size=\"13\" font-family=\"sans-serif\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         std::to_string(kSize / 2) +
         ")\">false negative rate (%)</text>\n</svg>\n";
  return svg;
}

}  // namespace tqa
