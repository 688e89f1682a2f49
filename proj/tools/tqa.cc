// tools/tqa.cc

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
// Command-line front end: corpus synthesis, the two detector arms, DET/EER
// evaluation, and corpus error reports. Every command writes manifest.txt
// under --out echoing its effective configuration; reruns from the same
// manifest produce byte-identical outputs (only the wall-clock line moves).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "tqa/eval.h"
#include "tqa/io.h"
#include "tqa/pipeline.h"
#include "tqa/synth.h"

namespace tqa {
namespace {

using ManifestEntries = std::vector<std::pair<std::string, std::string>>;

std::string Fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// Prints and records per-utterance failures; the run still writes its scores
// but exits nonzero so batch drivers notice.
int ReportFailures(const char *cmd, const DetectReport &report,
                   const std::string &out) {
  if (report.failures.empty()) return 0;
  std::string joined;
  for (const auto &f : report.failures) {
    joined += f;
    joined += '\n';
  }
  WriteStringToFile(out + "/failures.tsv", joined);
  std::fprintf(stderr, "tqa %s: %zu utterance(s) failed:\n", cmd,
               report.failures.size());
  for (const auto &f : report.failures)
    std::fprintf(stderr, "  %s\n", f.c_str());
  return 1;
}

// --------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string out;
  std::string preset = "default";
  SynthSpec spec = PresetSpec("default");
  int jobs = 1;

  // Option handles, so preset values only fill fields the user left alone.
  CLI::Option *num_utts = nullptr, *min_words = nullptr, *max_words = nullptr,
              *lexicon_size = nullptr, *min_ppw = nullptr, *max_ppw = nullptr,
              *min_fpp = nullptr, *max_fpp = nullptr, *num_phones = nullptr,
              *homophones = nullptr, *seed = nullptr, *alpha = nullptr,
              *spread = nullptr, *jitter = nullptr, *ins = nullptr,
              *del = nullptr, *sub = nullptr, *clustering = nullptr;
};

void AddSynth(CLI::App *app, SynthArgs *a) {
  CLI::App *cmd =
      app->add_subcommand("synth", "Generate a labeled synthetic corpus");
  cmd->add_option("--out", a->out, "Output corpus directory")->required();
  cmd->add_option("--preset", a->preset,
                  "Start from a named setup: default (published error rates, "
                  "alpha 0.85), fig2 (the published error-clustering regime), "
                  "clean (noise-free, no errors)")
      ->check(CLI::IsMember({"default", "fig2", "clean"}))
      ->capture_default_str();
  CorpusConfig *c = &a->spec.corpus;
  a->num_utts = cmd->add_option("--num-utts", c->num_utterances,
                                "Number of utterances")
                    ->capture_default_str();
  a->min_words =
      cmd->add_option("--min-words", c->words_per_utterance.lo,
                      "Minimum words per utterance")
          ->capture_default_str();
  a->max_words =
      cmd->add_option("--max-words", c->words_per_utterance.hi,
                      "Maximum words per utterance")
          ->capture_default_str();
  a->lexicon_size = cmd->add_option("--lexicon-size", c->lexicon_size,
                                    "Number of distinct words")
                        ->capture_default_str();
  a->min_ppw = cmd->add_option("--min-phones-per-word", c->phones_per_word.lo,
                               "Minimum pronunciation length")
                   ->capture_default_str();
  a->max_ppw = cmd->add_option("--max-phones-per-word", c->phones_per_word.hi,
                               "Maximum pronunciation length")
                   ->capture_default_str();
  a->min_fpp =
      cmd->add_option("--min-frames-per-phone", c->frames_per_phone.lo,
                      "Minimum phone duration in frames")
          ->capture_default_str();
  a->max_fpp =
      cmd->add_option("--max-frames-per-phone", c->frames_per_phone.hi,
                      "Maximum phone duration in frames")
          ->capture_default_str();
  a->num_phones =
      cmd->add_option("--num-phones", c->num_phones, "Phone inventory size")
          ->capture_default_str();
  a->homophones =
      cmd->add_option("--homophone-pairs", c->homophone_pairs,
                      "Words sharing another word's pronunciation")
          ->capture_default_str();
  a->seed = cmd->add_option("--seed", c->seed, "Master random seed")
                ->capture_default_str();
  NoiseConfig *n = &a->spec.noise;
  a->alpha = cmd->add_option("--alpha", n->alpha,
                             "Mean posterior mass on the true phone")
                 ->capture_default_str();
  a->spread = cmd->add_option("--spread", n->spread,
                              "Dirichlet concentration of the noise")
                  ->capture_default_str();
  a->jitter = cmd->add_option("--duration-jitter", n->duration_jitter,
                              "Max segment boundary wobble in frames")
                  ->capture_default_str();
  ErrorRates *r = &a->spec.rates;
  a->ins = cmd->add_option("--insertion-rate", r->insertion,
                           "Per-word insertion probability")
               ->capture_default_str();
  a->del = cmd->add_option("--deletion-rate", r->deletion,
                           "Per-word deletion probability")
               ->capture_default_str();
  a->sub = cmd->add_option("--substitution-rate", r->substitution,
                           "Per-word substitution probability")
               ->capture_default_str();
  a->clustering =
      cmd->add_option("--clustering", r->clustering,
                      "Fraction of sentences eligible for edits")
          ->capture_default_str();
  cmd->add_option("--jobs", a->jobs, "Worker threads")
      ->envname("TQA_JOBS")
      ->capture_default_str();
}

int RunSynth(SynthArgs *a) {
  // Layering: preset, then config file / flags on top.
  SynthSpec spec = PresetSpec(a->preset);
  const SynthSpec &flags = a->spec;
  if (a->num_utts->count())
    spec.corpus.num_utterances = flags.corpus.num_utterances;
  if (a->min_words->count())
    spec.corpus.words_per_utterance.lo = flags.corpus.words_per_utterance.lo;
  if (a->max_words->count())
    spec.corpus.words_per_utterance.hi = flags.corpus.words_per_utterance.hi;
  if (a->lexicon_size->count())
    spec.corpus.lexicon_size = flags.corpus.lexicon_size;
  if (a->min_ppw->count())
    spec.corpus.phones_per_word.lo = flags.corpus.phones_per_word.lo;
  if (a->max_ppw->count())
    spec.corpus.phones_per_word.hi = flags.corpus.phones_per_word.hi;
  if (a->min_fpp->count())
    spec.corpus.frames_per_phone.lo = flags.corpus.frames_per_phone.lo;
  if (a->max_fpp->count())
    spec.corpus.frames_per_phone.hi = flags.corpus.frames_per_phone.hi;
  if (a->num_phones->count()) spec.corpus.num_phones = flags.corpus.num_phones;
  if (a->homophones->count())
    spec.corpus.homophone_pairs = flags.corpus.homophone_pairs;
  if (a->seed->count()) spec.corpus.seed = flags.corpus.seed;
  if (a->alpha->count()) spec.noise.alpha = flags.noise.alpha;
  if (a->spread->count()) spec.noise.spread = flags.noise.spread;
  if (a->jitter->count())
    spec.noise.duration_jitter = flags.noise.duration_jitter;
  if (a->ins->count()) spec.rates.insertion = flags.rates.insertion;
  if (a->del->count()) spec.rates.deletion = flags.rates.deletion;
  if (a->sub->count()) spec.rates.substitution = flags.rates.substitution;
  if (a->clustering->count()) spec.rates.clustering = flags.rates.clustering;

  Timer timer;
  std::filesystem::create_directories(a->out);
  const SynthSummary summary = SynthesizeCorpus(a->out, spec, a->jobs);

  ManifestEntries entries = {
      {"out", a->out},
      {"preset", a->preset},
      {"num_utts", std::to_string(spec.corpus.num_utterances)},
      {"min_words", std::to_string(spec.corpus.words_per_utterance.lo)},
      {"max_words", std::to_string(spec.corpus.words_per_utterance.hi)},
      {"lexicon_size", std::to_string(spec.corpus.lexicon_size)},
      {"min_phones_per_word", std::to_string(spec.corpus.phones_per_word.lo)},
      {"max_phones_per_word", std::to_string(spec.corpus.phones_per_word.hi)},
      {"min_frames_per_phone",
       std::to_string(spec.corpus.frames_per_phone.lo)},
      {"max_frames_per_phone",
       std::to_string(spec.corpus.frames_per_phone.hi)},
      {"num_phones", std::to_string(spec.corpus.num_phones)},
      {"homophone_pairs", std::to_string(spec.corpus.homophone_pairs)},
      {"seed", std::to_string(spec.corpus.seed)},
      {"alpha", Fmt(spec.noise.alpha)},
      {"spread", Fmt(spec.noise.spread)},
      {"duration_jitter", std::to_string(spec.noise.duration_jitter)},
      {"insertion_rate", Fmt(spec.rates.insertion)},
      {"deletion_rate", Fmt(spec.rates.deletion)},
      {"substitution_rate", Fmt(spec.rates.substitution)},
      {"clustering", Fmt(spec.rates.clustering)},
      {"jobs", std::to_string(a->jobs)},
      {"num_erroneous", std::to_string(summary.num_erroneous)},
      {"total_frames", std::to_string(summary.total_frames)},
      {"applied_wer", Fmt(summary.applied.wer)},
      {"applied_ser", Fmt(summary.applied.ser)},
  };
  WriteManifest(a->out + "/manifest.txt", "synth", entries, timer.Seconds());
  std::printf("synthesized %d utterances (%d erroneous) into %s\n",
              summary.num_utterances, summary.num_erroneous, a->out.c_str());
  return 0;
}

// --------------------------------------------------------------------------
// detect-kl

struct DetectKlArgs {
  std::string corpus;
  std::string out;
  std::string q_source = "reestimated";
  KlDetectOptions opt;
};

void AddDetectKl(CLI::App *app, DetectKlArgs *a) {
  CLI::App *cmd = app->add_subcommand(
      "detect-kl",
      "Score utterances by the spread of the alignment-vs-classifier "
      "divergence track");
  cmd->add_option("--corpus", a->corpus, "Corpus directory")->required();
  cmd->add_option("--out", a->out, "Output directory")->required();
  cmd->add_option("--half-window", a->opt.half_window,
                  "Median filter half width N (window 2N+1)")
      ->capture_default_str();
  cmd->add_option("--floor", a->opt.floor,
                  "Probability floor inside the divergence")
      ->capture_default_str();
  cmd->add_option("--epsilon", a->opt.epsilon,
                  "Smoothing mass spread off the aligned phone")
      ->capture_default_str();
  cmd->add_option("--q-source", a->q_source,
                  "Classifier posteriors: raw, or reestimated through the "
                  "phone lattice")
      ->check(CLI::IsMember({"raw", "reestimated"}))
      ->capture_default_str();
  cmd->add_option("--switch-penalty", a->opt.graph.switch_penalty,
                  "Phone-change penalty of the re-estimation graph, nats")
      ->capture_default_str();
  cmd->add_option("--min-duration", a->opt.graph.min_duration,
                  "Minimum phone duration of the re-estimation graph, frames")
      ->capture_default_str();
  cmd->add_option("--rec-beam", a->opt.graph.beam,
                  "Pruning beam of the re-estimation graph, nats")
      ->capture_default_str();
  cmd->add_option("--jobs", a->opt.jobs, "Worker threads")
      ->envname("TQA_JOBS")
      ->capture_default_str();
}

int RunDetectKl(DetectKlArgs *a) {
  a->opt.reestimate = a->q_source == "reestimated";
  Timer timer;
  std::filesystem::create_directories(a->out);
  const CorpusOnDisk corpus = LoadCorpus(a->corpus);
  const DetectReport report = RunKlDetection(corpus, a->opt);
  WriteStringToFile(a->out + "/scores.tsv", FormatScores(report.scores));

  ManifestEntries entries = {
      {"corpus", a->corpus},
      {"out", a->out},
      {"half_window", std::to_string(a->opt.half_window)},
      {"floor", Fmt(a->opt.floor)},
      {"epsilon", Fmt(a->opt.epsilon)},
      {"q_source", a->q_source},
      {"switch_penalty", Fmt(a->opt.graph.switch_penalty)},
      {"min_duration", std::to_string(a->opt.graph.min_duration)},
      {"rec_beam", Fmt(a->opt.graph.beam)},
      {"jobs", std::to_string(a->opt.jobs)},
      {"num_scored", std::to_string(report.scores.size())},
      {"num_failed", std::to_string(report.failures.size())},
  };
  WriteManifest(a->out + "/manifest.txt", "detect-kl", entries,
                timer.Seconds());
  return ReportFailures("detect-kl", report, a->out);
}

// --------------------------------------------------------------------------
// detect-biased

struct DetectBiasedArgs {
  std::string corpus;
  std::string out;
  BiasedDetectOptions opt;
};

void AddDetectBiased(CLI::App *app, DetectBiasedArgs *a) {
  CLI::App *cmd = app->add_subcommand(
      "detect-biased",
      "Score utterances by lattice-oracle WER when decoding under "
      "transcript-biased language models");
  cmd->add_option("--corpus", a->corpus, "Corpus directory")->required();
  cmd->add_option("--out", a->out, "Output directory")->required();
  cmd->add_option("--lambda", a->opt.lambda,
                  "Transcript weight in the biased model")
      ->capture_default_str();
  cmd->add_option("--top-n", a->opt.top_n,
                  "Background unigram: this many most frequent words")
      ->capture_default_str();
  cmd->add_option("--order", a->opt.order, "Biased model n-gram order")
      ->capture_default_str();
  cmd->add_option("--beam", a->opt.decode.beam, "Decoding beam, nats")
      ->capture_default_str();
  cmd->add_option("--max-active", a->opt.decode.max_active,
                  "Token cap per frame")
      ->capture_default_str();
  cmd->add_option("--lm-weight", a->opt.decode.lm_weight,
                  "Scale on language model scores")
      ->capture_default_str();
  cmd->add_option("--word-penalty", a->opt.decode.word_insertion_penalty,
                  "Score added per emitted word")
      ->capture_default_str();
  cmd->add_flag("--general-lm", a->opt.general_lm,
                "Baseline arm: decode under one corpus-level model instead "
                "of per-utterance biased ones");
  cmd->add_option("--general-order", a->opt.general_order,
                  "N-gram order of the corpus-level baseline model")
      ->capture_default_str();
  cmd->add_option("--jobs", a->opt.jobs, "Worker threads")
      ->envname("TQA_JOBS")
      ->capture_default_str();
}

int RunDetectBiased(DetectBiasedArgs *a) {
  Timer timer;
  std::filesystem::create_directories(a->out);
  const CorpusOnDisk corpus = LoadCorpus(a->corpus);
  const DetectReport report = RunBiasedDetection(corpus, a->opt);
  WriteStringToFile(a->out + "/scores.tsv", FormatScores(report.scores));

  ManifestEntries entries = {
      {"corpus", a->corpus},
      {"out", a->out},
      {"lambda", Fmt(a->opt.lambda)},
      {"top_n", std::to_string(a->opt.top_n)},
      {"order", std::to_string(a->opt.order)},
      {"beam", Fmt(a->opt.decode.beam)},
      {"max_active", std::to_string(a->opt.decode.max_active)},
      {"lm_weight", Fmt(a->opt.decode.lm_weight)},
      {"word_penalty", Fmt(a->opt.decode.word_insertion_penalty)},
      {"general_lm", a->opt.general_lm ? "true" : "false"},
      {"general_order", std::to_string(a->opt.general_order)},
      {"jobs", std::to_string(a->opt.jobs)},
      {"num_scored", std::to_string(report.scores.size())},
      {"num_failed", std::to_string(report.failures.size())},
  };
  WriteManifest(a->out + "/manifest.txt", "detect-biased", entries,
                timer.Seconds());
  return ReportFailures("detect-biased", report, a->out);
}

// --------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::vector<double> sweep;  // lo hi points; empty = per-file auto
};

void AddEvaluate(CLI::App *app, EvaluateArgs *a) {
  CLI::App *cmd = app->add_subcommand(
      "evaluate", "DET curves and equal error rates for labeled score files");
  cmd->add_option("scores", a->inputs, "Labeled score TSVs, one per detector")
      ->required()
      ->expected(-1);
  cmd->add_option("--out", a->out, "Output directory")->required();
  cmd->add_option("--sweep", a->sweep,
                  "Fixed threshold sweep LO HI POINTS; default picks [0,1] "
                  "for rate-like scores and [0,20] otherwise, per file")
      ->expected(3);
}

int RunEvaluate(EvaluateArgs *a) {
  Timer timer;
  std::filesystem::create_directories(a->out);

  std::vector<std::pair<std::string, std::vector<LabeledScore>>> sets;
  std::set<std::string> used;
  for (const auto &path : a->inputs) {
    // Curves are named by file stem; colliding stems (several .../scores.tsv)
    // pull in the parent directory instead.
    const std::filesystem::path p(path);
    std::string name = p.stem().string();
    if (used.count(name) && p.has_parent_path())
      name = p.parent_path().filename().string() + "-" + name;
    std::string candidate = name;
    for (int k = 2; used.count(candidate); ++k)
      candidate = name + "-" + std::to_string(k);
    used.insert(candidate);
    sets.emplace_back(candidate, ParseScores(ReadFileToString(path)));
  }

  EvaluateOptions opt;
  if (!a->sweep.empty()) {
    opt.auto_sweep = false;
    opt.sweep = {a->sweep[0], a->sweep[1],
                 static_cast<int>(std::lround(a->sweep[2]))};
  }
  const EvaluateResult result = Evaluate(sets, opt);

  for (const auto &entry : result.entries)
    WriteStringToFile(a->out + "/" + entry.name + ".det.tsv",
                      FormatDetCurveTsv(entry.curve));
  WriteStringToFile(a->out + "/det.svg", result.svg);
  const std::string table = FormatEerTable(result);
  WriteStringToFile(a->out + "/eer.tsv", table);
  std::fputs(table.c_str(), stdout);

  std::string inputs;
  for (const auto &path : a->inputs) {
    if (!inputs.empty()) inputs += ';';
    inputs += path;
  }
  ManifestEntries entries = {
      {"inputs", inputs},
      {"out", a->out},
      {"sweep", a->sweep.empty()
                    ? "auto"
                    : Fmt(a->sweep[0]) + ":" + Fmt(a->sweep[1]) + ":" +
                          Fmt(a->sweep[2])},
      {"num_sets", std::to_string(sets.size())},
  };
  WriteManifest(a->out + "/manifest.txt", "evaluate", entries,
                timer.Seconds());
  return 0;
}

// --------------------------------------------------------------------------
// report

struct ReportArgs {
  std::string corpus;
  std::string out;
};

void AddReport(CLI::App *app, ReportArgs *a) {
  CLI::App *cmd = app->add_subcommand(
      "report",
      "Corpus-level WER/SER of the observed transcripts against the truth");
  cmd->add_option("--corpus", a->corpus,
                  "Corpus directory with text.tsv and text_true.tsv")
      ->required();
  cmd->add_option("--out", a->out, "Output directory")->required();
}

int RunReport(ReportArgs *a) {
  Timer timer;
  std::filesystem::create_directories(a->out);
  const auto ref =
      ParseTranscripts(ReadFileToString(a->corpus + "/text_true.tsv"));
  const auto hyp = ParseTranscripts(ReadFileToString(a->corpus + "/text.tsv"));
  std::map<std::string, const Transcript *> observed;
  for (const auto &t : hyp) {
    if (!observed.emplace(t.utt_id, &t).second)
      throw ValidationError("duplicate utterance id in text.tsv: " + t.utt_id);
  }
  std::vector<EditBreakdown> breakdowns;
  breakdowns.reserve(ref.size());
  for (const auto &r : ref) {
    auto it = observed.find(r.utt_id);
    if (it == observed.end())
      throw ValidationError("no observed transcript for " + r.utt_id);
    breakdowns.push_back(LevenshteinAlign(it->second->words, r.words));
  }
  const CorpusSummary summary = CorpusReport(breakdowns);
  const std::string text = FormatCorpusSummary(summary);
  WriteStringToFile(a->out + "/report.txt", text);
  std::fputs(text.c_str(), stdout);

  ManifestEntries entries = {
      {"corpus", a->corpus},
      {"out", a->out},
      {"num_sentences", std::to_string(summary.num_sentences)},
      {"wer", Fmt(summary.wer)},
      {"ser", Fmt(summary.ser)},
  };
  WriteManifest(a->out + "/manifest.txt", "report", entries, timer.Seconds());
  return 0;
}

int Main(int argc, char **argv) {
  CLI::App app{
      "Transcription quality assessment: synthetic corpora, divergence and "
      "biased-LM detectors, DET/EER evaluation"};
  app.name("tqa");
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "TOML-style config file with one [section] per subcommand");

  SynthArgs synth;
  DetectKlArgs detect_kl;
  DetectBiasedArgs detect_biased;
  EvaluateArgs evaluate;
  ReportArgs report;
  AddSynth(&app, &synth);
  AddDetectKl(&app, &detect_kl);
  AddDetectBiased(&app, &detect_biased);
  AddEvaluate(&app, &evaluate);
  AddReport(&app, &report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "synth") return RunSynth(&synth);
    if (cmd == "detect-kl") return RunDetectKl(&detect_kl);
    if (cmd == "detect-biased") return RunDetectBiased(&detect_biased);
    if (cmd == "report") return RunReport(&report);
    try {
      return RunEvaluate(&evaluate);
    } catch (const ValidationError &ex) {
      std::fprintf(stderr, "tqa evaluate: degenerate separation: %s\n",
                   ex.what());
      return 1;
    }
  } catch (const Error &ex) {
    std::fprintf(stderr, "tqa %s: error: %s\n", cmd.c_str(), ex.what());
    return 1;
  }
}

}  // namespace
}  // namespace tqa

int main(int argc, char **argv) { return tqa::Main(argc, argv); }
