#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mt/bleu.h"
#include "mt/decoder.h"
#include "mt/feature_vector.h"

namespace mt {

struct ProConfig {
  int pairs_sampled = 5000;   // Gamma
  int pairs_kept = 50;        // Xi
  double min_gap = 0.05;      // t, on sentence BLEU+1
  double interpolation = 0.1; // Psi
  int iterations = 15;
  double regularization = 0.1;  // L2 lambda
  uint64_t seed = 1;
};

using NBestPool = std::vector<std::vector<Candidate>>;  // per sentence

// One PRO step: sample candidate pairs per sentence, keep the largest
// BLEU+1 gaps, fit an L2-regularized logistic ranking separator, return
// Psi * w_new + (1 - Psi) * w_old. Returns w_old unchanged (updated =
// false) when no pair anywhere exceeds the gap threshold.
Weights pro_iteration(const NBestPool& pool, const std::vector<RefSet>& refs,
                      const Weights& w_old, const ProConfig& cfg,
                      bool* updated = nullptr);

struct TuneResult {
  Weights weights;
  std::vector<double> bleu_trace;    // corpus BLEU of each iteration's 1-best
  std::vector<Weights> weight_trace; // weights after each iteration
};

// Generic tuning loop over a pluggable decode backend: the callback
// returns the n-best list for a sentence under the given weights, best
// first. Pools candidates across iterations, deduplicated by target string.
using DecodeNBestFn =
    std::function<std::vector<Candidate>(int sent_id, const Weights& w)>;

TuneResult tune_loop(int n_sents, const DecodeNBestFn& decode_nbest,
                     const std::vector<RefSet>& refs, Weights init,
                     const ProConfig& cfg, int iterations);

// Tuning against the real decoder.
TuneResult tune(const std::vector<SourceSentence>& dev,
                const std::vector<RefSet>& refs, const Models& models,
                const DecoderConfig& dcfg, const ProConfig& pcfg,
                int iterations, int jobs = 1);

}  // namespace mt
