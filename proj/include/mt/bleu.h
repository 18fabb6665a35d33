#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mt {

using TokenSeq = std::vector<std::string>;
using RefSet = std::vector<TokenSeq>;  // >=1 references per sentence

// Case-insensitive corpus BLEU-4 with the brevity penalty computed from
// each sentence's shortest reference.
double bleu_corpus(const std::vector<TokenSeq>& hyps,
                   const std::vector<RefSet>& refs);

// Sentence BLEU-4, add-1 smoothed numerator and denominator for n >= 2,
// unsmoothed unigram (zero unigram overlap scores 0), shortest-reference
// brevity penalty.
double bleu_sentence_plus1(const TokenSeq& hyp, const RefSet& refs);

// Paired bootstrap over sentences: first = fraction of resamples with
// BLEU(A) <= BLEU(B), second = fraction with BLEU(B) <= BLEU(A).
std::pair<double, double> bootstrap_significance(
    const std::vector<TokenSeq>& sys_a, const std::vector<TokenSeq>& sys_b,
    const std::vector<RefSet>& refs, int resamples, uint64_t seed);

}  // namespace mt
