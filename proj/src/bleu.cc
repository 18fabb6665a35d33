#include "mt/bleu.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "mt/types.h"

namespace mt {

namespace {

constexpr int kMaxOrder = 4;

std::map<std::string, int> ngram_counts(const TokenSeq& toks, int n) {
  std::map<std::string, int> counts;
  for (size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k) key += ' ';
      key += toks[i + k];
    }
    ++counts[key];
  }
  return counts;
}

TokenSeq folded(const TokenSeq& toks) {
  TokenSeq out;
  out.reserve(toks.size());
  for (const std::string& t : toks) out.push_back(fold_case(t));
  return out;
}

// Clipped match count of hyp n-grams against the max reference count.
int clipped_matches(const TokenSeq& hyp, const RefSet& refs, int n) {
  std::map<std::string, int> hc = ngram_counts(hyp, n);
  std::map<std::string, int> best;
  for (const TokenSeq& r : refs)
    for (const auto& [g, c] : ngram_counts(r, n))
      best[g] = std::max(best[g], c);
  int matches = 0;
  for (const auto& [g, c] : hc) {
    auto it = best.find(g);
    if (it != best.end()) matches += std::min(c, it->second);
  }
  return matches;
}

size_t shortest_ref_len(const RefSet& refs) {
  size_t r = refs[0].size();
  for (const TokenSeq& ref : refs) r = std::min(r, ref.size());
  return r;
}

struct Stats {
  long matches[kMaxOrder] = {0, 0, 0, 0};
  long totals[kMaxOrder] = {0, 0, 0, 0};
  long hyp_len = 0;
  long ref_len = 0;
};

Stats sentence_stats(const TokenSeq& hyp_raw, const RefSet& refs_raw) {
  if (refs_raw.empty()) throw std::invalid_argument("no references");
  TokenSeq hyp = folded(hyp_raw);
  RefSet refs;
  for (const TokenSeq& r : refs_raw) refs.push_back(folded(r));
  Stats s;
  s.hyp_len = static_cast<long>(hyp.size());
  s.ref_len = static_cast<long>(shortest_ref_len(refs));
  for (int n = 1; n <= kMaxOrder; ++n) {
    s.totals[n - 1] = std::max<long>(0, s.hyp_len - n + 1);
    if (s.totals[n - 1] > 0)
      s.matches[n - 1] = clipped_matches(hyp, refs, n);
  }
  return s;
}

double bleu_from_stats(const Stats& s) {
  double log_prec = 0.0;
  for (int n = 0; n < kMaxOrder; ++n) {
    if (s.matches[n] == 0 || s.totals[n] == 0) return 0.0;
    log_prec += std::log(static_cast<double>(s.matches[n]) / s.totals[n]);
  }
  if (s.hyp_len == 0) return 0.0;
  double bp = std::min(0.0, 1.0 - static_cast<double>(s.ref_len) / s.hyp_len);
  return std::exp(bp + log_prec / kMaxOrder);
}

Stats corpus_stats(const std::vector<TokenSeq>& hyps,
                   const std::vector<RefSet>& refs) {
  if (hyps.size() != refs.size())
    throw std::invalid_argument("hypothesis/reference count mismatch");
  Stats total;
  for (size_t i = 0; i < hyps.size(); ++i) {
    Stats s = sentence_stats(hyps[i], refs[i]);
    for (int n = 0; n < kMaxOrder; ++n) {
      total.matches[n] += s.matches[n];
      total.totals[n] += s.totals[n];
    }
    total.hyp_len += s.hyp_len;
    total.ref_len += s.ref_len;
  }
  return total;
}

}  // namespace

double bleu_corpus(const std::vector<TokenSeq>& hyps,
                   const std::vector<RefSet>& refs) {
  if (hyps.empty()) return 0.0;
  return bleu_from_stats(corpus_stats(hyps, refs));
}

double bleu_sentence_plus1(const TokenSeq& hyp, const RefSet& refs) {
  Stats s = sentence_stats(hyp, refs);
  if (s.hyp_len == 0 || s.matches[0] == 0) return 0.0;
  double log_prec =
      std::log(static_cast<double>(s.matches[0]) / s.totals[0]);
  for (int n = 1; n < kMaxOrder; ++n)
    log_prec += std::log((s.matches[n] + 1.0) / (s.totals[n] + 1.0));
  double bp = std::min(0.0, 1.0 - static_cast<double>(s.ref_len) / s.hyp_len);
  return std::exp(bp + log_prec / kMaxOrder);
}

std::pair<double, double> bootstrap_significance(
    const std::vector<TokenSeq>& sys_a, const std::vector<TokenSeq>& sys_b,
    const std::vector<RefSet>& refs, int resamples, uint64_t seed) {
  if (sys_a.size() != sys_b.size() || sys_a.size() != refs.size())
    throw std::invalid_argument("system output sizes differ");
  const size_t n = sys_a.size();
  // Per-sentence stats once; resamples just re-aggregate.
  std::vector<Stats> sa(n), sb(n);
  for (size_t i = 0; i < n; ++i) {
    sa[i] = sentence_stats(sys_a[i], refs[i]);
    sb[i] = sentence_stats(sys_b[i], refs[i]);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  int a_le_b = 0, b_le_a = 0;
  for (int r = 0; r < resamples; ++r) {
    Stats ta, tb;
    for (size_t i = 0; i < n; ++i) {
      size_t idx = pick(rng);
      for (int k = 0; k < kMaxOrder; ++k) {
        ta.matches[k] += sa[idx].matches[k];
        ta.totals[k] += sa[idx].totals[k];
        tb.matches[k] += sb[idx].matches[k];
        tb.totals[k] += sb[idx].totals[k];
      }
      ta.hyp_len += sa[idx].hyp_len;
      ta.ref_len += sa[idx].ref_len;
      tb.hyp_len += sb[idx].hyp_len;
      tb.ref_len += sb[idx].ref_len;
    }
    double ba = bleu_from_stats(ta);
    double bb = bleu_from_stats(tb);
    if (ba <= bb) ++a_le_b;
    if (bb <= ba) ++b_le_a;
  }
  return {static_cast<double>(a_le_b) / resamples,
          static_cast<double>(b_le_a) / resamples};
}

}  // namespace mt
