#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mt/coverage.h"
#include "mt/dep_tree.h"
#include "mt/feature_vector.h"
#include "mt/lm.h"
#include "mt/phrase_table.h"
#include "mt/reorder_features.h"
#include "mt/reordering_table.h"

namespace mt {

struct DecoderFlags {
  bool ddp = false;
  bool ds = false;
  bool shr = false;
  bool path = false;
  bool pblr = true;
  bool hr = true;
};

struct DecoderConfig {
  int beam_size = 100;
  int distortion_limit = 14;
  DecoderFlags flags;
  int nbest_size = 100;
  bool mbr = false;
  double mbr_scale = 1.0;
  int max_phrase_len = 7;
  int path_max_len = 4;
  bool passthrough = true;
  double passthrough_prob = 1e-7;  // identity-translation floor probability
};

struct Models {
  PhraseTable table;
  NGramLM lm;
  ReorderingTable pblr;
  ReorderingTable hr;
  std::set<std::string> top_words;
  Weights weights;
};

// Dense feature identities; their values are the raw model components so
// that fv_dot(weights, accumulated fv) reproduces the model score.
namespace dense {
inline const std::string phi_fe = "dense|phi_fe";
inline const std::string phi_ef = "dense|phi_ef";
inline const std::string lex_fe = "dense|lex_fe";
inline const std::string lex_ef = "dense|lex_ef";
inline const std::string lm = "dense|lm";
inline const std::string word_penalty = "dense|word_penalty";
inline const std::string phrase_penalty = "dense|phrase_penalty";
inline const std::string distortion = "dense|distortion";
inline const std::string pblr = "dense|pblr";
inline const std::string hr = "dense|hr";
inline const std::string ddp = "dense|ddp";
}  // namespace dense

Weights default_weights();

// Translation options per span, including pass-through pairs for OOVs.
struct OptionGrid {
  int n = 0;
  // opts[i-1][j-i]: options for span [i,j]
  std::vector<std::vector<std::vector<const PhrasePair*>>> opts;
  std::vector<std::unique_ptr<PhrasePair>> storage;
  const std::vector<const PhrasePair*>& at(Span s) const {
    return opts[s.begin - 1][s.end - s.begin];
  }
};

OptionGrid collect_options(const SourceSentence& sent, const Models& models,
                           const DecoderConfig& cfg);

struct FutureCostTable {
  int n = 0;
  std::vector<std::vector<double>> fc;  // fc[i-1][j-i]
  double get(Span s) const { return fc[s.begin - 1][s.end - s.begin]; }
};

// Standard per-span completion estimate: best of a single phrase
// (weighted translation scores + context-free LM + word penalty) and the
// best split. Throws "untranslatable word" when some word is uncoverable.
FutureCostTable compute_future_costs(const SourceSentence& sent,
                                     const OptionGrid& grid, const NGramLM& lm,
                                     const Weights& w);

// Sum of fc over maximal uncovered runs plus the DS estimate term.
double hypothesis_future(const Coverage& cov, const FutureCostTable& fct,
                         double ds_term);

bool valid_extension(const Coverage& cov, int prev_end, Span span,
                     const SourceSentence& sent, const DecoderConfig& cfg);

struct ExtensionScore {
  FeatureVector fv;
  std::vector<std::string> lm_state;
};

// All dense and sparse deltas of one extension; folds the end-of-sentence
// LM term into the extension that completes coverage.
ExtensionScore score_extension(const SourceSentence& sent, const DepTree& tree,
                               const Coverage& cov,
                               const std::optional<Span>& prev,
                               const std::vector<std::string>& lm_state,
                               Span span, const PhrasePair& pair,
                               const Models& models, const DecoderConfig& cfg);

struct RecombKey {
  Coverage cov;
  Span prev;
  std::vector<std::string> lm_state;
  auto operator<=>(const RecombKey&) const = default;
};

struct DerivationStep {
  Span span;
  const PhrasePair* pair = nullptr;
  FeatureVector fv;
};

struct Derivation {
  std::vector<DerivationStep> steps;
  double score = 0.0;
  FeatureVector fv;
  std::vector<std::string> target() const;
};

struct LatticeArc {
  int parent = -1;
  Span span;
  const PhrasePair* pair = nullptr;
  double delta = 0.0;
  FeatureVector fv;
};

struct LatticeNode {
  std::vector<LatticeArc> arcs;  // arcs[0] is the best incoming path
};

struct Lattice {
  std::vector<LatticeNode> nodes;
  std::vector<int> finals;
};

struct DecodeResult {
  Derivation best;
  Lattice lattice;
  OptionGrid grid;  // owns pass-through pairs referenced by the lattice
};

DecodeResult decode(const SourceSentence& sent, const Models& models,
                    const DecoderConfig& cfg);

struct Candidate {
  std::vector<std::string> tokens;
  FeatureVector fv;
  double score = 0.0;
};

// Top-k distinct target strings by model score.
std::vector<Candidate> nbest(const DecodeResult& res, int k);

// Index of the candidate maximizing expected sentence BLEU+1 gain under
// the posterior p_i proportional to exp(scale * score_i); ties go to the
// lowest index.
int mbr_select(const std::vector<Candidate>& nb, double scale);

}  // namespace mt
