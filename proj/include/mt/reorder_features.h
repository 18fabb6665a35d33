#pragma once

#include <optional>
#include <set>
#include <string>

#include "mt/dep_tree.h"
#include "mt/feature_vector.h"
#include "mt/phrase_table.h"

namespace mt {

// One hypothesis extension: coverage is the state *before* the extension,
// prev is the previously translated phrase span (absent for the first
// extension), span the newly translated span, pair the option used.
struct ExtensionContext {
  const SourceSentence* sent = nullptr;
  const DepTree* tree = nullptr;
  const Coverage* cov = nullptr;
  std::optional<Span> prev;
  Span span;
  const PhrasePair* pair = nullptr;
};

enum class OrientationMSD { M, S, D };

inline const char* orientation_tag(OrientationMSD o) {
  switch (o) {
    case OrientationMSD::M: return "M";
    case OrientationMSD::S: return "S";
    default: return "D";
  }
}

// Dependency swap firing. For every related pair with at least one member
// in the new span: both inside -> ordering from the phrase-internal
// alignment; one inside and the other untranslated -> swapped if the
// outside word is source-left of the inside word, else in-order; one
// inside and the other already covered -> fired earlier, nothing now.
// Each fired pair emits the 4-key label/POS cross product, count 1.
FeatureVector ds_fire(const ExtensionContext& ctx);

// 1 iff the extension splits a partially translated subtree; 0 when there
// is no previous span.
int ddp_score(const ExtensionContext& ctx);

// Orientation against the maximal contiguous covered block grown from prev.
OrientationMSD hr_orientation(const Coverage& cov, Span prev, Span next);

// Orientation against the previous phrase span alone.
OrientationMSD pblr_orientation(Span prev, Span next);

// [POS] or [POS, form] when the form is in the frequent-word list.
std::vector<std::string> rep_token(const Token& tok,
                                   const std::set<std::string>& top_words);

// Sparse hierarchical-orientation features; fires nothing without prev.
FeatureVector shr_fire(const ExtensionContext& ctx,
                       const std::set<std::string>& top_words);

// Dependency path feature between the previous phrase's last word and the
// new span's first word; exactly one key. Fires nothing without prev.
FeatureVector path_fire(const ExtensionContext& ctx, int max_len);

// DS future-cost estimate over pairs whose members are both untranslated.
// Returns a weighted score (natural-log domain contribution).
double ds_future_estimate(const SourceSentence& sent, const DepTree& tree,
                          const Coverage& cov, const Weights& w);

// The 4 keys of one fired dependency-swap pair; shared with the future
// cost estimate.
std::vector<std::string> ds_pair_keys(const SourceSentence& sent,
                                      const RelatedPair& pr, Ordering o);

}  // namespace mt
