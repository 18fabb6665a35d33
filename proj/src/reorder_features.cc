#include "mt/reorder_features.h"

#include <algorithm>
#include <cmath>

namespace mt {

std::vector<std::string> ds_pair_keys(const SourceSentence& sent,
                                      const RelatedPair& pr, Ordering o) {
  const Token& ta = sent.at(pr.a);
  const Token& tb = sent.at(pr.b);
  const std::string& otag = ordering_tag(o);
  std::vector<std::string> keys;
  keys.reserve(4);
  auto emit = [&](const std::string& f1, const std::string& f2) {
    if (pr.kind == RelatedPair::Kind::head_child) {
      const char* p = pr.a < pr.b ? "left" : "right";
      keys.push_back(FeatureKey{"ds_hc", {f1, f2, p, otag}}.render());
    } else {
      keys.push_back(FeatureKey{"ds_sib", {f1, f2, otag}}.render());
    }
  };
  emit(ta.label, tb.label);
  emit(ta.pos, tb.pos);
  emit(ta.label, tb.pos);
  emit(ta.pos, tb.label);
  return keys;
}

FeatureVector ds_fire(const ExtensionContext& ctx) {
  FeatureVector out;
  const Span span = ctx.span;
  for (const RelatedPair& pr : related_pairs(*ctx.tree)) {
    bool a_in = span.contains(pr.a);
    bool b_in = span.contains(pr.b);
    if (!a_in && !b_in) continue;
    Ordering o;
    if (a_in && b_in) {
      int left = std::min(pr.a, pr.b);
      int right = std::max(pr.a, pr.b);
      o = target_order(*ctx.pair, left - span.begin, right - span.begin);
    } else {
      int inside = a_in ? pr.a : pr.b;
      int outside = a_in ? pr.b : pr.a;
      if (ctx.cov->test(outside)) continue;  // fired by an earlier hypothesis
      o = outside < inside ? Ordering::swapped : Ordering::in_order;
    }
    for (const std::string& k : ds_pair_keys(*ctx.sent, pr, o))
      fv_inc(out, k, 1.0);
  }
  return out;
}

int ddp_score(const ExtensionContext& ctx) {
  if (!ctx.prev) return 0;
  return check_interruption(*ctx.tree, *ctx.cov, *ctx.prev, ctx.span) ? 1 : 0;
}

OrientationMSD hr_orientation(const Coverage& cov, Span prev, Span next) {
  int s = prev.begin, e = prev.end;
  while (s > 1 && cov.test(s - 1)) --s;
  while (e < cov.size() && cov.test(e + 1)) ++e;
  if (next.begin == e + 1) return OrientationMSD::M;
  if (next.end == s - 1) return OrientationMSD::S;
  return OrientationMSD::D;
}

OrientationMSD pblr_orientation(Span prev, Span next) {
  if (next.begin == prev.end + 1) return OrientationMSD::M;
  if (next.end == prev.begin - 1) return OrientationMSD::S;
  return OrientationMSD::D;
}

std::vector<std::string> rep_token(const Token& tok,
                                   const std::set<std::string>& top_words) {
  std::vector<std::string> reps{tok.pos};
  if (top_words.count(tok.form)) reps.push_back(tok.form);
  return reps;
}

FeatureVector shr_fire(const ExtensionContext& ctx,
                       const std::set<std::string>& top_words) {
  FeatureVector out;
  if (!ctx.prev) return out;
  const Coverage& cov = *ctx.cov;
  OrientationMSD o = hr_orientation(cov, *ctx.prev, ctx.span);
  int s = ctx.prev->begin, e = ctx.prev->end;
  while (s > 1 && cov.test(s - 1)) --s;
  while (e < cov.size() && cov.test(e + 1)) ++e;

  std::vector<std::pair<std::string, int>> locs = {
      {"s_first", ctx.span.begin},
      {"s_last", ctx.span.end},
      {"p_first", s},
      {"p_last", e}};
  if (o == OrientationMSD::D) {
    Span gap = ctx.span.begin > e ? Span{e + 1, ctx.span.begin - 1}
                                  : Span{ctx.span.end + 1, s - 1};
    locs.emplace_back("g_first", gap.begin);
    locs.emplace_back("g_last", gap.end);
  }
  const std::string otag = orientation_tag(o);
  for (const auto& [name, pos] : locs)
    for (const std::string& rep : rep_token(ctx.sent->at(pos), top_words))
      fv_inc(out, FeatureKey{"shr", {name, rep, otag}}.render(), 1.0);
  return out;
}

FeatureVector path_fire(const ExtensionContext& ctx, int max_len) {
  FeatureVector out;
  if (!ctx.prev) return out;
  int p_last = ctx.prev->end;
  int s_first = ctx.span.begin;
  int lo = std::min(p_last, s_first);
  int hi = std::max(p_last, s_first);
  std::vector<PathStep> steps = tree_path(*ctx.tree, lo, hi);
  std::string rendered;
  if (static_cast<int>(steps.size()) > max_len) {
    rendered = "long";
  } else {
    std::vector<std::string> parts;
    for (const PathStep& st : steps)
      parts.push_back(st.dir == Direction::up ? st.label : st.label + "R");
    rendered = join(parts, ",");
  }
  Ordering o = ctx.span.begin > ctx.prev->end ? Ordering::in_order
                                              : Ordering::swapped;
  fv_inc(out, FeatureKey{"path", {rendered, ordering_tag(o)}}.render(), 1.0);
  return out;
}

double ds_future_estimate(const SourceSentence& sent, const DepTree& tree,
                          const Coverage& cov, const Weights& w) {
  const int n = sent.size();
  // Uncovered words that are ancestors of some covered word.
  std::vector<bool> forcing(n + 1, false);
  for (int d = 1; d <= n; ++d) {
    if (!cov.test(d)) continue;
    int q = tree.head(d);
    while (q != 0) {
      if (!cov.test(q)) forcing[q] = true;
      q = tree.head(q);
    }
  }
  double total = 0.0;
  for (const RelatedPair& pr : related_pairs(tree)) {
    if (cov.test(pr.a) || cov.test(pr.b)) continue;
    auto sum_for = [&](Ordering o) {
      double s = 0.0;
      for (const std::string& k : ds_pair_keys(sent, pr, o)) s += w.get(k);
      return s;
    };
    if (forcing[pr.a] != forcing[pr.b]) {
      int x = forcing[pr.a] ? pr.a : pr.b;
      int other = forcing[pr.a] ? pr.b : pr.a;
      // x comes first in the output: source order preserved iff x is left.
      Ordering o = x < other ? Ordering::in_order : Ordering::swapped;
      total += sum_for(o);
    } else {
      total += std::max(sum_for(Ordering::in_order), sum_for(Ordering::swapped));
    }
  }
  return total;
}

}  // namespace mt
