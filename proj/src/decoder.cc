#include "mt/decoder.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "mt/bleu.h"

namespace mt {

namespace {
const double kNegInf = -std::numeric_limits<double>::infinity();
const double kLn10 = 2.302585092994045684;
}  // namespace

Weights default_weights() {
  Weights w;
  for (const std::string& k :
       {dense::phi_fe, dense::phi_ef, dense::lex_fe, dense::lex_ef, dense::lm,
        dense::word_penalty, dense::phrase_penalty, dense::distortion,
        dense::pblr, dense::hr})
    w.set(k, 1.0);
  w.set(dense::ddp, -1.0);
  return w;
}

OptionGrid collect_options(const SourceSentence& sent, const Models& models,
                           const DecoderConfig& cfg) {
  const int n = sent.size();
  OptionGrid grid;
  grid.n = n;
  grid.opts.resize(n);
  for (int i = 1; i <= n; ++i) {
    grid.opts[i - 1].resize(std::min(cfg.max_phrase_len, n - i + 1));
    for (int j = i; j <= n && j - i + 1 <= cfg.max_phrase_len; ++j) {
      const std::vector<PhrasePair>* list =
          models.table.lookup(sent.forms({i, j}));
      if (!list) continue;
      for (const PhrasePair& p : *list)
        grid.opts[i - 1][j - i].push_back(&p);
    }
  }
  // Pass-through identity translation for single words with no options.
  for (int i = 1; i <= n; ++i) {
    if (!grid.opts[i - 1][0].empty()) continue;
    if (!cfg.passthrough) continue;
    auto p = std::make_unique<PhrasePair>();
    p->src = {sent.at(i).form};
    p->tgt = {sent.at(i).form};
    double floor = std::log(cfg.passthrough_prob);
    p->scores = {floor, floor, floor, floor};
    p->align = {{0, 0}};
    grid.opts[i - 1][0].push_back(p.get());
    grid.storage.push_back(std::move(p));
  }
  return grid;
}

FutureCostTable compute_future_costs(const SourceSentence& sent,
                                     const OptionGrid& grid, const NGramLM& lm,
                                     const Weights& w) {
  const int n = sent.size();
  FutureCostTable t;
  t.n = n;
  t.fc.resize(n);
  for (int i = 1; i <= n; ++i) t.fc[i - 1].assign(n - i + 1, kNegInf);

  for (int len = 1; len <= n; ++len) {
    for (int i = 1; i + len - 1 <= n; ++i) {
      int j = i + len - 1;
      double best = kNegInf;
      if (len <= static_cast<int>(grid.opts[i - 1].size())) {
        for (const PhrasePair* p : grid.opts[i - 1][j - i]) {
          double val = w.get(dense::phi_fe) * p->scores[0] +
                       w.get(dense::phi_ef) * p->scores[1] +
                       w.get(dense::lex_fe) * p->scores[2] +
                       w.get(dense::lex_ef) * p->scores[3];
          double lp10 = 0.0;
          for (const std::string& tw : p->tgt) lp10 += lm.unigram(tw);
          val += w.get(dense::lm) * lp10 * kLn10;
          val += w.get(dense::word_penalty) *
                 -static_cast<double>(p->tgt.size());
          best = std::max(best, val);
        }
      }
      for (int k = i; k < j; ++k)
        best = std::max(best, t.fc[i - 1][k - i] + t.fc[k][j - k - 1]);
      t.fc[i - 1][j - i] = best;
    }
  }
  if (n > 0 && t.fc[0][n - 1] == kNegInf) {
    for (int p = 1; p <= n; ++p)
      if (t.fc[p - 1][0] == kNegInf)
        throw DataError("untranslatable word: " + sent.at(p).form +
                        " (position " + std::to_string(p) + ")");
    throw DataError("untranslatable word");
  }
  return t;
}

double hypothesis_future(const Coverage& cov, const FutureCostTable& fct,
                         double ds_term) {
  double sum = ds_term;
  for (Span run : cov.uncovered_runs()) sum += fct.get(run);
  return sum;
}

bool valid_extension(const Coverage& cov, int prev_end, Span span,
                     const SourceSentence& sent, const DecoderConfig& cfg) {
  if (!cov.disjoint(span)) return false;
  if (std::abs(span.begin - (prev_end + 1)) > cfg.distortion_limit)
    return false;
  for (int wpos : sent.walls) {
    if (wpos >= span.begin) break;
    if (!cov.test(wpos)) return false;
  }
  return true;
}

ExtensionScore score_extension(const SourceSentence& sent, const DepTree& tree,
                               const Coverage& cov,
                               const std::optional<Span>& prev,
                               const std::vector<std::string>& lm_state,
                               Span span, const PhrasePair& pair,
                               const Models& models, const DecoderConfig& cfg) {
  ExtensionScore es;
  FeatureVector& fv = es.fv;
  int prev_end = prev ? prev->end : 0;

  fv_inc(fv, dense::phi_fe, pair.scores[0]);
  fv_inc(fv, dense::phi_ef, pair.scores[1]);
  fv_inc(fv, dense::lex_fe, pair.scores[2]);
  fv_inc(fv, dense::lex_ef, pair.scores[3]);

  es.lm_state = lm_state;
  double lp10 = 0.0;
  for (const std::string& tw : pair.tgt)
    lp10 += models.lm.score(es.lm_state, tw);
  if (cov.count() + span.length() == sent.size())
    lp10 += models.lm.prob(es.lm_state, NGramLM::kEos);
  fv_inc(fv, dense::lm, lp10 * kLn10);

  fv_inc(fv, dense::word_penalty, -static_cast<double>(pair.tgt.size()));
  fv_inc(fv, dense::phrase_penalty, -1.0);
  fv_inc(fv, dense::distortion,
         -std::abs(span.begin - prev_end - 1));

  ExtensionContext ctx{&sent, &tree, &cov, prev, span, &pair};

  if (cfg.flags.pblr) {
    OrientationMSD o = prev ? pblr_orientation(*prev, span)
                            : (span.begin == 1 ? OrientationMSD::M
                                               : OrientationMSD::D);
    fv_inc(fv, dense::pblr,
           models.pblr.lookup(pair.src, pair.tgt)[static_cast<int>(o)]);
  }
  if (cfg.flags.hr) {
    OrientationMSD o = prev ? hr_orientation(cov, *prev, span)
                            : (span.begin == 1 ? OrientationMSD::M
                                               : OrientationMSD::D);
    fv_inc(fv, dense::hr,
           models.hr.lookup(pair.src, pair.tgt)[static_cast<int>(o)]);
  }
  if (cfg.flags.ddp) fv_inc(fv, dense::ddp, ddp_score(ctx));
  if (cfg.flags.ds) fv = fv_add(fv, ds_fire(ctx));
  if (cfg.flags.shr) fv = fv_add(fv, shr_fire(ctx, models.top_words));
  if (cfg.flags.path) fv = fv_add(fv, path_fire(ctx, cfg.path_max_len));
  return es;
}

std::vector<std::string> Derivation::target() const {
  std::vector<std::string> out;
  for (const DerivationStep& s : steps)
    out.insert(out.end(), s.pair->tgt.begin(), s.pair->tgt.end());
  return out;
}

namespace {

struct Hyp {
  Coverage cov;
  std::optional<Span> prev;
  std::vector<std::string> lm_state;
  double score = 0.0;
  double total = 0.0;  // score + future
  int node = -1;
};

}  // namespace

DecodeResult decode(const SourceSentence& sent, const Models& models,
                    const DecoderConfig& cfg) {
  const int n = sent.size();
  sent.validate();
  DepTree tree = DepTree::build(sent);
  DecodeResult res;
  res.grid = collect_options(sent, models, cfg);
  FutureCostTable fct =
      compute_future_costs(sent, res.grid, models.lm, models.weights);

  std::vector<std::vector<Hyp>> stacks(n + 1);
  std::vector<std::map<RecombKey, int>> recomb(n + 1);
  Lattice& lat = res.lattice;

  Hyp init;
  init.cov = Coverage(n);
  init.lm_state = models.lm.begin_state();
  double ds0 = cfg.flags.ds ? ds_future_estimate(sent, tree, init.cov,
                                                 models.weights)
                            : 0.0;
  init.total = hypothesis_future(init.cov, fct, ds0);
  init.node = 0;
  lat.nodes.emplace_back();
  stacks[0].push_back(std::move(init));

  for (int c = 0; c < n; ++c) {
    std::vector<Hyp>& stack = stacks[c];
    // Histogram pruning by score + future; ties broken by creation order.
    std::stable_sort(stack.begin(), stack.end(),
                     [](const Hyp& a, const Hyp& b) { return a.total > b.total; });
    if (static_cast<int>(stack.size()) > cfg.beam_size)
      stack.resize(cfg.beam_size);

    for (const Hyp& h : stack) {
      int prev_end = h.prev ? h.prev->end : 0;
      for (int i = 1; i <= n; ++i) {
        for (int j = i;
             j <= n && j - i + 1 <= cfg.max_phrase_len; ++j) {
          Span span{i, j};
          if (!h.cov.disjoint(span)) {
            if (h.cov.test(j)) break;  // no larger span from i is free either
            continue;
          }
          if (!valid_extension(h.cov, prev_end, span, sent, cfg)) continue;
          const auto& options = res.grid.at(span);
          if (options.empty()) continue;
          for (const PhrasePair* p : options) {
            ExtensionScore es = score_extension(
                sent, tree, h.cov, h.prev, h.lm_state, span, *p, models, cfg);
            double delta = fv_dot(models.weights, es.fv);
            Coverage ncov = h.cov;
            ncov.set(span);
            int c2 = ncov.count();
            double nscore = h.score + delta;

            LatticeArc arc{h.node, span, p, delta, std::move(es.fv)};
            RecombKey key{ncov, span, es.lm_state};
            auto [it, inserted] =
                recomb[c2].try_emplace(key, static_cast<int>(stacks[c2].size()));
            if (inserted) {
              Hyp child;
              child.cov = std::move(ncov);
              child.prev = span;
              child.lm_state = std::move(es.lm_state);
              child.score = nscore;
              double dst = cfg.flags.ds
                               ? ds_future_estimate(sent, tree, child.cov,
                                                    models.weights)
                               : 0.0;
              child.total = nscore + hypothesis_future(child.cov, fct, dst);
              child.node = static_cast<int>(lat.nodes.size());
              lat.nodes.emplace_back();
              lat.nodes[child.node].arcs.push_back(std::move(arc));
              stacks[c2].push_back(std::move(child));
            } else {
              Hyp& win = stacks[c2][it->second];
              LatticeNode& node = lat.nodes[win.node];
              if (nscore > win.score) {
                win.total += nscore - win.score;
                win.score = nscore;
                node.arcs.insert(node.arcs.begin(), std::move(arc));
              } else {
                node.arcs.push_back(std::move(arc));
              }
            }
          }
        }
      }
    }
  }

  if (stacks[n].empty())
    throw DecodeError("decoding failed: no complete hypothesis (distortion "
                      "limit or wall dead end)");

  const Hyp* best = nullptr;
  for (const Hyp& h : stacks[n]) {
    lat.finals.push_back(h.node);
    if (!best || h.score > best->score) best = &h;
  }

  res.best.score = best->score;
  int node = best->node;
  std::vector<DerivationStep> rev;
  while (node != 0) {
    const LatticeArc& a = lat.nodes[node].arcs.front();
    rev.push_back({a.span, a.pair, a.fv});
    node = a.parent;
  }
  res.best.steps.assign(rev.rbegin(), rev.rend());
  for (const DerivationStep& s : res.best.steps)
    res.best.fv = fv_add(res.best.fv, s.fv);

  // Derivation invariant: spans partition 1..n.
  {
    Coverage check(n);
    int total_len = 0;
    for (const DerivationStep& s : res.best.steps) {
      if (!check.disjoint(s.span)) throw DecodeError("overlapping spans");
      check.set(s.span);
      total_len += s.span.length();
    }
    if (total_len != n || !check.full())
      throw DecodeError("derivation does not cover the sentence");
  }
  return res;
}

std::vector<Candidate> nbest(const DecodeResult& res, int k) {
  const Lattice& lat = res.lattice;
  const int cap = std::max(2 * k, k + 10);

  struct Entry {
    double score;
    int arc;
    int sub;
  };
  std::vector<std::vector<Entry>> entries(lat.nodes.size());
  entries[0].push_back({0.0, -1, -1});

  for (size_t v = 1; v < lat.nodes.size(); ++v) {
    const std::vector<LatticeArc>& arcs = lat.nodes[v].arcs;
    auto worse = [&](const Entry& a, const Entry& b) {
      return a.score < b.score ||
             (a.score == b.score &&
              std::pair(a.arc, a.sub) > std::pair(b.arc, b.sub));
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> pq(worse);
    for (size_t a = 0; a < arcs.size(); ++a)
      if (!entries[arcs[a].parent].empty())
        pq.push({arcs[a].delta + entries[arcs[a].parent][0].score,
                 static_cast<int>(a), 0});
    while (!pq.empty() && static_cast<int>(entries[v].size()) < cap) {
      Entry e = pq.top();
      pq.pop();
      entries[v].push_back(e);
      const LatticeArc& arc = arcs[e.arc];
      if (e.sub + 1 < static_cast<int>(entries[arc.parent].size()))
        pq.push({arcs[e.arc].delta + entries[arc.parent][e.sub + 1].score,
                 e.arc, e.sub + 1});
    }
  }

  struct Raw {
    double score;
    std::string text;
    Candidate cand;
  };
  std::vector<Raw> raws;
  for (int f : lat.finals) {
    for (const Entry& e : entries[f]) {
      Candidate c;
      c.score = e.score;
      // Walk the chosen arcs back to the initial node.
      int node = f;
      const Entry* cur = &e;
      std::vector<const LatticeArc*> rev;
      std::vector<int> subs;
      while (cur->arc != -1) {
        const LatticeArc& a = lat.nodes[node].arcs[cur->arc];
        rev.push_back(&a);
        int parent = a.parent;
        int sub = cur->sub;
        node = parent;
        cur = &entries[parent][sub];
      }
      for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
        c.tokens.insert(c.tokens.end(), (*it)->pair->tgt.begin(),
                        (*it)->pair->tgt.end());
        c.fv = fv_add(c.fv, (*it)->fv);
      }
      raws.push_back({c.score, join(c.tokens, " "), std::move(c)});
    }
  }
  std::stable_sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) {
    return a.score > b.score || (a.score == b.score && a.text < b.text);
  });
  std::vector<Candidate> out;
  std::set<std::string> seen;
  for (Raw& r : raws) {
    if (static_cast<int>(out.size()) >= k) break;
    if (!seen.insert(r.text).second) continue;
    out.push_back(std::move(r.cand));
  }
  return out;
}

int mbr_select(const std::vector<Candidate>& nb, double scale) {
  if (nb.empty()) throw std::invalid_argument("empty n-best list");
  const int m = static_cast<int>(nb.size());
  double mx = kNegInf;
  for (const Candidate& c : nb) mx = std::max(mx, scale * c.score);
  std::vector<double> post(m);
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    post[i] = std::exp(scale * nb[i].score - mx);
    z += post[i];
  }
  for (double& p : post) p /= z;

  int best = 0;
  double best_gain = kNegInf;
  for (int i = 0; i < m; ++i) {
    double gain = 0.0;
    for (int j = 0; j < m; ++j)
      gain += post[j] * bleu_sentence_plus1(nb[i].tokens, {nb[j].tokens});
    if (gain > best_gain + 1e-12) {
      best_gain = gain;
      best = i;
    }
  }
  return best;
}

}  // namespace mt
