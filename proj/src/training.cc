#include "mt/training.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace mt {

std::vector<AlignedSentencePair> read_bitext(const std::string& src_path,
                                             const std::string& tgt_path,
                                             const std::string& align_path) {
  auto src = read_token_lines(src_path);
  auto tgt = read_token_lines(tgt_path);
  std::ifstream ain(align_path);
  if (!ain) throw DataError("cannot open alignment file: " + align_path);
  std::vector<AlignedSentencePair> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(ain, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++lineno;
    if (lineno > src.size() || lineno > tgt.size())
      throw DataError("alignment file longer than bitext");
    AlignedSentencePair p;
    p.src = src[lineno - 1];
    p.tgt = tgt[lineno - 1];
    for (const std::string& tok : split_ws(line)) {
      size_t dash = tok.find('-');
      int i = -1, j = -1;
      if (dash != std::string::npos) {
        try {
          i = std::stoi(tok.substr(0, dash));
          j = std::stoi(tok.substr(dash + 1));
        } catch (const std::exception&) {
        }
      }
      if (i < 0 || j < 0 || i >= static_cast<int>(p.src.size()) ||
          j >= static_cast<int>(p.tgt.size()))
        throw DataError("alignment line " + std::to_string(lineno) +
                        ": bad link " + tok);
      p.align.emplace_back(i, j);
    }
    std::sort(p.align.begin(), p.align.end());
    out.push_back(std::move(p));
  }
  if (lineno != src.size() || lineno != tgt.size())
    throw DataError("bitext/alignment line counts differ");
  if (out.empty()) throw DataError("empty training corpus");
  return out;
}

std::vector<PhraseInstance> extract_phrases(const AlignedSentencePair& p,
                                            int max_len) {
  const int ns = static_cast<int>(p.src.size());
  const int nt = static_cast<int>(p.tgt.size());
  std::vector<bool> tgt_aligned(nt, false);
  for (const auto& [i, j] : p.align) tgt_aligned[j] = true;

  std::vector<PhraseInstance> out;
  for (int s1 = 0; s1 < ns; ++s1) {
    for (int s2 = s1; s2 < ns && s2 - s1 + 1 <= max_len; ++s2) {
      int tmin = nt, tmax = -1;
      for (const auto& [i, j] : p.align)
        if (i >= s1 && i <= s2) {
          tmin = std::min(tmin, j);
          tmax = std::max(tmax, j);
        }
      if (tmax < 0) continue;  // no internal link
      bool consistent = true;
      for (const auto& [i, j] : p.align)
        if (j >= tmin && j <= tmax && (i < s1 || i > s2)) {
          consistent = false;
          break;
        }
      if (!consistent) continue;
      // Expand over unaligned boundary words on the target side.
      for (int t1 = tmin; t1 >= 0 && (t1 == tmin || !tgt_aligned[t1]); --t1) {
        for (int t2 = tmax; t2 < nt && (t2 == tmax || !tgt_aligned[t2]); ++t2) {
          if (t2 - t1 + 1 > max_len) break;
          PhraseInstance inst{s1, s2, t1, t2, {}};
          for (const auto& [i, j] : p.align)
            if (i >= s1 && i <= s2 && j >= t1 && j <= t2)
              inst.align.emplace_back(i - s1, j - t1);
          out.push_back(std::move(inst));
        }
      }
    }
  }
  return out;
}

LexTable build_lex_table(const std::vector<AlignedSentencePair>& corpus) {
  std::map<std::pair<std::string, std::string>, double> joint;
  std::map<std::string, double> src_marg, tgt_marg;
  for (const AlignedSentencePair& p : corpus) {
    std::vector<bool> sa(p.src.size(), false), ta(p.tgt.size(), false);
    for (const auto& [i, j] : p.align) {
      sa[i] = true;
      ta[j] = true;
      joint[{p.src[i], p.tgt[j]}] += 1.0;
      src_marg[p.src[i]] += 1.0;
      tgt_marg[p.tgt[j]] += 1.0;
    }
    for (size_t i = 0; i < p.src.size(); ++i)
      if (!sa[i]) {
        joint[{p.src[i], ""}] += 1.0;
        src_marg[p.src[i]] += 1.0;
        tgt_marg[""] += 1.0;
      }
    for (size_t j = 0; j < p.tgt.size(); ++j)
      if (!ta[j]) {
        joint[{"", p.tgt[j]}] += 1.0;
        src_marg[""] += 1.0;
        tgt_marg[p.tgt[j]] += 1.0;
      }
  }
  LexTable lex;
  for (const auto& [st, c] : joint) {
    lex.t_given_s[st] = c / src_marg[st.first];
    lex.s_given_t[st] = c / tgt_marg[st.second];
  }
  return lex;
}

namespace {

double lex_weight_fwd(const std::vector<std::string>& src,
                      const std::vector<std::string>& tgt,
                      const std::vector<std::pair<int, int>>& align,
                      const LexTable& lex) {
  double w = 1.0;
  for (size_t j = 0; j < tgt.size(); ++j) {
    double sum = 0.0;
    int links = 0;
    for (const auto& [a, b] : align)
      if (b == static_cast<int>(j)) {
        auto it = lex.t_given_s.find({src[a], tgt[j]});
        sum += it == lex.t_given_s.end() ? 0.0 : it->second;
        ++links;
      }
    if (links == 0) {
      auto it = lex.t_given_s.find({"", tgt[j]});
      sum = it == lex.t_given_s.end() ? 0.0 : it->second;
      links = 1;
    }
    w *= sum / links;
  }
  return w;
}

double lex_weight_bwd(const std::vector<std::string>& src,
                      const std::vector<std::string>& tgt,
                      const std::vector<std::pair<int, int>>& align,
                      const LexTable& lex) {
  double w = 1.0;
  for (size_t i = 0; i < src.size(); ++i) {
    double sum = 0.0;
    int links = 0;
    for (const auto& [a, b] : align)
      if (a == static_cast<int>(i)) {
        auto it = lex.s_given_t.find({src[i], tgt[b]});
        sum += it == lex.s_given_t.end() ? 0.0 : it->second;
        ++links;
      }
    if (links == 0) {
      auto it = lex.s_given_t.find({src[i], ""});
      sum = it == lex.s_given_t.end() ? 0.0 : it->second;
      links = 1;
    }
    w *= sum / links;
  }
  return w;
}

}  // namespace

PhraseTable score_phrases(const std::vector<AlignedSentencePair>& corpus,
                          int max_len, int k_best) {
  if (corpus.empty()) throw DataError("empty training corpus");
  LexTable lex = build_lex_table(corpus);

  using Key = std::pair<std::vector<std::string>, std::vector<std::string>>;
  struct Entry {
    double count = 0.0;
    // Keep the most frequent internal alignment (ties: smallest).
    std::map<std::vector<std::pair<int, int>>, int> aligns;
  };
  std::map<Key, Entry> counts;
  std::map<std::vector<std::string>, double> src_marg;
  std::map<std::vector<std::string>, double> tgt_marg;

  for (const AlignedSentencePair& p : corpus) {
    for (const PhraseInstance& inst : extract_phrases(p, max_len)) {
      std::vector<std::string> src(p.src.begin() + inst.s1,
                                   p.src.begin() + inst.s2 + 1);
      std::vector<std::string> tgt(p.tgt.begin() + inst.t1,
                                   p.tgt.begin() + inst.t2 + 1);
      Entry& e = counts[{src, tgt}];
      e.count += 1.0;
      ++e.aligns[inst.align];
      src_marg[src] += 1.0;
      tgt_marg[tgt] += 1.0;
    }
  }

  PhraseTable table;
  table.k_best = k_best;
  for (const auto& [key, e] : counts) {
    PhrasePair pp;
    pp.src = key.first;
    pp.tgt = key.second;
    int best_n = 0;
    for (const auto& [a, c] : e.aligns)
      if (c > best_n) {
        best_n = c;
        pp.align = a;
      }
    pp.scores[0] = std::log(e.count / src_marg[pp.src]);
    pp.scores[1] = std::log(e.count / tgt_marg[pp.tgt]);
    double lf = lex_weight_fwd(pp.src, pp.tgt, pp.align, lex);
    double lb = lex_weight_bwd(pp.src, pp.tgt, pp.align, lex);
    pp.scores[2] = std::log(std::max(lf, 1e-12));
    pp.scores[3] = std::log(std::max(lb, 1e-12));
    table.add(std::move(pp));
  }
  return table;
}

namespace {

enum Orient { kM = 0, kS = 1, kD = 2 };

struct BlockIndex {
  std::set<std::pair<int, int>> end_end;      // (src_end, tgt_end)
  std::set<std::pair<int, int>> start_end;    // (src_start, tgt_end)
  std::set<std::pair<int, int>> start_start;  // (src_start, tgt_start)
  std::set<std::pair<int, int>> end_start;    // (src_end, tgt_start)
};

BlockIndex index_blocks(const AlignedSentencePair& p) {
  int unlimited = static_cast<int>(std::max(p.src.size(), p.tgt.size()));
  BlockIndex idx;
  for (const PhraseInstance& b : extract_phrases(p, unlimited)) {
    idx.end_end.insert({b.s2, b.t2});
    idx.start_end.insert({b.s1, b.t2});
    idx.start_start.insert({b.s1, b.t1});
    idx.end_start.insert({b.s2, b.t1});
  }
  return idx;
}

}  // namespace

ReorderingTables estimate_reordering(
    const std::vector<AlignedSentencePair>& corpus, int max_len) {
  using Key = ReorderingTable::Key;
  std::map<Key, std::array<double, 6>> pblr_counts, hr_counts;

  for (const AlignedSentencePair& p : corpus) {
    const int ns = static_cast<int>(p.src.size());
    const int nt = static_cast<int>(p.tgt.size());
    std::set<std::pair<int, int>> links(p.align.begin(), p.align.end());
    BlockIndex blocks = index_blocks(p);

    for (const PhraseInstance& inst : extract_phrases(p, max_len)) {
      Key key{{p.src.begin() + inst.s1, p.src.begin() + inst.s2 + 1},
              {p.tgt.begin() + inst.t1, p.tgt.begin() + inst.t2 + 1}};

      auto orient_pblr_fwd = [&]() {
        if (inst.t1 == 0) return inst.s1 == 0 ? kM : kD;
        if (links.count({inst.s1 - 1, inst.t1 - 1})) return kM;
        if (links.count({inst.s2 + 1, inst.t1 - 1})) return kS;
        return kD;
      };
      auto orient_pblr_bwd = [&]() {
        if (inst.t2 == nt - 1) return inst.s2 == ns - 1 ? kM : kD;
        if (links.count({inst.s2 + 1, inst.t2 + 1})) return kM;
        if (links.count({inst.s1 - 1, inst.t2 + 1})) return kS;
        return kD;
      };
      auto orient_hr_fwd = [&]() {
        if (inst.t1 == 0) return inst.s1 == 0 ? kM : kD;
        if (blocks.end_end.count({inst.s1 - 1, inst.t1 - 1})) return kM;
        if (blocks.start_end.count({inst.s2 + 1, inst.t1 - 1})) return kS;
        return kD;
      };
      auto orient_hr_bwd = [&]() {
        if (inst.t2 == nt - 1) return inst.s2 == ns - 1 ? kM : kD;
        if (blocks.start_start.count({inst.s2 + 1, inst.t2 + 1})) return kM;
        if (blocks.end_start.count({inst.s1 - 1, inst.t2 + 1})) return kS;
        return kD;
      };

      auto& pc = pblr_counts[key];
      auto& hc = hr_counts[key];
      pc[orient_pblr_fwd()] += 1.0;
      pc[3 + orient_pblr_bwd()] += 1.0;
      hc[orient_hr_fwd()] += 1.0;
      hc[3 + orient_hr_bwd()] += 1.0;
    }
  }

  auto normalize = [](std::map<Key, std::array<double, 6>>& counts) {
    ReorderingTable t;
    for (auto& [key, c] : counts) {
      std::array<double, 6> row;
      for (int d = 0; d < 2; ++d) {
        double tot = c[3 * d] + c[3 * d + 1] + c[3 * d + 2] + 1.5;
        for (int o = 0; o < 3; ++o)
          row[3 * d + o] = std::log((c[3 * d + o] + 0.5) / tot);
      }
      t.rows[key] = row;
    }
    return t;
  };
  return {normalize(pblr_counts), normalize(hr_counts)};
}

std::vector<std::string> build_top_words(
    const std::vector<AlignedSentencePair>& corpus, int k) {
  std::map<std::string, long> freq;
  for (const AlignedSentencePair& p : corpus)
    for (const std::string& w : p.src) ++freq[w];
  std::vector<std::pair<std::string, long>> items(freq.begin(), freq.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  std::vector<std::string> out;
  for (const auto& [w, c] : items) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(w);
  }
  return out;
}

}  // namespace mt
