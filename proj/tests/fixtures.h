#pragma once

#include <random>

#include "mt/dep_tree.h"
#include "mt/types.h"

// Six-token Chinese sentence with a verb-rooted parse; used by most
// reordering tests. 1=佐科威/NR/nsubj(5) 2=昨天/NT/tmod(5) 3=在/P/prep(5)
// 4=北京/NR/pobj(3) 5=发表/VV/root(0) 6=讲话/NN/dobj(5)
inline mt::SourceSentence fixture_w() {
  mt::SourceSentence s;
  s.tokens = {
      {1, "佐科威", "NR", "nsubj", 5}, {2, "昨天", "NT", "tmod", 5},
      {3, "在", "P", "prep", 5},       {4, "北京", "NR", "pobj", 3},
      {5, "发表", "VV", "root", 0},    {6, "讲话", "NN", "dobj", 5},
  };
  s.validate();
  return s;
}

// Uniform random labeled tree: node k attaches to a random earlier node
// under a random permutation, then relabeled 1..n.
inline mt::SourceSentence random_tree_sentence(int n, std::mt19937_64& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> head(n + 1, 0);
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    head[order[k]] = order[pick(rng)];
  }
  head[order[0]] = 0;
  static const char* kPos[] = {"NN", "VV", "P", "AD", "NR"};
  static const char* kLab[] = {"nsubj", "dobj", "prep", "advmod", "nn"};
  mt::SourceSentence s;
  std::uniform_int_distribution<int> tag(0, 4);
  for (int i = 1; i <= n; ++i)
    s.tokens.push_back({i, "w" + std::to_string(i), kPos[tag(rng)],
                        head[i] == 0 ? "root" : kLab[tag(rng)], head[i]});
  s.validate();
  return s;
}

// Random projective tree: recursively pick a head inside each interval.
inline void projective_fill(std::vector<int>& head, int lo, int hi, int parent,
                            std::mt19937_64& rng) {
  if (lo > hi) return;
  std::uniform_int_distribution<int> pick(lo, hi);
  int h = pick(rng);
  head[h] = parent;
  projective_fill(head, lo, h - 1, h, rng);
  projective_fill(head, h + 1, hi, h, rng);
}

inline mt::SourceSentence random_projective_sentence(int n,
                                                     std::mt19937_64& rng) {
  std::vector<int> head(n + 1, 0);
  projective_fill(head, 1, n, 0, rng);
  mt::SourceSentence s;
  for (int i = 1; i <= n; ++i)
    s.tokens.push_back({i, "w" + std::to_string(i), "NN",
                        head[i] == 0 ? "root" : "dep", head[i]});
  s.validate();
  return s;
}
