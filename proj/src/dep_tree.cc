#include "mt/dep_tree.h"

#include <algorithm>
#include <functional>

namespace mt {

DepTree DepTree::build(const SourceSentence& s) {
  const int n = s.size();
  DepTree t;
  t.head_.resize(n);
  t.label_.resize(n);
  t.children_.resize(n);
  t.desc_.resize(n);
  t.depth_.assign(n, -1);

  int roots = 0;
  for (const Token& tok : s.tokens) {
    if (tok.head < 0 || tok.head > n || tok.head == tok.index)
      throw DataError("malformed parse");
    t.head_[tok.index - 1] = tok.head;
    t.label_[tok.index - 1] = tok.label;
    if (tok.head == 0) {
      t.root_ = tok.index;
      ++roots;
    } else {
      t.children_[tok.head - 1].push_back(tok.index);
    }
  }
  if (roots != 1) throw DataError("malformed parse");
  for (auto& c : t.children_) std::sort(c.begin(), c.end());

  // Depths via head chains; a chain longer than n means a cycle.
  for (int p = 1; p <= n; ++p) {
    int steps = 0, q = p;
    while (q != 0) {
      q = t.head_[q - 1];
      if (++steps > n) throw DataError("cyclic parse");
    }
    t.depth_[p - 1] = steps - 1;
  }

  std::function<void(int)> fill = [&](int p) {
    t.desc_[p - 1].push_back(p);
    for (int c : t.children_[p - 1]) {
      fill(c);
      t.desc_[p - 1].insert(t.desc_[p - 1].end(), t.desc_[c - 1].begin(),
                            t.desc_[c - 1].end());
    }
  };
  fill(t.root_);
  for (auto& d : t.desc_) std::sort(d.begin(), d.end());
  return t;
}

bool DepTree::is_ancestor(int a, int d) const {
  int q = head(d);
  while (q != 0) {
    if (q == a) return true;
    q = head(q);
  }
  return false;
}

std::vector<RelatedPair> related_pairs(const DepTree& t) {
  std::vector<RelatedPair> out;
  for (int h = 1; h <= t.size(); ++h) {
    const std::vector<int>& kids = t.children(h);
    for (int c : kids)
      out.push_back({RelatedPair::Kind::head_child, h, c});
    for (size_t i = 0; i < kids.size(); ++i)
      for (size_t j = i + 1; j < kids.size(); ++j)
        out.push_back({RelatedPair::Kind::sibling, kids[i], kids[j]});
  }
  return out;
}

std::vector<PathStep> tree_path(const DepTree& t, int a, int b) {
  // Ancestor chains up to the root, inclusive.
  auto chain = [&](int p) {
    std::vector<int> c{p};
    while (t.head(c.back()) != 0) c.push_back(t.head(c.back()));
    return c;
  };
  std::vector<int> ca = chain(a), cb = chain(b);
  int lca = 0;
  {
    std::vector<bool> on_a(t.size() + 1, false);
    for (int p : ca) on_a[p] = true;
    for (int p : cb)
      if (on_a[p]) {
        lca = p;
        break;
      }
  }
  std::vector<PathStep> steps;
  for (int p : ca) {
    if (p == lca) break;
    steps.push_back({t.label(p), Direction::up});
  }
  std::vector<PathStep> down;
  for (int p : cb) {
    if (p == lca) break;
    down.push_back({t.label(p), Direction::down});
  }
  steps.insert(steps.end(), down.rbegin(), down.rend());
  return steps;
}

bool check_interruption(const DepTree& t, const Coverage& cov, Span prev,
                        Span next) {
  for (int w : {prev.begin, prev.end}) {
    int node = w;
    int lowest_open = 0;
    while (node != 0) {
      bool all_covered = true;
      for (int d : t.descendants(node))
        if (!cov.test(d)) {
          all_covered = false;
          break;
        }
      if (!all_covered) {
        lowest_open = node;
        break;
      }
      node = t.head(node);
    }
    if (lowest_open == 0) continue;  // everything covered above w
    bool touches = false;
    for (int d : t.descendants(lowest_open))
      if (next.contains(d)) {
        touches = true;
        break;
      }
    if (!touches) return true;
  }
  return false;
}

}  // namespace mt
