#pragma once

#include <string>
#include <vector>

#include "mt/coverage.h"
#include "mt/types.h"

namespace mt {

struct RelatedPair {
  enum class Kind { head_child, sibling };
  Kind kind;
  // head_child: a = head, b = child. sibling: a < b sharing a head.
  int a = 0;
  int b = 0;
  bool operator==(const RelatedPair&) const = default;
};

// Immutable dependency tree with precomputed children lists, descendant
// sets (including the node itself) and depths. The artificial root is not
// a node; exactly one word has head 0.
class DepTree {
 public:
  static DepTree build(const SourceSentence& s);

  int size() const { return static_cast<int>(head_.size()); }
  int root() const { return root_; }
  int head(int pos) const { return head_[pos - 1]; }
  const std::string& label(int pos) const { return label_[pos - 1]; }
  const std::vector<int>& children(int pos) const { return children_[pos - 1]; }
  const std::vector<int>& descendants(int pos) const { return desc_[pos - 1]; }
  int depth(int pos) const { return depth_[pos - 1]; }
  bool is_ancestor(int a, int d) const;  // proper ancestry

 private:
  int root_ = 0;
  std::vector<int> head_;
  std::vector<std::string> label_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<int>> desc_;
  std::vector<int> depth_;
};

// Every head-child edge once plus every unordered sibling pair once (l<r).
std::vector<RelatedPair> related_pairs(const DepTree& t);

enum class Direction { up, down };

struct PathStep {
  std::string label;
  Direction dir;
  bool operator==(const PathStep&) const = default;
};

// Unique tree path from a to b through the lowest common ancestor.
// Dependent-to-head edges emit (L(dependent), up), head-to-child edges
// emit (L(child), down).
std::vector<PathStep> tree_path(const DepTree& t, int a, int b);

// Cohesion check: true iff translating `next` after `prev` splits a
// partially translated subtree. For each endpoint of prev, walk up to the
// lowest ancestor whose subtree is not fully covered; violation iff that
// subtree does not intersect the new span.
bool check_interruption(const DepTree& t, const Coverage& cov, Span prev,
                        Span next);

}  // namespace mt
