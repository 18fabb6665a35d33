#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.h"
#include "mt/dep_tree.h"

using namespace mt;

TEST_CASE("build tree on the six-token fixture") {
  DepTree t = DepTree::build(fixture_w());
  CHECK(t.root() == 5);
  CHECK(t.children(5) == std::vector<int>{1, 2, 3, 6});
  CHECK(t.children(3) == std::vector<int>{4});
  CHECK(t.descendants(3) == std::vector<int>{3, 4});
  CHECK(t.descendants(5).size() == 6);
  CHECK(t.depth(5) == 0);
  CHECK(t.depth(4) == 2);
}

TEST_CASE("build tree errors") {
  SourceSentence one;
  one.tokens = {{1, "w", "NN", "root", 0}};
  DepTree t = DepTree::build(one);
  CHECK(t.root() == 1);
  CHECK(related_pairs(t).empty());

  SourceSentence cyc;
  cyc.tokens = {{1, "a", "NN", "dep", 2}, {2, "b", "NN", "dep", 1},
                {3, "c", "NN", "root", 0}};
  CHECK_THROWS_WITH_AS(DepTree::build(cyc), "cyclic parse", DataError);

  SourceSentence two_roots;
  two_roots.tokens = {{1, "a", "NN", "root", 0}, {2, "b", "NN", "root", 0}};
  CHECK_THROWS_WITH_AS(two_roots.validate(), "malformed parse", DataError);
}

TEST_CASE("related_pairs enumeration") {
  DepTree t = DepTree::build(fixture_w());
  std::set<std::pair<int, int>> hc, sib;
  for (const RelatedPair& p : related_pairs(t)) {
    if (p.kind == RelatedPair::Kind::head_child)
      hc.insert({p.a, p.b});
    else
      sib.insert({p.a, p.b});
  }
  CHECK(hc == std::set<std::pair<int, int>>{
                  {5, 1}, {5, 2}, {5, 3}, {5, 6}, {3, 4}});
  CHECK(sib == std::set<std::pair<int, int>>{
                   {1, 2}, {1, 3}, {1, 6}, {2, 3}, {2, 6}, {3, 6}});

  SourceSentence chain;
  chain.tokens = {{1, "a", "NN", "root", 0}, {2, "b", "NN", "dep", 1},
                  {3, "c", "NN", "dep", 2}};
  CHECK(related_pairs(DepTree::build(chain)).size() == 2);
}

TEST_CASE("related_pairs count formula on random trees") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    int n = 1 + static_cast<int>(rng() % 10);
    SourceSentence s = random_tree_sentence(n, rng);
    DepTree tree = DepTree::build(s);
    size_t expected = 0;
    for (int h = 1; h <= n; ++h) {
      size_t k = tree.children(h).size();
      expected += k + k * (k - 1) / 2;
    }
    CHECK(related_pairs(tree).size() == expected);
  }
}

TEST_CASE("is_ancestor") {
  DepTree t = DepTree::build(fixture_w());
  CHECK(t.is_ancestor(5, 4));
  CHECK_FALSE(t.is_ancestor(4, 5));
  for (int x = 1; x <= 6; ++x) CHECK_FALSE(t.is_ancestor(x, x));
  // descendants/is_ancestor consistency
  for (int h = 1; h <= 6; ++h)
    for (int d = 1; d <= 6; ++d) {
      bool in_desc = std::count(t.descendants(h).begin(),
                                t.descendants(h).end(), d) > 0;
      CHECK(in_desc == (t.is_ancestor(h, d) || h == d));
    }
}

TEST_CASE("tree_path") {
  DepTree t = DepTree::build(fixture_w());
  CHECK(tree_path(t, 1, 5) ==
        std::vector<PathStep>{{"nsubj", Direction::up}});
  CHECK(tree_path(t, 2, 4) ==
        std::vector<PathStep>{{"tmod", Direction::up},
                              {"prep", Direction::down},
                              {"pobj", Direction::down}});
  CHECK(tree_path(t, 4, 3) == std::vector<PathStep>{{"pobj", Direction::up}});
}

TEST_CASE("tree_path reversal property") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    int n = 2 + static_cast<int>(rng() % 8);
    DepTree tree = DepTree::build(random_tree_sentence(n, rng));
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b) {
        if (a == b) continue;
        std::vector<PathStep> fwd = tree_path(tree, a, b);
        std::vector<PathStep> bwd = tree_path(tree, b, a);
        REQUIRE(fwd.size() == bwd.size());
        for (size_t k = 0; k < fwd.size(); ++k) {
          const PathStep& x = fwd[k];
          const PathStep& y = bwd[bwd.size() - 1 - k];
          CHECK(x.label == y.label);
          CHECK(x.dir != y.dir);
        }
      }
  }
}

TEST_CASE("check_interruption: splitting a partial subtree") {
  DepTree t = DepTree::build(fixture_w());
  Coverage cov(6);
  for (int p : {1, 3, 5, 6}) cov.set(p);
  // Translating yesterday next would strand the untranslated half of the
  // prepositional subtree {3,4}.
  CHECK(check_interruption(t, cov, {3, 3}, {2, 2}));
}

TEST_CASE("check_interruption: false along the fixture derivation") {
  DepTree t = DepTree::build(fixture_w());
  std::vector<Span> order = {{1, 1}, {5, 6}, {3, 3}, {4, 4}, {2, 2}};
  Coverage cov(6);
  for (size_t k = 0; k < order.size(); ++k) {
    if (k > 0) CHECK_FALSE(check_interruption(t, cov, order[k - 1], order[k]));
    cov.set(order[k]);
  }
}

TEST_CASE("check_interruption: monotone decoding of projective trees") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + static_cast<int>(rng() % 7);
    DepTree tree = DepTree::build(random_projective_sentence(n, rng));
    // Random monotone segmentation, left to right.
    Coverage cov(n);
    int pos = 1;
    Span prev{0, 0};
    bool first = true;
    while (pos <= n) {
      int len = 1 + static_cast<int>(rng() % 3);
      Span span{pos, std::min(n, pos + len - 1)};
      if (!first) CHECK_FALSE(check_interruption(tree, cov, prev, span));
      cov.set(span);
      prev = span;
      first = false;
      pos = span.end + 1;
    }
  }
}

TEST_CASE("conll reader") {
  std::istringstream in(
      "1\t佐科威\tNR\t5\tnsubj\n"
      "2\t昨天\tNT\t5\ttmod\n"
      "3\t在\tP\t5\tprep\n"
      "4\t北京\tNR\t3\tpobj\n"
      "5\t发表\tVV\t0\troot\n"
      "6\t讲话\tNN\t5\tdobj\n"
      "\n"
      "1\tok\tNN\t0\troot\n");
  std::vector<SourceSentence> sents = read_conll(in);
  REQUIRE(sents.size() == 2);
  CHECK(sents[0].size() == 6);
  CHECK(sents[0].at(4).form == "北京");
  CHECK(sents[0].at(4).head == 3);
  CHECK(sents[1].size() == 1);

  std::istringstream bad("1\tonly three\tfields\n");
  CHECK_THROWS_AS(read_conll(bad), DataError);
}

TEST_CASE("wall detection") {
  std::istringstream in(
      "1\ta\tNN\t2\tdep\n"
      "2\tis\tVV\t0\troot\n"
      "3\t,\tPU\t2\tpunct\n"
      "4\tb\tNN\t2\tdep\n");
  std::vector<SourceSentence> sents = read_conll(in);
  REQUIRE(sents.size() == 1);
  CHECK(sents[0].walls == std::set<int>{3});
}
