#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <random>

#include "doctest.h"
#include "mt/feature_vector.h"
#include "mt/phrase_table.h"

using namespace mt;

static PhrasePair make_pair(std::vector<std::string> src,
                            std::vector<std::string> tgt,
                            std::vector<std::pair<int, int>> align) {
  PhrasePair p;
  p.src = std::move(src);
  p.tgt = std::move(tgt);
  p.align = std::move(align);
  return p;
}

TEST_CASE("target_order basic cases") {
  PhrasePair p = make_pair({"发表", "讲话"}, {"made", "a", "speech"},
                           {{0, 0}, {1, 2}});
  CHECK(target_order(p, 0, 1) == Ordering::in_order);

  PhrasePair rev = make_pair({"a", "b"}, {"x", "y"}, {{0, 1}, {1, 0}});
  CHECK(target_order(rev, 0, 1) == Ordering::swapped);

  // s2 unaligned: inherits position 0 from its left neighbor, tie -> io.
  PhrasePair fb = make_pair({"a", "b"}, {"x"}, {{0, 0}});
  CHECK(target_order(fb, 0, 1) == Ordering::in_order);
}

TEST_CASE("target_order error and antisymmetry") {
  PhrasePair bad = make_pair({"a", "b"}, {"x"}, {});
  CHECK_THROWS_WITH_AS(target_order(bad, 0, 1), "unalignable phrase pair",
                       DataError);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    std::uniform_int_distribution<int> len(2, 5);
    int ns = len(rng), nt = len(rng);
    PhrasePair p;
    for (int i = 0; i < ns; ++i) p.src.push_back("s" + std::to_string(i));
    for (int j = 0; j < nt; ++j) p.tgt.push_back("t" + std::to_string(j));
    for (int i = 0; i < ns; ++i)
      if (rng() % 2)
        p.align.emplace_back(i, static_cast<int>(rng() % nt));
    if (p.align.empty()) p.align.emplace_back(0, 0);
    std::sort(p.align.begin(), p.align.end());
    for (int a = 0; a < ns; ++a)
      for (int b = a + 1; b < ns; ++b) {
        Ordering ab = target_order(p, a, b);
        Ordering ba = target_order(p, b, a);
        // Ties resolve to in_order in both directions; otherwise the
        // comparison must flip.
        if (ab == Ordering::swapped || ba == Ordering::swapped)
          CHECK(ab != ba);
      }
  }
}

TEST_CASE("fv_dot") {
  Weights w0;
  CHECK(fv_dot(w0, {{"f", 1}}) == 0.0);
  Weights w1;
  w1.set("f", 2.0);
  CHECK(fv_dot(w1, {{"f", 3}}) == 6.0);
  Weights w2;
  w2.set("f", 1.5);
  w2.set("g", -1.0);
  CHECK(fv_dot(w2, {{"f", 2}, {"h", 4}}) == 3.0);
}

TEST_CASE("fv_add") {
  CHECK(fv_add({}, {{"f", 1}}) == FeatureVector{{"f", 1}});
  CHECK(fv_add({{"f", 1}}, {{"f", -1}}).empty());
  CHECK(fv_add({{"f", 1}, {"g", 2}}, {{"g", 3}}) ==
        FeatureVector{{"f", 1}, {"g", 5}});
}

TEST_CASE("fv_dot linearity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    Weights w;
    FeatureVector a, b;
    for (int k = 0; k < 8; ++k) {
      std::string key = "k" + std::to_string(rng() % 12);
      w.set(key, val(rng));
      if (rng() % 2) a[key] = val(rng);
      if (rng() % 2) b[key] = val(rng);
    }
    double lhs = fv_dot(w, fv_add(a, b));
    double rhs = fv_dot(w, a) + fv_dot(w, b);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("FeatureKey round trip") {
  std::vector<FeatureKey> keys = {
      {"ds_hc", {"root", "dobj", "left", "io"}},
      {"ds_sib", {"tmod", "NN", "sw"}},
      {"shr", {"p_first", "在", "S"}},
      {"path", {"tmod,prepR,pobjR", "sw"}},
      {"dense", {"lm"}},
  };
  for (const FeatureKey& k : keys) {
    FeatureKey back = FeatureKey::parse(k.render());
    CHECK(back == k);
  }
}

TEST_CASE("weights file round trip") {
  Weights w;
  w.set("dense|lm", 1.0);
  w.set("ds_hc|root|dobj|left|io", -0.3725);
  w.set("path|nsubj|io", 2.5e-7);
  std::string path = "test_weights.tmp";
  write_weights(w, path);
  Weights back = read_weights(path);
  CHECK(back.w == w.w);
  std::remove(path.c_str());
}

TEST_CASE("phrase table round trip and pruning") {
  PhraseTable t;
  t.k_best = 2;
  for (int i = 0; i < 4; ++i) {
    PhrasePair p = make_pair({"a"}, {"t" + std::to_string(i)}, {{0, 0}});
    p.scores = {std::log(0.1 * (i + 1)), std::log(0.5), std::log(0.5),
                std::log(0.5)};
    t.add(std::move(p));
  }
  const auto* opts = t.lookup({"a"});
  REQUIRE(opts != nullptr);
  CHECK(opts->size() == 2);
  CHECK((*opts)[0].tgt == std::vector<std::string>{"t3"});
  CHECK((*opts)[0].total() >= (*opts)[1].total());

  std::string path = "test_table.tmp";
  write_phrase_table(t, path);
  PhraseTable back = read_phrase_table(path, 2);
  const auto* b = back.lookup({"a"});
  REQUIRE(b != nullptr);
  REQUIRE(b->size() == 2);
  for (size_t i = 0; i < b->size(); ++i) {
    CHECK((*b)[i].tgt == (*opts)[i].tgt);
    for (int k = 0; k < 4; ++k)
      CHECK((*b)[i].scores[k] == doctest::Approx((*opts)[i].scores[k]));
    CHECK((*b)[i].align == (*opts)[i].align);
  }
  std::remove(path.c_str());
}
