#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "mt/lm.h"
#include "mt/training.h"

using namespace mt;

namespace {

AlignedSentencePair make_asp(std::vector<std::string> src,
                             std::vector<std::string> tgt,
                             std::vector<std::pair<int, int>> align) {
  AlignedSentencePair p;
  p.src = std::move(src);
  p.tgt = std::move(tgt);
  p.align = std::move(align);
  std::sort(p.align.begin(), p.align.end());
  return p;
}

// Reference implementation of the consistency predicate for one candidate
// (src span, tgt span) rectangle.
bool consistent_pair(const AlignedSentencePair& p, int s1, int s2, int t1,
                     int t2) {
  bool has_link = false;
  for (const auto& [i, j] : p.align) {
    bool in_s = i >= s1 && i <= s2;
    bool in_t = j >= t1 && j <= t2;
    if (in_s != in_t) return false;
    if (in_s && in_t) has_link = true;
  }
  return has_link;
}

}  // namespace

TEST_CASE("extract_phrases: minimal cases") {
  auto single = make_asp({"a"}, {"x"}, {{0, 0}});
  auto out = extract_phrases(single);
  REQUIRE(out.size() == 1);
  CHECK(out[0].s1 == 0);
  CHECK(out[0].t2 == 0);
  CHECK(out[0].align == std::vector<std::pair<int, int>>{{0, 0}});

  // Fully crossed 2x2: singletons plus the full block, nothing rectangular
  // in between.
  auto crossed = make_asp({"a", "b"}, {"x", "y"}, {{0, 1}, {1, 0}});
  auto pairs = extract_phrases(crossed);
  std::set<std::tuple<int, int, int, int>> spans;
  for (const PhraseInstance& i : pairs)
    spans.insert({i.s1, i.s2, i.t1, i.t2});
  CHECK(spans == std::set<std::tuple<int, int, int, int>>{
                     {0, 0, 1, 1}, {1, 1, 0, 0}, {0, 1, 0, 1}});
}

TEST_CASE("extract_phrases: unaligned boundary expansion") {
  // y is unaligned; the tight pair and its expansion both appear.
  auto p = make_asp({"a", "b"}, {"x", "y", "z"}, {{0, 0}, {1, 2}});
  auto pairs = extract_phrases(p);
  std::set<std::tuple<int, int, int, int>> spans;
  for (const PhraseInstance& i : pairs)
    spans.insert({i.s1, i.s2, i.t1, i.t2});
  CHECK(spans.count({0, 0, 0, 0}) == 1);
  CHECK(spans.count({0, 0, 0, 1}) == 1);  // expansion over y
  CHECK(spans.count({1, 1, 2, 2}) == 1);
  CHECK(spans.count({1, 1, 1, 2}) == 1);  // expansion over y
  CHECK(spans.count({0, 1, 0, 2}) == 1);
}

TEST_CASE("extract_phrases agrees with brute-force consistency") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 300; ++t) {
    int ns = 1 + static_cast<int>(rng() % 6);
    int nt = 1 + static_cast<int>(rng() % 6);
    AlignedSentencePair p;
    for (int i = 0; i < ns; ++i) p.src.push_back("s" + std::to_string(i));
    for (int j = 0; j < nt; ++j) p.tgt.push_back("t" + std::to_string(j));
    std::set<std::pair<int, int>> links;
    int n_links = 1 + static_cast<int>(rng() % (ns * nt));
    for (int l = 0; l < n_links; ++l)
      links.insert({static_cast<int>(rng() % ns), static_cast<int>(rng() % nt)});
    p.align.assign(links.begin(), links.end());

    std::set<std::tuple<int, int, int, int>> expected;
    for (int s1 = 0; s1 < ns; ++s1)
      for (int s2 = s1; s2 < ns; ++s2)
        for (int t1 = 0; t1 < nt; ++t1)
          for (int t2 = t1; t2 < nt; ++t2)
            if (s2 - s1 < 7 && t2 - t1 < 7 &&
                consistent_pair(p, s1, s2, t1, t2))
              expected.insert({s1, s2, t1, t2});

    std::set<std::tuple<int, int, int, int>> got;
    for (const PhraseInstance& i : extract_phrases(p))
      got.insert({i.s1, i.s2, i.t1, i.t2});
    CHECK(got == expected);
  }
}

TEST_CASE("score_phrases: relative frequencies and lexical weights") {
  std::vector<AlignedSentencePair> corpus;
  // "a" -> "x" three times, "a" -> "y" once.
  for (int k = 0; k < 3; ++k) corpus.push_back(make_asp({"a"}, {"x"}, {{0, 0}}));
  corpus.push_back(make_asp({"a"}, {"y"}, {{0, 0}}));
  PhraseTable t = score_phrases(corpus);
  const auto* opts = t.lookup({"a"});
  REQUIRE(opts != nullptr);
  REQUIRE(opts->size() == 2);
  const PhrasePair& best = (*opts)[0];
  CHECK(best.tgt == std::vector<std::string>{"x"});
  CHECK(std::exp(best.scores[0]) == doctest::Approx(0.75));
  CHECK(std::exp(best.scores[1]) == doctest::Approx(1.0));
  // Lexical weight of a fully linked 1x1 pair equals the word prob.
  CHECK(std::exp(best.scores[2]) == doctest::Approx(0.75));
  CHECK(std::exp(best.scores[3]) == doctest::Approx(1.0));

  // Forward relative frequencies sum to one per source.
  double sum = 0.0;
  for (const PhrasePair& p : *opts) sum += std::exp(p.scores[0]);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("score_phrases: single instance corpus") {
  PhraseTable t = score_phrases({make_asp({"a"}, {"x"}, {{0, 0}})});
  const auto* opts = t.lookup({"a"});
  REQUIRE(opts != nullptr);
  CHECK((*opts)[0].scores[0] == doctest::Approx(0.0));
  CHECK((*opts)[0].scores[1] == doctest::Approx(0.0));
}

TEST_CASE("estimate_reordering: monotone vs inverted") {
  std::vector<AlignedSentencePair> mono = {
      make_asp({"a", "b"}, {"x", "y"}, {{0, 0}, {1, 1}}),
      make_asp({"a", "b"}, {"x", "y"}, {{0, 0}, {1, 1}}),
  };
  ReorderingTables t = estimate_reordering(mono);
  auto row = t.pblr.lookup({"b"}, {"y"});
  // forward: previous target word links the diagonal neighbor -> monotone
  CHECK(std::exp(row[0]) > std::exp(row[1]));
  CHECK(std::exp(row[0]) > std::exp(row[2]));
  // rows normalize per direction
  CHECK(std::exp(row[0]) + std::exp(row[1]) + std::exp(row[2]) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::exp(row[3]) + std::exp(row[4]) + std::exp(row[5]) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // hand count with add-0.5: "b"->"y" seen twice, both monotone forward:
  // (2 + .5) / (2 + 1.5) = 0.7142857
  CHECK(std::exp(row[0]) == doctest::Approx(2.5 / 3.5));

  std::vector<AlignedSentencePair> inv = {
      make_asp({"a", "b"}, {"y", "x"}, {{0, 1}, {1, 0}})};
  ReorderingTables ti = estimate_reordering(inv);
  auto irow = ti.pblr.lookup({"a"}, {"x"});
  // "a"->"x" is second on target; the word before it on the target side
  // aligns to the source word just right of "a" -> swapped.
  CHECK(std::exp(irow[1]) > std::exp(irow[0]));
  CHECK(std::exp(irow[1]) > std::exp(irow[2]));

  // Unseen pair: uniform fallback.
  auto fallback = t.pblr.lookup({"zzz"}, {"qqq"});
  for (int k = 0; k < 6; ++k)
    CHECK(std::exp(fallback[k]) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("estimate_reordering: HR sees block-level monotonicity") {
  // Source "a b c" -> target "y z x": phrase a->x is discontinuous w.r.t.
  // the single previous word but follows the contiguous block "b c"->"y z".
  auto p = make_asp({"a", "b", "c"}, {"y", "z", "x"},
                    {{0, 2}, {1, 0}, {2, 1}});
  ReorderingTables t = estimate_reordering({p});
  auto pblr_row = t.pblr.lookup({"a"}, {"x"});
  auto hr_row = t.hr.lookup({"a"}, {"x"});
  // PBLR only checks the single corner word (z aligns to c, not to the
  // word adjacent to "a") -> discontinuous.
  CHECK(std::exp(pblr_row[2]) == doctest::Approx(1.5 / 2.5));
  // HR finds the consistent block "b c"/"y z" starting right after "a"
  // and ending right before "x" -> swapped.
  CHECK(std::exp(hr_row[1]) == doctest::Approx(1.5 / 2.5));
  CHECK(std::exp(hr_row[0]) == doctest::Approx(0.5 / 2.5));
}

TEST_CASE("build_top_words") {
  std::vector<AlignedSentencePair> corpus = {
      make_asp({"a", "a", "b"}, {"x"}, {{0, 0}})};
  CHECK(build_top_words(corpus, 1) == std::vector<std::string>{"a"});
  std::vector<AlignedSentencePair> tie = {
      make_asp({"b", "a", "b", "a"}, {"x"}, {{0, 0}})};
  CHECK(build_top_words(tie, 1) == std::vector<std::string>{"a"});
  CHECK(build_top_words(tie, 10) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("witten-bell hand computation") {
  NGramLM lm = NGramLM::train({{"a", "b"}}, 2);
  // Predicted unigrams: a, b, </s>, each once; 3 types, base 1/4.
  double pa = (1 + 3 * 0.25) / 6.0;
  CHECK(lm.unigram("a") == doctest::Approx(std::log10(pa)));
  // p(b|a) = (c(ab) + T(a) p(b)) / (c(a) + T(a)) = (1 + pa) / 2
  CHECK(lm.prob({"a"}, "b") == doctest::Approx(std::log10((1 + pa) / 2)));
  // Backoff: p(a|b) = bow(b) * p(a); bow(b) = T(b)/(c(b)+T(b)) = 1/2
  CHECK(lm.prob({"b"}, "a") ==
        doctest::Approx(std::log10(0.5) + std::log10(pa)));
  CHECK(lm.prob({}, "zzz") == doctest::Approx(-7.0));
}

TEST_CASE("LM backoff mass") {
  NGramLM lm = NGramLM::train(
      {{"a", "b", "a"}, {"b", "b", "c"}, {"a", "c", "b"}}, 3);
  std::vector<std::string> vocab = {"a", "b", "c", NGramLM::kEos};
  std::vector<std::vector<std::string>> contexts = {
      {}, {"a"}, {"b"}, {"a", "b"}, {"b", "c"}, {NGramLM::kBos}};
  for (const auto& ctx : contexts) {
    double mass = 0.0;
    for (const std::string& w : vocab) mass += std::pow(10.0, lm.prob(ctx, w));
    CHECK(mass <= 1.0 + 1e-6);
  }
}

TEST_CASE("LM score equals per-token prob lookups and survives save/load") {
  NGramLM lm = NGramLM::train({{"a", "b", "c"}, {"a", "c", "b"}}, 3);
  std::vector<std::string> sent = {"a", "c", "zzz", "b"};

  std::vector<std::string> state = lm.begin_state();
  double total = 0.0;
  for (const std::string& w : sent) total += lm.score(state, w);

  // Independent accumulation with explicit contexts; OOV resets.
  std::vector<std::string> ctx = {NGramLM::kBos};
  double expect = 0.0;
  for (const std::string& w : sent) {
    if (!lm.in_vocab(w)) {
      expect += NGramLM::kOovFloor;
      ctx.clear();
      continue;
    }
    expect += lm.prob(ctx, w);
    ctx.push_back(w);
  }
  CHECK(total == doctest::Approx(expect).epsilon(1e-12));

  lm.save("test_lm.tmp");
  NGramLM back = NGramLM::load("test_lm.tmp");
  std::vector<std::string> s1 = lm.begin_state(), s2 = back.begin_state();
  for (const std::string& w : {"a", "c", "b", "b"})
    CHECK(lm.score(s1, w) == doctest::Approx(back.score(s2, w)).epsilon(1e-9));
  std::remove("test_lm.tmp");
}

TEST_CASE("read_bitext errors") {
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
  };
  write("bt_src.tmp", "a b\n");
  write("bt_tgt.tmp", "x y\n");
  write("bt_al.tmp", "0-0 5-1\n");
  CHECK_THROWS_AS(read_bitext("bt_src.tmp", "bt_tgt.tmp", "bt_al.tmp"),
                  DataError);
  write("bt_al.tmp", "0-0 1-1\n");
  auto ok = read_bitext("bt_src.tmp", "bt_tgt.tmp", "bt_al.tmp");
  CHECK(ok.size() == 1);
  CHECK(ok[0].align.size() == 2);
  std::remove("bt_src.tmp");
  std::remove("bt_tgt.tmp");
  std::remove("bt_al.tmp");
}
