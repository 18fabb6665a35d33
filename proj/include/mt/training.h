#pragma once

#include <map>
#include <string>
#include <vector>

#include "mt/phrase_table.h"
#include "mt/reordering_table.h"

namespace mt {

struct AlignedSentencePair {
  std::vector<std::string> src, tgt;
  std::vector<std::pair<int, int>> align;  // 0-based (src, tgt) links
};

// Three parallel files: source tokens, target tokens, `i-j` links.
std::vector<AlignedSentencePair> read_bitext(const std::string& src_path,
                                             const std::string& tgt_path,
                                             const std::string& align_path);

// One extracted phrase-pair occurrence; spans and alignment are 0-based
// offsets into the owning sentence pair / phrase.
struct PhraseInstance {
  int s1, s2, t1, t2;
  std::vector<std::pair<int, int>> align;  // phrase-internal offsets
};

// All consistent phrase pairs: >=1 internal link, no link crossing the
// boundary, both sides <= max_len. Unaligned-boundary expansions emitted.
std::vector<PhraseInstance> extract_phrases(const AlignedSentencePair& p,
                                            int max_len = 7);

// Word-translation probabilities from alignment links; unaligned words
// pair with the empty string (NULL).
struct LexTable {
  std::map<std::pair<std::string, std::string>, double> t_given_s;  // (s,t)
  std::map<std::pair<std::string, std::string>, double> s_given_t;  // (s,t)
};

LexTable build_lex_table(const std::vector<AlignedSentencePair>& corpus);

// Relative frequencies plus lexical weights in both directions.
PhraseTable score_phrases(const std::vector<AlignedSentencePair>& corpus,
                          int max_len = 7, int k_best = 20);

struct ReorderingTables {
  ReorderingTable pblr;
  ReorderingTable hr;
};

// Orientation counts (add-0.5 smoothed) per phrase pair; PBLR against the
// adjacent alignment point, HR against the maximal consistent block.
ReorderingTables estimate_reordering(
    const std::vector<AlignedSentencePair>& corpus, int max_len = 7);

// k most frequent source forms; frequency ties break lexicographically.
std::vector<std::string> build_top_words(
    const std::vector<AlignedSentencePair>& corpus, int k = 80);

}  // namespace mt
