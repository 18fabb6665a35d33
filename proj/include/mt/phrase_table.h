#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "mt/types.h"

namespace mt {

struct PhrasePair {
  std::vector<std::string> src, tgt;
  // Natural-log scores: p(tgt|src), p(src|tgt), lex(tgt|src), lex(src|tgt).
  std::array<double, 4> scores{};
  std::vector<std::pair<int, int>> align;  // 0-based (src_off, tgt_off)
  double total() const { return scores[0] + scores[1] + scores[2] + scores[3]; }
};

// Phrase-internal word order of two source offsets in the target side.
// Resolved position = minimum aligned target offset; an unaligned source
// word inherits the position of the nearest aligned neighbor (left first).
// Equal resolved positions count as in_order.
Ordering target_order(const PhrasePair& pair, int s1, int s2);

struct PhraseTable {
  std::map<std::vector<std::string>, std::vector<PhrasePair>> entries;
  int k_best = 20;
  const std::vector<PhrasePair>* lookup(const std::vector<std::string>& src) const;
  // Keeps the per-source list sorted by total score, truncated to k_best.
  void add(PhrasePair p);
};

// Text format, one entry per line:
//   src toks ||| tgt toks ||| s1 s2 s3 s4 ||| i-j i-j ...
// with probabilities on disk, natural logs in memory.
PhraseTable read_phrase_table(const std::string& path, int k_best = 20);
void write_phrase_table(const PhraseTable& t, const std::string& path);

}  // namespace mt
