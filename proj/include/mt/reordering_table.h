#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "mt/types.h"

namespace mt {

// Lexicalized reordering probabilities per phrase pair: natural-log
// p(M), p(S), p(D) forward (w.r.t. the previous unit) and backward
// (w.r.t. the following unit). Unseen pairs fall back to uniform 1/3.
struct ReorderingTable {
  using Key = std::pair<std::vector<std::string>, std::vector<std::string>>;
  std::map<Key, std::array<double, 6>> rows;

  std::array<double, 6> lookup(const std::vector<std::string>& src,
                               const std::vector<std::string>& tgt) const;
};

// File format: `src ||| tgt ||| pM pS pD pM' pS' pD'` with probabilities.
ReorderingTable read_reordering_table(const std::string& path);
void write_reordering_table(const ReorderingTable& t, const std::string& path);

}  // namespace mt
