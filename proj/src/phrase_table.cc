#include "mt/phrase_table.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mt {

namespace {

int min_aligned_tgt(const PhrasePair& p, int s) {
  int best = std::numeric_limits<int>::max();
  for (const auto& [a, b] : p.align)
    if (a == s && b < best) best = b;
  return best;
}

int resolved_tgt(const PhrasePair& p, int s) {
  const int none = std::numeric_limits<int>::max();
  int m = min_aligned_tgt(p, s);
  if (m != none) return m;
  int n = static_cast<int>(p.src.size());
  for (int d = 1; d < n; ++d) {
    if (s - d >= 0 && (m = min_aligned_tgt(p, s - d)) != none) return m;
    if (s + d < n && (m = min_aligned_tgt(p, s + d)) != none) return m;
  }
  throw DataError("unalignable phrase pair");
}

}  // namespace

Ordering target_order(const PhrasePair& pair, int s1, int s2) {
  return resolved_tgt(pair, s1) <= resolved_tgt(pair, s2) ? Ordering::in_order
                                                          : Ordering::swapped;
}

const std::vector<PhrasePair>* PhraseTable::lookup(
    const std::vector<std::string>& src) const {
  auto it = entries.find(src);
  return it == entries.end() ? nullptr : &it->second;
}

void PhraseTable::add(PhrasePair p) {
  std::vector<PhrasePair>& list = entries[p.src];
  auto pos = std::upper_bound(
      list.begin(), list.end(), p,
      [](const PhrasePair& a, const PhrasePair& b) { return a.total() > b.total(); });
  list.insert(pos, std::move(p));
  if (static_cast<int>(list.size()) > k_best) list.resize(k_best);
}

PhraseTable read_phrase_table(const std::string& path, int k_best) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open phrase table: " + path);
  PhraseTable t;
  t.k_best = k_best;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> parts;
    size_t pos = 0;
    while (true) {
      size_t sep = line.find(" ||| ", pos);
      if (sep == std::string::npos) {
        parts.push_back(line.substr(pos));
        break;
      }
      parts.push_back(line.substr(pos, sep - pos));
      pos = sep + 5;
    }
    if (parts.size() != 4)
      throw DataError("phrase table line " + std::to_string(lineno) +
                      ": expected 4 ||| fields");
    PhrasePair p;
    p.src = split_ws(parts[0]);
    p.tgt = split_ws(parts[1]);
    std::vector<std::string> sc = split_ws(parts[2]);
    if (p.src.empty() || p.tgt.empty() || sc.size() != 4)
      throw DataError("phrase table line " + std::to_string(lineno) +
                      ": malformed entry");
    for (int i = 0; i < 4; ++i) {
      double prob = std::stod(sc[i]);
      if (prob <= 0.0)
        throw DataError("phrase table line " + std::to_string(lineno) +
                        ": non-positive probability");
      p.scores[i] = std::log(prob);
    }
    for (const std::string& a : split_ws(parts[3])) {
      size_t dash = a.find('-');
      if (dash == std::string::npos)
        throw DataError("phrase table line " + std::to_string(lineno) +
                        ": bad alignment pair");
      int i = std::stoi(a.substr(0, dash));
      int j = std::stoi(a.substr(dash + 1));
      if (i < 0 || i >= static_cast<int>(p.src.size()) || j < 0 ||
          j >= static_cast<int>(p.tgt.size()))
        throw DataError("phrase table line " + std::to_string(lineno) +
                        ": alignment offset out of range");
      p.align.emplace_back(i, j);
    }
    std::sort(p.align.begin(), p.align.end());
    t.add(std::move(p));
  }
  return t;
}

void write_phrase_table(const PhraseTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write phrase table: " + path);
  out.precision(10);
  for (const auto& [src, list] : t.entries) {
    for (const PhrasePair& p : list) {
      out << join(p.src, " ") << " ||| " << join(p.tgt, " ") << " |||";
      for (double s : p.scores) out << ' ' << std::exp(s);
      out << " |||";
      for (const auto& [i, j] : p.align) out << ' ' << i << '-' << j;
      out << '\n';
    }
  }
}

}  // namespace mt
