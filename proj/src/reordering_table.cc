#include "mt/reordering_table.h"

#include <cmath>
#include <fstream>

namespace mt {

std::array<double, 6> ReorderingTable::lookup(
    const std::vector<std::string>& src,
    const std::vector<std::string>& tgt) const {
  auto it = rows.find({src, tgt});
  if (it != rows.end()) return it->second;
  double u = std::log(1.0 / 3.0);
  return {u, u, u, u, u, u};
}

ReorderingTable read_reordering_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open reordering table: " + path);
  ReorderingTable t;
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
    if (parts.size() != 3)
      throw DataError("reordering table line " + std::to_string(lineno) +
                      ": expected 3 ||| fields");
    std::vector<std::string> probs = split_ws(parts[2]);
    if (probs.size() != 6)
      throw DataError("reordering table line " + std::to_string(lineno) +
                      ": expected 6 probabilities");
    std::array<double, 6> row;
    for (int i = 0; i < 6; ++i) {
      double p = std::stod(probs[i]);
      if (p <= 0.0)
        throw DataError("reordering table line " + std::to_string(lineno) +
                        ": non-positive probability");
      row[i] = std::log(p);
    }
    t.rows[{split_ws(parts[0]), split_ws(parts[1])}] = row;
  }
  return t;
}

void write_reordering_table(const ReorderingTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write reordering table: " + path);
  out.precision(10);
  for (const auto& [key, row] : t.rows) {
    out << join(key.first, " ") << " ||| " << join(key.second, " ") << " |||";
    for (double lp : row) out << ' ' << std::exp(lp);
    out << '\n';
  }
}

}  // namespace mt
