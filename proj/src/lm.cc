#include "mt/lm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "mt/types.h"

namespace mt {

namespace {

std::string join_words(const std::vector<std::string>& w, size_t from,
                       size_t count) {
  std::string out;
  for (size_t i = from; i < from + count; ++i) {
    if (i > from) out += ' ';
    out += w[i];
  }
  return out;
}

int word_count(const std::string& key) {
  return static_cast<int>(std::count(key.begin(), key.end(), ' ')) + 1;
}

}  // namespace

NGramLM NGramLM::train(const std::vector<std::vector<std::string>>& sents,
                       int order) {
  if (order < 1) throw DataError("LM order must be >= 1");
  NGramLM lm;
  lm.order_ = order;

  // counts[k-1]: k-gram counts; the predicted word is never <s>.
  std::vector<std::map<std::string, long>> counts(order);
  for (const auto& sent : sents) {
    std::vector<std::string> padded;
    padded.push_back(kBos);
    padded.insert(padded.end(), sent.begin(), sent.end());
    padded.push_back(kEos);
    for (int k = 1; k <= order; ++k)
      for (size_t i = 0; i + k <= padded.size(); ++i) {
        if (padded[i + k - 1] == kBos) continue;
        ++counts[k - 1][join_words(padded, i, k)];
      }
  }

  // Per-context continuation totals and distinct-type counts.
  std::vector<std::map<std::string, long>> ctot(order);
  std::vector<std::map<std::string, long>> types(order);
  for (int k = 1; k <= order; ++k)
    for (const auto& [key, c] : counts[k - 1]) {
      std::string ctx;
      if (k > 1) ctx = key.substr(0, key.rfind(' '));
      ctot[k - 1][ctx] += c;
      ++types[k - 1][ctx];
    }

  long uni_total = ctot[0].count("") ? ctot[0][""] : 0;
  long uni_types = types[0].count("") ? types[0][""] : 0;
  if (uni_total == 0) throw DataError("empty LM training corpus");
  double p0 = 1.0 / (uni_types + 1);  // uniform base, reserves OOV mass

  // Interpolated Witten-Bell, expressed as a backoff model: stored probs
  // carry the interpolation, bow(h) = T(h)/(c(h)+T(h)).
  std::map<std::string, double> plin;  // linear-domain probs per ngram
  for (const auto& [w, c] : counts[0])
    plin[w] = (c + uni_types * p0) / static_cast<double>(uni_total + uni_types);
  for (int k = 2; k <= order; ++k)
    for (const auto& [key, c] : counts[k - 1]) {
      std::string ctx = key.substr(0, key.rfind(' '));
      std::string word = key.substr(key.rfind(' ') + 1);
      std::string lower =
          k == 2 ? word : key.substr(key.find(' ') + 1);
      long t = types[k - 1][ctx];
      long tot = ctot[k - 1][ctx];
      plin[key] = (c + t * plin.at(lower)) / static_cast<double>(tot + t);
    }
  for (const auto& [key, p] : plin) lm.probs_[key] = std::log10(p);

  for (int k = 1; k < order; ++k)
    for (const auto& [ctx, t] : types[k])  // contexts of length k
      lm.bows_[ctx] = std::log10(t / static_cast<double>(ctot[k][ctx] + t));
  return lm;
}

bool NGramLM::in_vocab(const std::string& w) const {
  return probs_.count(w) > 0;
}

double NGramLM::prob(const std::vector<std::string>& context,
                     const std::string& word) const {
  if (!in_vocab(word)) return kOovFloor;
  size_t use = std::min(context.size(), static_cast<size_t>(order_ - 1));
  size_t from = context.size() - use;
  double bow_sum = 0.0;
  for (size_t k = use; k > 0; --k) {
    std::string ctx = join_words(context, from, k);
    auto it = probs_.find(ctx + ' ' + word);
    if (it != probs_.end()) return bow_sum + it->second;
    auto bit = bows_.find(ctx);
    if (bit != bows_.end()) bow_sum += bit->second;
    ++from;
  }
  return bow_sum + probs_.at(word);
}

double NGramLM::score(std::vector<std::string>& state,
                      const std::string& word) const {
  if (!in_vocab(word)) {
    state.clear();
    return kOovFloor;
  }
  double p = prob(state, word);
  state.push_back(word);
  while (static_cast<int>(state.size()) > order_ - 1)
    state.erase(state.begin());
  return p;
}

double NGramLM::unigram(const std::string& word) const {
  auto it = probs_.find(word);
  return it == probs_.end() ? kOovFloor : it->second;
}

void NGramLM::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write LM file: " + path);
  out.precision(10);
  std::vector<std::map<std::string, std::pair<double, double>>> rows(order_);
  for (const auto& [key, p] : probs_)
    rows[word_count(key) - 1][key] = {p, 0.0};
  for (const auto& [ctx, b] : bows_) {
    auto& row = rows[word_count(ctx) - 1];
    auto it = row.find(ctx);
    if (it == row.end())
      row[ctx] = {-99.0, b};  // context-only entry, never predicted
    else
      it->second.second = b;
  }
  out << "\\order\t" << order_ << '\n';
  for (int k = 1; k <= order_; ++k) {
    out << '\\' << k << "-grams:\n";
    for (const auto& [key, pb] : rows[k - 1])
      out << pb.first << '\t' << key << '\t' << pb.second << '\n';
  }
  out << "\\end\\\n";
}

NGramLM NGramLM::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open LM file: " + path);
  NGramLM lm;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "\\end\\") continue;
    if (line.rfind("\\order\t", 0) == 0) {
      lm.order_ = std::stoi(line.substr(7));
      continue;
    }
    if (line[0] == '\\') continue;  // section header
    std::vector<std::string> f = split_on(line, '\t');
    if (f.size() != 3)
      throw DataError("LM line " + std::to_string(lineno) + ": bad format");
    double p = std::stod(f[0]);
    double b = std::stod(f[2]);
    if (p > -99.0) lm.probs_[f[1]] = p;
    if (b != 0.0) lm.bows_[f[1]] = b;
  }
  if (lm.probs_.empty()) throw DataError("empty LM file: " + path);
  return lm;
}

}  // namespace mt
