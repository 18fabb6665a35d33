#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mt {

// Backoff n-gram language model with Witten-Bell interpolated estimates.
// Probabilities are log10 throughout; OOV words score a fixed floor and
// reset the context.
class NGramLM {
 public:
  static constexpr const char* kBos = "<s>";
  static constexpr const char* kEos = "</s>";
  static constexpr double kOovFloor = -7.0;

  static NGramLM train(const std::vector<std::vector<std::string>>& sents,
                       int order);
  static NGramLM load(const std::string& path);
  void save(const std::string& path) const;

  int order() const { return order_; }
  bool in_vocab(const std::string& w) const;

  // log10 p(word | context words, most recent last); backoff recursion.
  double prob(const std::vector<std::string>& context,
              const std::string& word) const;

  // Scores word given state and advances state (last order-1 words; OOV
  // empties it).
  double score(std::vector<std::string>& state, const std::string& word) const;

  std::vector<std::string> begin_state() const { return {kBos}; }

  // Context-free per-word bound used by future cost: unigram (or floor).
  double unigram(const std::string& word) const;

 private:
  int order_ = 1;
  std::unordered_map<std::string, double> probs_;  // log10, key = joined ngram
  std::unordered_map<std::string, double> bows_;   // log10, key = joined context
};

}  // namespace mt
