#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mt {

// Thrown for malformed input files; message carries the line number.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when beam search cannot reach a complete hypothesis.
struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Token {
  int index = 0;       // 1-based source position
  std::string form;
  std::string pos;     // T(x)
  std::string label;   // L(x), label of the link to the head
  int head = 0;        // 0 = artificial root
};

// Inclusive 1-based source span [begin,end].
struct Span {
  int begin = 0;
  int end = 0;
  int length() const { return end - begin + 1; }
  bool contains(int pos) const { return pos >= begin && pos <= end; }
  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

struct SourceSentence {
  std::vector<Token> tokens;  // tokens[k].index == k+1
  std::set<int> walls;        // punctuation positions
  int size() const { return static_cast<int>(tokens.size()); }
  const Token& at(int pos) const { return tokens[pos - 1]; }
  std::vector<std::string> forms(Span s) const;
  void validate() const;  // throws DataError on broken invariants
};

enum class Ordering { in_order, swapped };

inline const char* ordering_tag(Ordering o) {
  return o == Ordering::in_order ? "io" : "sw";
}

bool is_wall_token(const Token& t);

// CoNLL-like input: INDEX \t FORM \t POS \t HEAD \t DEPREL, blank line
// between sentences, HEAD=0 for the root.
std::vector<SourceSentence> read_conll(std::istream& in);
std::vector<SourceSentence> read_conll_file(const std::string& path);

std::vector<std::string> split_ws(const std::string& line);
std::vector<std::string> split_on(const std::string& line, char sep);
std::string join(const std::vector<std::string>& toks, const std::string& sep);
std::string fold_case(const std::string& s);  // ASCII lowercase

std::vector<std::vector<std::string>> read_token_lines(const std::string& path);

}  // namespace mt
