#include "mt/types.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mt {

std::vector<std::string> SourceSentence::forms(Span s) const {
  std::vector<std::string> out;
  for (int p = s.begin; p <= s.end; ++p) out.push_back(at(p).form);
  return out;
}

void SourceSentence::validate() const {
  int roots = 0;
  for (int k = 0; k < size(); ++k) {
    const Token& t = tokens[k];
    if (t.index != k + 1) throw DataError("token indices not contiguous");
    if (t.head == t.index) throw DataError("token is its own head");
    if (t.head < 0 || t.head > size()) throw DataError("head index out of range");
    if (t.pos.empty() || t.label.empty())
      throw DataError("empty POS or dependency label");
    if (t.head == 0) ++roots;
  }
  if (roots != 1) throw DataError("malformed parse");
}

bool is_wall_token(const Token& t) {
  static const std::set<std::string> punct = {
      ",", ".", ";", ":", "!", "?", "，", "。", "、", "；", "：", "！", "？"};
  return t.pos == "PU" || punct.count(t.form) > 0;
}

std::vector<SourceSentence> read_conll(std::istream& in) {
  std::vector<SourceSentence> out;
  SourceSentence cur;
  std::string line;
  int lineno = 0;
  auto flush = [&]() {
    if (cur.tokens.empty()) return;
    cur.validate();
    for (const Token& t : cur.tokens)
      if (is_wall_token(t)) cur.walls.insert(t.index);
    out.push_back(std::move(cur));
    cur = SourceSentence();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    std::vector<std::string> f = split_on(line, '\t');
    if (f.size() != 5)
      throw DataError("parse line " + std::to_string(lineno) +
                      ": expected 5 tab-separated fields");
    Token t;
    try {
      t.index = std::stoi(f[0]);
      t.head = std::stoi(f[3]);
    } catch (const std::exception&) {
      throw DataError("parse line " + std::to_string(lineno) + ": bad integer");
    }
    t.form = f[1];
    t.pos = f[2];
    t.label = f[4];
    cur.tokens.push_back(std::move(t));
  }
  flush();
  return out;
}

std::vector<SourceSentence> read_conll_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open parse file: " + path);
  return read_conll(in);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string join(const std::vector<std::string>& toks, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < toks.size(); ++i) {
    if (i) out += sep;
    out += toks[i];
  }
  return out;
}

std::string fold_case(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::vector<std::vector<std::string>> read_token_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(split_ws(line));
  }
  return out;
}

}  // namespace mt
