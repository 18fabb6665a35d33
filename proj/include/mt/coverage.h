#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <vector>

#include "mt/types.h"

namespace mt {

// Bit vector over source positions 1..n; bit set = word translated.
class Coverage {
 public:
  Coverage() = default;
  explicit Coverage(int n) : n_(n), bits_((n + 63) / 64, 0) {}

  int size() const { return n_; }
  bool test(int pos) const {
    return (bits_[(pos - 1) >> 6] >> ((pos - 1) & 63)) & 1;
  }
  void set(int pos) { bits_[(pos - 1) >> 6] |= uint64_t{1} << ((pos - 1) & 63); }
  void set(Span s) {
    for (int p = s.begin; p <= s.end; ++p) set(p);
  }
  int count() const {
    int c = 0;
    for (uint64_t b : bits_) c += std::popcount(b);
    return c;
  }
  bool full() const { return count() == n_; }
  bool covers(Span s) const {
    for (int p = s.begin; p <= s.end; ++p)
      if (!test(p)) return false;
    return true;
  }
  bool disjoint(Span s) const {
    for (int p = s.begin; p <= s.end; ++p)
      if (test(p)) return false;
    return true;
  }
  std::vector<Span> uncovered_runs() const {
    std::vector<Span> runs;
    int start = 0;
    for (int p = 1; p <= n_ + 1; ++p) {
      bool cov = p > n_ || test(p);
      if (!cov && start == 0) start = p;
      if (cov && start != 0) {
        runs.push_back({start, p - 1});
        start = 0;
      }
    }
    return runs;
  }

  bool operator==(const Coverage&) const = default;
  auto operator<=>(const Coverage&) const = default;

 private:
  int n_ = 0;
  std::vector<uint64_t> bits_;
};

}  // namespace mt
