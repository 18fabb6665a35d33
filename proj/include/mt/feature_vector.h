#pragma once

#include <map>
#include <string>
#include <vector>

namespace mt {

// A feature identity: namespace plus template fields. The canonical
// rendering `ns|f1|f2|...` is injective as long as fields contain no '|',
// which holds for dependency labels, POS tags and the fixed tag sets.
struct FeatureKey {
  std::string ns;  // ds_hc, ds_sib, shr, path, dense
  std::vector<std::string> fields;
  std::string render() const;
  static FeatureKey parse(const std::string& s);
  bool operator==(const FeatureKey&) const = default;
};

// Sparse feature counts keyed by canonically rendered strings.
// Zero entries are never stored; std::map keeps output deterministic.
using FeatureVector = std::map<std::string, double>;

struct Weights {
  std::map<std::string, double> w;
  double get(const std::string& k) const {
    auto it = w.find(k);
    return it == w.end() ? 0.0 : it->second;
  }
  void set(const std::string& k, double v) { w[k] = v; }
};

double fv_dot(const Weights& w, const FeatureVector& v);
FeatureVector fv_add(const FeatureVector& a, const FeatureVector& b);
FeatureVector fv_sub(const FeatureVector& a, const FeatureVector& b);
FeatureVector fv_scale(const FeatureVector& a, double c);
void fv_inc(FeatureVector& v, const std::string& key, double by);

// Weights file: one `featurekey<TAB>value` per line, UTF-8.
Weights read_weights(const std::string& path);
void write_weights(const Weights& w, const std::string& path);

}  // namespace mt
