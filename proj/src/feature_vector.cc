#include "mt/feature_vector.h"

#include <cmath>
#include <fstream>

#include "mt/types.h"

namespace mt {

std::string FeatureKey::render() const {
  std::string out = ns;
  for (const std::string& f : fields) {
    out += '|';
    out += f;
  }
  return out;
}

FeatureKey FeatureKey::parse(const std::string& s) {
  std::vector<std::string> parts = split_on(s, '|');
  if (parts.empty() || parts[0].empty())
    throw DataError("bad feature key: " + s);
  FeatureKey k;
  k.ns = parts[0];
  k.fields.assign(parts.begin() + 1, parts.end());
  return k;
}

double fv_dot(const Weights& w, const FeatureVector& v) {
  double sum = 0.0;
  for (const auto& [k, c] : v) sum += w.get(k) * c;
  return sum;
}

FeatureVector fv_add(const FeatureVector& a, const FeatureVector& b) {
  FeatureVector out = a;
  for (const auto& [k, c] : b) fv_inc(out, k, c);
  return out;
}

FeatureVector fv_sub(const FeatureVector& a, const FeatureVector& b) {
  FeatureVector out = a;
  for (const auto& [k, c] : b) fv_inc(out, k, -c);
  return out;
}

FeatureVector fv_scale(const FeatureVector& a, double c) {
  FeatureVector out;
  for (const auto& [k, v] : a)
    if (v * c != 0.0) out[k] = v * c;
  return out;
}

void fv_inc(FeatureVector& v, const std::string& key, double by) {
  auto it = v.find(key);
  if (it == v.end()) {
    if (by != 0.0) v[key] = by;
    return;
  }
  it->second += by;
  if (it->second == 0.0) v.erase(it);
}

Weights read_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open weights file: " + path);
  Weights w;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError("weights line " + std::to_string(lineno) + ": no tab");
    double val;
    try {
      val = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw DataError("weights line " + std::to_string(lineno) + ": bad value");
    }
    if (!std::isfinite(val))
      throw DataError("weights line " + std::to_string(lineno) + ": non-finite");
    w.w[line.substr(0, tab)] = val;
  }
  return w;
}

void write_weights(const Weights& w, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write weights file: " + path);
  out.precision(17);
  for (const auto& [k, v] : w.w) out << k << '\t' << v << '\n';
}

}  // namespace mt
