#include "mt/pro.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <thread>

namespace mt {

namespace {

struct Instance {
  std::vector<std::pair<int, double>> x;  // (feature index, value)
  int y;                                  // +1 / -1
};

// L2-regularized logistic ranking objective, gradient descent with
// Armijo backtracking. Convex; runs until the gradient norm is small.
std::vector<double> fit_logistic(const std::vector<Instance>& data, int dim,
                                 double lambda) {
  std::vector<double> w(dim, 0.0);
  auto eval = [&](const std::vector<double>& wv, std::vector<double>* grad) {
    double f = 0.0;
    if (grad) grad->assign(dim, 0.0);
    for (const Instance& inst : data) {
      double m = 0.0;
      for (const auto& [k, v] : inst.x) m += wv[k] * v;
      m *= inst.y;
      // log(1 + exp(-m)), numerically stable
      f += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
      if (grad) {
        double sig = m > 0 ? std::exp(-m) / (1.0 + std::exp(-m))
                           : 1.0 / (1.0 + std::exp(m));
        for (const auto& [k, v] : inst.x) (*grad)[k] -= sig * inst.y * v;
      }
    }
    for (int k = 0; k < dim; ++k) {
      f += 0.5 * lambda * wv[k] * wv[k];
      if (grad) (*grad)[k] += lambda * wv[k];
    }
    return f;
  };

  std::vector<double> g(dim), trial(dim);
  double step = 1.0;
  double f = eval(w, &g);
  for (int iter = 0; iter < 20000; ++iter) {
    double gnorm2 = 0.0;
    for (double gk : g) gnorm2 += gk * gk;
    if (std::sqrt(gnorm2) <= 1e-5) break;
    double s = std::min(step * 2.0, 1e3);
    double ft;
    while (true) {
      for (int k = 0; k < dim; ++k) trial[k] = w[k] - s * g[k];
      ft = eval(trial, nullptr);
      if (ft <= f - 1e-4 * s * gnorm2 || s < 1e-12) break;
      s *= 0.5;
    }
    if (s < 1e-12) break;
    w.swap(trial);
    f = eval(w, &g);
    step = s;
  }
  return w;
}

}  // namespace

Weights pro_iteration(const NBestPool& pool, const std::vector<RefSet>& refs,
                      const Weights& w_old, const ProConfig& cfg,
                      bool* updated) {
  if (pool.size() != refs.size())
    throw std::invalid_argument("pool/reference size mismatch");

  std::vector<std::string> keys;
  std::map<std::string, int> key_index;
  auto index_of = [&](const std::string& k) {
    auto [it, ins] = key_index.try_emplace(k, static_cast<int>(keys.size()));
    if (ins) keys.push_back(k);
    return it->second;
  };

  std::vector<Instance> data;
  for (size_t s = 0; s < pool.size(); ++s) {
    const std::vector<Candidate>& cands = pool[s];
    if (cands.size() < 2) continue;
    std::vector<double> bleus(cands.size());
    for (size_t i = 0; i < cands.size(); ++i)
      bleus[i] = bleu_sentence_plus1(cands[i].tokens, refs[s]);

    std::mt19937_64 rng(cfg.seed + 1000003ull * (s + 1));
    std::uniform_int_distribution<size_t> pick(0, cands.size() - 1);
    struct Pair {
      double gap;
      size_t i, j;
    };
    std::vector<Pair> kept;
    for (int g = 0; g < cfg.pairs_sampled; ++g) {
      size_t i = pick(rng), j = pick(rng);
      double gap = std::abs(bleus[i] - bleus[j]);
      if (gap > cfg.min_gap) kept.push_back({gap, i, j});
    }
    std::stable_sort(kept.begin(), kept.end(), [](const Pair& a, const Pair& b) {
      return a.gap > b.gap ||
             (a.gap == b.gap && std::pair(a.i, a.j) < std::pair(b.i, b.j));
    });
    if (static_cast<int>(kept.size()) > cfg.pairs_kept)
      kept.resize(cfg.pairs_kept);

    for (const Pair& pr : kept) {
      int y = bleus[pr.i] > bleus[pr.j] ? 1 : -1;
      FeatureVector diff = fv_sub(cands[pr.i].fv, cands[pr.j].fv);
      Instance a, b;
      for (const auto& [k, v] : diff) {
        int idx = index_of(k);
        a.x.emplace_back(idx, v);
        b.x.emplace_back(idx, -v);
      }
      a.y = y;
      b.y = -y;
      data.push_back(std::move(a));
      data.push_back(std::move(b));
    }
  }

  if (data.empty()) {
    std::cerr << "pro: no candidate pair exceeds the BLEU gap threshold; "
                 "weights unchanged\n";
    if (updated) *updated = false;
    return w_old;
  }
  if (updated) *updated = true;

  std::vector<double> w_new = fit_logistic(data, static_cast<int>(keys.size()),
                                           cfg.regularization);
  double psi = cfg.interpolation;
  Weights out;
  for (const auto& [k, v] : w_old.w) out.w[k] = (1.0 - psi) * v;
  for (size_t k = 0; k < keys.size(); ++k) {
    out.w[keys[k]] += psi * w_new[k];
    if (out.w[keys[k]] == 0.0) out.w.erase(keys[k]);
  }
  return out;
}

TuneResult tune_loop(int n_sents, const DecodeNBestFn& decode_nbest,
                     const std::vector<RefSet>& refs, Weights init,
                     const ProConfig& cfg, int iterations) {
  TuneResult res;
  res.weights = std::move(init);
  std::vector<std::map<std::string, Candidate>> pool(n_sents);

  for (int it = 0; it < iterations; ++it) {
    std::vector<TokenSeq> onebest(n_sents);
    for (int s = 0; s < n_sents; ++s) {
      std::vector<Candidate> cands = decode_nbest(s, res.weights);
      if (cands.empty())
        throw DecodeError("tuning: empty n-best for sentence " +
                          std::to_string(s));
      onebest[s] = cands[0].tokens;
      for (Candidate& c : cands) {
        std::string key = join(c.tokens, " ");
        pool[s].try_emplace(std::move(key), std::move(c));
      }
    }
    res.bleu_trace.push_back(bleu_corpus(onebest, refs));

    NBestPool pooled(n_sents);
    for (int s = 0; s < n_sents; ++s)
      for (const auto& [k, c] : pool[s]) pooled[s].push_back(c);
    res.weights = pro_iteration(pooled, refs, res.weights, cfg);
    res.weight_trace.push_back(res.weights);
  }
  return res;
}

TuneResult tune(const std::vector<SourceSentence>& dev,
                const std::vector<RefSet>& refs, const Models& models,
                const DecoderConfig& dcfg, const ProConfig& pcfg,
                int iterations, int jobs) {
  // Per-iteration weights live in a models copy; sentences may decode in
  // parallel against it.
  Models work = models;
  Weights current = models.weights;
  std::vector<std::vector<Candidate>> batch(dev.size());

  auto decode_all = [&](const Weights& w) {
    work.weights = w;
    std::atomic<size_t> next{0};
    std::mutex err_mutex;
    std::string error;
    auto worker = [&]() {
      while (true) {
        size_t s = next.fetch_add(1);
        if (s >= dev.size()) break;
        try {
          DecodeResult r = decode(dev[s], work, dcfg);
          batch[s] = nbest(r, dcfg.nbest_size);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (error.empty())
            error = "sentence " + std::to_string(s) + ": " + e.what();
        }
      }
    };
    if (jobs <= 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
      for (auto& th : threads) th.join();
    }
    if (!error.empty()) throw DecodeError(error);
  };

  DecodeNBestFn fn = [&](int s, const Weights& w) {
    if (s == 0) decode_all(w);
    return batch[s];
  };
  return tune_loop(static_cast<int>(dev.size()), fn, refs, current, pcfg,
                   iterations);
}

}  // namespace mt
