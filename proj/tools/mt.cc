#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "mt/bleu.h"
#include "mt/decoder.h"
#include "mt/lm.h"
#include "mt/pro.h"
#include "mt/training.h"

namespace fs = std::filesystem;
using namespace mt;

namespace {

// key=value config file; CLI flags take precedence over config entries.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  std::map<std::string, std::string> cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError("config line " + std::to_string(lineno) + ": no '='");
    cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return cfg;
}

struct DecodeOptions {
  std::string input, config, table, lm, weights, pblr, hr, top_words;
  std::string features;
  std::string nbest_out, dump_features;
  int beam = 100;
  int distortion_limit = 14;
  int nbest = 100;
  int max_phrase_len = 7;
  int path_max_len = 4;
  int table_limit = 20;
  bool mbr = false;
  double mbr_scale = 1.0;
  bool no_pblr = false, no_hr = false;
  bool no_passthrough = false;
  int jobs = 1;
  uint64_t seed = 1;
};

void add_model_options(CLI::App* cmd, DecodeOptions& o) {
  cmd->add_option("--config", o.config, "key=value config file");
  cmd->add_option("--table", o.table, "phrase table file");
  cmd->add_option("--lm", o.lm, "language model file");
  cmd->add_option("--weights", o.weights, "weights file");
  cmd->add_option("--pblr", o.pblr, "lexicalized reordering table");
  cmd->add_option("--hr", o.hr, "hierarchical reordering table");
  cmd->add_option("--top-words", o.top_words, "frequent source word list");
  cmd->add_option("--features", o.features,
                  "comma list of sparse features: ds,ddp,shr,path");
  cmd->add_option("--beam", o.beam, "stack size");
  cmd->add_option("--distortion-limit", o.distortion_limit, "distortion limit");
  cmd->add_option("--nbest", o.nbest, "n-best list size");
  cmd->add_option("--max-phrase-len", o.max_phrase_len, "max phrase length");
  cmd->add_option("--path-max-len", o.path_max_len,
                  "path feature edge cap before the `long` bucket");
  cmd->add_option("--table-limit", o.table_limit, "options kept per source phrase");
  cmd->add_flag("--mbr", o.mbr, "rerank the n-best list by expected BLEU+1");
  cmd->add_option("--mbr-scale", o.mbr_scale, "posterior scale for MBR");
  cmd->add_flag("--no-pblr", o.no_pblr, "disable the dense PBLR feature");
  cmd->add_flag("--no-hr", o.no_hr, "disable the dense HR feature");
  cmd->add_flag("--no-passthrough", o.no_passthrough,
                "fail on untranslatable words instead of copying them");
  cmd->add_option("--jobs", o.jobs, "decode sentences in parallel");
  cmd->add_option("--seed", o.seed, "random seed");
}

// Apply config entries for options the user did not pass on the CLI.
void merge_config(CLI::App* cmd, DecodeOptions& o) {
  if (o.config.empty()) return;
  auto cfg = read_config(o.config);
  auto take_str = [&](const char* key, const char* flag, std::string& dst) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return;
    if (cmd->count(flag) == 0) dst = it->second;
    cfg.erase(it);
  };
  auto take_int = [&](const char* key, const char* flag, int& dst) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return;
    if (cmd->count(flag) == 0) dst = std::stoi(it->second);
    cfg.erase(it);
  };
  auto take_dbl = [&](const char* key, const char* flag, double& dst) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return;
    if (cmd->count(flag) == 0) dst = std::stod(it->second);
    cfg.erase(it);
  };
  auto take_bool = [&](const char* key, const char* flag, bool& dst) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return;
    if (cmd->count(flag) == 0) dst = it->second == "1" || it->second == "true";
    cfg.erase(it);
  };
  take_str("table", "--table", o.table);
  take_str("lm", "--lm", o.lm);
  take_str("weights", "--weights", o.weights);
  take_str("pblr", "--pblr", o.pblr);
  take_str("hr", "--hr", o.hr);
  take_str("top_words", "--top-words", o.top_words);
  take_str("features", "--features", o.features);
  take_int("beam", "--beam", o.beam);
  take_int("distortion_limit", "--distortion-limit", o.distortion_limit);
  take_int("nbest", "--nbest", o.nbest);
  take_int("max_phrase_len", "--max-phrase-len", o.max_phrase_len);
  take_int("path_max_len", "--path-max-len", o.path_max_len);
  take_int("table_limit", "--table-limit", o.table_limit);
  take_bool("mbr", "--mbr", o.mbr);
  take_dbl("mbr_scale", "--mbr-scale", o.mbr_scale);
  take_bool("no_pblr", "--no-pblr", o.no_pblr);
  take_bool("no_hr", "--no-hr", o.no_hr);
  take_bool("no_passthrough", "--no-passthrough", o.no_passthrough);
  take_int("jobs", "--jobs", o.jobs);
  if (auto it = cfg.find("seed"); it != cfg.end()) {
    if (cmd->count("--seed") == 0) o.seed = std::stoull(it->second);
    cfg.erase(it);
  }
  if (!cfg.empty())
    throw DataError("unknown config key: " + cfg.begin()->first);
}

DecoderConfig make_decoder_config(const DecodeOptions& o) {
  DecoderConfig cfg;
  cfg.beam_size = o.beam;
  cfg.distortion_limit = o.distortion_limit;
  cfg.nbest_size = o.nbest;
  cfg.mbr = o.mbr;
  cfg.mbr_scale = o.mbr_scale;
  cfg.max_phrase_len = o.max_phrase_len;
  cfg.path_max_len = o.path_max_len;
  cfg.passthrough = !o.no_passthrough;
  cfg.flags.pblr = !o.no_pblr;
  cfg.flags.hr = !o.no_hr;
  for (const std::string& f : split_on(o.features, ',')) {
    if (f.empty()) continue;
    if (f == "ds") cfg.flags.ds = true;
    else if (f == "ddp") cfg.flags.ddp = true;
    else if (f == "shr") cfg.flags.shr = true;
    else if (f == "path") cfg.flags.path = true;
    else if (f == "pblr") cfg.flags.pblr = true;
    else if (f == "hr") cfg.flags.hr = true;
    else throw DataError("unknown feature: " + f);
  }
  return cfg;
}

Models load_models(const DecodeOptions& o) {
  for (const std::string& p : {o.table, o.lm}) {
    if (p.empty()) throw DataError("--table and --lm are required");
    if (!fs::exists(p)) throw DataError("missing model file: " + p);
  }
  Models m;
  m.table = read_phrase_table(o.table, o.table_limit);
  m.lm = NGramLM::load(o.lm);
  if (!o.pblr.empty()) m.pblr = read_reordering_table(o.pblr);
  if (!o.hr.empty()) m.hr = read_reordering_table(o.hr);
  if (!o.top_words.empty())
    for (const auto& toks : read_token_lines(o.top_words))
      if (!toks.empty()) m.top_words.insert(toks[0]);
  m.weights = o.weights.empty() ? default_weights() : read_weights(o.weights);
  return m;
}

std::vector<RefSet> load_refs(const std::vector<std::string>& paths,
                              size_t n_sents) {
  std::vector<std::vector<TokenSeq>> files;
  for (const std::string& p : paths) {
    files.push_back(read_token_lines(p));
    if (files.back().size() != n_sents)
      throw DataError("reference file " + p + " has " +
                      std::to_string(files.back().size()) + " lines, expected " +
                      std::to_string(n_sents));
  }
  std::vector<RefSet> refs(n_sents);
  for (size_t s = 0; s < n_sents; ++s)
    for (const auto& f : files) refs[s].push_back(f[s]);
  return refs;
}

int cmd_train(const std::string& src, const std::string& tgt,
              const std::string& align, const std::string& outdir, int max_len,
              int table_limit, int top_k) {
  auto corpus = read_bitext(src, tgt, align);
  fs::create_directories(outdir);

  PhraseTable table = score_phrases(corpus, max_len, table_limit);
  write_phrase_table(table, outdir + "/phrase_table.txt");
  ReorderingTables reo = estimate_reordering(corpus, max_len);
  write_reordering_table(reo.pblr, outdir + "/pblr.table");
  write_reordering_table(reo.hr, outdir + "/hr.table");
  std::vector<std::string> top = build_top_words(corpus, top_k);
  {
    std::ofstream out(outdir + "/top_words.txt");
    for (const std::string& w : top) out << w << '\n';
  }
  size_t n_pairs = 0;
  for (const auto& [k, v] : table.entries) n_pairs += v.size();
  std::cout << "sentences: " << corpus.size() << '\n'
            << "phrase pairs: " << n_pairs << '\n'
            << "reordering rows: " << reo.pblr.rows.size() << '\n'
            << "top words: " << top.size() << '\n';
  return 0;
}

int cmd_decode(const DecodeOptions& o) {
  if (o.input.empty()) throw DataError("--input is required");
  std::vector<SourceSentence> sents = read_conll_file(o.input);
  Models models = load_models(o);
  DecoderConfig cfg = make_decoder_config(o);

  struct SentOut {
    std::string translation;
    std::vector<Candidate> nb;
    std::vector<std::pair<int, FeatureVector>> steps;  // (step, sparse fv)
    bool failed = false;
    std::string error;
  };
  std::vector<SentOut> outs(sents.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t s = next.fetch_add(1);
      if (s >= sents.size()) break;
      SentOut& so = outs[s];
      try {
        DecodeResult r = decode(sents[s], models, cfg);
        so.nb = nbest(r, cfg.nbest_size);
        int pick = 0;
        if (cfg.mbr && !so.nb.empty()) pick = mbr_select(so.nb, cfg.mbr_scale);
        so.translation = join(so.nb[pick].tokens, " ");
        int step = 0;
        for (const DerivationStep& st : r.best.steps) {
          ++step;
          FeatureVector sparse;
          for (const auto& [k, v] : st.fv)
            if (k.rfind("dense|", 0) != 0) sparse[k] = v;
          so.steps.emplace_back(step, std::move(sparse));
        }
      } catch (const std::exception& e) {
        so.failed = true;
        so.error = e.what();
      }
    }
  };
  if (o.jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < o.jobs; ++t) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }

  std::ofstream nbest_out, dump_out;
  if (!o.nbest_out.empty()) nbest_out.open(o.nbest_out);
  if (!o.dump_features.empty()) dump_out.open(o.dump_features);

  bool any_failed = false;
  for (size_t s = 0; s < sents.size(); ++s) {
    const SentOut& so = outs[s];
    if (so.failed) {
      any_failed = true;
      std::cout << "DECODE-FAILED\n";
      std::cerr << "sentence " << s << ": " << so.error << '\n';
      continue;
    }
    std::cout << so.translation << '\n';
    if (nbest_out.is_open()) {
      nbest_out << std::setprecision(10);
      for (const Candidate& c : so.nb) {
        nbest_out << s << " ||| " << join(c.tokens, " ") << " |||";
        for (const auto& [k, v] : c.fv) nbest_out << ' ' << k << '=' << v;
        nbest_out << " ||| " << c.score << '\n';
      }
    }
    if (dump_out.is_open())
      for (const auto& [step, fv] : so.steps)
        for (const auto& [k, v] : fv)
          dump_out << s << '\t' << step << '\t' << k << '\n';
  }
  return any_failed ? 3 : 0;
}

int cmd_tune(const DecodeOptions& o, const std::vector<std::string>& ref_paths,
             int iterations, const std::string& out_prefix,
             const ProConfig& pcfg_in) {
  if (o.input.empty()) throw DataError("--input is required");
  if (ref_paths.empty()) throw DataError("at least one --refs file is required");
  std::vector<SourceSentence> dev = read_conll_file(o.input);
  std::vector<RefSet> refs = load_refs(ref_paths, dev.size());
  Models models = load_models(o);
  DecoderConfig cfg = make_decoder_config(o);
  ProConfig pcfg = pcfg_in;
  pcfg.seed = o.seed;

  TuneResult res = tune(dev, refs, models, cfg, pcfg, iterations, o.jobs);
  write_weights(res.weights, out_prefix);
  for (size_t it = 0; it < res.weight_trace.size(); ++it)
    write_weights(res.weight_trace[it],
                  out_prefix + ".iter" + std::to_string(it + 1));
  {
    std::ofstream trace(out_prefix + ".trace.csv");
    trace << "iter,bleu\n";
    trace << std::setprecision(10);
    for (size_t it = 0; it < res.bleu_trace.size(); ++it)
      trace << (it + 1) << ',' << res.bleu_trace[it] << '\n';
  }
  for (size_t it = 0; it < res.bleu_trace.size(); ++it)
    std::cout << "iter " << (it + 1) << " dev BLEU "
              << std::setprecision(6) << res.bleu_trace[it] << '\n';
  return 0;
}

int cmd_evaluate(const std::string& hyp_path,
                 const std::vector<std::string>& ref_paths,
                 const std::string& other_path, int resamples, uint64_t seed) {
  auto hyps = read_token_lines(hyp_path);
  std::vector<RefSet> refs = load_refs(ref_paths, hyps.size());
  double bleu = bleu_corpus(hyps, refs);
  std::cout << "BLEU = " << std::fixed << std::setprecision(4) << bleu << '\n';
  if (!other_path.empty()) {
    auto other = read_token_lines(other_path);
    if (other.size() != hyps.size())
      throw DataError("system outputs have different sentence counts");
    double other_bleu = bleu_corpus(other, refs);
    std::cout << "BLEU(other) = " << std::setprecision(4) << other_bleu << '\n';
    auto [p_ab, p_ba] =
        bootstrap_significance(hyps, other, refs, resamples, seed);
    std::cout << "p(hyp <= other) = " << std::setprecision(4) << p_ab << '\n';
    std::cout << "p(other <= hyp) = " << std::setprecision(4) << p_ba << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phrase-based statistical MT toolkit"};
  app.require_subcommand(1);

  // train
  std::string tr_src, tr_tgt, tr_align, tr_out;
  int tr_max_len = 7, tr_limit = 20, tr_topk = 80;
  CLI::App* train_cmd = app.add_subcommand("train", "estimate models");
  train_cmd->add_option("--src", tr_src, "source side")->required();
  train_cmd->add_option("--tgt", tr_tgt, "target side")->required();
  train_cmd->add_option("--align", tr_align, "word alignment")->required();
  train_cmd->add_option("--out", tr_out, "output directory")->required();
  train_cmd->add_option("--max-phrase-len", tr_max_len, "max phrase length");
  train_cmd->add_option("--table-limit", tr_limit, "options per source phrase");
  train_cmd->add_option("--top-words", tr_topk, "frequent word list size");

  // lm-train
  std::string lm_text, lm_out;
  int lm_order = 3;
  CLI::App* lm_cmd = app.add_subcommand("lm-train", "train a backoff LM");
  lm_cmd->add_option("--text", lm_text, "training text")->required();
  lm_cmd->add_option("--order", lm_order, "n-gram order");
  lm_cmd->add_option("--out", lm_out, "output LM file")->required();

  // decode
  DecodeOptions dopt;
  CLI::App* dec_cmd = app.add_subcommand("decode", "translate parsed input");
  dec_cmd->add_option("--input", dopt.input, "CoNLL-like parse file");
  dec_cmd->add_option("--nbest-out", dopt.nbest_out, "n-best output file");
  dec_cmd->add_option("--dump-features", dopt.dump_features,
                      "per-extension sparse feature dump");
  add_model_options(dec_cmd, dopt);

  // tune
  DecodeOptions topt;
  std::vector<std::string> tune_refs;
  std::string tune_out = "weights.tuned";
  int tune_iters = 15;
  ProConfig pcfg;
  CLI::App* tune_cmd = app.add_subcommand("tune", "PRO weight tuning");
  tune_cmd->add_option("--input", topt.input, "dev parse file");
  tune_cmd->add_option("--refs", tune_refs, "dev reference files");
  tune_cmd->add_option("--out", tune_out, "output weights file");
  tune_cmd->add_option("--iterations", tune_iters, "tuning iterations");
  tune_cmd->add_option("--pairs-sampled", pcfg.pairs_sampled, "PRO Gamma");
  tune_cmd->add_option("--pairs-kept", pcfg.pairs_kept, "PRO Xi");
  tune_cmd->add_option("--min-gap", pcfg.min_gap, "PRO gap threshold");
  tune_cmd->add_option("--interpolation", pcfg.interpolation, "PRO Psi");
  tune_cmd->add_option("--regularization", pcfg.regularization, "L2 lambda");
  add_model_options(tune_cmd, topt);

  // evaluate
  std::string ev_hyp, ev_other;
  std::vector<std::string> ev_refs;
  int ev_resamples = 1000;
  uint64_t ev_seed = 1;
  CLI::App* ev_cmd = app.add_subcommand("evaluate", "corpus BLEU + bootstrap");
  ev_cmd->add_option("--hyp", ev_hyp, "hypothesis file")->required();
  ev_cmd->add_option("--refs", ev_refs, "reference files")->required();
  ev_cmd->add_option("--significance", ev_other, "second system to compare");
  ev_cmd->add_option("--resamples", ev_resamples, "bootstrap resamples");
  ev_cmd->add_option("--seed", ev_seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd)
      return cmd_train(tr_src, tr_tgt, tr_align, tr_out, tr_max_len, tr_limit,
                       tr_topk);
    if (*lm_cmd) {
      auto lines = read_token_lines(lm_text);
      NGramLM lm = NGramLM::train(lines, lm_order);
      lm.save(lm_out);
      std::cout << "order " << lm_order << " LM over " << lines.size()
                << " sentences\n";
      return 0;
    }
    if (*dec_cmd) {
      merge_config(dec_cmd, dopt);
      return cmd_decode(dopt);
    }
    if (*tune_cmd) {
      merge_config(tune_cmd, topt);
      return cmd_tune(topt, tune_refs, tune_iters, tune_out, pcfg);
    }
    if (*ev_cmd)
      return cmd_evaluate(ev_hyp, ev_refs, ev_other, ev_resamples, ev_seed);
  } catch (const DecodeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
