// Acceptance gate: runs each criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpcomp/corpcomp.hpp"
#include "corpcomp_cli.hpp"
#include "oracle.hpp"

using namespace corpcomp;
namespace fs = std::filesystem;
using Tokens = std::vector<std::string>;

namespace {

const std::vector<Variant> kVariants = {Variant::minimum, Variant::average, Variant::directed_ab,
                                        Variant::directed_ba, Variant::symmetric_common};

MetricConfig config(Variant v, std::size_t n = kDefaultTopN,
                    MissingWordPolicy m = MissingWordPolicy::top_n_lookup) {
  MetricConfig c;
  c.variant = v;
  c.n = n;
  c.missing = m;
  return c;
}

std::vector<MetricConfig> all_variants() {
  std::vector<MetricConfig> out;
  for (auto v : kVariants) out.push_back(config(v));
  return out;
}

FrequencyList profile(const Tokens& t, std::string id = "c") {
  return build_frequency_list(Corpus{std::move(id), "xx", t});
}

std::vector<ParallelDocument> documents(const synth::SynthConfig& cfg) {
  std::vector<ParallelDocument> docs;
  for (auto& s : synth::generate_collection(cfg)) docs.push_back(std::move(s.document));
  return docs;
}

// Collects failures for one criterion; detail lines go to stdout indented.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 10) failures.push_back(what);
    if (!ok && failures.size() == 10) failures.push_back("(further failures suppressed)");
  }
  void note(std::string s) { notes.push_back(std::move(s)); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// Random corpus over a vocabulary of varying size, with varying length.
Tokens random_corpus(std::mt19937_64& rng) {
  const std::size_t vocab = 1 + rng() % 2000;
  const std::size_t length = 1 + rng() % 20000;
  const double s = 0.5 + static_cast<double>(rng() % 100) / 100.0;
  std::vector<double> w(vocab);
  for (std::size_t i = 0; i < vocab; ++i) w[i] = 1.0 / std::pow(static_cast<double>(i + 1), s);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  const auto offset = rng() % 500;
  Tokens out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.push_back("w" + std::to_string(offset + pick(rng)));
  return out;
}

void criterion1(Check& c) {
  std::mt19937_64 rng(1001);
  std::vector<FrequencyList> corpora;
  for (int i = 0; i < 50; ++i) corpora.push_back(profile(random_corpus(rng), "c" + std::to_string(i)));
  for (const auto& a : corpora) {
    for (auto v : kVariants) {
      for (std::size_t n : {1u, 10u, 500u}) {
        c.expect(distance(a, a, config(v, n)) == 0.0, "d(A, A) != 0 for " + a.corpus_id());
      }
    }
  }
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < corpora.size(); ++i) {
    for (std::size_t j = 0; j < corpora.size(); ++j) {
      if (i == j) continue;
      const auto p = distance_pair(corpora[i], corpora[j], config(Variant::minimum));
      const double mn = combine(p, config(Variant::minimum));
      const double av = combine(p, config(Variant::average));
      const double sym = chi2_symmetric_common(corpora[i], corpora[j], config(Variant::symmetric_common)).score;
      c.expect(p.d_ab >= 0.0 && p.d_ba >= 0.0 && sym >= 0.0, "negative distance");
      c.expect(std::isfinite(p.d_ab) && std::isfinite(p.d_ba) && std::isfinite(sym), "non-finite distance");
      c.expect(mn <= av && av <= std::max(p.d_ab, p.d_ba), "min <= avg <= max violated");
      ++pairs;
    }
  }
  c.note(std::to_string(corpora.size()) + " corpora, " + std::to_string(pairs) + " ordered pairs");
}

// All multisets of size 1..max_len over the first `vocab` letters, as
// token sequences in sorted order.
std::vector<Tokens> all_multisets(std::size_t vocab, std::size_t max_len) {
  static const char* letters[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::vector<Tokens> out;
  std::function<void(std::size_t, std::size_t, Tokens&)> rec = [&](std::size_t next, std::size_t left, Tokens& cur) {
    if (!cur.empty()) out.push_back(cur);
    if (left == 0) return;
    for (std::size_t k = next; k < vocab; ++k) {
      cur.push_back(letters[k]);
      rec(k, left - 1, cur);
      cur.pop_back();
    }
  };
  Tokens cur;
  rec(0, max_len, cur);
  return out;
}

void compare_with_oracle(Check& c, const Tokens& ta, const Tokens& tb, std::size_t n, std::size_t& count) {
  const auto a = profile(ta, "A"), b = profile(tb, "B");
  for (bool topn : {true, false}) {
    const auto cfg = config(Variant::minimum, n,
                            topn ? MissingWordPolicy::top_n_lookup : MissingWordPolicy::full_list_lookup);
    const auto p = distance_pair(a, b, cfg);
    const auto ab = oracle::directed(ta, tb, n, topn);
    const auto ba = oracle::directed(tb, ta, n, topn);
    c.expect(std::abs(p.d_ab - ab.score) <= 1e-12 && std::abs(p.d_ba - ba.score) <= 1e-12,
             "directed score differs from oracle");
    c.expect(p.n_missing_ab == ab.missing && p.n_missing_ba == ba.missing, "missing count differs from oracle");
  }
  const double sym = chi2_symmetric_common(a, b, config(Variant::symmetric_common, n)).score;
  c.expect(std::abs(sym - oracle::symmetric(ta, tb, n)) <= 1e-12, "symmetric score differs from oracle");
  ++count;
}

void criterion2(Check& c) {
  std::size_t count = 0;
  // Exhaustive: every pair of multisets of size <= 5 over 5 tokens.
  const auto small = all_multisets(5, 5);
  for (const auto& ta : small) {
    for (const auto& tb : small) {
      for (std::size_t n = 1; n <= 3; ++n) compare_with_oracle(c, ta, tb, n, count);
    }
  }
  const auto exhaustive = count;
  // Seeded sweep over the full bounds: vocabulary <= 8, length <= 12, n <= 3,
  // token order shuffled.
  std::mt19937_64 rng(2002);
  for (int i = 0; i < 200000; ++i) {
    const auto ta = oracle::random_tokens(rng, 1 + rng() % 8, 1 + rng() % 12);
    const auto tb = oracle::random_tokens(rng, 1 + rng() % 8, 1 + rng() % 12);
    compare_with_oracle(c, ta, tb, 1 + rng() % 3, count);
  }
  c.note(std::to_string(exhaustive) + " exhaustive + " + std::to_string(count - exhaustive) +
         " sampled instances, both lookup policies and the symmetric variant");
}

void criterion3(Check& c) {
  std::mt19937_64 rng(3003);
  int checked = 0, drawn = 0;
  while (checked < 1000) {
    ++drawn;
    const auto ta = random_corpus(rng);
    const auto tb = random_corpus(rng);
    const std::size_t n = 1 + rng() % 600;
    const auto a = profile(ta), b = profile(tb);
    if (a.vocabulary_size() < n || b.vocabulary_size() < n) continue;
    const auto p = distance_pair(a, b, config(Variant::minimum, n));
    c.expect(p.n_missing_ab == p.n_missing_ba,
             "n_missing " + std::to_string(p.n_missing_ab) + " vs " + std::to_string(p.n_missing_ba));
    ++checked;
  }
  c.note(std::to_string(checked) + " qualifying instances out of " + std::to_string(drawn) + " drawn");
}

void criterion4(Check& c) {
  std::mt19937_64 rng(4004);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> xs(2 + rng() % 50);
    for (auto& x : xs) x = u(rng);
    c.expect(std::abs(pearson_r(xs, xs) - 1.0) <= 1e-12, "r(x, x) != 1");
    double a = u(rng);
    if (a == 0.0) a = 1.0;
    const double b = u(rng);
    auto ys = xs;
    for (auto& y : ys) y = a * y + b;
    c.expect(std::abs(pearson_r(xs, ys) - (a > 0 ? 1.0 : -1.0)) <= 1e-9, "r(x, a x + b) != sign(a)");
  }
  c.expect(std::abs(pearson_r(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 1, 4, 3}) - 0.6) <= 1e-12,
           "hand case != 0.6");
  bool raised = false;
  try {
    pearson_r(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4});
  } catch (const UndefinedCorrelation&) {
    raised = true;
  }
  c.expect(raised, "constant input did not raise the undefined-correlation error");
}

void criterion5(Check& c) {
  for (std::uint64_t seed : {1u, 42u, 777u}) {
    synth::SynthConfig cfg;
    cfg.n_domains = 4;
    cfg.sections_per_domain = 3;
    cfg.noise_rate = 0.0;
    cfg.seed = seed;
    const auto report = metaeval_report(documents(cfg), "en", "fr", all_variants());
    for (const auto& r : report.results) {
      for (const auto& p : r.points) {
        c.expect(p.d_source == p.d_target, "seed " + std::to_string(seed) + " " + r.name + ": sides differ");
      }
      c.expect(r.r && std::abs(*r.r - 1.0) <= 1e-9, "seed " + std::to_string(seed) + " " + r.name + ": r != 1");
    }
  }
  c.note("seeds 1, 42, 777; 4 domains x 3 sections; all five variants");
}

void criterion6(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> rs;
  std::string line;
  for (double p : {0.0, 0.1, 0.3, 0.5}) {
    synth::SynthConfig cfg;
    cfg.n_domains = 4;
    cfg.sections_per_domain = 3;
    cfg.tokens_per_section = 20000;
    cfg.noise_rate = p;
    cfg.seed = 42;
    const auto report = metaeval_report(documents(cfg), "en", "fr", {config(Variant::minimum)});
    c.expect(report.results[0].r.has_value(), "undefined r");
    rs.push_back(report.results[0].r.value_or(NAN));
    line += fmt(" p=%.1f:", p) + fmt("%.4f", rs.back());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (std::size_t i = 1; i < rs.size(); ++i) c.expect(rs[i] <= rs[i - 1], "r(min) increased with p");
  c.expect(rs.back() < rs.front(), "r(0.5) not below r(0.0)");
  c.expect(secs < 30.0, "took " + fmt("%.1f s", secs));
  c.note("r(min)" + line + fmt(" (%.2f s)", secs));
}

void criterion7(Check& c) {
  for (std::uint64_t seed : {42u, 43u, 44u}) {
    synth::SynthConfig cfg;
    cfg.n_domains = 4;
    cfg.sections_per_domain = 3;
    cfg.tokens_per_section = 2000;
    cfg.tokens_per_section_max = 50000;
    cfg.noise_rate = 0.2;
    cfg.seed = seed;
    const auto report = metaeval_report(documents(cfg), "en", "fr", all_variants());
    const double mn = report.result("min").r.value_or(NAN);
    const double ab = report.result("ab").r.value_or(NAN);
    const double ba = report.result("ba").r.value_or(NAN);
    std::string line = "seed " + std::to_string(seed) + ":";
    for (const auto& name : report.ranking) line += " " + name + "=" + fmt("%.4f", *report.result(name).r);
    c.note(line);
    c.expect(mn >= ab, "seed " + std::to_string(seed) + ": r(min) " + fmt("%.4f", mn) + " < r(ab) " + fmt("%.4f", ab));
    c.expect(mn >= ba, "seed " + std::to_string(seed) + ": r(min) " + fmt("%.4f", mn) + " < r(ba) " + fmt("%.4f", ba));
  }
}

void criterion8(Check& c) {
  synth::SynthConfig cfg;
  cfg.n_domains = 4;
  cfg.sections_per_domain = 3;
  cfg.seed = 42;
  std::vector<Section> sections;
  std::map<std::string, std::string> domain_of;
  for (const auto& s : synth::generate_collection(cfg)) {
    sections.push_back({s.id, s.domain, extract_side(s.document, "en")});
    domain_of[s.id] = s.domain;
  }
  const auto m = pairwise_matrix(sections, config(Variant::minimum));
  const auto report = label_agreement(m, domain_of);
  c.expect(report.nn_accuracy == 1.0, "nearest-neighbor accuracy " + fmt("%.4f", report.nn_accuracy));
  c.expect(report.mean_cross && report.mean_within < *report.mean_cross, "within-domain mean not below cross");
  c.note("accuracy " + fmt("%.4f", report.nn_accuracy) + ", within " + fmt("%.4f", report.mean_within) +
         ", cross " + fmt("%.4f", report.mean_cross.value_or(NAN)));
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "corpcomp-accept-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::map<std::string, std::string> snapshot(const std::string& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = cli::read_file(e.path());
  return files;
}

int run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  return cli::run(std::move(args), out, err);
}

void criterion9(Check& c) {
  synth::SynthConfig cfg;
  cfg.n_domains = 4;
  cfg.sections_per_domain = 3;
  cfg.tokens_per_section = 5000;
  cfg.tokens_per_section_max = 15000;
  cfg.noise_rate = 0.2;
  std::vector<Section> once, tenfold;
  for (const auto& s : synth::generate_collection(cfg)) {
    auto corpus = extract_side(s.document, "en");
    Tokens big;
    for (int r = 0; r < 10; ++r) big.insert(big.end(), corpus.tokens.begin(), corpus.tokens.end());
    once.push_back({s.id, s.domain, corpus});
    corpus.tokens = std::move(big);
    tenfold.push_back({s.id, s.domain, std::move(corpus)});
  }
  std::size_t cells = 0;
  for (auto v : kVariants) {
    for (std::size_t n : {50u, 500u}) {
      const auto a = pairwise_matrix(once, config(v, n));
      const auto b = pairwise_matrix(tenfold, config(v, n));
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
          c.expect(a(i, j) == b(i, j), "cell changed after 10x duplication");
          ++cells;
        }
      }
    }
  }

  TempDir tmp;
  c.expect(run_cli({"synth", "--domains", "4", "--sections", "3", "--tokens", "4000", "--noise", "0.2", "--out",
                    tmp / "col"}) == 0, "synth failed");
  std::map<std::string, std::string> ref_matrix, ref_meta;
  for (const auto* threads : {"1", "8"}) {
    const auto mx = tmp / (std::string("mx") + threads);
    const auto me = tmp / (std::string("me") + threads);
    c.expect(run_cli({"matrix", tmp / "col", "--lang", "en", "--threads", threads, "--out", mx}) == 0, "matrix failed");
    c.expect(run_cli({"metaeval", tmp / "col", "--src", "en", "--tgt", "fr", "--metric", "min,avg,ab,ba,sym",
                      "--threads", threads, "--out", me}) == 0, "metaeval failed");
    if (ref_matrix.empty()) {
      ref_matrix = snapshot(mx);
      ref_meta = snapshot(me);
    } else {
      c.expect(snapshot(mx) == ref_matrix, "matrix outputs differ between --threads 1 and 8");
      c.expect(snapshot(me) == ref_meta, "metaeval outputs differ between --threads 1 and 8");
    }
  }
  c.note(std::to_string(cells) + " cells compared after 10x duplication; " +
         std::to_string(ref_matrix.size() + ref_meta.size()) + " output files compared across thread counts");
}

void criterion10(Check& c) {
  synth::SynthConfig cfg;
  cfg.n_domains = 5;
  cfg.sections_per_domain = 4;
  cfg.tokens_per_section = 100000;
  const auto generated = synth::generate_collection(cfg);
  std::vector<std::string> texts;
  std::vector<std::string> ids;
  for (const auto& s : generated) {
    std::string text;
    for (const auto& u : s.document.units) text += u.variants[0].text + "\n";
    texts.push_back(std::move(text));
    ids.push_back(s.id);
  }

  const auto threads = default_thread_count();
  const auto start = std::chrono::steady_clock::now();
  std::vector<Section> sections(texts.size());
  parallel_for(texts.size(), threads, [&](std::size_t i) {
    sections[i] = {ids[i], "", read_plaintext(texts[i], ids[i], "en")};
  });
  const auto tokenized = std::chrono::steady_clock::now();
  const auto m = pairwise_matrix(sections, config(Variant::minimum, 500), threads);
  const auto end = std::chrono::steady_clock::now();
  const double total = std::chrono::duration<double>(end - start).count();
  const double matrix_only = std::chrono::duration<double>(end - tokenized).count();
  c.expect(m.size() == 20, "matrix is not 20x20");
  c.expect(total < 10.0, "took " + fmt("%.2f s", total));
  c.note("20 sections x 100k tokens, n=500, " + std::to_string(threads) + " thread(s): " + fmt("%.2f s", total) +
         " including tokenization, " + fmt("%.2f s", matrix_only) + " for profiles and matrix");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds; 0 when the criterion states none
    void (*fn)(Check&);
  };
  const Criterion criteria[] = {
      {1, "identity and bounds", 5.0, criterion1},
      {2, "oracle equivalence", 0.0, criterion2},
      {3, "missing-word symmetry", 0.0, criterion3},
      {4, "Pearson correctness", 0.0, criterion4},
      {5, "perfect-translation meta-evaluation", 0.0, criterion5},
      {6, "noise degradation", 0.0, criterion6},
      {7, "minimum ranks above one-direction variants", 0.0, criterion7},
      {8, "domain grouping", 0.0, criterion8},
      {9, "determinism and scale invariance", 0.0, criterion9},
      {10, "throughput", 0.0, criterion10},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.fn(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.budget > 0 && secs >= cr.budget) check.expect(false, "took " + fmt("%.2f s", secs));
    const bool ok = check.failures.empty();
    if (!ok) ++failed;
    std::printf("%s criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", cr.id, cr.name, secs);
    for (const auto& n : check.notes) std::printf("    %s\n", n.c_str());
    for (const auto& f : check.failures) std::printf("    failure: %s\n", f.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
