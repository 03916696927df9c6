#ifndef CORPCOMP_TOOLS_CLI_HPP
#define CORPCOMP_TOOLS_CLI_HPP

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "corpcomp/corpcomp.hpp"

namespace corpcomp::cli {

inline constexpr const char* kToolVersion = "1.0.0";

namespace fs = std::filesystem;

class IoError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

// Records what produced an output directory. Holds no timestamps, absolute
// output paths or thread counts, so an identical run writes identical bytes.
class Manifest {
 public:
  explicit Manifest(std::string subcommand) {
    json_["tool"] = "corpcomp";
    json_["version"] = kToolVersion;
    json_["subcommand"] = std::move(subcommand);
    json_["config"] = nlohmann::json::object();
    json_["inputs"] = nlohmann::json::array();
    json_["outputs"] = nlohmann::json::array();
  }

  nlohmann::json& config() { return json_["config"]; }

  void add_input(const std::string& label, const std::string& content) {
    json_["inputs"].push_back({{"path", label}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }

  void add_output(const std::string& name) { json_["outputs"].push_back(name); }

  void write(const fs::path& dir) const { write_file(dir / "manifest.json", json_.dump(2) + "\n"); }

 private:
  nlohmann::json json_;
};

// Flags shared by the distance-computing subcommands.
struct MetricFlags {
  std::string metric = "min";
  std::size_t top = kDefaultTopN;
  std::string missing = "topn";

  void add_to(CLI::App& app, bool multi) {
    app.add_option("--metric", metric,
                   multi ? "Comma-separated metric variants: min,avg,ab,ba,sym" : "Metric variant: min, avg, ab, ba or sym")
        ->capture_default_str();
    app.add_option("--top", top, "Size of the top frequency list")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--missing", missing, "Missing-word lookup: topn or full")
        ->capture_default_str()
        ->check(CLI::IsMember({"topn", "full"}));
  }

  std::vector<MetricConfig> configs() const {
    std::vector<MetricConfig> out;
    std::stringstream ss(metric);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      MetricConfig cfg;
      cfg.n = top;
      cfg.variant = parse_variant(item);
      cfg.missing = parse_missing_policy(missing);
      out.push_back(cfg);
    }
    if (out.empty()) throw DataError("no metric given");
    return out;
  }

  void record(nlohmann::json& config) const {
    config["metric"] = metric;
    config["top"] = top;
    config["missing"] = missing;
  }
};

inline bool is_tmx(const fs::path& p) {
  return to_lower_ascii(p.extension().string()) == ".tmx";
}

inline bool is_text(const fs::path& p) {
  return to_lower_ascii(p.extension().string()) == ".txt";
}

// Loads a corpus from a .tmx file (one language side) or a plain-text file.
inline Corpus load_corpus(const fs::path& path, const std::string& content, const std::string& lang,
                          bool lenient) {
  const auto id = path.stem().string();
  if (is_tmx(path)) {
    if (lang.empty()) throw DataError(path.string() + ": --lang is required for TMX input");
    return extract_side(parse_tmx(content, id, {lenient}), lang);
  }
  return read_plaintext(content, id, lang.empty() ? "und" : lang);
}

// Regular .tmx/.txt files of a directory in name order.
inline std::vector<fs::path> list_inputs(const fs::path& dir, bool tmx_only) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (is_tmx(entry.path()) || (!tmx_only && is_text(entry.path()))) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  if (files.empty()) throw DataError("no input files in " + dir.string());
  return files;
}

inline std::map<std::string, std::string> read_labels(const fs::path& path) {
  std::map<std::string, std::string> labels;
  const auto rows = csv::parse(read_file(path));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0 && rows[i].size() == 2 && rows[i][0] == "id" && rows[i][1] == "domain") continue;
    if (rows[i].size() != 2) throw DataError(path.string() + ": expected id,domain rows");
    labels[rows[i][0]] = rows[i][1];
  }
  return labels;
}

inline std::string file_safe(std::string name) {
  for (auto& c : name) {
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  }
  return name;
}

inline std::string fmt6(double v) { return csv::format_fixed(v, 6); }

// Entry point shared by the executable and the tests. args excludes the
// program name. Returns 0 on success, 1 on data errors, 2 on usage errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Corpus comparability via chi-square frequency profiles", "corpcomp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::size_t threads = default_thread_count();
  bool lenient = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "Worker threads for pairwise computations")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--lenient", lenient, "Skip unknown elements inside TMX segments instead of failing");
  };

  // freq
  auto* freq = app.add_subcommand("freq", "Dump the top of a frequency profile as CSV");
  std::string freq_input, freq_lang, freq_out;
  std::size_t freq_top = kDefaultTopN;
  freq->add_option("input", freq_input, "TMX or plain-text file")->required();
  freq->add_option("--lang", freq_lang, "Language side to read (required for TMX)");
  freq->add_option("--top", freq_top, "Number of entries")->capture_default_str()->check(CLI::PositiveNumber);
  freq->add_option("--out", freq_out, "Output directory (default: print to stdout)");
  add_common(freq);

  // dist
  auto* dist = app.add_subcommand("dist", "Distance between two corpora");
  std::string dist_a, dist_b, dist_lang, dist_out;
  MetricFlags dist_flags;
  dist->add_option("a", dist_a, "First TMX or plain-text file")->required();
  dist->add_option("b", dist_b, "Second TMX or plain-text file")->required();
  dist->add_option("--lang", dist_lang, "Language side to read (required for TMX)");
  dist->add_option("--out", dist_out, "Also write the result to this directory");
  dist_flags.add_to(*dist, false);
  add_common(dist);

  // matrix
  auto* matrix = app.add_subcommand("matrix", "Pairwise distance matrix over a directory of sections");
  std::string matrix_dir, matrix_lang, matrix_out, matrix_labels;
  bool matrix_log = false;
  MetricFlags matrix_flags;
  matrix->add_option("dir", matrix_dir, "Directory of .tmx/.txt files, one section each")->required();
  matrix->add_option("--lang", matrix_lang, "Language side to read (required for TMX)");
  matrix->add_option("--labels", matrix_labels, "CSV of id,domain (default: <dir>/labels.csv if present)");
  matrix->add_option("--out", matrix_out, "Output directory")->required();
  matrix->add_flag("--log-scale", matrix_log, "Logarithmic gray scale in the heatmap");
  matrix_flags.add_to(*matrix, false);
  add_common(matrix);

  // metaeval
  auto* metaeval = app.add_subcommand("metaeval", "Correlate source- and target-side distances per metric variant");
  std::string meta_dir, meta_src, meta_tgt, meta_out;
  MetricFlags meta_flags;
  meta_flags.metric = "min,avg,ab,ba";
  metaeval->add_option("dir", meta_dir, "Directory of parallel .tmx files")->required();
  metaeval->add_option("--src", meta_src, "Source language tag")->required();
  metaeval->add_option("--tgt", meta_tgt, "Target language tag")->required();
  metaeval->add_option("--out", meta_out, "Output directory")->required();
  meta_flags.add_to(*metaeval, true);
  add_common(metaeval);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic parallel collection as TMX files");
  std::string synth_out, synth_config;
  std::map<std::string, std::string> synth_values;
  const std::vector<std::pair<std::string, std::string>> synth_keys = {
      {"domains", "Number of domains"},
      {"sections", "Sections per domain"},
      {"tokens", "Tokens per section (minimum when --tokens-max is set)"},
      {"tokens-max", "Maximum tokens per section"},
      {"shared-vocab", "Size of the vocabulary shared by all domains"},
      {"domain-vocab", "Size of each domain's own vocabulary"},
      {"zipf", "Zipf exponent"},
      {"noise", "Probability of replacing a target token by a random target word"},
      {"seed", "Random seed"},
      {"src", "Source language tag"},
      {"tgt", "Target language tag"},
      {"segment", "Tokens per translation unit"},
  };
  for (const auto& [key, help] : synth_keys) {
    synth_cmd->add_option("--" + key, synth_values[key], help);
  }
  synth_cmd->add_option("--config", synth_config, "Flat key=value file; flags override it");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (freq->parsed()) {
      const fs::path input(freq_input);
      const auto content = read_file(input);
      const auto profile = build_frequency_list(load_corpus(input, content, freq_lang, lenient));
      const auto text = render_profile_csv(profile, freq_top);
      if (freq_out.empty()) {
        out << text;
        return 0;
      }
      fs::create_directories(freq_out);
      write_file(fs::path(freq_out) / "profile.csv", text);
      Manifest manifest("freq");
      manifest.config()["lang"] = freq_lang;
      manifest.config()["top"] = freq_top;
      manifest.config()["lenient"] = lenient;
      manifest.add_input(input.filename().string(), content);
      manifest.add_output("profile.csv");
      manifest.write(freq_out);
      return 0;
    }

    if (dist->parsed()) {
      const fs::path pa(dist_a), pb(dist_b);
      const auto ca = read_file(pa);
      const auto cb = read_file(pb);
      auto corpus_a = load_corpus(pa, ca, dist_lang, lenient);
      auto corpus_b = load_corpus(pb, cb, dist_lang, lenient);
      if (corpus_a.id == corpus_b.id) corpus_b.id += "#2";
      const auto fa = build_frequency_list(corpus_a);
      const auto fb = build_frequency_list(corpus_b);
      const auto cfg = dist_flags.configs();
      if (cfg.size() != 1) throw DataError("dist takes a single --metric");

      std::string text;
      text += "a\t" + fa.corpus_id() + "\n";
      text += "b\t" + fb.corpus_id() + "\n";
      const auto pair = distance_pair(fa, fb, cfg[0]);
      text += "d_ab\t" + fmt6(pair.d_ab) + "\n";
      text += "d_ba\t" + fmt6(pair.d_ba) + "\n";
      text += "missing_ab\t" + std::to_string(pair.n_missing_ab) + "\n";
      text += "missing_ba\t" + std::to_string(pair.n_missing_ba) + "\n";
      if (cfg[0].variant == Variant::symmetric_common) {
        const auto s = chi2_symmetric_common(fa, fb, cfg[0]);
        text += "sym\t" + fmt6(s.score) + "\n";
        text += "common\t" + std::to_string(s.n_common) + "\n";
        if (s.disjoint) err << "warning: the two corpora share no words\n";
      } else {
        text += std::string(to_string(cfg[0].variant)) + "\t" + fmt6(combine(pair, cfg[0])) + "\n";
      }
      out << text;
      if (!dist_out.empty()) {
        fs::create_directories(dist_out);
        write_file(fs::path(dist_out) / "dist.txt", text);
        Manifest manifest("dist");
        dist_flags.record(manifest.config());
        manifest.config()["lang"] = dist_lang;
        manifest.config()["lenient"] = lenient;
        manifest.add_input(pa.filename().string(), ca);
        manifest.add_input(pb.filename().string(), cb);
        manifest.add_output("dist.txt");
        manifest.write(dist_out);
      }
      return 0;
    }

    if (matrix->parsed()) {
      const auto cfg = matrix_flags.configs();
      if (cfg.size() != 1) throw DataError("matrix takes a single --metric");
      Manifest manifest("matrix");
      matrix_flags.record(manifest.config());
      manifest.config()["lang"] = matrix_lang;
      manifest.config()["lenient"] = lenient;
      manifest.config()["log_scale"] = matrix_log;

      std::vector<Section> sections;
      for (const auto& path : list_inputs(matrix_dir, false)) {
        const auto content = read_file(path);
        manifest.add_input(path.filename().string(), content);
        auto corpus = load_corpus(path, content, matrix_lang, lenient);
        sections.push_back({corpus.id, "", std::move(corpus)});
      }
      const auto m = pairwise_matrix(sections, cfg[0], threads);
      for (const auto& w : m.warnings()) err << "warning: " << w << "\n";

      fs::create_directories(matrix_out);
      const fs::path outdir(matrix_out);
      write_file(outdir / "matrix.csv", render_matrix_csv(m));
      manifest.add_output("matrix.csv");
      HeatmapOptions hopt;
      hopt.log_scale = matrix_log;
      write_file(outdir / "heatmap.svg", render_heatmap(m, hopt));
      manifest.add_output("heatmap.svg");

      fs::path labels_path = matrix_labels;
      if (labels_path.empty() && fs::exists(fs::path(matrix_dir) / "labels.csv")) {
        labels_path = fs::path(matrix_dir) / "labels.csv";
      }
      out << render_matrix_csv(m);
      if (!labels_path.empty()) {
        const auto content = read_file(labels_path);
        manifest.add_input(labels_path.filename().string(), content);
        const auto report = label_agreement(m, read_labels(labels_path));
        const auto text = render_agreement(report);
        write_file(outdir / "agreement.txt", text);
        manifest.add_output("agreement.txt");
        out << "\n" << text;
      }
      manifest.write(outdir);
      return 0;
    }

    if (metaeval->parsed()) {
      const auto variants = meta_flags.configs();
      Manifest manifest("metaeval");
      meta_flags.record(manifest.config());
      manifest.config()["src"] = meta_src;
      manifest.config()["tgt"] = meta_tgt;
      manifest.config()["lenient"] = lenient;

      std::vector<ParallelDocument> docs;
      for (const auto& path : list_inputs(meta_dir, true)) {
        const auto content = read_file(path);
        manifest.add_input(path.filename().string(), content);
        auto doc = parse_tmx(content, path.stem().string(), {lenient});
        if (doc.skipped_units > 0) {
          err << "warning: " << path.filename().string() << ": skipped " << doc.skipped_units
              << " translation units without variants\n";
        }
        docs.push_back(std::move(doc));
      }
      const auto report = metaeval_report(docs, meta_src, meta_tgt, variants, threads);
      for (const auto& w : report.warnings) err << "warning: " << w << "\n";

      fs::create_directories(meta_out);
      const fs::path outdir(meta_out);
      const auto table = render_report_table(report);
      write_file(outdir / "report.txt", table);
      manifest.add_output("report.txt");
      write_file(outdir / "report.csv", render_report_csv(report));
      manifest.add_output("report.csv");
      for (const auto& r : report.results) {
        const auto name = "scatter_" + file_safe(r.name) + ".csv";
        write_file(outdir / name, export_scatter(report, r.name));
        manifest.add_output(name);
      }
      manifest.write(outdir);
      out << table;
      return 0;
    }

    if (synth_cmd->parsed()) {
      synth::SynthConfig cfg;
      Manifest manifest("synth");
      if (!synth_config.empty()) {
        const auto content = read_file(synth_config);
        manifest.add_input(fs::path(synth_config).filename().string(), content);
        cfg = synth::parse_config(content);
      }
      for (const auto& [key, value] : synth_values) {
        if (synth_cmd->count("--" + key) > 0) synth::apply_setting(cfg, key, value);
      }
      const auto sections = synth::generate_collection(cfg);

      auto& c = manifest.config();
      c["domains"] = cfg.n_domains;
      c["sections"] = cfg.sections_per_domain;
      c["tokens"] = cfg.tokens_per_section;
      c["tokens-max"] = cfg.tokens_per_section_max;
      c["shared-vocab"] = cfg.shared_vocab_size;
      c["domain-vocab"] = cfg.domain_vocab_size;
      c["zipf"] = cfg.zipf_exponent;
      c["noise"] = cfg.noise_rate;
      c["seed"] = cfg.seed;
      c["src"] = cfg.source_lang;
      c["tgt"] = cfg.target_lang;
      c["segment"] = cfg.tokens_per_segment;

      fs::create_directories(synth_out);
      const fs::path outdir(synth_out);
      std::string labels = "id,domain\n";
      for (const auto& s : sections) {
        write_file(outdir / (s.id + ".tmx"), synth::write_tmx(s.document));
        manifest.add_output(s.id + ".tmx");
        labels += csv::quote(s.id) + "," + csv::quote(s.domain) + "\n";
      }
      write_file(outdir / "labels.csv", labels);
      manifest.add_output("labels.csv");
      manifest.write(outdir);
      out << "wrote " << sections.size() << " sections to " << outdir.string() << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << "\n";
    return 1;
  } catch (const LanguageError& e) {
    err << "error: language: " << e.what() << "\n";
    return 1;
  } catch (const UndefinedCorrelation& e) {
    err << "error: correlation: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "error: io: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: data: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: io: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace corpcomp::cli

#endif  // CORPCOMP_TOOLS_CLI_HPP
