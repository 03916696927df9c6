#ifndef CORPCOMP_SYNTH_HPP
#define CORPCOMP_SYNTH_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "corpcomp/error.hpp"
#include "corpcomp/ingest.hpp"
#include "corpcomp/xml.hpp"

// Seeded generator of multi-domain bilingual collections.
//
// Each domain is a Zipfian unigram model over the shared core vocabulary
// plus a domain-specific tail. The target side is the source side passed
// through a fixed word-for-word translation map; with probability
// `noise_rate` a target token is replaced by a uniformly drawn target word,
// which models inconsistent or free translation.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. The standard distributions are not (their algorithms
// are implementation-defined), so all sampling below is done directly on
// the raw 64-bit outputs.
namespace corpcomp::synth {

struct SynthConfig {
  std::size_t n_domains = 4;
  std::size_t sections_per_domain = 3;
  std::size_t tokens_per_section = 20000;
  // When larger than tokens_per_section, each section length is drawn
  // uniformly from [tokens_per_section, tokens_per_section_max].
  std::size_t tokens_per_section_max = 0;
  std::size_t shared_vocab_size = 300;
  std::size_t domain_vocab_size = 700;
  double zipf_exponent = 1.0;
  double noise_rate = 0.0;
  std::uint64_t seed = 42;
  std::string source_lang = "en";
  std::string target_lang = "fr";
  std::size_t tokens_per_segment = 12;

  void validate() const {
    if (n_domains == 0 || sections_per_domain == 0 || tokens_per_section == 0 ||
        shared_vocab_size + domain_vocab_size == 0 || tokens_per_segment == 0) {
      throw DataError("synth: all sizes must be positive");
    }
    if (tokens_per_section_max != 0 && tokens_per_section_max < tokens_per_section) {
      throw DataError("synth: tokens_per_section_max is below tokens_per_section");
    }
    if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) throw DataError("synth: noise rate must lie in [0, 1]");
    if (!(zipf_exponent >= 0.0) || !std::isfinite(zipf_exponent)) {
      throw DataError("synth: zipf exponent must be a finite non-negative number");
    }
    if (source_lang.empty() || target_lang.empty() || language_matches(source_lang, target_lang)) {
      throw DataError("synth: source and target languages must be distinct and non-empty");
    }
  }
};

// Deterministic sampling on top of a standard-specified engine.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
      const auto x = engine_();
      if (x < limit) return x % bound;
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

// A word of the synthetic vocabulary, encoded in fixed-width base 26 so
// that byte order equals index order on both sides.
inline std::string word(char prefix, std::size_t index, std::size_t width) {
  std::string s(width + 1, 'a');
  s[0] = prefix;
  for (std::size_t pos = width; pos >= 1; --pos) {
    s[pos] = static_cast<char>('a' + index % 26);
    index /= 26;
  }
  return s;
}

struct DomainModel {
  std::string name;
  std::vector<std::size_t> vocabulary;  // global word indices in rank order
  std::vector<double> cumulative;       // cumulative Zipf weights, same order

  std::size_t sample(Random& rng) const {
    const double u = rng.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto pos = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                           vocabulary.size() - 1);
    return vocabulary[pos];
  }
};

struct GeneratedSection {
  std::string id;
  std::string domain;
  ParallelDocument document;
};

// Global vocabulary and the translation map. Source word i maps to target
// word i; the map is a bijection and preserves byte order.
class Lexicon {
 public:
  explicit Lexicon(std::size_t size) : size_(size) {
    width_ = 3;
    for (std::size_t cap = 26 * 26 * 26; cap < size; cap *= 26) ++width_;
  }

  std::size_t size() const { return size_; }
  std::string source(std::size_t i) const { return word('s', i, width_); }
  std::string target(std::size_t i) const { return word('t', i, width_); }

 private:
  std::size_t size_;
  std::size_t width_;
};

inline std::vector<DomainModel> build_domain_models(const SynthConfig& cfg, Random& rng) {
  std::vector<DomainModel> models;
  const auto shared = cfg.shared_vocab_size;
  const auto tail = cfg.domain_vocab_size;
  for (std::size_t d = 0; d < cfg.n_domains; ++d) {
    DomainModel m;
    m.name = "domain" + std::to_string(d);
    std::vector<std::size_t> core(shared), own(tail);
    for (std::size_t i = 0; i < shared; ++i) core[i] = i;
    for (std::size_t i = 0; i < tail; ++i) own[i] = shared + d * tail + i;
    // The shared core is the head of every domain in one fixed order, like
    // function words; domains differ in their tails.
    rng.shuffle(own);
    m.vocabulary = core;
    m.vocabulary.insert(m.vocabulary.end(), own.begin(), own.end());
    double total = 0.0;
    for (std::size_t r = 0; r < m.vocabulary.size(); ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), cfg.zipf_exponent);
      m.cumulative.push_back(total);
    }
    models.push_back(std::move(m));
  }
  return models;
}

inline std::vector<GeneratedSection> generate_collection(const SynthConfig& cfg) {
  cfg.validate();
  Random rng(cfg.seed);
  const Lexicon lexicon(cfg.shared_vocab_size + cfg.n_domains * cfg.domain_vocab_size);
  const auto models = build_domain_models(cfg, rng);
  const auto src_lang = to_lower_ascii(cfg.source_lang);
  const auto tgt_lang = to_lower_ascii(cfg.target_lang);

  std::vector<GeneratedSection> out;
  for (std::size_t d = 0; d < cfg.n_domains; ++d) {
    for (std::size_t s = 0; s < cfg.sections_per_domain; ++s) {
      std::size_t length = cfg.tokens_per_section;
      if (cfg.tokens_per_section_max > cfg.tokens_per_section) {
        length += rng.below(cfg.tokens_per_section_max - cfg.tokens_per_section + 1);
      }
      GeneratedSection section;
      section.domain = models[d].name;
      section.id = "d" + std::to_string(d) + "s" + std::to_string(s);
      section.document.id = section.id;
      section.document.languages = {src_lang, tgt_lang};

      std::string src_text, tgt_text;
      for (std::size_t t = 0; t < length; ++t) {
        // Every draw happens regardless of the noise rate, so runs that
        // differ only in noise_rate share the source side and their noisy
        // positions are nested.
        const auto word_index = models[d].sample(rng);
        const bool noisy = rng.uniform() < cfg.noise_rate;
        const auto replacement = rng.below(lexicon.size());

        if (!src_text.empty()) {
          src_text += ' ';
          tgt_text += ' ';
        }
        src_text += lexicon.source(word_index);
        tgt_text += lexicon.target(noisy ? replacement : word_index);

        if ((t + 1) % cfg.tokens_per_segment == 0 || t + 1 == length) {
          TranslationUnit unit;
          unit.variants.push_back({src_lang, std::move(src_text)});
          unit.variants.push_back({tgt_lang, std::move(tgt_text)});
          section.document.units.push_back(std::move(unit));
          src_text.clear();
          tgt_text.clear();
        }
      }
      out.push_back(std::move(section));
    }
  }
  return out;
}

// Serializes a document as TMX 1.4 that parse_tmx reads back unchanged.
inline std::string write_tmx(const ParallelDocument& doc) {
  std::string srclang = "*all*";
  if (!doc.units.empty() && !doc.units.front().variants.empty()) {
    srclang = doc.units.front().variants.front().language;
  }
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<tmx version=\"1.4\">\n";
  out += "  <header creationtool=\"corpcomp\" creationtoolversion=\"1.0\" datatype=\"plaintext\" "
         "segtype=\"sentence\" adminlang=\"en\" srclang=\"" +
         xml::escape(srclang) + "\" o-tmf=\"corpcomp\"/>\n";
  out += "  <body>\n";
  for (const auto& unit : doc.units) {
    out += "    <tu>\n";
    for (const auto& v : unit.variants) {
      out += "      <tuv xml:lang=\"" + xml::escape(v.language) + "\"><seg>" + xml::escape(v.text) +
             "</seg></tuv>\n";
    }
    out += "    </tu>\n";
  }
  out += "  </body>\n</tmx>\n";
  return out;
}

namespace detail {

inline std::size_t parse_size(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw DataError("synth config: '" + std::string(key) + "' expects a non-negative integer");
  }
  return out;
}

inline double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw DataError("synth config: '" + std::string(key) + "' expects a number");
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// Applies one key=value setting. Keys match the CLI flag names.
inline void apply_setting(SynthConfig& cfg, std::string_view key, std::string_view value) {
  using detail::parse_real;
  using detail::parse_size;
  if (key == "domains") {
    cfg.n_domains = parse_size(key, value);
  } else if (key == "sections") {
    cfg.sections_per_domain = parse_size(key, value);
  } else if (key == "tokens") {
    cfg.tokens_per_section = parse_size(key, value);
  } else if (key == "tokens-max") {
    cfg.tokens_per_section_max = parse_size(key, value);
  } else if (key == "shared-vocab") {
    cfg.shared_vocab_size = parse_size(key, value);
  } else if (key == "domain-vocab") {
    cfg.domain_vocab_size = parse_size(key, value);
  } else if (key == "zipf") {
    cfg.zipf_exponent = parse_real(key, value);
  } else if (key == "noise") {
    cfg.noise_rate = parse_real(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_size(key, value);
  } else if (key == "src") {
    cfg.source_lang = std::string(value);
  } else if (key == "tgt") {
    cfg.target_lang = std::string(value);
  } else if (key == "segment") {
    cfg.tokens_per_segment = parse_size(key, value);
  } else {
    throw DataError("synth config: unknown key '" + std::string(key) + "'");
  }
}

// Reads a flat key=value file; blank lines and '#' comments are ignored.
inline SynthConfig parse_config(std::string_view text, SynthConfig cfg = {}) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("synth config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace corpcomp::synth

#endif  // CORPCOMP_SYNTH_HPP
