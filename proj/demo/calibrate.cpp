// Meta-evaluates every metric variant on synthetic collections over a range
// of translation-noise rates.
//
//   calibrate [seed] [min_tokens] [max_tokens]
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "corpcomp/corpcomp.hpp"

int main(int argc, char** argv) {
  corpcomp::synth::SynthConfig cfg;
  cfg.seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 42;
  cfg.tokens_per_section = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2000;
  cfg.tokens_per_section_max = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 50000;

  std::vector<corpcomp::MetricConfig> variants;
  for (auto v : {corpcomp::Variant::minimum, corpcomp::Variant::average, corpcomp::Variant::directed_ab,
                 corpcomp::Variant::directed_ba, corpcomp::Variant::symmetric_common}) {
    corpcomp::MetricConfig m;
    m.variant = v;
    variants.push_back(m);
  }

  std::printf("%-6s", "noise");
  for (const auto& v : variants) std::printf(" %8s", corpcomp::variant_name(v).c_str());
  std::printf("\n");
  for (double p : {0.0, 0.1, 0.2, 0.3, 0.5}) {
    cfg.noise_rate = p;
    std::vector<corpcomp::ParallelDocument> docs;
    for (auto& s : corpcomp::synth::generate_collection(cfg)) docs.push_back(std::move(s.document));
    const auto report = corpcomp::metaeval_report(docs, cfg.source_lang, cfg.target_lang, variants);
    std::printf("%-6.2f", p);
    for (const auto& r : report.results) {
      if (r.r) {
        std::printf(" %8.4f", *r.r);
      } else {
        std::printf(" %8s", "n/a");
      }
    }
    std::printf("\n");
  }
  return 0;
}
