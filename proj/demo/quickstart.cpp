#include <cstdio>

#include "corpcomp/corpcomp.hpp"

int main() {
  using namespace corpcomp;
  const auto a = read_plaintext("the cat sat on the mat and the dog sat too", "a", "en");
  const auto b = read_plaintext("the dog lay on the rug while the cat sat", "b", "en");

  MetricConfig cfg;
  cfg.n = 5;
  const auto pair = distance_pair(a, b, cfg);
  std::printf("d(a->b) = %.4f  missing %zu\n", pair.d_ab, pair.n_missing_ab);
  std::printf("d(b->a) = %.4f  missing %zu\n", pair.d_ba, pair.n_missing_ba);
  std::printf("min     = %.4f\n", combine(pair, cfg));
  cfg.variant = Variant::average;
  std::printf("avg     = %.4f\n", combine(pair, cfg));
  cfg.variant = Variant::symmetric_common;
  std::printf("sym     = %.4f\n",
              chi2_symmetric_common(build_frequency_list(a), build_frequency_list(b), cfg).score);
  return 0;
}
