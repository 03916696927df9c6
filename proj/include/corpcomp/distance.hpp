#ifndef CORPCOMP_DISTANCE_HPP
#define CORPCOMP_DISTANCE_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "corpcomp/error.hpp"
#include "corpcomp/frequency.hpp"
#include "corpcomp/ingest.hpp"

namespace corpcomp {

enum class Variant { directed_ab, directed_ba, minimum, average, symmetric_common };

// How a word from A's top list is looked up in corpus B.
enum class MissingWordPolicy {
  top_n_lookup,      // found only if it is in B's own top-n list
  full_list_lookup,  // found if it occurs anywhere in B
};

struct MetricConfig {
  std::size_t n = kDefaultTopN;
  Variant variant = Variant::minimum;
  MissingWordPolicy missing = MissingWordPolicy::top_n_lookup;
};

// Distance reported for two profiles with no word in common under the
// symmetric variant. Every real value of that variant is below it.
inline constexpr double kDisjointDistance = 2.0;

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::directed_ab: return "ab";
    case Variant::directed_ba: return "ba";
    case Variant::minimum: return "min";
    case Variant::average: return "avg";
    case Variant::symmetric_common: return "sym";
  }
  return "?";
}

inline std::string_view to_string(MissingWordPolicy p) {
  return p == MissingWordPolicy::top_n_lookup ? "topn" : "full";
}

inline Variant parse_variant(std::string_view s) {
  for (auto v : {Variant::minimum, Variant::average, Variant::directed_ab, Variant::directed_ba,
                 Variant::symmetric_common}) {
    if (to_string(v) == s) return v;
  }
  throw DataError("unknown metric '" + std::string(s) + "' (expected min, avg, ab, ba or sym)");
}

inline MissingWordPolicy parse_missing_policy(std::string_view s) {
  if (s == "topn") return MissingWordPolicy::top_n_lookup;
  if (s == "full") return MissingWordPolicy::full_list_lookup;
  throw DataError("unknown missing-word policy '" + std::string(s) + "' (expected topn or full)");
}

inline bool is_symmetric(Variant v) {
  return v == Variant::minimum || v == Variant::average || v == Variant::symmetric_common;
}

struct DirectedScore {
  double score = 0.0;
  std::size_t n_missing = 0;
};

// Chi-square distance from A's top list to profile B:
//   sum over w in top(A) of (fA - fB)^2 / fA,
// where a word not found in B contributes fA (the fB = 0 case).
inline DirectedScore chi2_directed(const TopList& top_a, const FrequencyList& profile_b,
                                   const MetricConfig& cfg) {
  if (top_a.items.empty()) throw DataError("chi2_directed: empty top list");
  if (cfg.n == 0) throw DataError("top-n size must be at least 1");
  DirectedScore out;
  for (const auto& item : top_a.items) {
    const auto rank = profile_b.rank_of(item.token);
    const bool found = rank != FrequencyList::npos &&
                       (cfg.missing == MissingWordPolicy::full_list_lookup || rank < cfg.n);
    if (!found) {
      out.score += item.rel_freq;
      ++out.n_missing;
      continue;
    }
    const double diff = item.rel_freq - profile_b.ranked()[rank].rel_freq;
    out.score += diff * diff / item.rel_freq;
  }
  return out;
}

struct SymmetricScore {
  double score = 0.0;
  std::size_t n_common = 0;   // words that entered the sum
  std::size_t shortfall = 0;  // cfg.n - n_common when fewer were available
  bool disjoint = false;      // no common words; score is kDisjointDistance
};

// Symmetric variant over the n most frequent words common to both
// profiles, ranked by fA + fB:  sum of (fA - fB)^2 / (fA + fB).
inline SymmetricScore chi2_symmetric_common(const FrequencyList& a, const FrequencyList& b,
                                            const MetricConfig& cfg) {
  if (cfg.n == 0) throw DataError("top-n size must be at least 1");
  struct Common {
    const std::string* token;
    double fa;
    double fb;
    double sum;
  };
  // Iterate the smaller vocabulary and probe the larger one.
  const bool swap = a.vocabulary_size() > b.vocabulary_size();
  const auto& small = swap ? b : a;
  const auto& large = swap ? a : b;
  std::vector<Common> common;
  for (const auto& entry : small.ranked()) {
    const auto* other = large.find(entry.token);
    if (other == nullptr) continue;
    const double fa = swap ? other->rel_freq : entry.rel_freq;
    const double fb = swap ? entry.rel_freq : other->rel_freq;
    common.push_back({&entry.token, fa, fb, fa + fb});
  }

  SymmetricScore out;
  if (common.empty()) {
    out.score = kDisjointDistance;
    out.disjoint = true;
    out.shortfall = cfg.n;
    return out;
  }
  const auto take = std::min(cfg.n, common.size());
  auto by_rank = [](const Common& x, const Common& y) {
    return ranks_before(x.sum, *x.token, y.sum, *y.token);
  };
  std::partial_sort(common.begin(), common.begin() + static_cast<std::ptrdiff_t>(take),
                    common.end(), by_rank);
  for (std::size_t i = 0; i < take; ++i) {
    const double diff = common[i].fa - common[i].fb;
    out.score += diff * diff / common[i].sum;
  }
  out.n_common = take;
  out.shortfall = cfg.n - take;
  return out;
}

// The two directed scores between a pair of corpora.
struct DistancePair {
  std::string a_id;
  std::string b_id;
  double d_ab = 0.0;
  double d_ba = 0.0;
  std::size_t n_missing_ab = 0;
  std::size_t n_missing_ba = 0;
};

inline DistancePair distance_pair(const FrequencyList& a, const FrequencyList& b,
                                  const MetricConfig& cfg) {
  const auto ab = chi2_directed(top_n(a, cfg.n), b, cfg);
  const auto ba = chi2_directed(top_n(b, cfg.n), a, cfg);
  return {a.corpus_id(), b.corpus_id(), ab.score, ba.score, ab.n_missing, ba.n_missing};
}

inline DistancePair distance_pair(const Corpus& a, const Corpus& b, const MetricConfig& cfg) {
  return distance_pair(build_frequency_list(a), build_frequency_list(b), cfg);
}

// Collapses a direction pair into one score.
inline double combine(const DistancePair& p, const MetricConfig& cfg) {
  switch (cfg.variant) {
    case Variant::minimum: return std::min(p.d_ab, p.d_ba);
    case Variant::average: return (p.d_ab + p.d_ba) / 2.0;
    case Variant::directed_ab: return p.d_ab;
    case Variant::directed_ba: return p.d_ba;
    case Variant::symmetric_common: break;
  }
  throw std::logic_error("combine: the symmetric variant is computed by chi2_symmetric_common");
}

// Single distance between two profiles under any variant.
inline double distance(const FrequencyList& a, const FrequencyList& b, const MetricConfig& cfg) {
  if (cfg.variant == Variant::symmetric_common) return chi2_symmetric_common(a, b, cfg).score;
  return combine(distance_pair(a, b, cfg), cfg);
}

}  // namespace corpcomp

#endif  // CORPCOMP_DISTANCE_HPP
