#ifndef CORPCOMP_FREQUENCY_HPP
#define CORPCOMP_FREQUENCY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corpcomp/csv.hpp"
#include "corpcomp/error.hpp"
#include "corpcomp/ingest.hpp"

namespace corpcomp {

inline constexpr std::size_t kDefaultTopN = 500;

struct FrequencyEntry {
  std::string token;
  std::uint64_t count = 0;
  double rel_freq = 0.0;  // count / total_tokens
};

// Total order used everywhere a frequency ranking is needed: descending
// frequency, then ascending byte-wise token order.
inline bool ranks_before(double freq_a, std::string_view token_a, double freq_b,
                         std::string_view token_b) {
  if (freq_a != freq_b) return freq_a > freq_b;
  return token_a < token_b;
}

// Relative-frequency profile of one corpus. Entries are kept in rank order,
// so any top-n list is a prefix of ranked().
class FrequencyList {
 public:
  FrequencyList(std::string corpus_id, std::string language,
                const std::unordered_map<std::string, std::uint64_t>& counts)
      : corpus_id_(std::move(corpus_id)), language_(std::move(language)) {
    for (const auto& [token, count] : counts) total_ += count;
    if (total_ == 0) throw DataError("frequency list of empty corpus '" + corpus_id_ + "'");

    ranked_.reserve(counts.size());
    for (const auto& [token, count] : counts) {
      if (count == 0) continue;
      ranked_.push_back({token, count, static_cast<double>(count) / static_cast<double>(total_)});
    }
    std::sort(ranked_.begin(), ranked_.end(), [](const FrequencyEntry& a, const FrequencyEntry& b) {
      // Equal counts give bit-equal rel_freq, so comparing counts is the
      // same order without the division.
      if (a.count != b.count) return a.count > b.count;
      return a.token < b.token;
    });
    rank_.reserve(ranked_.size());
    for (std::size_t i = 0; i < ranked_.size(); ++i) rank_.emplace(ranked_[i].token, i);
  }

  const std::string& corpus_id() const { return corpus_id_; }
  const std::string& language() const { return language_; }
  std::uint64_t total_tokens() const { return total_; }
  std::size_t vocabulary_size() const { return ranked_.size(); }

  std::span<const FrequencyEntry> ranked() const { return ranked_; }

  // Zero-based rank of a token, or npos when absent.
  std::size_t rank_of(const std::string& token) const {
    const auto it = rank_.find(token);
    return it == rank_.end() ? npos : it->second;
  }

  const FrequencyEntry* find(const std::string& token) const {
    const auto r = rank_of(token);
    return r == npos ? nullptr : &ranked_[r];
  }

  double rel_freq(const std::string& token) const {
    const auto* e = find(token);
    return e == nullptr ? 0.0 : e->rel_freq;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::string corpus_id_;
  std::string language_;
  std::uint64_t total_ = 0;
  std::vector<FrequencyEntry> ranked_;
  std::unordered_map<std::string, std::size_t> rank_;
};

struct TopItem {
  std::string token;
  double rel_freq = 0.0;
};

// The n most frequent words of a profile.
struct TopList {
  std::string corpus_id;
  std::size_t requested = 0;
  std::vector<TopItem> items;

  // How many items short of `requested` the vocabulary was.
  std::size_t shortfall() const { return requested - items.size(); }
};

inline FrequencyList build_frequency_list(const Corpus& corpus) {
  if (corpus.empty()) throw DataError("corpus '" + corpus.id + "' has no tokens");
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& token : corpus.tokens) ++counts[token];
  return FrequencyList(corpus.id, corpus.language, counts);
}

inline TopList top_n(const FrequencyList& profile, std::size_t n) {
  if (n == 0) throw DataError("top-n size must be at least 1");
  TopList top;
  top.corpus_id = profile.corpus_id();
  top.requested = n;
  const auto ranked = profile.ranked();
  const auto take = std::min(n, ranked.size());
  top.items.reserve(take);
  for (std::size_t i = 0; i < take; ++i) top.items.push_back({ranked[i].token, ranked[i].rel_freq});
  return top;
}

// token,count,rel_freq rows for the first n ranked entries.
inline std::string render_profile_csv(const FrequencyList& profile, std::size_t n) {
  std::string out = "token,count,rel_freq\n";
  const auto ranked = profile.ranked();
  const auto take = std::min(n, ranked.size());
  for (std::size_t i = 0; i < take; ++i) {
    out += csv::quote(ranked[i].token);
    out += ',';
    out += std::to_string(ranked[i].count);
    out += ',';
    out += csv::format_exact(ranked[i].rel_freq);
    out += '\n';
  }
  return out;
}

}  // namespace corpcomp

#endif  // CORPCOMP_FREQUENCY_HPP
