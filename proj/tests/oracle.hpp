#ifndef CORPCOMP_TESTS_ORACLE_HPP
#define CORPCOMP_TESTS_ORACLE_HPP

// Brute-force reference computations for the tests. Nothing here calls the
// library's frequency or distance code: profiles are re-tallied from raw
// token vectors, top lists come from a full explicit sort, and every sum is
// written out term by term.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct Row {
  std::string token;
  std::uint64_t count;
  double freq;
};

// Sort-then-run-length tally.
inline std::map<std::string, std::uint64_t> tally(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  std::map<std::string, std::uint64_t> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t j = i;
    while (j < tokens.size() && tokens[j] == tokens[i]) ++j;
    out[tokens[i]] = j - i;
    i = j;
  }
  return out;
}

// Whole profile, sorted by descending frequency then token.
inline std::vector<Row> ranked(const std::vector<std::string>& tokens) {
  std::vector<Row> rows;
  for (const auto& [tok, c] : tally(tokens)) {
    rows.push_back({tok, c, static_cast<double>(c) / static_cast<double>(tokens.size())});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.freq > b.freq) return true;
    if (a.freq < b.freq) return false;
    return a.token < b.token;
  });
  return rows;
}

inline std::vector<Row> top(const std::vector<std::string>& tokens, std::size_t n) {
  auto rows = ranked(tokens);
  if (rows.size() > n) rows.resize(n);
  return rows;
}

inline const Row* lookup(const std::vector<Row>& rows, const std::string& token) {
  for (const auto& r : rows) {
    if (r.token == token) return &r;
  }
  return nullptr;
}

struct Directed {
  double score;
  std::size_t missing;
};

// Sum over A's top-n of (fA - fB)^2 / fA, missing words adding fA. With
// top_n_lookup the word must be in B's top-n, otherwise anywhere in B.
inline Directed directed(const std::vector<std::string>& a, const std::vector<std::string>& b,
                         std::size_t n, bool top_n_lookup) {
  const auto top_a = top(a, n);
  const auto b_rows = top_n_lookup ? top(b, n) : ranked(b);
  Directed out{0.0, 0};
  for (const auto& row : top_a) {
    const auto* hit = lookup(b_rows, row.token);
    if (hit == nullptr) {
      out.score += row.freq;
      ++out.missing;
    } else {
      out.score += (row.freq - hit->freq) * (row.freq - hit->freq) / row.freq;
    }
  }
  return out;
}

// Over the n common words with the largest fA + fB.
inline double symmetric(const std::vector<std::string>& a, const std::vector<std::string>& b,
                        std::size_t n) {
  const auto ra = ranked(a);
  const auto rb = ranked(b);
  struct C {
    std::string token;
    double fa, fb;
  };
  std::vector<C> common;
  for (const auto& x : ra) {
    if (const auto* y = lookup(rb, x.token)) common.push_back({x.token, x.freq, y->freq});
  }
  if (common.empty()) return 2.0;
  std::sort(common.begin(), common.end(), [](const C& p, const C& q) {
    if (p.fa + p.fb != q.fa + q.fb) return p.fa + p.fb > q.fa + q.fb;
    return p.token < q.token;
  });
  if (common.size() > n) common.resize(n);
  double s = 0.0;
  for (const auto& c : common) s += (c.fa - c.fb) * (c.fa - c.fb) / (c.fa + c.fb);
  return s;
}

// Random token sequence over a small alphabet of words.
inline std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t vocab,
                                              std::size_t length) {
  static const char* words[] = {"a", "b", "c", "d", "e", "f", "g", "h",
                                "i", "j", "k", "l", "m", "n", "o", "p"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < length; ++i) out.emplace_back(words[rng() % vocab]);
  return out;
}

}  // namespace oracle

#endif  // CORPCOMP_TESTS_ORACLE_HPP
