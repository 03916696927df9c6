#ifndef CORPCOMP_MATRIX_HPP
#define CORPCOMP_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corpcomp/csv.hpp"
#include "corpcomp/distance.hpp"
#include "corpcomp/error.hpp"
#include "corpcomp/frequency.hpp"
#include "corpcomp/ingest.hpp"
#include "corpcomp/parallel.hpp"
#include "corpcomp/xml.hpp"

namespace corpcomp {

// One corpus section with its human-assigned domain label.
struct Section {
  std::string id;
  std::string domain_label;
  Corpus corpus;
};

// Labeled square matrix of combined distances. values(i, j) is the
// distance from section i to section j; for directed variants row i holds
// the scores computed from i's top list.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<std::string> labels, MetricConfig config)
      : labels_(std::move(labels)),
        values_(labels_.size() * labels_.size(), 0.0),
        config_(config) {}

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const MetricConfig& config() const { return config_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * size() + j]; }

  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  std::size_t index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw DataError("no section '" + label + "' in matrix");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  // Smallest and largest off-diagonal value; nullopt for a 1x1 matrix.
  std::optional<std::pair<double, double>> off_diagonal_range() const {
    std::optional<std::pair<double, double>> range;
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = 0; j < size(); ++j) {
        if (i == j) continue;
        const double v = (*this)(i, j);
        if (!range) {
          range.emplace(v, v);
        } else {
          range->first = std::min(range->first, v);
          range->second = std::max(range->second, v);
        }
      }
    }
    return range;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
  MetricConfig config_;
  std::vector<std::string> warnings_;
};

// Fills a matrix from precomputed profiles. Cells are computed per
// unordered pair; each pair writes only its own two cells.
inline DistanceMatrix pairwise_matrix(const std::vector<FrequencyList>& profiles,
                                      const MetricConfig& cfg, std::size_t threads = 1) {
  if (profiles.size() < 2) throw DataError("a distance matrix needs at least 2 non-empty sections");
  if (cfg.n == 0) throw DataError("top-n size must be at least 1");
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& p : profiles) {
    if (!seen.insert(p.corpus_id()).second) throw DataError("duplicate section id '" + p.corpus_id() + "'");
    labels.push_back(p.corpus_id());
  }
  DistanceMatrix m(std::move(labels), cfg);
  const auto k = profiles.size();

  std::vector<TopList> tops;
  if (cfg.variant != Variant::symmetric_common) {
    tops.resize(k);
    parallel_for(k, threads, [&](std::size_t i) { tops[i] = top_n(profiles[i], cfg.n); });
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(k * (k - 1) / 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  }
  std::vector<char> disjoint(pairs.size(), 0);

  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    if (cfg.variant == Variant::symmetric_common) {
      const auto s = chi2_symmetric_common(profiles[i], profiles[j], cfg);
      m(i, j) = m(j, i) = s.score;
      disjoint[p] = s.disjoint ? 1 : 0;
      return;
    }
    const double d_ij = chi2_directed(tops[i], profiles[j], cfg).score;
    const double d_ji = chi2_directed(tops[j], profiles[i], cfg).score;
    switch (cfg.variant) {
      case Variant::minimum: m(i, j) = m(j, i) = std::min(d_ij, d_ji); break;
      case Variant::average: m(i, j) = m(j, i) = (d_ij + d_ji) / 2.0; break;
      case Variant::directed_ab:
        m(i, j) = d_ij;
        m(j, i) = d_ji;
        break;
      case Variant::directed_ba:
        m(i, j) = d_ji;
        m(j, i) = d_ij;
        break;
      case Variant::symmetric_common: break;
    }
  });

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (disjoint[p]) {
      m.add_warning("sections '" + m.labels()[pairs[p].first] + "' and '" +
                    m.labels()[pairs[p].second] + "' share no words; distance set to " +
                    csv::format_exact(kDisjointDistance));
    }
  }
  return m;
}

// Builds the matrix over sections; empty sections are left out with a
// warning.
inline DistanceMatrix pairwise_matrix(const std::vector<Section>& sections, const MetricConfig& cfg,
                                      std::size_t threads = 1) {
  std::vector<std::string> warnings;
  std::vector<const Section*> usable;
  for (const auto& s : sections) {
    if (s.corpus.empty()) {
      warnings.push_back("section '" + s.id + "' is empty and was excluded");
    } else {
      usable.push_back(&s);
    }
  }
  std::vector<std::optional<FrequencyList>> built(usable.size());
  parallel_for(usable.size(), threads, [&](std::size_t i) {
    Corpus c = usable[i]->corpus;
    c.id = usable[i]->id;
    built[i].emplace(build_frequency_list(c));
  });
  std::vector<FrequencyList> profiles;
  profiles.reserve(built.size());
  for (auto& b : built) profiles.push_back(std::move(*b));

  auto m = pairwise_matrix(profiles, cfg, threads);
  for (auto& w : warnings) m.add_warning(std::move(w));
  return m;
}

struct NeighborResult {
  std::string id;
  std::string domain;
  std::string nearest_id;
  std::string nearest_domain;
  bool agrees = false;
};

struct AgreementReport {
  // Sections whose domain has at least two members.
  std::vector<NeighborResult> neighbors;
  std::size_t n_correct = 0;
  double nn_accuracy = 0.0;
  double mean_within = 0.0;
  // Absent when every section carries the same domain label.
  std::optional<double> mean_cross;
};

// Compares the matrix with human domain labels: nearest-neighbor label
// accuracy and mean within- vs cross-domain distance over ordered
// off-diagonal cells. Nearest-neighbor ties go to the lower index.
inline AgreementReport label_agreement(const DistanceMatrix& m,
                                       const std::map<std::string, std::string>& domain_of) {
  const auto k = m.size();
  std::vector<std::string> domains(k);
  std::map<std::string, std::size_t> members;
  for (std::size_t i = 0; i < k; ++i) {
    const auto it = domain_of.find(m.labels()[i]);
    if (it == domain_of.end()) throw DataError("section '" + m.labels()[i] + "' has no domain label");
    domains[i] = it->second;
    ++members[it->second];
  }
  if (std::none_of(members.begin(), members.end(), [](const auto& e) { return e.second >= 2; })) {
    throw DataError("label agreement needs a domain with at least two sections");
  }

  AgreementReport report;
  for (std::size_t i = 0; i < k; ++i) {
    if (members[domains[i]] < 2) continue;
    std::size_t best = k;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      if (best == k || m(i, j) < m(i, best)) best = j;
    }
    NeighborResult r{m.labels()[i], domains[i], m.labels()[best], domains[best],
                     domains[best] == domains[i]};
    if (r.agrees) ++report.n_correct;
    report.neighbors.push_back(std::move(r));
  }
  report.nn_accuracy =
      static_cast<double>(report.n_correct) / static_cast<double>(report.neighbors.size());

  double within = 0.0, cross = 0.0;
  std::size_t n_within = 0, n_cross = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      if (domains[i] == domains[j]) {
        within += m(i, j);
        ++n_within;
      } else {
        cross += m(i, j);
        ++n_cross;
      }
    }
  }
  report.mean_within = within / static_cast<double>(n_within);
  if (n_cross > 0) report.mean_cross = cross / static_cast<double>(n_cross);
  return report;
}

inline std::string render_agreement(const AgreementReport& r) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "nearest-neighbor accuracy\t%.4f (%zu/%zu)\n", r.nn_accuracy,
                r.n_correct, r.neighbors.size());
  out += buf;
  std::snprintf(buf, sizeof(buf), "mean within-domain distance\t%.4f\n", r.mean_within);
  out += buf;
  if (r.mean_cross) {
    std::snprintf(buf, sizeof(buf), "mean cross-domain distance\t%.4f\n", *r.mean_cross);
    out += buf;
  } else {
    out += "mean cross-domain distance\tn/a\n";
  }
  out += "\nsection\tdomain\tnearest\tnearest_domain\tagrees\n";
  for (const auto& n : r.neighbors) {
    out += n.id + '\t' + n.domain + '\t' + n.nearest_id + '\t' + n.nearest_domain + '\t' +
           (n.agrees ? "yes" : "no") + '\n';
  }
  return out;
}

inline std::string render_matrix_csv(const DistanceMatrix& m) {
  std::string out = "section";
  for (const auto& l : m.labels()) out += ',' + csv::quote(l);
  out += '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += csv::quote(m.labels()[i]);
    for (std::size_t j = 0; j < m.size(); ++j) out += ',' + csv::format_fixed(m(i, j), 4);
    out += '\n';
  }
  return out;
}

struct ParsedMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
};

inline ParsedMatrix parse_matrix_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw DataError("matrix CSV is empty");
  ParsedMatrix out;
  out.labels.assign(rows[0].begin() + 1, rows[0].end());
  const auto k = out.labels.size();
  if (rows.size() != k + 1) throw DataError("matrix CSV is not square");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != k + 1 || rows[i][0] != out.labels[i - 1]) {
      throw DataError("matrix CSV row " + std::to_string(i) + " is malformed");
    }
    std::vector<double> row;
    for (std::size_t j = 1; j <= k; ++j) row.push_back(csv::parse_double(rows[i][j]));
    out.values.push_back(std::move(row));
  }
  return out;
}

struct HeatmapOptions {
  bool log_scale = false;
  int cell_size = 36;
};

namespace detail {

inline constexpr int kDarkest = 40;
inline constexpr int kLightest = 240;

// Gray level for a value: the smallest off-diagonal distance is darkest.
inline int gray_level(double v, double lo, double hi, bool log_scale) {
  if (hi <= lo) return (kDarkest + kLightest) / 2;
  double t = 0.0;
  if (log_scale) {
    constexpr double eps = 1e-3;
    t = (std::log(v + eps) - std::log(lo + eps)) / (std::log(hi + eps) - std::log(lo + eps));
  } else {
    t = (v - lo) / (hi - lo);
  }
  t = std::clamp(t, 0.0, 1.0);
  return kDarkest + static_cast<int>(std::lround(t * (kLightest - kDarkest)));
}

}  // namespace detail

// Grayscale SVG heatmap: one rect per cell, closer pairs darker, values
// printed in the cells. Diagonal cells are white.
inline std::string render_heatmap(const DistanceMatrix& m, const HeatmapOptions& opt = {}) {
  if (m.size() == 0) throw DataError("cannot render an empty matrix");
  const auto k = static_cast<int>(m.size());
  std::size_t longest = 0;
  for (const auto& l : m.labels()) longest = std::max(longest, l.size());
  const int margin = 12 + 7 * static_cast<int>(longest);
  const int cell = opt.cell_size;
  const int width = margin + k * cell + 10;
  const auto range = m.off_diagonal_range().value_or(std::pair{0.0, 0.0});

  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%d\" "
                "height=\"%d\" font-family=\"sans-serif\" font-size=\"11\">\n",
                width, width);
  out += buf;
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(width) + "\" fill=\"#ffffff\"/>\n";

  for (int i = 0; i < k; ++i) {
    const auto label = xml::escape(m.labels()[static_cast<std::size_t>(i)]);
    std::snprintf(buf, sizeof(buf), "<text x=\"%d\" y=\"%d\" text-anchor=\"end\">%s</text>\n",
                  margin - 6, margin + i * cell + cell / 2 + 4, label.c_str());
    out += buf;
    const int cx = margin + i * cell + cell / 2 + 4;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" transform=\"rotate(-90 %d %d)\">%s</text>\n", cx,
                  margin - 6, cx, margin - 6, label.c_str());
    out += buf;
  }

  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const int x = margin + j * cell;
      const int y = margin + i * cell;
      int level = 255;
      if (i != j) {
        level = detail::gray_level(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)),
                                   range.first, range.second, opt.log_scale);
      }
      std::snprintf(buf, sizeof(buf),
                    "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"#%02x%02x%02x\" "
                    "stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
                    x, y, cell, cell, level, level, level);
      out += buf;
      if (i == j) continue;
      std::snprintf(buf, sizeof(buf),
                    "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\" font-size=\"9\" "
                    "fill=\"%s\">%.2f</text>\n",
                    x + cell / 2, y + cell / 2 + 3, level < 128 ? "#ffffff" : "#000000",
                    m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      out += buf;
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace corpcomp

#endif  // CORPCOMP_MATRIX_HPP
