#ifndef CORPCOMP_METAEVAL_HPP
#define CORPCOMP_METAEVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corpcomp/csv.hpp"
#include "corpcomp/distance.hpp"
#include "corpcomp/error.hpp"
#include "corpcomp/frequency.hpp"
#include "corpcomp/ingest.hpp"
#include "corpcomp/matrix.hpp"
#include "corpcomp/parallel.hpp"

namespace corpcomp {

// Pearson product-moment correlation. Throws UndefinedCorrelation when
// either vector is constant.
inline double pearson_r(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DataError("pearson_r: length mismatch (" + std::to_string(xs.size()) + " vs " +
                    std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 2) throw DataError("pearson_r: need at least 2 points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("correlation undefined: constant input");
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

// Source- and target-side profiles of the usable documents of a
// collection, ordered by document id.
struct SideProfiles {
  std::string source_lang;
  std::string target_lang;
  std::vector<std::string> ids;
  std::vector<FrequencyList> source;
  std::vector<FrequencyList> target;
  std::vector<std::string> warnings;
};

inline SideProfiles prepare_sides(const std::vector<ParallelDocument>& docs, const std::string& src,
                                  const std::string& tgt, std::size_t threads = 1) {
  if (language_matches(src, tgt)) throw DataError("source and target language are the same");
  std::vector<const ParallelDocument*> order;
  for (const auto& d : docs) order.push_back(&d);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i]->id == order[i - 1]->id) throw DataError("duplicate document id '" + order[i]->id + "'");
  }

  SideProfiles sides;
  sides.source_lang = primary_subtag(src);
  sides.target_lang = primary_subtag(tgt);
  std::vector<const ParallelDocument*> usable;
  for (const auto* d : order) {
    if (!has_language(*d, src) || !has_language(*d, tgt)) {
      sides.warnings.push_back("document '" + d->id + "' lacks a " + src + " or " + tgt +
                               " side and was excluded");
      continue;
    }
    usable.push_back(d);
  }

  std::vector<std::optional<FrequencyList>> s(usable.size()), t(usable.size());
  std::vector<char> empty(usable.size(), 0);
  parallel_for(usable.size(), threads, [&](std::size_t i) {
    const auto cs = extract_side(*usable[i], src);
    const auto ct = extract_side(*usable[i], tgt);
    if (cs.empty() || ct.empty()) {
      empty[i] = 1;
      return;
    }
    s[i].emplace(build_frequency_list(cs));
    t[i].emplace(build_frequency_list(ct));
  });
  for (std::size_t i = 0; i < usable.size(); ++i) {
    if (empty[i]) {
      sides.warnings.push_back("document '" + usable[i]->id + "' has an empty side and was excluded");
      continue;
    }
    sides.ids.push_back(usable[i]->id);
    sides.source.push_back(std::move(*s[i]));
    sides.target.push_back(std::move(*t[i]));
  }
  if (sides.ids.size() < 3) {
    throw DataError("meta-evaluation needs at least 3 usable documents, got " +
                    std::to_string(sides.ids.size()));
  }
  return sides;
}

// Aligned per-pair distances. pairs[p] = (i, j) with i < j indexes ids;
// directed variants are oriented i -> j (ab) or j -> i (ba) on both sides.
struct SideVectors {
  std::vector<std::string> ids;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> source;
  std::vector<double> target;
  std::vector<std::string> warnings;
};

inline SideVectors side_distance_vectors(const SideProfiles& sides, const MetricConfig& cfg,
                                         std::size_t threads = 1) {
  const auto ms = pairwise_matrix(sides.source, cfg, threads);
  const auto mt = pairwise_matrix(sides.target, cfg, threads);
  SideVectors v;
  v.ids = sides.ids;
  v.warnings = sides.warnings;
  for (const auto& w : ms.warnings()) v.warnings.push_back(sides.source_lang + ": " + w);
  for (const auto& w : mt.warnings()) v.warnings.push_back(sides.target_lang + ": " + w);
  const auto k = sides.ids.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      v.pairs.emplace_back(i, j);
      v.source.push_back(ms(i, j));
      v.target.push_back(mt(i, j));
    }
  }
  return v;
}

inline SideVectors side_distance_vectors(const std::vector<ParallelDocument>& docs,
                                         const std::string& src, const std::string& tgt,
                                         const MetricConfig& cfg, std::size_t threads = 1) {
  return side_distance_vectors(prepare_sides(docs, src, tgt, threads), cfg, threads);
}

struct PairPoint {
  std::string a_id;
  std::string b_id;
  double d_source = 0.0;
  double d_target = 0.0;
};

struct VariantResult {
  std::string name;
  MetricConfig config;
  std::optional<double> r;  // nullopt: correlation undefined
  std::vector<PairPoint> points;
};

struct MetaEvalReport {
  std::string source_lang;
  std::string target_lang;
  std::size_t n_sections = 0;
  std::vector<VariantResult> results;  // in request order
  std::vector<std::string> ranking;    // names by descending r, then name
  std::vector<std::string> warnings;

  const VariantResult& result(std::string_view name) const {
    for (const auto& r : results) {
      if (r.name == name) return r;
    }
    throw DataError("no variant '" + std::string(name) + "' in report");
  }
};

// Short name of a metric configuration: the variant, plus the top-n size
// and lookup policy when they differ from the defaults ("min", "avg/n=100",
// "ab/full").
inline std::string variant_name(const MetricConfig& cfg) {
  std::string name(to_string(cfg.variant));
  if (cfg.n != kDefaultTopN) name += "/n=" + std::to_string(cfg.n);
  if (cfg.missing != MissingWordPolicy::top_n_lookup) name += "/" + std::string(to_string(cfg.missing));
  return name;
}

inline std::string variant_description(Variant v) {
  switch (v) {
    case Variant::minimum: return "Minimum distance";
    case Variant::average: return "Average distance";
    case Variant::directed_ab: return "One-direction distance (A->B)";
    case Variant::directed_ba: return "One-direction distance (B->A)";
    case Variant::symmetric_common: return "Symmetric common-word distance";
  }
  return "";
}

inline MetaEvalReport metaeval_report(const SideProfiles& sides, const std::vector<MetricConfig>& variants,
                                      std::size_t threads = 1) {
  if (variants.empty()) throw DataError("no metric variants requested");
  MetaEvalReport report;
  report.source_lang = sides.source_lang;
  report.target_lang = sides.target_lang;
  report.n_sections = sides.ids.size();
  report.warnings = sides.warnings;

  std::set<std::string> names;
  for (const auto& cfg : variants) {
    VariantResult res;
    res.name = variant_name(cfg);
    res.config = cfg;
    if (!names.insert(res.name).second) throw DataError("variant '" + res.name + "' requested twice");

    auto vec = side_distance_vectors(sides, cfg, threads);
    for (std::size_t w = sides.warnings.size(); w < vec.warnings.size(); ++w) {
      report.warnings.push_back(res.name + ": " + vec.warnings[w]);
    }
    for (std::size_t p = 0; p < vec.pairs.size(); ++p) {
      res.points.push_back({vec.ids[vec.pairs[p].first], vec.ids[vec.pairs[p].second],
                            vec.source[p], vec.target[p]});
    }
    try {
      res.r = pearson_r(vec.source, vec.target);
    } catch (const UndefinedCorrelation&) {
      report.warnings.push_back(res.name + ": correlation undefined (constant distances)");
    }
    report.results.push_back(std::move(res));
  }

  std::vector<const VariantResult*> ranked;
  for (const auto& r : report.results) {
    if (r.r) ranked.push_back(&r);
  }
  std::sort(ranked.begin(), ranked.end(), [](const VariantResult* a, const VariantResult* b) {
    if (*a->r != *b->r) return *a->r > *b->r;
    return a->name < b->name;
  });
  for (const auto* r : ranked) report.ranking.push_back(r->name);
  return report;
}

inline MetaEvalReport metaeval_report(const std::vector<ParallelDocument>& docs, const std::string& src,
                                      const std::string& tgt, const std::vector<MetricConfig>& variants,
                                      std::size_t threads = 1) {
  return metaeval_report(prepare_sides(docs, src, tgt, threads), variants, threads);
}

namespace detail {

// Ranked results first, then undefined ones in request order.
inline std::vector<const VariantResult*> report_rows(const MetaEvalReport& report) {
  std::vector<const VariantResult*> rows;
  for (const auto& name : report.ranking) rows.push_back(&report.result(name));
  for (const auto& r : report.results) {
    if (!r.r) rows.push_back(&r);
  }
  return rows;
}

}  // namespace detail

// Human-readable table: one row per variant with its r and point count.
inline std::string render_report_table(const MetaEvalReport& report) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "Pearson's r between %s and %s distances over %zu sections\n\n",
                report.source_lang.c_str(), report.target_lang.c_str(), report.n_sections);
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-14s %-32s %-13s %s\n", "variant", "metric", "r-correlation",
                "n_points");
  out += buf;
  for (const auto* r : detail::report_rows(report)) {
    const auto value = r->r ? csv::format_fixed(*r->r, 4) : std::string("n/a");
    std::snprintf(buf, sizeof(buf), "%-14s %-32s %-13s %zu\n", r->name.c_str(),
                  variant_description(r->config.variant).c_str(), value.c_str(), r->points.size());
    out += buf;
  }
  return out;
}

inline std::string render_report_csv(const MetaEvalReport& report) {
  std::string out = "variant,r,n_points\n";
  for (const auto* r : detail::report_rows(report)) {
    out += csv::quote(r->name) + ',' + (r->r ? csv::format_exact(*r->r) : std::string("n/a")) + ',' +
           std::to_string(r->points.size()) + '\n';
  }
  return out;
}

// Point cloud of one variant for plotting (x = source, y = target).
inline std::string export_scatter(const MetaEvalReport& report, std::string_view variant) {
  const auto& res = report.result(variant);
  std::string out = "pair_a,pair_b,d_source,d_target\n";
  for (const auto& p : res.points) {
    out += csv::quote(p.a_id) + ',' + csv::quote(p.b_id) + ',' + csv::format_exact(p.d_source) + ',' +
           csv::format_exact(p.d_target) + '\n';
  }
  return out;
}

}  // namespace corpcomp

#endif  // CORPCOMP_METAEVAL_HPP
