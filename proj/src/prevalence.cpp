#include "scpm/prevalence.hpp"

#include <algorithm>
#include <unordered_set>

namespace scpm {

std::vector<Pattern> apriori_gen(std::span<const Pattern> prevalent) {
  if (prevalent.empty()) return {};

  const std::size_t k1 = prevalent.front().size();
  for (const Pattern& p : prevalent) {
    if (p.size() != k1) throw std::logic_error("apriori_gen input patterns must share one size");
  }

  std::vector<Pattern> sorted(prevalent.begin(), prevalent.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::unordered_set<Pattern, PatternHash> present(sorted.begin(), sorted.end());

  auto shares_prefix = [&](const Pattern& a, const Pattern& b) {
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      if (a[i] != b[i]) return false;
    }
    return true;
  };

  std::vector<Pattern> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (!shares_prefix(sorted[i], sorted[j])) break;  // sorted: prefix block is contiguous

      // Join: identical first k-2 features, sorted order puts the smaller
      // last feature first, so the union is already canonical.
      std::vector<FeatureId> joined = sorted[i].ordinals();
      joined.push_back(sorted[j].back());
      Pattern candidate(std::move(joined));

      // Prune: every size-(k-1) subset must be prevalent.
      bool keep = true;
      for (std::size_t drop = 0; drop + 2 < candidate.size() && keep; ++drop) {
        keep = present.contains(candidate.without(drop));
      }
      if (keep) out.push_back(std::move(candidate));
    }
  }
  // Join order over the sorted input already yields sorted output.
  return out;
}

PrevalenceReport compute_prevalence(std::span<const std::size_t> distinct_counts,
                                    std::span<const std::size_t> feature_totals,
                                    std::size_t row_instance_count) {
  if (distinct_counts.size() != feature_totals.size())
    throw std::logic_error("compute_prevalence: count/total arity mismatch");

  PrevalenceReport report;
  report.row_instance_count = row_instance_count;
  report.ratios.reserve(distinct_counts.size());
  report.index = distinct_counts.empty() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < distinct_counts.size(); ++i) {
    if (feature_totals[i] == 0) throw std::logic_error("compute_prevalence: zero denominator");
    const double ratio =
        static_cast<double>(distinct_counts[i]) / static_cast<double>(feature_totals[i]);
    report.ratios.push_back(ratio);
    report.index = std::min(report.index, ratio);
  }
  return report;
}

}  // namespace scpm
