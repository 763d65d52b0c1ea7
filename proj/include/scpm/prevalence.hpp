#pragma once

#include <span>
#include <vector>

#include "scpm/types.hpp"

namespace scpm {

struct PrevalenceReport {
  std::vector<double> ratios;       // per feature position of the pattern
  double index = 0.0;               // min over ratios
  std::size_t row_instance_count = 0;
};

// Classic apriori candidate generation: joins size-(k-1) patterns sharing a
// (k-2)-feature prefix, then prunes candidates with any absent subset.
// Input patterns must all have the same size; output is sorted and
// independent of input order. Empty input yields empty output.
std::vector<Pattern> apriori_gen(std::span<const Pattern> prevalent);

// Participation ratios and index from per-position distinct-participant
// counts and per-feature instance totals. Throws std::logic_error on a zero
// denominator.
PrevalenceReport compute_prevalence(std::span<const std::size_t> distinct_counts,
                                    std::span<const std::size_t> feature_totals,
                                    std::size_t row_instance_count);

}  // namespace scpm
