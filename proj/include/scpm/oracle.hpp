#pragma once

#include <string>
#include <vector>

#include "scpm/dataset.hpp"
#include "scpm/miner.hpp"
#include "scpm/types.hpp"

namespace scpm {

// Exhaustive row-instance enumeration straight from the definitions: nested
// loops over the instance lists of the pattern's features, keeping a tuple
// iff every pair is within the radius (all-pairs haversine on the raw
// dataset; no graph, no index). Returns sorted instance-id rows.
std::vector<std::vector<std::string>> oracle_row_instances(const Dataset& dataset,
                                                           double radius_km,
                                                           const Pattern& pattern);

struct OracleGuard {
  std::size_t instance_cap = 2000;
  bool override_cap = false;
};

// Ground-truth miner: enumerates every feature combination up to max_size
// with no apriori pruning, computes participation exactly, and keeps
// patterns with at least one row instance and index >= min_prev.
// Refuses datasets above the instance cap unless overridden.
MiningResult oracle_mine(const Dataset& dataset, double radius_km, double min_prev,
                         std::size_t max_size, const OracleGuard& guard = {},
                         bool emit_instances = false);

}  // namespace scpm
