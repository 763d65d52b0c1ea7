#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scpm/graph.hpp"
#include "scpm/prevalence.hpp"
#include "scpm/types.hpp"

namespace scpm {

enum class Algorithm { enum_g, enum_k, extend };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);

struct MiningParams {
  double min_prev = 0.1;
  std::size_t max_size = 4;
  Algorithm algorithm = Algorithm::enum_g;
  bool emit_instances = false;
  unsigned thread_count = 1;

  // Test hook: flips one validation outcome in the extend path so the bench
  // consistency check has a failure to detect.
  bool inject_validation_fault = false;
};

struct MinedPattern {
  Pattern pattern;
  PrevalenceReport report;
  // Instance-id rows, sorted; populated only when instances are emitted.
  std::vector<std::vector<std::string>> instances;
};

struct MiningResult {
  // by_size[0] holds size-1 patterns; trailing sizes with no prevalent
  // pattern are trimmed, so present sizes are contiguous.
  std::vector<std::vector<MinedPattern>> by_size;
  // One entry per executed iteration (sizes 2..), in order.
  std::vector<std::pair<std::size_t, double>> per_size_seconds;
  double total_seconds = 0.0;

  std::size_t pattern_count() const;
  const MinedPattern* find(const Pattern& p) const;
};

// Runs the selected mining algorithm over the graph. All three algorithms
// produce identical results; they differ in how candidate instances are
// enumerated and validated:
//   enum_g  - cycles by graph traversal, validated by pairwise edge lookups
//   enum_k  - cycles by graph traversal, validated against the previous
//             generation's clique store (two prefix-key lookups)
//   extend  - candidates by joining the previous generation's instances,
//             validated by a single closing edge lookup
MiningResult mine(const NeighborhoodGraph& graph, const MiningParams& params);

}  // namespace scpm
