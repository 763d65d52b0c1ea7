#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scpm/miner.hpp"
#include "scpm/types.hpp"

namespace scpm {

// "patterns" array of the result JSON schema: one object per prevalent
// pattern with feature names, size, participation figures, row count and
// (when emitted) sorted instance-id rows. Sorted by (size, feature sequence).
nlohmann::json patterns_to_json(const MiningResult& result,
                                const std::vector<Feature>& features);

// {"per_size_seconds": {"2": ..}, "total_seconds": ..}
nlohmann::json timings_to_json(const MiningResult& result);

// Structural comparison of two mining results: pattern sets, participation
// figures (within tol) and row counts must agree; instance lists are
// compared when both sides carry them. Returns a short diff description, or
// nullopt when equivalent. Timings are ignored.
std::optional<std::string> diff_results(const MiningResult& a, const MiningResult& b,
                                        const std::vector<Feature>& features,
                                        double tol = 1e-12);

}  // namespace scpm
