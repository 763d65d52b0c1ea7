#include "scpm/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <span>
#include <unordered_set>

#include "scpm/geo.hpp"
#include "scpm/prevalence.hpp"

namespace scpm {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::vector<std::size_t>> index_by_feature(const Dataset& dataset) {
  std::vector<std::vector<std::size_t>> index(dataset.features.size());
  for (std::size_t i = 0; i < dataset.instances.size(); ++i)
    index[dataset.instances[i].feature].push_back(i);
  return index;
}

// Enumerates qualifying tuples position by position; a candidate instance
// joins only after a direct distance check against every instance already
// chosen, so each emitted tuple has had all pairs verified.
template <typename Fn>
void enumerate_rows(const Dataset& dataset,
                    const std::vector<std::vector<std::size_t>>& index, double radius_km,
                    const Pattern& pattern, Fn&& fn) {
  const std::size_t k = pattern.size();
  std::vector<std::size_t> chosen(k);

  auto recurse = [&](auto&& self, std::size_t pos) -> void {
    for (std::size_t cand : index[pattern[pos]]) {
      bool ok = true;
      for (std::size_t j = 0; j < pos && ok; ++j) {
        ok = great_circle_distance(dataset.instances[chosen[j]].location,
                                   dataset.instances[cand].location) <= radius_km;
      }
      if (!ok) continue;
      chosen[pos] = cand;
      if (pos + 1 == k) {
        fn(std::span<const std::size_t>(chosen));
      } else {
        self(self, pos + 1);
      }
    }
  };
  recurse(recurse, 0);
}

void combinations(std::size_t feature_count, std::size_t k,
                  const std::function<void(const std::vector<FeatureId>&)>& fn) {
  std::vector<FeatureId> combo(k);
  auto recurse = [&](auto&& self, std::size_t pos, FeatureId from) -> void {
    for (FeatureId f = from; f < feature_count; ++f) {
      combo[pos] = f;
      if (pos + 1 == k) {
        fn(combo);
      } else {
        self(self, pos + 1, f + 1);
      }
    }
  };
  if (k > 0 && k <= feature_count) recurse(recurse, 0, 0);
}

}  // namespace

std::vector<std::vector<std::string>> oracle_row_instances(const Dataset& dataset,
                                                           double radius_km,
                                                           const Pattern& pattern) {
  dataset.validate();
  if (pattern.empty()) throw std::invalid_argument("pattern must be non-empty");
  if (pattern.back() >= dataset.features.size())
    throw std::invalid_argument("pattern references an unknown feature ordinal");

  const auto index = index_by_feature(dataset);
  std::vector<std::vector<std::string>> rows;
  enumerate_rows(dataset, index, radius_km, pattern, [&](std::span<const std::size_t> tuple) {
    std::vector<std::string> ids;
    ids.reserve(tuple.size());
    for (std::size_t i : tuple) ids.push_back(dataset.instances[i].id);
    rows.push_back(std::move(ids));
  });
  std::sort(rows.begin(), rows.end());
  return rows;
}

MiningResult oracle_mine(const Dataset& dataset, double radius_km, double min_prev,
                         std::size_t max_size, const OracleGuard& guard,
                         bool emit_instances) {
  dataset.validate();
  if (!(radius_km >= 0.0)) throw std::invalid_argument("radius_km must be non-negative");
  if (!(min_prev >= 0.0)) throw std::invalid_argument("min_prev must be non-negative");
  if (max_size < 1) throw std::invalid_argument("max_size must be >= 1");
  if (dataset.instances.size() > guard.instance_cap && !guard.override_cap) {
    throw std::runtime_error(
        "oracle refuses " + std::to_string(dataset.instances.size()) +
        " instances (cap " + std::to_string(guard.instance_cap) +
        "); raise the cap or pass the override to force an exhaustive run");
  }

  const auto t_total = Clock::now();
  const auto index = index_by_feature(dataset);

  MiningResult result;

  std::vector<MinedPattern> singles;
  for (const Feature& f : dataset.features) {
    const std::size_t n = index[f.ordinal].size();
    if (n == 0) continue;
    MinedPattern mp;
    mp.pattern = Pattern({f.ordinal});
    mp.report.ratios = {1.0};
    mp.report.index = 1.0;
    mp.report.row_instance_count = n;
    if (emit_instances) {
      for (std::size_t i : index[f.ordinal]) mp.instances.push_back({dataset.instances[i].id});
      std::sort(mp.instances.begin(), mp.instances.end());
    }
    singles.push_back(std::move(mp));
  }
  result.by_size.push_back(std::move(singles));

  for (std::size_t k = 2; k <= max_size && k <= dataset.features.size(); ++k) {
    const auto t_iter = Clock::now();
    std::vector<MinedPattern> level;

    combinations(dataset.features.size(), k, [&](const std::vector<FeatureId>& combo) {
      Pattern pattern(combo);
      std::vector<std::unordered_set<std::size_t>> participants(k);
      std::size_t rows = 0;
      std::vector<std::vector<std::string>> id_rows;
      enumerate_rows(dataset, index, radius_km, pattern,
                     [&](std::span<const std::size_t> tuple) {
                       for (std::size_t i = 0; i < k; ++i) participants[i].insert(tuple[i]);
                       ++rows;
                       if (emit_instances) {
                         std::vector<std::string> ids;
                         ids.reserve(k);
                         for (std::size_t t : tuple) ids.push_back(dataset.instances[t].id);
                         id_rows.push_back(std::move(ids));
                       }
                     });

      std::vector<std::size_t> distinct;
      std::vector<std::size_t> totals;
      distinct.reserve(k);
      totals.reserve(k);
      for (std::size_t i = 0; i < k; ++i) {
        distinct.push_back(participants[i].size());
        totals.push_back(index[pattern[i]].size());
      }
      if (rows == 0) return;
      PrevalenceReport report = compute_prevalence(distinct, totals, rows);
      if (report.index < min_prev) return;

      MinedPattern mp;
      mp.pattern = std::move(pattern);
      mp.report = std::move(report);
      if (emit_instances) {
        std::sort(id_rows.begin(), id_rows.end());
        mp.instances = std::move(id_rows);
      }
      level.push_back(std::move(mp));
    });

    result.per_size_seconds.emplace_back(k, std::chrono::duration<double>(Clock::now() - t_iter).count());
    result.by_size.push_back(std::move(level));
  }

  // Match the miners' early-termination shape: present sizes are contiguous.
  while (!result.by_size.empty() && result.by_size.back().empty()) result.by_size.pop_back();

  result.total_seconds = std::chrono::duration<double>(Clock::now() - t_total).count();
  return result;
}

}  // namespace scpm
