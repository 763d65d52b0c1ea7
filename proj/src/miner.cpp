#include "scpm/miner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <optional>

#include "scpm/clique_store.hpp"
#include "scpm/parallel.hpp"

namespace scpm {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::enum_g: return "enum-g";
    case Algorithm::enum_k: return "enum-k";
    case Algorithm::extend: return "extend";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  if (name == "enum-g") return Algorithm::enum_g;
  if (name == "enum-k") return Algorithm::enum_k;
  if (name == "extend") return Algorithm::extend;
  return std::nullopt;
}

std::size_t MiningResult::pattern_count() const {
  std::size_t n = 0;
  for (const auto& level : by_size) n += level.size();
  return n;
}

const MinedPattern* MiningResult::find(const Pattern& p) const {
  if (p.size() == 0 || p.size() > by_size.size()) return nullptr;
  for (const MinedPattern& mp : by_size[p.size() - 1]) {
    if (mp.pattern == p) return &mp;
  }
  return nullptr;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CandidateOutcome {
  std::vector<std::size_t> distinct_counts;
  std::size_t rows = 0;
  std::optional<CliquePartition> partition;   // kept by enum_k / extend
  std::vector<RowInstance> instances;         // vertex-id rows, when emitting
};

void finalize_from_partition(CandidateOutcome& out, CliquePartition&& part, bool emit) {
  out.rows = part.instance_count();
  out.distinct_counts = part.participant_counts();
  if (emit) out.instances = part.instances_sorted();
  out.partition = std::move(part);
}

CandidateOutcome run_candidate(const NeighborhoodGraph& g, const CliqueStore& previous,
                               const Pattern& pattern, const MiningParams& params,
                               std::atomic<bool>& fault_armed) {
  const std::size_t k = pattern.size();
  CandidateOutcome out;

  switch (params.algorithm) {
    case Algorithm::enum_g: {
      // Validation is a pairwise edge walk on the graph; nothing is stored
      // beyond the distinct participants.
      std::vector<std::unordered_set<VertexId>> participants(k);
      g.for_each_cycle(pattern, [&](std::span<const VertexId> tuple) {
        if (!g.is_clique(tuple)) return;
        for (std::size_t i = 0; i < k; ++i) participants[i].insert(tuple[i]);
        ++out.rows;
        if (params.emit_instances) out.instances.emplace_back(tuple.begin(), tuple.end());
      });
      out.distinct_counts.reserve(k);
      for (const auto& s : participants) out.distinct_counts.push_back(s.size());
      break;
    }

    case Algorithm::enum_k: {
      // Cycles come from the graph; validation is two prefix-key lookups in
      // the previous generation. Sizes 2 and 3 are cliques by construction
      // and are stored so the next size has parents to look up.
      CliquePartition part(k);
      g.for_each_cycle(pattern, [&](std::span<const VertexId> tuple) {
        if (k >= 4 && !previous.validate_clique(pattern, tuple)) return;
        part.insert(tuple);
      });
      finalize_from_partition(out, std::move(part), params.emit_instances);
      break;
    }

    case Algorithm::extend: {
      CliquePartition part(k);
      if (k == 2) {
        // Labeled-edge traversal seeds the store.
        g.for_each_cycle(pattern, [&](std::span<const VertexId> tuple) { part.insert(tuple); });
      } else {
        // Join candidates carry every pairwise edge except possibly the
        // final pair, so one edge lookup settles clique-ness.
        previous.generate_cliques(pattern, [&](std::span<const VertexId> tuple) {
          bool valid = g.has_edge(tuple[k - 2], tuple[k - 1]);
          if (params.inject_validation_fault && valid &&
              fault_armed.exchange(false, std::memory_order_relaxed)) {
            valid = false;
          }
          if (valid) part.insert(tuple);
        });
      }
      finalize_from_partition(out, std::move(part), params.emit_instances);
      break;
    }
  }
  return out;
}

std::vector<std::vector<std::string>> to_id_rows(const NeighborhoodGraph& g,
                                                 const std::vector<RowInstance>& rows) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const RowInstance& row : rows) {
    std::vector<std::string> ids;
    ids.reserve(row.size());
    for (VertexId v : row) ids.push_back(g.vertex(v).instance_id);
    out.push_back(std::move(ids));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

MiningResult mine(const NeighborhoodGraph& g, const MiningParams& params) {
  if (!(params.min_prev >= 0.0))
    throw std::invalid_argument("min_prev must be non-negative");
  if (params.max_size < 2) throw std::invalid_argument("max_size must be >= 2");

  const auto t_total = Clock::now();
  MiningResult result;

  // Size 1: singleton patterns are prevalent by default, index 1.
  std::vector<MinedPattern> singles;
  for (const Feature& f : g.features()) {
    const std::size_t n = g.instance_count(f.ordinal);
    if (n == 0) continue;
    MinedPattern mp;
    mp.pattern = Pattern({f.ordinal});
    mp.report.ratios = {1.0};
    mp.report.index = 1.0;
    mp.report.row_instance_count = n;
    if (params.emit_instances) {
      std::vector<RowInstance> rows;
      rows.reserve(n);
      for (VertexId v : g.vertices_of(f.ordinal)) rows.push_back({v});
      mp.instances = to_id_rows(g, rows);
    }
    singles.push_back(std::move(mp));
  }
  result.by_size.push_back(std::move(singles));

  std::vector<Pattern> frontier;
  frontier.reserve(result.by_size[0].size());
  for (const MinedPattern& mp : result.by_size[0]) frontier.push_back(mp.pattern);

  const bool keeps_store = params.algorithm != Algorithm::enum_g;
  CliqueStore previous;
  std::atomic<bool> fault_armed{params.inject_validation_fault};

  for (std::size_t k = 2; k <= params.max_size && !frontier.empty(); ++k) {
    const auto t_iter = Clock::now();
    const std::vector<Pattern> candidates = apriori_gen(frontier);
    if (candidates.empty()) break;

    // One task per candidate pattern; each writes only its own slot and its
    // own partition, so merging below needs no synchronization.
    std::vector<CandidateOutcome> outcomes(candidates.size());
    parallel_for_index(candidates.size(), params.thread_count, [&](std::size_t i) {
      outcomes[i] = run_candidate(g, previous, candidates[i], params, fault_armed);
    });

    CliqueStore current;
    std::vector<MinedPattern> kept;
    frontier.clear();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      CandidateOutcome& oc = outcomes[i];
      std::vector<std::size_t> totals;
      totals.reserve(k);
      for (FeatureId f : candidates[i].ordinals()) totals.push_back(g.instance_count(f));
      PrevalenceReport report = compute_prevalence(oc.distinct_counts, totals, oc.rows);
      if (oc.rows == 0 || report.index < params.min_prev) continue;

      if (keeps_store) current.adopt(candidates[i], std::move(*oc.partition));
      MinedPattern mp;
      mp.pattern = candidates[i];
      mp.report = std::move(report);
      if (params.emit_instances) mp.instances = to_id_rows(g, oc.instances);
      frontier.push_back(mp.pattern);
      kept.push_back(std::move(mp));
    }
    previous = std::move(current);

    result.per_size_seconds.emplace_back(k, seconds_since(t_iter));
    if (kept.empty()) break;
    result.by_size.push_back(std::move(kept));
  }

  while (!result.by_size.empty() && result.by_size.back().empty()) result.by_size.pop_back();
  result.total_seconds = seconds_since(t_total);
  return result;
}

}  // namespace scpm
