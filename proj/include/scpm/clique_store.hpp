#pragma once

#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "scpm/types.hpp"

namespace scpm {

struct PrefixHash {
  std::size_t operator()(const std::vector<VertexId>& prefix) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (VertexId v : prefix) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Clique instances of one pattern of size m, keyed by their first m-1
// vertices; the value set holds the possible last vertices. Also tracks the
// distinct participating vertices per feature position, which is all the
// prevalence computation needs.
class CliquePartition {
 public:
  explicit CliquePartition(std::size_t arity)
      : arity_(arity), participants_(arity) {
    if (arity < 2) throw std::logic_error("clique partition arity must be >= 2");
  }

  // Idempotent; returns true when the instance was new.
  bool insert(std::span<const VertexId> instance);

  bool contains(std::span<const VertexId> prefix, VertexId last) const;

  std::size_t arity() const { return arity_; }
  std::size_t instance_count() const { return instance_count_; }
  const std::vector<std::unordered_set<VertexId>>& participants() const { return participants_; }
  std::vector<std::size_t> participant_counts() const;

  const std::unordered_map<std::vector<VertexId>, std::unordered_set<VertexId>, PrefixHash>&
  by_prefix() const {
    return by_prefix_;
  }

  // Materialized instances, sorted; mainly for emission and tests.
  std::vector<RowInstance> instances_sorted() const;

 private:
  std::size_t arity_;
  std::unordered_map<std::vector<VertexId>, std::unordered_set<VertexId>, PrefixHash> by_prefix_;
  std::vector<std::unordered_set<VertexId>> participants_;
  std::size_t instance_count_ = 0;
};

// One generation of clique instances, partitioned per pattern. The miner
// keeps two of these (previous and current generation) and swaps them at
// each level. Partitions are independent, so distinct patterns may be read
// and written concurrently.
class CliqueStore {
 public:
  void adopt(const Pattern& pattern, CliquePartition&& partition);
  void clear() { partitions_.clear(); }
  bool empty() const { return partitions_.empty(); }

  const CliquePartition* partition(const Pattern& pattern) const;
  CliquePartition& open_partition(const Pattern& pattern);  // creates when absent

  // Two-lookup validation of a size-k cycle (k >= 4) against the size-(k-1)
  // instances: key = first k-2 vertices, checked in the stores of the
  // pattern minus its last feature and minus its second-to-last feature.
  // Those two cliques cover every pair except (v_{k-1}, v_k), which is the
  // cycle's closing-chain edge. Throws std::logic_error when a parent
  // partition is missing (cannot happen for apriori candidates whose
  // parents were prevalent).
  bool validate_clique(const Pattern& pattern, std::span<const VertexId> cycle) const;

  // Prefix join of the two parent stores of `pattern` (size k >= 3): for
  // every common (k-2)-prefix emits (prefix, v, w) over the parents' value
  // sets. Every true clique instance of the pattern is emitted, and each
  // emission has every pairwise edge except possibly (v, w).
  // Fn receives std::span<const VertexId>.
  template <typename Fn>
  void generate_cliques(const Pattern& pattern, Fn&& fn) const;

 private:
  const CliquePartition& parent_or_throw(const Pattern& parent) const;

  std::unordered_map<Pattern, CliquePartition, PatternHash> partitions_;
};

// Inserts a validated clique instance into the partition of its pattern,
// creating the partition on first use.
void insert_clique(CliqueStore& store, const Pattern& pattern,
                   std::span<const VertexId> instance);

template <typename Fn>
void CliqueStore::generate_cliques(const Pattern& pattern, Fn&& fn) const {
  const std::size_t k = pattern.size();
  if (k < 3) throw std::logic_error("generate_cliques requires pattern size >= 3");

  const CliquePartition& left = parent_or_throw(pattern.without(k - 1));
  const CliquePartition& right = parent_or_throw(pattern.without(k - 2));

  std::vector<VertexId> tuple(k);
  for (const auto& [prefix, lasts] : left.by_prefix()) {
    auto it = right.by_prefix().find(prefix);
    if (it == right.by_prefix().end()) continue;
    std::copy(prefix.begin(), prefix.end(), tuple.begin());
    for (VertexId v : lasts) {
      tuple[k - 2] = v;
      for (VertexId w : it->second) {
        tuple[k - 1] = w;
        fn(std::span<const VertexId>(tuple));
      }
    }
  }
}

}  // namespace scpm
