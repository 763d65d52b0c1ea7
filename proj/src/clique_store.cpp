#include "scpm/clique_store.hpp"

#include <algorithm>

namespace scpm {

bool CliquePartition::insert(std::span<const VertexId> instance) {
  if (instance.size() != arity_)
    throw std::logic_error("clique instance arity does not match its pattern");

  std::vector<VertexId> prefix(instance.begin(), instance.end() - 1);
  const VertexId last = instance.back();
  if (!by_prefix_[std::move(prefix)].insert(last).second) return false;

  for (std::size_t i = 0; i < arity_; ++i) participants_[i].insert(instance[i]);
  ++instance_count_;
  return true;
}

bool CliquePartition::contains(std::span<const VertexId> prefix, VertexId last) const {
  // Transparent lookup would avoid this copy; prefixes are tiny.
  std::vector<VertexId> key(prefix.begin(), prefix.end());
  auto it = by_prefix_.find(key);
  return it != by_prefix_.end() && it->second.contains(last);
}

std::vector<std::size_t> CliquePartition::participant_counts() const {
  std::vector<std::size_t> out;
  out.reserve(participants_.size());
  for (const auto& s : participants_) out.push_back(s.size());
  return out;
}

std::vector<RowInstance> CliquePartition::instances_sorted() const {
  std::vector<RowInstance> out;
  out.reserve(instance_count_);
  for (const auto& [prefix, lasts] : by_prefix_) {
    for (VertexId last : lasts) {
      RowInstance row(prefix);
      row.push_back(last);
      out.push_back(std::move(row));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void CliqueStore::adopt(const Pattern& pattern, CliquePartition&& partition) {
  if (partition.arity() != pattern.size())
    throw std::logic_error("partition arity does not match its pattern");
  partitions_.insert_or_assign(pattern, std::move(partition));
}

const CliquePartition* CliqueStore::partition(const Pattern& pattern) const {
  auto it = partitions_.find(pattern);
  return it == partitions_.end() ? nullptr : &it->second;
}

CliquePartition& CliqueStore::open_partition(const Pattern& pattern) {
  auto it = partitions_.find(pattern);
  if (it == partitions_.end())
    it = partitions_.emplace(pattern, CliquePartition(pattern.size())).first;
  return it->second;
}

const CliquePartition& CliqueStore::parent_or_throw(const Pattern& parent) const {
  const CliquePartition* p = partition(parent);
  if (!p) throw std::logic_error("parent pattern store is missing");
  return *p;
}

bool CliqueStore::validate_clique(const Pattern& pattern,
                                  std::span<const VertexId> cycle) const {
  const std::size_t k = pattern.size();
  if (k < 4) throw std::logic_error("validate_clique requires pattern size >= 4");
  if (cycle.size() != k) throw std::logic_error("cycle arity does not match its pattern");

  const auto key = cycle.first(k - 2);
  return parent_or_throw(pattern.without(k - 1)).contains(key, cycle[k - 2]) &&
         parent_or_throw(pattern.without(k - 2)).contains(key, cycle[k - 1]);
}

void insert_clique(CliqueStore& store, const Pattern& pattern,
                   std::span<const VertexId> instance) {
  if (pattern.size() != instance.size())
    throw std::logic_error("clique instance arity does not match its pattern");
  store.open_partition(pattern).insert(instance);
}

}  // namespace scpm
