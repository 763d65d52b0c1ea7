#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "scpm/dataset.hpp"
#include "scpm/types.hpp"

namespace scpm {

struct Vertex {
  VertexId id = 0;
  std::string instance_id;
  FeatureId feature = 0;
  GeoPoint location{0.0, 0.0};
};

// Neighborhood graph: one vertex per feature instance, an undirected edge
// between every pair of distinct-feature instances within the distance
// threshold. Adjacency is stored per vertex, keyed by the neighbor's
// feature, which doubles as the edge-label index used by traversals.
// Immutable after construction except for update_radius.
class NeighborhoodGraph {
 public:
  NeighborhoodGraph(const Dataset& dataset, double radius_km);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edge_distance_.size(); }
  double radius_km() const { return radius_km_; }

  const std::vector<Feature>& features() const { return features_; }
  const Vertex& vertex(VertexId v) const { return vertices_[v]; }
  const std::vector<VertexId>& vertices_of(FeatureId f) const { return feature_index_[f]; }
  std::size_t instance_count(FeatureId f) const { return feature_index_[f].size(); }

  // Expected O(1); true iff (u, v) is an edge, in either argument order.
  bool has_edge(VertexId u, VertexId v) const;

  // Stored distance of an existing edge.
  double edge_distance(VertexId u, VertexId v) const;

  // Grid-backed radius query: all distinct-feature vertices within the
  // current threshold of v.
  std::vector<VertexId> search_neighbors(VertexId v) const;

  // Streams every feature-ordered cycle of the pattern: consecutive
  // positions connected, plus the closing edge back to the first vertex.
  // Size-2 patterns stream the labeled edge list. Each qualifying tuple is
  // emitted exactly once. Fn receives std::span<const VertexId>.
  template <typename Fn>
  void for_each_cycle(const Pattern& pattern, Fn&& fn) const;

  // True iff every pair in the tuple is connected. Sizes 2 and 3 are
  // cliques by construction of the cycle; larger tuples cost at most
  // k(k-3)/2 edge lookups beyond the cycle edges.
  bool is_clique(std::span<const VertexId> tuple) const;

  // Re-threshold in place. Growing searches the grid for pairs in
  // (old, new]; shrinking drops edges by their stored distance. The result
  // is edge-set-identical to a fresh build at the new radius.
  void update_radius(double new_radius_km);

  // Versioned little-endian snapshot with a trailing CRC-32.
  void save(std::ostream& out) const;
  static NeighborhoodGraph load(std::istream& in);

  struct EdgeRec {
    VertexId u = 0;  // endpoint with the lower feature ordinal
    VertexId v = 0;
    double distance_km = 0.0;

    friend bool operator==(const EdgeRec&, const EdgeRec&) = default;
    friend auto operator<=>(const EdgeRec&, const EdgeRec&) = default;
  };

  // Canonical edge list, sorted by (u, v); u carries the lower feature ordinal.
  std::vector<EdgeRec> edges_sorted() const;

  // Reconstructs the dataset view of the vertices (for the reference miner).
  Dataset to_dataset() const;

 private:
  NeighborhoodGraph() = default;

  using NeighborSets = std::unordered_map<FeatureId, std::unordered_set<VertexId>>;

  const std::unordered_set<VertexId>* neighbors(VertexId v, FeatureId f) const {
    auto it = adjacency_[v].find(f);
    return it == adjacency_[v].end() ? nullptr : &it->second;
  }

  static std::uint64_t edge_key(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  void add_edge(VertexId u, VertexId v, double distance);
  void remove_edge(VertexId u, VertexId v);
  void rebuild_grid();
  void build_indexes();
  void collect_new_edges(double lo_exclusive_km);

  // Uniform grid over (lat, lng) cells sized to cover the radius at the
  // dataset's extreme latitude; neighbor search scans the 3x3 block.
  struct Grid {
    double cell_lat_deg = 1.0;
    double cell_lng_deg = 1.0;
    std::unordered_map<std::uint64_t, std::vector<VertexId>> cells;

    std::uint64_t key_for(const GeoPoint& p) const;
  };

  std::vector<Feature> features_;
  std::vector<Vertex> vertices_;
  std::vector<NeighborSets> adjacency_;
  std::vector<std::vector<VertexId>> feature_index_;
  std::unordered_map<std::uint64_t, double> edge_distance_;
  double radius_km_ = 0.0;
  Grid grid_;
};

template <typename Fn>
void NeighborhoodGraph::for_each_cycle(const Pattern& pattern, Fn&& fn) const {
  const std::size_t k = pattern.size();
  if (k < 2) throw std::logic_error("for_each_cycle requires a pattern of size >= 2");

  std::vector<VertexId> tuple(k);
  const std::span<const VertexId> view(tuple);

  if (k == 2) {
    for (VertexId v : feature_index_[pattern[0]]) {
      const auto* nbrs = neighbors(v, pattern[1]);
      if (!nbrs) continue;
      tuple[0] = v;
      for (VertexId w : *nbrs) {
        tuple[1] = w;
        fn(view);
      }
    }
    return;
  }

  // Walk the label chain f1:f2, ..., f_{k-1}:f_k, then close against the
  // start vertex. Positions carry distinct features, so vertices never
  // repeat within a tuple.
  auto extend = [&](auto&& self, std::size_t pos,
                    const std::unordered_set<VertexId>& closing) -> void {
    const auto* nbrs = neighbors(tuple[pos - 1], pattern[pos]);
    if (!nbrs) return;
    if (pos + 1 == k) {
      const bool scan_chain = nbrs->size() <= closing.size();
      const auto& scan = scan_chain ? *nbrs : closing;
      const auto& check = scan_chain ? closing : *nbrs;
      for (VertexId w : scan) {
        if (check.contains(w)) {
          tuple[pos] = w;
          fn(view);
        }
      }
      return;
    }
    for (VertexId w : *nbrs) {
      tuple[pos] = w;
      self(self, pos + 1, closing);
    }
  };

  for (VertexId v : feature_index_[pattern[0]]) {
    const auto* closing = neighbors(v, pattern[k - 1]);
    if (!closing || closing->empty()) continue;
    tuple[0] = v;
    extend(extend, 1, *closing);
  }
}

}  // namespace scpm
