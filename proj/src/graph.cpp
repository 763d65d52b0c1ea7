#include "scpm/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "scpm/crc32.hpp"
#include "scpm/geo.hpp"

namespace scpm {

namespace {

std::uint64_t pack_cell(std::int64_t ix, std::int64_t iy) {
  return (static_cast<std::uint64_t>(ix) << 32) ^ static_cast<std::uint64_t>(iy & 0xFFFFFFFF);
}

}  // namespace

std::uint64_t NeighborhoodGraph::Grid::key_for(const GeoPoint& p) const {
  const auto ix = static_cast<std::int64_t>(std::floor(p.lat() / cell_lat_deg));
  const auto iy = static_cast<std::int64_t>(std::floor(p.lng() / cell_lng_deg));
  return pack_cell(ix, iy);
}

NeighborhoodGraph::NeighborhoodGraph(const Dataset& dataset, double radius_km) {
  if (!(radius_km >= 0.0) || !std::isfinite(radius_km))
    throw std::invalid_argument("radius_km must be a non-negative finite number");
  dataset.validate();

  features_ = dataset.features;
  radius_km_ = radius_km;

  vertices_.reserve(dataset.instances.size());
  for (const FeatureInstance& inst : dataset.instances) {
    vertices_.push_back(Vertex{static_cast<VertexId>(vertices_.size()), inst.id, inst.feature,
                               inst.location});
  }

  build_indexes();
  rebuild_grid();
  collect_new_edges(-1.0);  // everything within the radius
}

void NeighborhoodGraph::build_indexes() {
  adjacency_.assign(vertices_.size(), NeighborSets{});
  feature_index_.assign(features_.size(), {});
  for (const Vertex& v : vertices_) feature_index_[v.feature].push_back(v.id);
}

void NeighborhoodGraph::rebuild_grid() {
  grid_.cells.clear();

  double max_abs_lat = 0.0;
  for (const Vertex& v : vertices_)
    max_abs_lat = std::max(max_abs_lat, std::abs(v.location.lat()));
  max_abs_lat = std::min(max_abs_lat, 89.0);  // keep cells bounded near the poles

  // Cells must span at least the radius at every dataset latitude; the 0.1%
  // pad absorbs the curvature correction the planar bound ignores.
  const double span_km = std::max(radius_km_, 1e-9) * 1.001;
  grid_.cell_lat_deg = span_km / km_per_degree_lat();
  grid_.cell_lng_deg = span_km / km_per_degree_lng(max_abs_lat);

  for (const Vertex& v : vertices_) grid_.cells[grid_.key_for(v.location)].push_back(v.id);
}

void NeighborhoodGraph::add_edge(VertexId u, VertexId v, double distance) {
  adjacency_[u][vertices_[v].feature].insert(v);
  adjacency_[v][vertices_[u].feature].insert(u);
  edge_distance_.emplace(edge_key(u, v), distance);
}

void NeighborhoodGraph::remove_edge(VertexId u, VertexId v) {
  auto drop = [&](VertexId from, VertexId to) {
    auto it = adjacency_[from].find(vertices_[to].feature);
    if (it == adjacency_[from].end()) return;
    it->second.erase(to);
    if (it->second.empty()) adjacency_[from].erase(it);
  };
  drop(u, v);
  drop(v, u);
  edge_distance_.erase(edge_key(u, v));
}

// Scans every vertex's 3x3 grid block and inserts each qualifying pair once,
// from its lower-id endpoint. Pairs at distance <= lo_exclusive_km are
// assumed present already (the incremental-growth path).
void NeighborhoodGraph::collect_new_edges(double lo_exclusive_km) {
  for (const Vertex& v : vertices_) {
    const auto ix = static_cast<std::int64_t>(std::floor(v.location.lat() / grid_.cell_lat_deg));
    const auto iy = static_cast<std::int64_t>(std::floor(v.location.lng() / grid_.cell_lng_deg));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto cell = grid_.cells.find(pack_cell(ix + dx, iy + dy));
        if (cell == grid_.cells.end()) continue;
        for (VertexId w : cell->second) {
          if (w <= v.id || vertices_[w].feature == v.feature) continue;
          const double d = great_circle_distance(v.location, vertices_[w].location);
          if (d <= radius_km_ && d > lo_exclusive_km) add_edge(v.id, w, d);
        }
      }
    }
  }
}

bool NeighborhoodGraph::has_edge(VertexId u, VertexId v) const {
  const auto* nbrs = neighbors(u, vertices_[v].feature);
  return nbrs != nullptr && nbrs->contains(v);
}

double NeighborhoodGraph::edge_distance(VertexId u, VertexId v) const {
  auto it = edge_distance_.find(edge_key(u, v));
  if (it == edge_distance_.end()) throw std::logic_error("edge_distance on a non-edge");
  return it->second;
}

std::vector<VertexId> NeighborhoodGraph::search_neighbors(VertexId v) const {
  const Vertex& vv = vertices_[v];
  std::vector<VertexId> out;
  const auto ix = static_cast<std::int64_t>(std::floor(vv.location.lat() / grid_.cell_lat_deg));
  const auto iy = static_cast<std::int64_t>(std::floor(vv.location.lng() / grid_.cell_lng_deg));
  for (std::int64_t dx = -1; dx <= 1; ++dx) {
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      auto cell = grid_.cells.find(pack_cell(ix + dx, iy + dy));
      if (cell == grid_.cells.end()) continue;
      for (VertexId w : cell->second) {
        if (w == v || vertices_[w].feature == vv.feature) continue;
        if (great_circle_distance(vv.location, vertices_[w].location) <= radius_km_)
          out.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool NeighborhoodGraph::is_clique(std::span<const VertexId> tuple) const {
  const std::size_t k = tuple.size();
  if (k <= 3) return true;
  for (std::size_t i = 0; i + 2 < k; ++i) {
    const std::size_t j_end = (i == 0) ? k - 1 : k;  // (first, last) is a cycle edge
    for (std::size_t j = i + 2; j < j_end; ++j) {
      if (!has_edge(tuple[i], tuple[j])) return false;
    }
  }
  return true;
}

void NeighborhoodGraph::update_radius(double new_radius_km) {
  if (!(new_radius_km >= 0.0) || !std::isfinite(new_radius_km))
    throw std::invalid_argument("radius_km must be a non-negative finite number");
  if (new_radius_km == radius_km_) return;

  if (new_radius_km < radius_km_) {
    // The stored distance property makes deletion a pure scan.
    std::vector<std::uint64_t> doomed;
    for (const auto& [key, dist] : edge_distance_) {
      if (dist > new_radius_km) doomed.push_back(key);
    }
    for (std::uint64_t key : doomed) {
      remove_edge(static_cast<VertexId>(key >> 32), static_cast<VertexId>(key & 0xFFFFFFFF));
    }
    radius_km_ = new_radius_km;
    rebuild_grid();
    return;
  }

  const double old_radius = radius_km_;
  radius_km_ = new_radius_km;
  rebuild_grid();
  collect_new_edges(old_radius);
}

std::vector<NeighborhoodGraph::EdgeRec> NeighborhoodGraph::edges_sorted() const {
  std::vector<EdgeRec> out;
  out.reserve(edge_distance_.size());
  for (const auto& [key, dist] : edge_distance_) {
    auto a = static_cast<VertexId>(key >> 32);
    auto b = static_cast<VertexId>(key & 0xFFFFFFFF);
    if (vertices_[a].feature > vertices_[b].feature) std::swap(a, b);
    out.push_back(EdgeRec{a, b, dist});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Dataset NeighborhoodGraph::to_dataset() const {
  Dataset out;
  out.features = features_;
  out.instances.reserve(vertices_.size());
  for (const Vertex& v : vertices_)
    out.instances.push_back(FeatureInstance{v.instance_id, v.feature, v.location});
  return out;
}

// ---------------------------------------------------------------------------
// Snapshot format, little-endian throughout:
//   magic "NGPH", u16 version=1, f64 radius_km, u32 vertex_count,
//   u32 feature_count, feature names (u16 length + UTF-8 bytes, ordinal
//   order), vertex records (u32 vertex_id, u16 length + instance_id,
//   u16 feature ordinal, f64 lat, f64 lng), u64 edge_count, edge records
//   (u32 u, u32 v with feature(u) < feature(v), f64 distance_km),
//   u32 CRC-32 of all preceding bytes.
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'N', 'G', 'P', 'H'};
constexpr std::uint16_t kVersion = 1;

class ByteWriter {
 public:
  void u16(std::uint16_t v) { le(v); }
  void u32(std::uint32_t v) { le(v); }
  void u64(std::uint64_t v) { le(v); }

  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    le(bits);
  }

  void bytes(const void* data, std::size_t len) {
    buf_.append(static_cast<const char*>(data), len);
  }

  void string16(const std::string& s) {
    if (s.size() > 0xFFFF) throw SnapshotError("string too long for snapshot: " + s.substr(0, 32));
    u16(static_cast<std::uint16_t>(s.size()));
    bytes(s.data(), s.size());
  }

  const std::string& buffer() const { return buf_; }

 private:
  template <typename T>
  void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
      buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }

  std::string buf_;
};

class ByteReader {
 public:
  ByteReader(const char* data, std::size_t len) : data_(data), len_(len) {}

  std::uint16_t u16() { return le<std::uint16_t>(); }
  std::uint32_t u32() { return le<std::uint32_t>(); }
  std::uint64_t u64() { return le<std::uint64_t>(); }

  double f64() {
    const std::uint64_t bits = le<std::uint64_t>();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }

  std::string string16() {
    const std::uint16_t n = u16();
    need(n);
    std::string s(data_ + pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return len_ - pos_; }

 private:
  void need(std::size_t n) const {
    if (len_ - pos_ < n) throw SnapshotError("truncated graph snapshot");
  }

  template <typename T>
  T le() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<T>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }

  const char* data_;
  std::size_t len_;
  std::size_t pos_ = 0;
};

}  // namespace

void NeighborhoodGraph::save(std::ostream& out) const {
  if (features_.size() > 0xFFFF)
    throw SnapshotError("snapshot format limits feature count to 65535");

  ByteWriter w;
  w.bytes(kMagic, sizeof(kMagic));
  w.u16(kVersion);
  w.f64(radius_km_);
  w.u32(static_cast<std::uint32_t>(vertices_.size()));
  w.u32(static_cast<std::uint32_t>(features_.size()));
  for (const Feature& f : features_) w.string16(f.name);
  for (const Vertex& v : vertices_) {
    w.u32(v.id);
    w.string16(v.instance_id);
    w.u16(static_cast<std::uint16_t>(v.feature));
    w.f64(v.location.lat());
    w.f64(v.location.lng());
  }
  const auto edges = edges_sorted();
  w.u64(edges.size());
  for (const EdgeRec& e : edges) {
    w.u32(e.u);
    w.u32(e.v);
    w.f64(e.distance_km);
  }

  const std::uint32_t crc = Crc32::of(w.buffer());
  out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
  char tail[4];
  for (int i = 0; i < 4; ++i) tail[i] = static_cast<char>((crc >> (8 * i)) & 0xFF);
  out.write(tail, 4);
  if (!out) throw SnapshotError("write failed");
}

NeighborhoodGraph NeighborhoodGraph::load(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string blob = ss.str();

  if (blob.size() < sizeof(kMagic) + sizeof(kVersion)) throw SnapshotError("truncated graph snapshot");
  if (std::memcmp(blob.data(), kMagic, sizeof(kMagic)) != 0)
    throw SnapshotError("not a graph snapshot (bad magic)");
  {
    ByteReader header(blob.data() + sizeof(kMagic), blob.size() - sizeof(kMagic));
    const std::uint16_t version = header.u16();
    if (version != kVersion)
      throw SnapshotError("version mismatch: snapshot v" + std::to_string(version) +
                          ", reader v" + std::to_string(kVersion));
  }
  if (blob.size() < sizeof(kMagic) + sizeof(kVersion) + 4)
    throw SnapshotError("truncated graph snapshot");

  const std::string_view body(blob.data(), blob.size() - 4);
  std::uint32_t stored_crc = 0;
  for (int i = 0; i < 4; ++i)
    stored_crc |= static_cast<std::uint32_t>(static_cast<unsigned char>(blob[body.size() + i]))
                  << (8 * i);
  if (Crc32::of(body) != stored_crc) throw SnapshotError("checksum failure");

  ByteReader r(body.data() + 6, body.size() - 6);
  NeighborhoodGraph g;
  g.radius_km_ = r.f64();
  if (!(g.radius_km_ >= 0.0) || !std::isfinite(g.radius_km_))
    throw SnapshotError("corrupt snapshot: invalid radius");
  const std::uint32_t vertex_count = r.u32();
  const std::uint32_t feature_count = r.u32();

  g.features_.reserve(feature_count);
  for (std::uint32_t i = 0; i < feature_count; ++i)
    g.features_.push_back(Feature{r.string16(), i});

  g.vertices_.reserve(vertex_count);
  for (std::uint32_t i = 0; i < vertex_count; ++i) {
    const std::uint32_t id = r.u32();
    if (id != i) throw SnapshotError("corrupt snapshot: vertex ids not dense");
    std::string instance_id = r.string16();
    const std::uint16_t feature = r.u16();
    if (feature >= feature_count) throw SnapshotError("corrupt snapshot: bad feature ordinal");
    const double lat = r.f64();
    const double lng = r.f64();
    try {
      g.vertices_.push_back(Vertex{id, std::move(instance_id), feature, GeoPoint(lat, lng)});
    } catch (const std::invalid_argument&) {
      throw SnapshotError("corrupt snapshot: coordinate out of range");
    }
  }

  g.build_indexes();

  const std::uint64_t edge_count = r.u64();
  for (std::uint64_t i = 0; i < edge_count; ++i) {
    const std::uint32_t u = r.u32();
    const std::uint32_t v = r.u32();
    const double d = r.f64();
    if (u >= vertex_count || v >= vertex_count || u == v)
      throw SnapshotError("corrupt snapshot: bad edge endpoints");
    if (g.vertices_[u].feature >= g.vertices_[v].feature)
      throw SnapshotError("corrupt snapshot: edge endpoints out of label order");
    g.add_edge(u, v, d);
  }
  if (r.remaining() != 0) throw SnapshotError("corrupt snapshot: trailing bytes");

  g.rebuild_grid();
  return g;
}

}  // namespace scpm
