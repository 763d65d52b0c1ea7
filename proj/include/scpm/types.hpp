#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scpm {

using VertexId = std::uint32_t;
using FeatureId = std::uint32_t;

// Raised for bad input data (CSV contents, dataset invariant breaches).
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised for malformed graph snapshot files.
struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Geographic point in degrees. Construction rejects out-of-range values.
class GeoPoint {
 public:
  GeoPoint(double lat_deg, double lng_deg) : lat_(lat_deg), lng_(lng_deg) {
    if (!(lat_deg >= -90.0 && lat_deg <= 90.0))
      throw std::invalid_argument("latitude out of range [-90, 90]: " + std::to_string(lat_deg));
    if (!(lng_deg >= -180.0 && lng_deg <= 180.0))
      throw std::invalid_argument("longitude out of range [-180, 180]: " + std::to_string(lng_deg));
  }

  double lat() const { return lat_; }
  double lng() const { return lng_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double lat_;
  double lng_;
};

// Spatial event category plus its rank in the global feature order.
struct Feature {
  std::string name;
  FeatureId ordinal = 0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

// One spatial event: opaque identifier, feature ordinal, location.
struct FeatureInstance {
  std::string id;
  FeatureId feature = 0;
  GeoPoint location{0.0, 0.0};
};

// Co-location pattern in canonical form: strictly increasing feature ordinals.
class Pattern {
 public:
  Pattern() = default;

  explicit Pattern(std::vector<FeatureId> ordinals) : ordinals_(std::move(ordinals)) {
    for (std::size_t i = 1; i < ordinals_.size(); ++i) {
      if (ordinals_[i - 1] >= ordinals_[i])
        throw std::invalid_argument("pattern ordinals must be strictly increasing");
    }
  }

  // Sorts and deduplicates; idempotent.
  static Pattern canonical(std::vector<FeatureId> ordinals);

  std::size_t size() const { return ordinals_.size(); }
  bool empty() const { return ordinals_.empty(); }
  FeatureId operator[](std::size_t i) const { return ordinals_[i]; }
  FeatureId front() const { return ordinals_.front(); }
  FeatureId back() const { return ordinals_.back(); }
  const std::vector<FeatureId>& ordinals() const { return ordinals_; }

  // Pattern with the feature at `position` removed.
  Pattern without(std::size_t position) const;

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern&, const Pattern&) = default;

 private:
  std::vector<FeatureId> ordinals_;
};

struct PatternHash {
  std::size_t operator()(const Pattern& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (FeatureId f : p.ordinals()) {
      h ^= f;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Row instance of a pattern: one vertex per feature position.
using RowInstance = std::vector<VertexId>;

}  // namespace scpm
