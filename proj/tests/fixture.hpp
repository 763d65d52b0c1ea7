#pragma once

#include <string>
#include <vector>

#include "scpm/dataset.hpp"
#include "scpm/types.hpp"

// Fixture A: ten crime instances over four features. At a 0.3 km threshold
// the dataset holds exactly two spatial clusters -- {M.1, N.1, T.1, W.1} and
// {M.2, N.2, T.2} -- plus three isolated points. Geometry is verified
// against the distance function in test_dataset.cpp before anything else
// relies on it.
inline scpm::Dataset fixture_a() {
  using scpm::Feature;
  using scpm::FeatureInstance;
  using scpm::GeoPoint;

  scpm::Dataset d;
  d.features = {
      Feature{"Murder", 0},
      Feature{"Narcotics", 1},
      Feature{"Theft", 2},
      Feature{"Weapon Violation", 3},
  };
  d.instances = {
      FeatureInstance{"M.1", 0, GeoPoint(41.8800, -87.6300)},
      FeatureInstance{"N.1", 1, GeoPoint(41.8803, -87.6300)},
      FeatureInstance{"T.1", 2, GeoPoint(41.8800, -87.6296)},
      FeatureInstance{"W.1", 3, GeoPoint(41.8803, -87.6296)},
      FeatureInstance{"M.2", 0, GeoPoint(41.9000, -87.6500)},
      FeatureInstance{"N.2", 1, GeoPoint(41.9003, -87.6500)},
      FeatureInstance{"T.2", 2, GeoPoint(41.9000, -87.6496)},
      FeatureInstance{"W.2", 3, GeoPoint(41.9500, -87.7000)},
      FeatureInstance{"M.3", 0, GeoPoint(41.8500, -87.7000)},
      FeatureInstance{"M.4", 0, GeoPoint(41.9700, -87.6000)},
  };
  return d;
}

// Vertex id of an instance in the graph built from fixture_a() (vertex ids
// follow instance order).
inline scpm::VertexId fx(const std::string& instance_id) {
  const auto d = fixture_a();
  for (std::size_t i = 0; i < d.instances.size(); ++i) {
    if (d.instances[i].id == instance_id) return static_cast<scpm::VertexId>(i);
  }
  throw std::logic_error("unknown fixture instance: " + instance_id);
}
