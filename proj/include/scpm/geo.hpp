#pragma once

#include <functional>
#include <string>
#include <vector>

#include "scpm/types.hpp"

namespace scpm {

// Mean Earth radius of the spherical model, in kilometers.
inline constexpr double kEarthRadiusKm = 6371.0088;

// Haversine great-circle distance in kilometers. Symmetric, non-negative,
// exactly zero for coordinate-equal points.
double great_circle_distance(const GeoPoint& a, const GeoPoint& b);

// Ground length of one degree of latitude (constant on the sphere).
double km_per_degree_lat();

// Ground length of one degree of longitude at the given latitude.
double km_per_degree_lng(double lat_deg);

// Total order on feature names; empty means byte-wise ascending.
using FeatureOrder = std::function<bool(const std::string&, const std::string&)>;

// Assigns dense ordinals 0..F-1 under the configured order.
// Throws IngestError on duplicate or empty input.
std::vector<Feature> feature_order(std::vector<std::string> names, const FeatureOrder& less = {});

}  // namespace scpm
