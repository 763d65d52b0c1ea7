#include "scpm/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace scpm {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

double great_circle_distance(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat() * kDegToRad;
  const double lat2 = b.lat() * kDegToRad;
  const double dlat = (b.lat() - a.lat()) * kDegToRad;
  const double dlng = (b.lng() - a.lng()) * kDegToRad;

  const double sl = std::sin(dlat / 2.0);
  const double sg = std::sin(dlng / 2.0);
  double h = sl * sl + std::cos(lat1) * std::cos(lat2) * sg * sg;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double km_per_degree_lat() { return kEarthRadiusKm * kDegToRad; }

double km_per_degree_lng(double lat_deg) {
  return kEarthRadiusKm * kDegToRad * std::cos(lat_deg * kDegToRad);
}

Pattern Pattern::canonical(std::vector<FeatureId> ordinals) {
  std::sort(ordinals.begin(), ordinals.end());
  ordinals.erase(std::unique(ordinals.begin(), ordinals.end()), ordinals.end());
  return Pattern(std::move(ordinals));
}

Pattern Pattern::without(std::size_t position) const {
  std::vector<FeatureId> out;
  out.reserve(ordinals_.size() - 1);
  for (std::size_t i = 0; i < ordinals_.size(); ++i) {
    if (i != position) out.push_back(ordinals_[i]);
  }
  return Pattern(std::move(out));
}

std::vector<Feature> feature_order(std::vector<std::string> names, const FeatureOrder& less) {
  if (names.empty()) throw IngestError("feature set is empty");
  if (less) {
    std::sort(names.begin(), names.end(), less);
  } else {
    std::sort(names.begin(), names.end());
  }
  for (std::size_t i = 1; i < names.size(); ++i) {
    if (names[i - 1] == names[i]) throw IngestError("duplicate feature name: " + names[i]);
  }
  std::vector<Feature> out;
  out.reserve(names.size());
  for (FeatureId ord = 0; ord < names.size(); ++ord) {
    out.push_back(Feature{std::move(names[ord]), ord});
  }
  return out;
}

}  // namespace scpm
