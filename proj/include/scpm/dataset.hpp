#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "scpm/types.hpp"

namespace scpm {

// A feature catalogue plus the instances referencing it.
struct Dataset {
  std::vector<Feature> features;
  std::vector<FeatureInstance> instances;

  // Throws IngestError when an invariant is broken (dangling feature refs,
  // duplicate ids, non-dense ordinals).
  void validate() const;

  const Feature* find_feature(const std::string& name) const;
};

// Column-name mapping for CSV ingestion. Defaults match the Chicago
// open-data export layout.
struct CsvMapping {
  std::string id_column = "ID";
  std::string feature_column = "Primary Type";
  std::string lat_column = "Latitude";
  std::string lng_column = "Longitude";
};

struct SkipCounts {
  std::size_t malformed_row = 0;     // wrong field count
  std::size_t missing_field = 0;     // blank id or feature
  std::size_t bad_coordinate = 0;    // blank, unparseable or out-of-range lat/lng

  std::size_t total() const { return malformed_row + missing_field + bad_coordinate; }
};

struct LoadResult {
  Dataset dataset;
  std::size_t rows_read = 0;  // data rows, header excluded
  SkipCounts skipped;
};

// Loads a comma-separated, double-quote quoted, header-first CSV file.
// Rows with unusable coordinates are skipped and counted, never fatal.
// Throws IngestError on duplicate ids and when no valid row remains.
LoadResult load_csv(const std::filesystem::path& path, const CsvMapping& mapping = {});
LoadResult load_csv(std::istream& in, const CsvMapping& mapping = {});

// Writes a dataset back out in the same CSV layout.
void write_csv(const Dataset& dataset, const std::filesystem::path& path,
               const CsvMapping& mapping = {});
void write_csv(const Dataset& dataset, std::ostream& out, const CsvMapping& mapping = {});

struct BoundingBox {
  double lat_min = 0.0;
  double lat_max = 0.0;
  double lng_min = 0.0;
  double lng_max = 0.0;
};

struct SyntheticConfig {
  std::size_t feature_count = 0;
  std::size_t instance_count = 0;
  std::size_t cluster_count = 0;
  double cluster_radius_km = 0.0;
  BoundingBox bbox;
  double noise_fraction = 0.0;  // fraction of instances placed uniformly
  std::uint64_t seed = 0;
};

// Deterministic synthetic dataset: cluster centers uniform in the bbox,
// clustered instances Gaussian around them, the noise remainder uniform.
// Every feature is guaranteed at least one instance.
// Throws std::invalid_argument on config violations.
Dataset generate_synthetic(const SyntheticConfig& cfg);

}  // namespace scpm
