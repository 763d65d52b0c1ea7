#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "brute.hpp"
#include "fixture.hpp"
#include "scpm/dataset.hpp"
#include "scpm/geo.hpp"

using namespace scpm;

namespace {

LoadResult load_from_string(const std::string& text, const CsvMapping& mapping = {}) {
  std::istringstream in(text);
  return load_csv(in, mapping);
}

}  // namespace

TEST_CASE("fixture geometry holds under the distance function") {
  // Adopt fixture A only after checking every claim its tests lean on.
  const Dataset d = fixture_a();
  d.validate();

  auto dist = [&](const char* a, const char* b) {
    return great_circle_distance(d.instances[fx(a)].location, d.instances[fx(b)].location);
  };

  const char* cluster1[] = {"M.1", "N.1", "T.1", "W.1"};
  for (const char* a : cluster1) {
    for (const char* b : cluster1) {
      if (a != b) CHECK(dist(a, b) <= 0.060);
    }
  }
  const char* cluster2[] = {"M.2", "N.2", "T.2"};
  for (const char* a : cluster2) {
    for (const char* b : cluster2) {
      if (a != b) CHECK(dist(a, b) <= 0.060);
    }
  }

  // Isolated points and the clusters stay far apart at R = 0.3 km.
  for (const char* iso : {"W.2", "M.3", "M.4"}) {
    for (const auto& other : d.instances) {
      if (other.id == iso) continue;
      CHECK(great_circle_distance(d.instances[fx(iso)].location, other.location) > 0.3);
    }
  }
  CHECK(dist("M.1", "M.2") > 0.3);

  // Minimum pairwise distance exceeds 10 m, so updating to R = 0.01 km
  // must empty the edge set.
  for (std::size_t i = 0; i < d.instances.size(); ++i) {
    for (std::size_t j = i + 1; j < d.instances.size(); ++j) {
      CHECK(great_circle_distance(d.instances[i].location, d.instances[j].location) > 0.01);
    }
  }

  // Exactly nine distinct-feature pairs within 0.3 km.
  CHECK(brute_edges(d, 0.3).size() == 9);
}

TEST_CASE("load_csv reads the fixture file") {
  auto result = load_csv(std::filesystem::path(SCPM_TEST_DATA_DIR) / "fixture_a.csv");
  CHECK(result.dataset.features.size() == 4);
  CHECK(result.dataset.instances.size() == 10);
  CHECK(result.rows_read == 10);
  CHECK(result.skipped.total() == 0);

  CHECK(result.dataset.features[0].name == "Murder");
  CHECK(result.dataset.features[3].name == "Weapon Violation");

  // Same content as the in-code fixture.
  const Dataset fx_data = fixture_a();
  REQUIRE(result.dataset.instances.size() == fx_data.instances.size());
  for (std::size_t i = 0; i < fx_data.instances.size(); ++i) {
    CHECK(result.dataset.instances[i].id == fx_data.instances[i].id);
    CHECK(result.dataset.instances[i].feature == fx_data.instances[i].feature);
    CHECK(result.dataset.instances[i].location == fx_data.instances[i].location);
  }
}

TEST_CASE("load_csv skips unusable rows and counts them") {
  const std::string text =
      "ID,Primary Type,Latitude,Longitude\n"
      "A.1,Assault,41.88,-87.63\n"
      "A.2,Assault,,\n"                       // blank coordinates
      "A.3,Assault,not-a-number,-87.63\n"     // unparseable
      "A.4,Assault,95.0,-87.63\n"             // out of range
      "A.5,,41.88,-87.63\n"                   // blank feature
      "A.6,Assault,41.88\n"                   // wrong field count
      "B.1,Battery,41.89,-87.64\n";
  auto result = load_from_string(text);
  CHECK(result.rows_read == 7);
  CHECK(result.dataset.instances.size() == 2);
  CHECK(result.skipped.total() == 5);
  CHECK(result.skipped.bad_coordinate == 3);
  CHECK(result.skipped.missing_field == 1);
  CHECK(result.skipped.malformed_row == 1);
  // Lossless up to the skip policy.
  CHECK(result.dataset.instances.size() + result.skipped.total() == result.rows_read);
}

TEST_CASE("load_csv error paths") {
  CHECK_THROWS_WITH_AS(load_from_string("ID,Primary Type,Latitude,Longitude\n"
                                        "A.1,Assault,,\n"),
                       doctest::Contains("zero valid rows"), IngestError);

  CHECK_THROWS_WITH_AS(load_from_string("ID,Primary Type,Latitude,Longitude\n"
                                        "M.1,Murder,41.88,-87.63\n"
                                        "M.1,Murder,41.89,-87.64\n"),
                       doctest::Contains("M.1"), IngestError);

  CHECK_THROWS_AS(load_from_string("ID,Primary Type,Latitude\n"
                                   "A.1,Assault,41.88\n"),
                  IngestError);  // missing required column

  CHECK_THROWS_AS(load_csv(std::filesystem::path("/nonexistent/file.csv")), IngestError);
}

TEST_CASE("load_csv handles quoting and custom mappings") {
  const std::string text =
      "case id,\"crime, type\",lat,lon\n"
      "\"C,1\",\"Weapon \"\"Violation\"\"\",41.88,-87.63\n"
      "C2,Theft,41.89,-87.64\n";
  CsvMapping mapping;
  mapping.id_column = "case id";
  mapping.feature_column = "crime, type";
  mapping.lat_column = "lat";
  mapping.lng_column = "lon";
  auto result = load_from_string(text, mapping);
  CHECK(result.dataset.instances.size() == 2);
  CHECK(result.dataset.instances[0].id == "C,1");
  CHECK(result.dataset.features[1].name == "Weapon \"Violation\"");
}

TEST_CASE("csv round trip preserves the dataset") {
  const Dataset original = fixture_a();
  std::ostringstream out;
  write_csv(original, out);
  std::istringstream in(out.str());
  auto reloaded = load_csv(in);
  REQUIRE(reloaded.dataset.instances.size() == original.instances.size());
  for (std::size_t i = 0; i < original.instances.size(); ++i) {
    CHECK(reloaded.dataset.instances[i].id == original.instances[i].id);
    CHECK(reloaded.dataset.instances[i].location == original.instances[i].location);
  }
}

TEST_CASE("generate_synthetic is deterministic per seed") {
  SyntheticConfig cfg;
  cfg.feature_count = 33;
  cfg.instance_count = 3000;
  cfg.cluster_count = 100;
  cfg.cluster_radius_km = 0.05;
  cfg.bbox = {41.78, 41.98, -87.75, -87.55};
  cfg.noise_fraction = 0.1;
  cfg.seed = 7;

  const Dataset a = generate_synthetic(cfg);
  const Dataset b = generate_synthetic(cfg);
  REQUIRE(a.instances.size() == b.instances.size());
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    CHECK(a.instances[i].id == b.instances[i].id);
    CHECK(a.instances[i].feature == b.instances[i].feature);
    CHECK(a.instances[i].location == b.instances[i].location);
  }

  cfg.seed = 8;
  const Dataset c = generate_synthetic(cfg);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.instances.size() && !any_difference; ++i)
    any_difference = !(a.instances[i].location == c.instances[i].location);
  CHECK(any_difference);
}

TEST_CASE("generate_synthetic covers every feature") {
  SyntheticConfig cfg;
  cfg.feature_count = 2;
  cfg.instance_count = 2;
  cfg.cluster_count = 1;
  cfg.cluster_radius_km = 0.05;
  cfg.bbox = {41.8, 41.9, -87.7, -87.6};
  cfg.noise_fraction = 0.0;
  cfg.seed = 3;
  const Dataset minimal = generate_synthetic(cfg);
  CHECK(minimal.instances.size() == 2);
  CHECK(minimal.instances[0].feature != minimal.instances[1].feature);

  cfg.feature_count = 5;
  cfg.instance_count = 200;
  cfg.cluster_count = 4;
  cfg.seed = 1;
  const Dataset d = generate_synthetic(cfg);
  CHECK(d.instances.size() == 200);
  std::vector<std::size_t> counts(5, 0);
  for (const auto& inst : d.instances) ++counts[inst.feature];
  for (std::size_t n : counts) CHECK(n >= 1);
}

TEST_CASE("generate_synthetic validates its config") {
  SyntheticConfig cfg;
  cfg.feature_count = 5;
  cfg.instance_count = 4;  // fewer instances than features
  cfg.cluster_count = 1;
  cfg.cluster_radius_km = 0.05;
  cfg.bbox = {41.8, 41.9, -87.7, -87.6};
  CHECK_THROWS_AS(generate_synthetic(cfg), std::invalid_argument);

  cfg.instance_count = 10;
  cfg.bbox = {41.9, 41.8, -87.7, -87.6};  // degenerate
  CHECK_THROWS_AS(generate_synthetic(cfg), std::invalid_argument);

  cfg.bbox = {41.8, 41.9, -87.7, -87.6};
  cfg.noise_fraction = 1.5;
  CHECK_THROWS_AS(generate_synthetic(cfg), std::invalid_argument);
}

TEST_CASE("generate_synthetic output satisfies dataset invariants for random configs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    SyntheticConfig cfg;
    cfg.feature_count = 1 + rng() % 8;
    cfg.instance_count = cfg.feature_count + rng() % 300;
    cfg.cluster_count = 1 + rng() % 12;
    cfg.cluster_radius_km = 0.01 + 0.001 * static_cast<double>(rng() % 100);
    cfg.bbox = {41.0, 42.0, -88.0, -87.0};
    cfg.noise_fraction = static_cast<double>(rng() % 101) / 100.0;
    cfg.seed = rng();
    const Dataset d = generate_synthetic(cfg);
    CHECK_NOTHROW(d.validate());
    CHECK(d.instances.size() == cfg.instance_count);
    CHECK(d.features.size() == cfg.feature_count);
    std::vector<std::size_t> counts(cfg.feature_count, 0);
    for (const auto& inst : d.instances) ++counts[inst.feature];
    for (std::size_t n : counts) CHECK(n >= 1);
  }
}
