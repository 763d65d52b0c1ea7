#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixture.hpp"
#include "scpm/graph.hpp"
#include "scpm/miner.hpp"
#include "scpm/oracle.hpp"
#include "scpm/result_json.hpp"

using namespace scpm;

namespace {

MiningParams params_for(Algorithm a, double min_prev, std::size_t max_size,
                        unsigned threads = 1, bool emit = false) {
  MiningParams p;
  p.algorithm = a;
  p.min_prev = min_prev;
  p.max_size = max_size;
  p.thread_count = threads;
  p.emit_instances = emit;
  return p;
}

constexpr Algorithm kAll[] = {Algorithm::enum_g, Algorithm::enum_k, Algorithm::extend};

// Pattern/index pairs of one size, keyed by first letters of feature names.
std::vector<std::pair<std::string, double>> level_labels(const MiningResult& r,
                                                         const std::vector<Feature>& features,
                                                         std::size_t size) {
  std::vector<std::pair<std::string, double>> out;
  if (size <= r.by_size.size()) {
    for (const MinedPattern& mp : r.by_size[size - 1]) {
      std::string key;
      for (FeatureId f : mp.pattern.ordinals()) key += features[f].name[0];
      out.emplace_back(key, mp.report.index);
    }
  }
  return out;
}

Dataset clustered_dataset(std::uint64_t seed, std::size_t features = 5,
                          std::size_t instances = 200) {
  SyntheticConfig cfg;
  cfg.feature_count = features;
  cfg.instance_count = instances;
  cfg.cluster_count = 7;
  cfg.cluster_radius_km = 0.06;
  cfg.bbox = {41.85, 41.90, -87.68, -87.62};
  cfg.noise_fraction = 0.25;
  cfg.seed = seed;
  return generate_synthetic(cfg);
}

}  // namespace

TEST_CASE("fixture mining at min_prev 0.5 matches the hand-checked table") {
  NeighborhoodGraph g(fixture_a(), 0.3);
  for (Algorithm a : kAll) {
    CAPTURE(algorithm_name(a));
    const MiningResult r = mine(g, params_for(a, 0.5, 4));

    CHECK(level_labels(r, g.features(), 2) ==
          std::vector<std::pair<std::string, double>>{
              {"MN", 0.5}, {"MT", 0.5}, {"NT", 1.0}, {"NW", 0.5}, {"TW", 0.5}});
    CHECK(level_labels(r, g.features(), 3) ==
          std::vector<std::pair<std::string, double>>{{"MNT", 0.5}, {"NTW", 0.5}});
    CHECK(r.by_size.size() == 3);  // size 4 is empty: no joinable size-3 pair
  }
}

TEST_CASE("fixture mining at min_prev 0.25 adds the MW family") {
  NeighborhoodGraph g(fixture_a(), 0.3);
  for (Algorithm a : kAll) {
    CAPTURE(algorithm_name(a));
    const MiningResult r = mine(g, params_for(a, 0.25, 4, 1, true));

    CHECK(level_labels(r, g.features(), 2) ==
          std::vector<std::pair<std::string, double>>{
              {"MN", 0.5}, {"MT", 0.5}, {"MW", 0.25}, {"NT", 1.0}, {"NW", 0.5}, {"TW", 0.5}});
    CHECK(level_labels(r, g.features(), 3) ==
          std::vector<std::pair<std::string, double>>{
              {"MNT", 0.5}, {"MNW", 0.25}, {"MTW", 0.25}, {"NTW", 0.5}});
    CHECK(level_labels(r, g.features(), 4) ==
          std::vector<std::pair<std::string, double>>{{"MNTW", 0.25}});

    const MinedPattern* mntw = r.find(Pattern({0, 1, 2, 3}));
    REQUIRE(mntw != nullptr);
    CHECK(mntw->instances ==
          std::vector<std::vector<std::string>>{{"M.1", "N.1", "T.1", "W.1"}});
  }
}

TEST_CASE("threshold above one leaves only singletons") {
  NeighborhoodGraph g(fixture_a(), 0.3);
  for (Algorithm a : kAll) {
    const MiningResult r = mine(g, params_for(a, 1.01, 4));
    REQUIRE(r.by_size.size() == 1);
    CHECK(r.by_size[0].size() == 4);
    // The size-2 iteration ran and terminated the search.
    REQUIRE(r.per_size_seconds.size() == 1);
    CHECK(r.per_size_seconds[0].first == 2);
  }
}

TEST_CASE("all three miners equal the oracle on random datasets") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Dataset d = clustered_dataset(seed);
    NeighborhoodGraph g(d, 0.12);
    for (double min_prev : {0.1, 0.4}) {
      const MiningResult reference =
          oracle_mine(d, 0.12, min_prev, 4, {}, true);
      for (Algorithm a : kAll) {
        CAPTURE(seed);
        CAPTURE(min_prev);
        CAPTURE(algorithm_name(a));
        const MiningResult r = mine(g, params_for(a, min_prev, 4, 1, true));
        const auto diff = diff_results(reference, r, g.features());
        const std::string diff_text = diff.value_or("");
        INFO(diff_text);
        CHECK_FALSE(diff.has_value());
      }
    }
  }
}

TEST_CASE("anti-monotonicity of the participation index") {
  for (std::uint64_t seed : {41u, 42u, 43u}) {
    const Dataset d = clustered_dataset(seed, 4, 120);
    NeighborhoodGraph g(d, 0.12);
    const MiningResult r = mine(g, params_for(Algorithm::enum_g, 0.0, 4));

    std::vector<const MinedPattern*> all;
    for (const auto& level : r.by_size) {
      for (const MinedPattern& mp : level) all.push_back(&mp);
    }
    for (const MinedPattern* sub : all) {
      for (const MinedPattern* super : all) {
        if (super->pattern.size() <= sub->pattern.size()) continue;
        const auto& sup = super->pattern.ordinals();
        const bool contains = std::includes(sup.begin(), sup.end(),
                                            sub->pattern.ordinals().begin(),
                                            sub->pattern.ordinals().end());
        if (contains) CHECK(super->report.index <= sub->report.index + 1e-12);
      }
    }
  }
}

TEST_CASE("raising min_prev only shrinks the result") {
  const Dataset d = clustered_dataset(3);
  NeighborhoodGraph g(d, 0.12);
  const MiningResult low = mine(g, params_for(Algorithm::extend, 0.1, 4));
  const MiningResult high = mine(g, params_for(Algorithm::extend, 0.3, 4));

  REQUIRE(high.by_size.size() <= low.by_size.size());
  for (std::size_t lvl = 0; lvl < high.by_size.size(); ++lvl) {
    for (const MinedPattern& mp : high.by_size[lvl]) {
      const MinedPattern* in_low = low.find(mp.pattern);
      REQUIRE(in_low != nullptr);
      CHECK(in_low->report.index == mp.report.index);
    }
  }
}

TEST_CASE("growing the radius never lowers a pattern's index") {
  const Dataset d = clustered_dataset(4);
  NeighborhoodGraph small(d, 0.08);
  NeighborhoodGraph large(d, 0.16);
  const MiningResult at_small = mine(small, params_for(Algorithm::enum_g, 0.1, 4));
  const MiningResult at_large = mine(large, params_for(Algorithm::enum_g, 0.1, 4));

  for (const auto& level : at_small.by_size) {
    for (const MinedPattern& mp : level) {
      const MinedPattern* grown = at_large.find(mp.pattern);
      REQUIRE(grown != nullptr);
      CHECK(grown->report.index >= mp.report.index - 1e-12);
    }
  }
}

TEST_CASE("results are independent of thread count") {
  const Dataset d = clustered_dataset(5);
  NeighborhoodGraph g(d, 0.12);
  for (Algorithm a : kAll) {
    const MiningResult base = mine(g, params_for(a, 0.1, 4, 1, true));
    const auto base_json = patterns_to_json(base, g.features()).dump();
    for (unsigned threads : {2u, 4u, 8u}) {
      const MiningResult r = mine(g, params_for(a, 0.1, 4, threads, true));
      CHECK(patterns_to_json(r, g.features()).dump() == base_json);
    }
  }
}

TEST_CASE("empty graph mines to singletons only") {
  Dataset d = fixture_a();
  NeighborhoodGraph g(d, 0.0);  // no edges
  for (Algorithm a : kAll) {
    const MiningResult r = mine(g, params_for(a, 0.0, 4));
    CHECK(r.by_size.size() == 1);
    CHECK(r.by_size[0].size() == 4);
  }
}

TEST_CASE("chordless ring yields nothing beyond pairs") {
  Dataset ring;
  ring.features = {Feature{"A", 0}, Feature{"B", 1}, Feature{"C", 2}, Feature{"D", 3}};
  const double side_deg = 0.00072;
  ring.instances = {
      FeatureInstance{"a", 0, GeoPoint(41.88, -87.63)},
      FeatureInstance{"b", 1, GeoPoint(41.88 + side_deg, -87.63)},
      FeatureInstance{"c", 2, GeoPoint(41.88 + side_deg, -87.63 + side_deg / 0.744)},
      FeatureInstance{"d", 3, GeoPoint(41.88, -87.63 + side_deg / 0.744)},
  };
  NeighborhoodGraph g(ring, 0.1);
  REQUIRE(g.edge_count() == 4);

  for (Algorithm a : kAll) {
    const MiningResult r = mine(g, params_for(a, 0.0, 4));
    CHECK(r.by_size.size() == 2);  // pairs exist, no triangle anywhere
  }
}

TEST_CASE("miner rejects invalid parameters") {
  NeighborhoodGraph g(fixture_a(), 0.3);
  MiningParams p;
  p.max_size = 1;
  CHECK_THROWS_AS(mine(g, p), std::invalid_argument);
  p.max_size = 4;
  p.min_prev = -0.1;
  CHECK_THROWS_AS(mine(g, p), std::invalid_argument);
}

TEST_CASE("fault injection flips exactly one extend validation") {
  NeighborhoodGraph g(fixture_a(), 0.3);
  MiningParams p = params_for(Algorithm::extend, 0.25, 4);
  p.inject_validation_fault = true;
  const MiningResult faulty = mine(g, p);
  const MiningResult clean = mine(g, params_for(Algorithm::extend, 0.25, 4));
  CHECK(diff_results(faulty, clean, g.features()).has_value());
}
