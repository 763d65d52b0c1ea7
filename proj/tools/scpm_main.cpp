#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "scpm/crc32.hpp"
#include "scpm/dataset.hpp"
#include "scpm/geo.hpp"
#include "scpm/graph.hpp"
#include "scpm/miner.hpp"
#include "scpm/oracle.hpp"
#include "scpm/result_json.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConsistency = 3;

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Raised when the bench cross-check finds disagreeing miners.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string file_crc32_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw scpm::IngestError("input not found: " + path.string());
  scpm::Crc32 crc;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    crc.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  char hex[16];
  std::snprintf(hex, sizeof(hex), "%08x", crc.value());
  return hex;
}

json make_manifest(const std::string& command, json parameters, json input_checksums,
                   json wall_clock_seconds) {
  return json{{"command", command},
              {"tool_version", kToolVersion},
              {"parameters", std::move(parameters)},
              {"input_checksums", std::move(input_checksums)},
              {"wall_clock_seconds", std::move(wall_clock_seconds)}};
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw scpm::IngestError("cannot open output file: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw scpm::IngestError("write failed: " + path.string());
}

scpm::NeighborhoodGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw scpm::SnapshotError("input not found: " + path.string());
  return scpm::NeighborhoodGraph::load(in);
}

void save_graph_file(const scpm::NeighborhoodGraph& graph,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw scpm::SnapshotError("cannot open output file: " + path.string());
  graph.save(out);
}

// ---------------------------------------------------------------------- build

struct BuildArgs {
  std::string input;
  std::string out;
  double radius_km = 0.3;
  scpm::CsvMapping mapping;
};

int cmd_build(const BuildArgs& args) {
  const auto t0 = Clock::now();
  scpm::LoadResult loaded = scpm::load_csv(args.input, args.mapping);
  const double load_s = seconds_since(t0);

  const auto t1 = Clock::now();
  scpm::NeighborhoodGraph graph(loaded.dataset, args.radius_km);
  const double build_s = seconds_since(t1);

  save_graph_file(graph, args.out);

  std::cout << "vertices: " << graph.vertex_count() << "\n"
            << "edges: " << graph.edge_count() << "\n"
            << "rows skipped: " << loaded.skipped.total()
            << " (malformed " << loaded.skipped.malformed_row
            << ", missing id/feature " << loaded.skipped.missing_field
            << ", bad coordinate " << loaded.skipped.bad_coordinate << ")\n"
            << "load " << load_s << " s, build " << build_s << " s\n";
  return kExitOk;
}

// -------------------------------------------------------------- update-radius

struct UpdateArgs {
  std::string graph;
  std::string out;
  double radius_km = 0.3;
};

int cmd_update_radius(const UpdateArgs& args) {
  scpm::NeighborhoodGraph graph = load_graph_file(args.graph);
  const std::size_t edges_before = graph.edge_count();
  const double radius_before = graph.radius_km();

  const auto t0 = Clock::now();
  graph.update_radius(args.radius_km);
  const double update_s = seconds_since(t0);

  const std::size_t edges_after = graph.edge_count();
  save_graph_file(graph, args.out);

  const auto added = edges_after > edges_before ? edges_after - edges_before : 0;
  const auto removed = edges_before > edges_after ? edges_before - edges_after : 0;
  std::cout << "radius: " << radius_before << " -> " << args.radius_km << " km\n"
            << "edges: " << edges_before << " -> " << edges_after
            << " (+" << added << " / -" << removed << ")\n"
            << "update " << update_s << " s\n";
  return kExitOk;
}

// ----------------------------------------------------------------------- mine

struct MineArgs {
  std::string graph;
  std::string out;
  std::string algorithm = "enum-g";
  double min_prev = 0.1;
  std::size_t max_size = 4;
  unsigned threads = 1;
  bool emit_instances = false;
  std::size_t oracle_cap = 2000;
  bool ignore_oracle_cap = false;
};

json mine_params_json(const MineArgs& args, double radius_km) {
  return json{{"radius_km", radius_km},
              {"min_prev", args.min_prev},
              {"max_size", args.max_size},
              {"algorithm", args.algorithm}};
}

int cmd_mine(const MineArgs& args) {
  const auto t_load = Clock::now();
  scpm::NeighborhoodGraph graph = load_graph_file(args.graph);
  const double load_s = seconds_since(t_load);

  scpm::MiningResult result;
  const auto t_run = Clock::now();
  if (args.algorithm == "oracle") {
    scpm::OracleGuard guard{args.oracle_cap, args.ignore_oracle_cap};
    result = scpm::oracle_mine(graph.to_dataset(), graph.radius_km(), args.min_prev,
                               args.max_size, guard, args.emit_instances);
  } else {
    auto algorithm = scpm::parse_algorithm(args.algorithm);
    if (!algorithm)
      throw scpm::IngestError("unknown algorithm \"" + args.algorithm +
                              "\" (expected enum-g, enum-k, extend or oracle)");
    scpm::MiningParams params;
    params.algorithm = *algorithm;
    params.min_prev = args.min_prev;
    params.max_size = args.max_size;
    params.thread_count = args.threads;
    params.emit_instances = args.emit_instances;
    result = scpm::mine(graph, params);
  }
  const double run_s = seconds_since(t_run);

  json doc;
  doc["manifest"] = make_manifest(
      "mine",
      json{{"graph", args.graph}, {"algorithm", args.algorithm}, {"min_prev", args.min_prev},
           {"max_size", args.max_size}, {"threads", args.threads},
           {"emit_instances", args.emit_instances}, {"out", args.out}},
      json{{args.graph, file_crc32_hex(args.graph)}},
      json{{"load", load_s}, {"mine", run_s}});
  doc["params"] = mine_params_json(args, graph.radius_km());
  doc["patterns"] = scpm::patterns_to_json(result, graph.features());
  doc["timings"] = scpm::timings_to_json(result);
  write_json_file(doc, args.out);

  std::cout << "prevalent patterns: " << result.pattern_count() << " (sizes 1-"
            << result.by_size.size() << ")\n"
            << "mine " << run_s << " s\n";
  return kExitOk;
}

// ------------------------------------------------------------------------ gen

struct GenArgs {
  scpm::SyntheticConfig cfg;
  std::vector<double> bbox{41.80, 41.89, -87.72, -87.60};  // ~10 km x 10 km
  std::string out;
};

int cmd_gen(const GenArgs& args) {
  scpm::SyntheticConfig cfg = args.cfg;
  cfg.bbox = scpm::BoundingBox{args.bbox[0], args.bbox[1], args.bbox[2], args.bbox[3]};
  scpm::Dataset dataset = scpm::generate_synthetic(cfg);
  scpm::write_csv(dataset, args.out);
  std::cout << "features: " << dataset.features.size() << "\n"
            << "instances: " << dataset.instances.size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------- bench

struct BenchArgs {
  std::string graph;
  std::string out;
  double min_prev = 0.1;
  std::size_t max_size = 4;
  unsigned threads = 1;
  bool inject_validation_fault = false;
};

int cmd_bench(const BenchArgs& args) {
  const auto t_load = Clock::now();
  scpm::NeighborhoodGraph graph = load_graph_file(args.graph);
  const double load_s = seconds_since(t_load);

  const scpm::Algorithm order[] = {scpm::Algorithm::enum_g, scpm::Algorithm::enum_k,
                                   scpm::Algorithm::extend};
  std::vector<scpm::MiningResult> results;
  json algorithms = json::object();
  for (scpm::Algorithm a : order) {
    scpm::MiningParams params;
    params.algorithm = a;
    params.min_prev = args.min_prev;
    params.max_size = args.max_size;
    params.thread_count = args.threads;
    params.inject_validation_fault = args.inject_validation_fault;
    results.push_back(scpm::mine(graph, params));
    algorithms[scpm::algorithm_name(a)] = scpm::timings_to_json(results.back());
  }

  for (std::size_t i = 1; i < results.size(); ++i) {
    auto diff = scpm::diff_results(results[0], results[i], graph.features());
    if (diff) {
      throw ConsistencyError(std::string("mining results disagree: ") +
                             scpm::algorithm_name(order[0]) + " vs " +
                             scpm::algorithm_name(order[i]) + ": " + *diff);
    }
  }

  std::vector<std::size_t> ranking{0, 1, 2};
  std::sort(ranking.begin(), ranking.end(), [&](std::size_t a, std::size_t b) {
    return results[a].total_seconds < results[b].total_seconds;
  });
  json fastest = json::array();
  for (std::size_t i : ranking) fastest.push_back(scpm::algorithm_name(order[i]));

  json doc;
  doc["manifest"] = make_manifest(
      "bench",
      json{{"graph", args.graph}, {"min_prev", args.min_prev}, {"max_size", args.max_size},
           {"threads", args.threads}, {"out", args.out}},
      json{{args.graph, file_crc32_hex(args.graph)}},
      json{{"load", load_s}});
  doc["params"] = json{{"radius_km", graph.radius_km()}, {"min_prev", args.min_prev},
                       {"max_size", args.max_size}, {"threads", args.threads}};
  doc["algorithms"] = std::move(algorithms);
  doc["fastest_to_slowest"] = std::move(fastest);
  doc["results_identical"] = true;
  doc["patterns"] = scpm::patterns_to_json(results[0], graph.features());
  write_json_file(doc, args.out);

  for (std::size_t i = 0; i < results.size(); ++i) {
    std::cout << scpm::algorithm_name(order[i]) << ": " << results[i].total_seconds << " s\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial co-location pattern mining on a neighborhood graph"};
  app.require_subcommand(1);

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "Build a neighborhood graph from a CSV of points");
  build->add_option("--input", build_args.input, "Input CSV file")->required();
  build->add_option("--radius-km", build_args.radius_km, "Neighborhood distance threshold (km)")
      ->required();
  build->add_option("--out", build_args.out, "Output graph snapshot")->required();
  build->add_option("--id-col", build_args.mapping.id_column, "Instance id column name");
  build->add_option("--feature-col", build_args.mapping.feature_column, "Feature column name");
  build->add_option("--lat-col", build_args.mapping.lat_column, "Latitude column name");
  build->add_option("--lng-col", build_args.mapping.lng_column, "Longitude column name");

  UpdateArgs update_args;
  auto* update = app.add_subcommand("update-radius",
                                    "Re-threshold an existing graph snapshot in place");
  update->add_option("--graph", update_args.graph, "Input graph snapshot")->required();
  update->add_option("--radius-km", update_args.radius_km, "New distance threshold (km)")
      ->required();
  update->add_option("--out", update_args.out, "Output graph snapshot")->required();

  MineArgs mine_args;
  auto* mine = app.add_subcommand("mine", "Mine prevalent co-location patterns");
  mine->add_option("--graph", mine_args.graph, "Input graph snapshot")->required();
  mine->add_option("--algorithm", mine_args.algorithm,
                   "One of enum-g, enum-k, extend, oracle")
      ->required();
  mine->add_option("--min-prev", mine_args.min_prev, "Participation index threshold")
      ->required();
  mine->add_option("--max-size", mine_args.max_size, "Largest pattern size to mine")
      ->required();
  mine->add_option("--threads", mine_args.threads, "Worker threads for the miner");
  mine->add_flag("--emit-instances", mine_args.emit_instances,
                 "Include row instances in the result JSON");
  mine->add_option("--oracle-cap", mine_args.oracle_cap,
                   "Instance cap for the exhaustive oracle");
  mine->add_flag("--ignore-oracle-cap", mine_args.ignore_oracle_cap,
                 "Run the oracle regardless of dataset size");
  mine->add_option("--out", mine_args.out, "Output result JSON")->required();

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset CSV");
  gen->add_option("--features", gen_args.cfg.feature_count, "Feature count")->required();
  gen->add_option("--instances", gen_args.cfg.instance_count, "Instance count")->required();
  gen->add_option("--clusters", gen_args.cfg.cluster_count, "Cluster count")
      ->default_val(600);
  gen->add_option("--cluster-radius-km", gen_args.cfg.cluster_radius_km,
                  "Gaussian spread of each cluster (km)")
      ->default_val(0.04);
  gen->add_option("--bbox", gen_args.bbox, "lat_min lat_max lng_min lng_max")
      ->expected(4);
  gen->add_option("--noise", gen_args.cfg.noise_fraction,
                  "Fraction of instances placed uniformly")
      ->default_val(0.1);
  gen->add_option("--seed", gen_args.cfg.seed, "RNG seed")->default_val(7);
  gen->add_option("--out", gen_args.out, "Output CSV file")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand(
      "bench", "Run all three miners on one graph, verify agreement, report timings");
  bench->add_option("--graph", bench_args.graph, "Input graph snapshot")->required();
  bench->add_option("--min-prev", bench_args.min_prev, "Participation index threshold")
      ->required();
  bench->add_option("--max-size", bench_args.max_size, "Largest pattern size to mine")
      ->required();
  bench->add_option("--threads", bench_args.threads, "Worker threads for the miners");
  bench->add_option("--out", bench_args.out, "Output benchmark JSON")->required();
  bench->add_flag("--inject-validation-fault", bench_args.inject_validation_fault,
                  "Test hook: flip one validation to exercise the mismatch path")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (build->parsed()) return cmd_build(build_args);
    if (update->parsed()) return cmd_update_radius(update_args);
    if (mine->parsed()) return cmd_mine(mine_args);
    if (gen->parsed()) return cmd_gen(gen_args);
    if (bench->parsed()) return cmd_bench(bench_args);
  } catch (const ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const scpm::IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const scpm::SnapshotError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitConsistency;
  }
  return kExitOk;
}
