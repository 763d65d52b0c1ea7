#include "scpm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "scpm/geo.hpp"

namespace scpm {

void Dataset::validate() const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].ordinal != i)
      throw IngestError("feature ordinals must be dense 0..F-1");
  }
  std::unordered_set<std::string> names;
  for (const Feature& f : features) {
    if (f.name.empty()) throw IngestError("feature name is empty");
    if (!names.insert(f.name).second) throw IngestError("duplicate feature name: " + f.name);
  }
  std::unordered_set<std::string> ids;
  ids.reserve(instances.size());
  for (const FeatureInstance& inst : instances) {
    if (inst.feature >= features.size())
      throw IngestError("instance " + inst.id + " references unknown feature ordinal");
    if (!ids.insert(inst.id).second) throw IngestError("duplicate instance id: " + inst.id);
  }
}

const Feature* Dataset::find_feature(const std::string& name) const {
  for (const Feature& f : features) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

namespace {

// RFC 4180 style record reader: quoted fields may contain commas, quotes
// ("" escape) and newlines. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;

  std::string field;
  bool quoted = false;
  while (true) {
    if (c == EOF) {
      fields.push_back(std::move(field));
      return true;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        int next = in.peek();
        if (next == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get();
      fields.push_back(std::move(field));
      return true;
    } else if (ch == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
    c = in.get();
  }
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::optional<double> parse_double(const std::string& s) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && std::isspace(static_cast<unsigned char>(*first))) ++first;
  while (last != first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
  if (first == last) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

LoadResult load_csv(std::istream& in, const CsvMapping& mapping) {
  std::vector<std::string> header;
  if (!read_record(in, header)) throw IngestError("empty CSV input");
  // Strip a UTF-8 BOM from the first header cell if present.
  if (!header.empty() && header[0].size() >= 3 && header[0].compare(0, 3, "\xEF\xBB\xBF") == 0)
    header[0].erase(0, 3);

  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw IngestError("CSV is missing required column \"" + name + "\"");
  };
  const std::size_t id_col = column(mapping.id_column);
  const std::size_t feature_col = column(mapping.feature_column);
  const std::size_t lat_col = column(mapping.lat_column);
  const std::size_t lng_col = column(mapping.lng_column);

  LoadResult result;
  std::unordered_set<std::string> seen_ids;
  std::vector<std::string> feature_names;
  std::unordered_set<std::string> feature_name_set;

  struct RawRow {
    std::string id;
    std::string feature;
    GeoPoint location;
  };
  std::vector<RawRow> rows;

  std::vector<std::string> fields;
  while (read_record(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
    ++result.rows_read;
    if (fields.size() != header.size()) {
      ++result.skipped.malformed_row;
      continue;
    }
    const std::string& id = fields[id_col];
    const std::string& feature = fields[feature_col];
    if (is_blank(id) || is_blank(feature)) {
      ++result.skipped.missing_field;
      continue;
    }
    auto lat = parse_double(fields[lat_col]);
    auto lng = parse_double(fields[lng_col]);
    if (!lat || !lng || *lat < -90.0 || *lat > 90.0 || *lng < -180.0 || *lng > 180.0) {
      ++result.skipped.bad_coordinate;
      continue;
    }
    if (!seen_ids.insert(id).second) throw IngestError("duplicate instance id: " + id);
    if (feature_name_set.insert(feature).second) feature_names.push_back(feature);
    rows.push_back(RawRow{id, feature, GeoPoint(*lat, *lng)});
  }

  if (rows.empty()) throw IngestError("zero valid rows in CSV input");

  result.dataset.features = feature_order(std::move(feature_names));
  std::unordered_map<std::string, FeatureId> ord;
  for (const Feature& f : result.dataset.features) ord.emplace(f.name, f.ordinal);

  result.dataset.instances.reserve(rows.size());
  for (RawRow& r : rows) {
    result.dataset.instances.push_back(
        FeatureInstance{std::move(r.id), ord.at(r.feature), r.location});
  }
  result.dataset.validate();
  return result;
}

LoadResult load_csv(const std::filesystem::path& path, const CsvMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("input not found: " + path.string());
  return load_csv(in, mapping);
}

void write_csv(const Dataset& dataset, std::ostream& out, const CsvMapping& mapping) {
  out << csv_quote(mapping.id_column) << ',' << csv_quote(mapping.feature_column) << ','
      << csv_quote(mapping.lat_column) << ',' << csv_quote(mapping.lng_column) << '\n';
  for (const FeatureInstance& inst : dataset.instances) {
    out << csv_quote(inst.id) << ',' << csv_quote(dataset.features[inst.feature].name) << ','
        << format_double(inst.location.lat()) << ',' << format_double(inst.location.lng())
        << '\n';
  }
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path,
               const CsvMapping& mapping) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot open output file: " + path.string());
  write_csv(dataset, out, mapping);
  out.flush();
  if (!out) throw IngestError("write failed: " + path.string());
}

namespace {

// Seeded generator with distributions fixed here so output does not depend
// on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  std::size_t uniform_index(std::size_t n) {
    auto idx = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return idx < n ? idx : n - 1;
  }

  double normal() {  // Box-Muller, one value per pair cached
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::string synthetic_feature_name(std::size_t index, std::size_t feature_count) {
  std::size_t width = 2;
  for (std::size_t n = feature_count - 1; n >= 100; n /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "F%0*zu", static_cast<int>(width), index);
  return buf;
}

}  // namespace

Dataset generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.feature_count == 0) throw std::invalid_argument("feature_count must be positive");
  if (cfg.instance_count == 0) throw std::invalid_argument("instance_count must be positive");
  if (cfg.cluster_count == 0) throw std::invalid_argument("cluster_count must be positive");
  if (!(cfg.cluster_radius_km > 0.0))
    throw std::invalid_argument("cluster_radius_km must be positive");
  if (!(cfg.noise_fraction >= 0.0 && cfg.noise_fraction <= 1.0))
    throw std::invalid_argument("noise_fraction must be within [0, 1]");
  if (!(cfg.bbox.lat_min < cfg.bbox.lat_max) || !(cfg.bbox.lng_min < cfg.bbox.lng_max))
    throw std::invalid_argument("bbox is degenerate");
  GeoPoint(cfg.bbox.lat_min, cfg.bbox.lng_min);  // range-check corners
  GeoPoint(cfg.bbox.lat_max, cfg.bbox.lng_max);
  if (cfg.instance_count < cfg.feature_count)
    throw std::invalid_argument("instance_count must be >= feature_count");

  Rng rng(cfg.seed);

  std::vector<GeoPoint> centers;
  centers.reserve(cfg.cluster_count);
  for (std::size_t i = 0; i < cfg.cluster_count; ++i) {
    const double lat = rng.uniform(cfg.bbox.lat_min, cfg.bbox.lat_max);
    const double lng = rng.uniform(cfg.bbox.lng_min, cfg.bbox.lng_max);
    centers.emplace_back(lat, lng);
  }

  // Uniform feature assignment, then reassign from the most populated
  // features until every feature has at least one instance.
  std::vector<FeatureId> assignment(cfg.instance_count);
  std::vector<std::size_t> counts(cfg.feature_count, 0);
  for (std::size_t i = 0; i < cfg.instance_count; ++i) {
    assignment[i] = static_cast<FeatureId>(rng.uniform_index(cfg.feature_count));
    ++counts[assignment[i]];
  }
  for (FeatureId f = 0; f < cfg.feature_count; ++f) {
    if (counts[f] > 0) continue;
    const auto donor = static_cast<FeatureId>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    for (std::size_t i = cfg.instance_count; i-- > 0;) {
      if (assignment[i] == donor) {
        assignment[i] = f;
        --counts[donor];
        ++counts[f];
        break;
      }
    }
  }

  const auto clustered =
      static_cast<std::size_t>(std::llround((1.0 - cfg.noise_fraction) *
                                            static_cast<double>(cfg.instance_count)));

  Dataset out;
  out.features.reserve(cfg.feature_count);
  for (std::size_t i = 0; i < cfg.feature_count; ++i) {
    out.features.push_back(
        Feature{synthetic_feature_name(i, cfg.feature_count), static_cast<FeatureId>(i)});
  }

  std::vector<std::size_t> next_serial(cfg.feature_count, 1);
  out.instances.reserve(cfg.instance_count);
  for (std::size_t i = 0; i < cfg.instance_count; ++i) {
    double lat, lng;
    if (i < clustered) {
      const GeoPoint& c = centers[rng.uniform_index(centers.size())];
      const double dlat_km = rng.normal() * cfg.cluster_radius_km;
      const double dlng_km = rng.normal() * cfg.cluster_radius_km;
      lat = c.lat() + dlat_km / km_per_degree_lat();
      lng = c.lng() + dlng_km / km_per_degree_lng(c.lat());
    } else {
      lat = rng.uniform(cfg.bbox.lat_min, cfg.bbox.lat_max);
      lng = rng.uniform(cfg.bbox.lng_min, cfg.bbox.lng_max);
    }
    lat = std::clamp(lat, -90.0, 90.0);
    lng = std::clamp(lng, -180.0, 180.0);

    const FeatureId f = assignment[i];
    std::string id = out.features[f].name + "." + std::to_string(next_serial[f]++);
    out.instances.push_back(FeatureInstance{std::move(id), f, GeoPoint(lat, lng)});
  }

  out.validate();
  return out;
}

}  // namespace scpm
