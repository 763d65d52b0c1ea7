#include "scpm/result_json.hpp"

#include <cmath>
#include <sstream>

namespace scpm {

nlohmann::json patterns_to_json(const MiningResult& result,
                                const std::vector<Feature>& features) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& level : result.by_size) {
    for (const MinedPattern& mp : level) {
      nlohmann::json entry;
      nlohmann::json names = nlohmann::json::array();
      nlohmann::json ratios = nlohmann::json::object();
      for (std::size_t i = 0; i < mp.pattern.size(); ++i) {
        const std::string& name = features[mp.pattern[i]].name;
        names.push_back(name);
        ratios[name] = mp.report.ratios[i];
      }
      entry["features"] = std::move(names);
      entry["size"] = mp.pattern.size();
      entry["participation_index"] = mp.report.index;
      entry["participation_ratios"] = std::move(ratios);
      entry["row_instance_count"] = mp.report.row_instance_count;
      if (!mp.instances.empty()) entry["instances"] = mp.instances;
      out.push_back(std::move(entry));
    }
  }
  return out;
}

nlohmann::json timings_to_json(const MiningResult& result) {
  nlohmann::json per_size = nlohmann::json::object();
  for (const auto& [size, seconds] : result.per_size_seconds)
    per_size[std::to_string(size)] = seconds;
  return nlohmann::json{{"per_size_seconds", std::move(per_size)},
                        {"total_seconds", result.total_seconds}};
}

namespace {

std::string pattern_label(const Pattern& p, const std::vector<Feature>& features) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += features[p[i]].name;
  }
  out += "}";
  return out;
}

}  // namespace

std::optional<std::string> diff_results(const MiningResult& a, const MiningResult& b,
                                        const std::vector<Feature>& features,
                                        double tol) {
  std::ostringstream diff;
  int issues = 0;
  auto note = [&](const std::string& line) {
    if (issues < 8) diff << (issues ? "; " : "") << line;
    ++issues;
  };

  if (a.by_size.size() != b.by_size.size()) {
    note("max prevalent size differs: " + std::to_string(a.by_size.size()) + " vs " +
         std::to_string(b.by_size.size()));
  }

  const std::size_t levels = std::min(a.by_size.size(), b.by_size.size());
  for (std::size_t lvl = 0; lvl < levels; ++lvl) {
    const auto& la = a.by_size[lvl];
    const auto& lb = b.by_size[lvl];
    std::size_t ia = 0, ib = 0;
    while (ia < la.size() || ib < lb.size()) {
      if (ia < la.size() && (ib == lb.size() || la[ia].pattern < lb[ib].pattern)) {
        note("only left: " + pattern_label(la[ia].pattern, features));
        ++ia;
        continue;
      }
      if (ib < lb.size() && (ia == la.size() || lb[ib].pattern < la[ia].pattern)) {
        note("only right: " + pattern_label(lb[ib].pattern, features));
        ++ib;
        continue;
      }
      const MinedPattern& pa = la[ia];
      const MinedPattern& pb = lb[ib];
      const std::string label = pattern_label(pa.pattern, features);
      if (std::abs(pa.report.index - pb.report.index) > tol) {
        note(label + " index " + std::to_string(pa.report.index) + " vs " +
             std::to_string(pb.report.index));
      }
      for (std::size_t i = 0; i < pa.report.ratios.size(); ++i) {
        if (std::abs(pa.report.ratios[i] - pb.report.ratios[i]) > tol) {
          note(label + " ratio[" + features[pa.pattern[i]].name + "] differs");
          break;
        }
      }
      if (pa.report.row_instance_count != pb.report.row_instance_count) {
        note(label + " rows " + std::to_string(pa.report.row_instance_count) + " vs " +
             std::to_string(pb.report.row_instance_count));
      }
      if (!pa.instances.empty() && !pb.instances.empty() && pa.instances != pb.instances) {
        note(label + " instance lists differ");
      }
      ++ia;
      ++ib;
    }
  }

  if (issues == 0) return std::nullopt;
  if (issues > 8) diff << "; ... " << (issues - 8) << " more";
  return diff.str();
}

}  // namespace scpm
