#pragma once

// JSON serialization for models, selection results and entropy reports.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "freqids/cluster_detect.hpp"
#include "freqids/encoding_select.hpp"
#include "freqids/entropy.hpp"
#include "freqids/error.hpp"
#include "freqids/flow_stats.hpp"
#include "freqids/hyperparams.hpp"

namespace freqids {

using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;

inline Json to_json(const HyperParams& hp) {
  return Json{{"frame_length", hp.frame_length}, {"window_length", hp.window_length},
              {"log_scale", hp.log_scale},       {"clusters", hp.clusters},
              {"weight_min", hp.weight_min},     {"weight_max", hp.weight_max},
              {"encoded_bound", hp.encoded_bound}};
}

/// Missing keys keep their current values, so a partial object overrides
/// only what it names.
inline void merge_json(const Json& j, HyperParams& hp) {
  auto take = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  take("frame_length", hp.frame_length);
  take("window_length", hp.window_length);
  take("log_scale", hp.log_scale);
  take("clusters", hp.clusters);
  take("weight_min", hp.weight_min);
  take("weight_max", hp.weight_max);
  take("encoded_bound", hp.encoded_bound);
}

inline Json to_json(const SelectionResult& r) {
  return Json{{"w", r.w.weights},
              {"objective", r.objective_value},
              {"feasible", r.feasible},
              {"violated_constraint_fraction", r.violated_constraint_fraction},
              {"evaluations", r.evaluations}};
}

inline SelectionResult selection_from_json(const Json& j) {
  SelectionResult r;
  r.w.weights = j.at("w").get<std::vector<double>>();
  r.objective_value = j.value("objective", 0.0);
  r.feasible = j.value("feasible", false);
  r.violated_constraint_fraction = j.value("violated_constraint_fraction", 0.0);
  r.evaluations = j.value("evaluations", std::size_t{0});
  return r;
}

/// A spectral model, or a flow-statistics model when `scaler` is present.
struct StoredModel {
  ClusterModel cluster;
  std::optional<MinMaxScaler> scaler;

  bool is_flow_stats() const { return scaler.has_value(); }
};

inline Json to_json(const StoredModel& m) {
  const ClusterModel& c = m.cluster;
  Json j{{"format_version", kModelFormatVersion},
         {"kind", m.is_flow_stats() ? "flow_stats" : "spectral"},
         {"centers", c.centers},
         {"train_loss", c.train_loss},
         {"hyperparams", to_json(c.hp)},
         {"encoding_vector", c.encoding.weights},
         {"seed", c.seed}};
  if (m.scaler) j["scaler"] = Json{{"lo", m.scaler->lo()}, {"hi", m.scaler->hi()}};
  return j;
}

inline StoredModel model_from_json(const Json& j) {
  const int version = j.value("format_version", 0);
  if (version != kModelFormatVersion) throw Error("model: unsupported format_version " + std::to_string(version));
  StoredModel m;
  ClusterModel& c = m.cluster;
  c.centers = j.at("centers").get<std::vector<Sample>>();
  c.train_loss = j.at("train_loss").get<double>();
  merge_json(j.at("hyperparams"), c.hp);
  c.encoding.weights = j.value("encoding_vector", std::vector<double>{});
  c.seed = j.value("seed", std::uint64_t{0});
  const std::string kind = j.value("kind", std::string("spectral"));
  if (kind == "flow_stats") {
    const auto& s = j.at("scaler");
    m.scaler = MinMaxScaler(s.at("lo").get<std::vector<double>>(), s.at("hi").get<std::vector<double>>());
  } else if (kind != "spectral") {
    throw Error("model: unknown kind '" + kind + "'");
  }
  for (const auto& center : c.centers) {
    if (center.size() != c.dimension()) throw DimensionMismatch("center dimension", c.dimension(), center.size());
  }
  return m;
}

inline Json to_json(const LossReport& r) {
  Json j{{"check", to_string(r.check)},
         {"method", to_string(r.method)},
         {"closed_form", r.closed_form},
         {"upper_bound", nullptr},
         {"monte_carlo", nullptr},
         {"mc_stderr", r.mc_stderr},
         {"checked", r.checked},
         {"passed", r.passed},
         {"detail", r.detail}};
  if (r.upper_bound) j["upper_bound"] = *r.upper_bound;
  if (r.monte_carlo) j["monte_carlo"] = *r.monte_carlo;
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace freqids
