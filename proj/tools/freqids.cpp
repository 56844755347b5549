// freqids: command-line front end for the spectral traffic detector.
//
// Exit codes: 0 success, 1 input error, 2 encoding search fell back to an
// infeasible vector, 3 an entropy bound check failed.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "freqids/cluster_detect.hpp"
#include "freqids/csv_trace.hpp"
#include "freqids/encoding_select.hpp"
#include "freqids/entropy.hpp"
#include "freqids/evaluate.hpp"
#include "freqids/metrics.hpp"
#include "freqids/model_io.hpp"
#include "freqids/pcap.hpp"
#include "freqids/pipeline.hpp"
#include "freqids/scenario.hpp"
#include "freqids/spectrogram.hpp"
#include "freqids/synth.hpp"

namespace {

using namespace freqids;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitViolation = 3;

// Values shared by all subcommands. A JSON config file fills these first and
// command-line flags then override individual fields.
struct RunConfig {
  HyperParams hp;
  std::uint64_t seed = 7;
  std::string key_mode = "source";
  double phi = 0.0;
  double phi_lo = 0.1;
  double phi_hi = 100.0;
  std::size_t phi_count = 64;
  std::string selection_mode = "quantile";
  double quantile = 0.95;
  double fraction = 0.2;
  std::size_t search_budget = 10000;
  std::size_t entropy_n = 50;
  double entropy_sigma = 1.0;
  double entropy_weight = 10.0;
  std::size_t entropy_samples = 100000;
};

void load_config(const std::string& path, RunConfig& cfg) {
  const Json j = read_json_file(path);
  if (j.contains("hyperparams")) merge_json(j.at("hyperparams"), cfg.hp);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.key_mode = j.value("key_mode", cfg.key_mode);
  cfg.phi = j.value("phi", cfg.phi);
  if (j.contains("phi_sweep")) {
    const auto& s = j.at("phi_sweep");
    cfg.phi_lo = s.value("lo", cfg.phi_lo);
    cfg.phi_hi = s.value("hi", cfg.phi_hi);
    cfg.phi_count = s.value("count", cfg.phi_count);
  }
  if (j.contains("selection")) {
    const auto& s = j.at("selection");
    cfg.selection_mode = s.value("mode", cfg.selection_mode);
    cfg.quantile = s.value("quantile", cfg.quantile);
    cfg.fraction = s.value("fraction", cfg.fraction);
    cfg.search_budget = s.value("search_budget", cfg.search_budget);
  }
  if (j.contains("entropy")) {
    const auto& s = j.at("entropy");
    cfg.entropy_n = s.value("n", cfg.entropy_n);
    cfg.entropy_sigma = s.value("sigma", cfg.entropy_sigma);
    cfg.entropy_weight = s.value("weight", cfg.entropy_weight);
    cfg.entropy_samples = s.value("samples", cfg.entropy_samples);
  }
}

// The config path must be known before the other options are declared, since
// their defaults come from it.
std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.starts_with("--config=")) return std::string(a.substr(9));
  }
  return {};
}

KeyMode parse_key_mode(const std::string& s) {
  if (s == "source") return KeyMode::SourceIP;
  if (s == "five-tuple") return KeyMode::FiveTuple;
  throw Error("unknown key mode '" + s + "' (expected source or five-tuple)");
}

bool has_suffix(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_pcap_path(const std::string& path) { return has_suffix(path, ".pcap") || has_suffix(path, ".cap"); }

struct LoadedTrace {
  std::vector<LabeledPacket> packets;
  bool labeled = false;

  std::vector<PacketRecord> records() const { return strip_labels(packets); }
};

LoadedTrace load_trace(const std::string& path) {
  LoadedTrace t;
  if (is_pcap_path(path)) {
    auto res = read_pcap_file(path);
    if (res.truncated()) std::cerr << "warning: " << path << ": " << res.message << "; using the complete records\n";
    for (auto& r : res.records) t.packets.push_back({std::move(r), Label::Benign});
  } else {
    auto csv = read_csv_file(path);
    t.packets = std::move(csv.packets);
    t.labeled = csv.labeled;
  }
  return t;
}

ConstraintMode constraint_mode(const RunConfig& cfg) {
  if (cfg.selection_mode == "hard") return ConstraintMode::hard();
  if (cfg.selection_mode == "quantile") return ConstraintMode::at_least(cfg.quantile);
  throw Error("unknown selection mode '" + cfg.selection_mode + "' (expected hard or quantile)");
}

SelectionResult run_selection(const std::vector<PacketRecord>& records, const RunConfig& cfg) {
  if (records.empty()) throw Error("empty training trace");
  cfg.hp.validate();
  auto problem = selection_problem(records, cfg.hp, constraint_mode(cfg), cfg.fraction,
                                   parse_key_mode(cfg.key_mode), cfg.seed);
  return select_encoding(problem, cfg.search_budget);
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      w.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error("bad weight '" + item + "'");
    }
  }
  if (w.empty()) throw Error("empty weight list");
  return w;
}

// Encoding from --weights, or from a selection result or model file.
EncodingVector resolve_encoding(const std::string& weights, const std::string& encoding_path) {
  if (!weights.empty()) return EncodingVector{parse_weights(weights)};
  const Json j = read_json_file(encoding_path);
  if (j.contains("w")) return selection_from_json(j).w;
  if (j.contains("encoding_vector")) return EncodingVector{j.at("encoding_vector").get<std::vector<double>>()};
  throw Error(encoding_path + ": no 'w' or 'encoding_vector' field");
}

StoredModel load_model(const std::string& path) {
  StoredModel m = model_from_json(read_json_file(path));
  const std::size_t expected = m.is_flow_stats() ? kFlowStatCount : m.cluster.hp.bins();
  if (m.cluster.dimension() != expected) {
    throw DimensionMismatch(path + ": center dimension vs model configuration", expected, m.cluster.dimension());
  }
  if (!m.is_flow_stats() && m.cluster.encoding.size() != kPacketFeatureCount) {
    throw DimensionMismatch(path + ": encoding vector length", kPacketFeatureCount, m.cluster.encoding.size());
  }
  return m;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

// ---------------------------------------------------------------------------

int cmd_select_params(const RunConfig& cfg, const std::string& input, const std::string& output) {
  const auto trace = load_trace(input);
  const auto result = run_selection(trace.records(), cfg);
  const Json j = to_json(result);
  if (output.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(output, j);
  }
  if (!result.feasible) {
    std::cerr << "no feasible encoding vector found; wrote the least-violating candidate (violated fraction "
              << result.violated_constraint_fraction << ")\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, const std::string& input, const std::string& output, const std::string& kind,
              const std::string& weights, const std::string& encoding_path) {
  cfg.hp.validate();
  const auto trace = load_trace(input);
  const KeyMode mode = parse_key_mode(cfg.key_mode);
  auto flows = labeled_flows(trace.packets, mode);
  if (trace.labeled) {
    std::erase_if(flows, [](const LabeledFlow& f) { return f.label == Label::Malicious; });
  }
  if (flows.empty()) throw Error("training trace has no benign flows");

  StoredModel stored;
  if (kind == "flow-stats") {
    auto m = train_flow_stats(flows, cfg.hp, cfg.seed);
    stored.cluster = std::move(m.cluster);
    stored.scaler = std::move(m.scaler);
  } else if (kind == "spectral") {
    EncodingVector w;
    if (weights.empty() && encoding_path.empty()) {
      const auto sel = run_selection(trace.records(), cfg);
      if (!sel.feasible) std::cerr << "warning: encoding search found no feasible vector; using the fallback\n";
      w = sel.w;
    } else {
      w = resolve_encoding(weights, encoding_path);
    }
    if (w.size() != kPacketFeatureCount) throw DimensionMismatch("encoding vector length", kPacketFeatureCount, w.size());
    stored.cluster = train_spectral(flows, w, cfg.hp, cfg.seed);
  } else {
    throw Error("unknown model kind '" + kind + "' (expected spectral or flow-stats)");
  }
  write_json_file(output, to_json(stored));
  std::cout << "train_loss " << std::setprecision(10) << stored.cluster.train_loss << '\n';
  return kExitOk;
}

int cmd_detect(const RunConfig& cfg, const std::string& model_path, const std::string& input,
               const std::string& output, std::size_t queue_capacity, std::size_t watermark) {
  if (!(cfg.phi > 0.0)) throw Error("--phi must be positive");
  const StoredModel model = load_model(model_path);
  const auto trace = load_trace(input);
  const auto records = trace.records();
  const KeyMode mode = parse_key_mode(cfg.key_mode);

  std::ofstream file;
  if (!output.empty()) file = open_output(output);
  std::ostream& out = output.empty() ? std::cout : file;
  auto emit = [&](const FlowKey& key, double max_loss, double threshold, bool malicious) {
    const Json line{{"flow", to_string(key)},
                    {"max_loss", max_loss},
                    {"threshold", threshold},
                    {"verdict", malicious ? "malicious" : "benign"}};
    out << line.dump() << '\n';
  };

  if (model.is_flow_stats()) {
    const FlowStatsModel fsc{model.cluster, *model.scaler};
    const double threshold = detection_threshold(model.cluster, cfg.phi);
    for (const auto& f : labeled_flows(trace.packets, mode)) {
      const double s = flow_stats_score(fsc, f.packets);
      emit(f.key, s, threshold, s >= threshold);
    }
    return kExitOk;
  }
  PipelineOptions opts;
  opts.key_mode = mode;
  opts.queue_capacity = queue_capacity;
  opts.watermark = watermark;
  for (const auto& v : run_pipeline(records, model.cluster, cfg.phi, opts)) {
    const auto& d = v.detection;
    emit(d.flow_key, d.max_loss(), d.threshold_used, d.verdict == Verdict::Malicious);
  }
  return kExitOk;
}

struct MethodReport {
  std::string name;
  LabeledScores scores;
  const ClusterModel* cluster = nullptr;
};

int cmd_eval(const RunConfig& cfg, const std::string& model_path, const std::string& fsc_path,
             const std::string& input, const std::string& prefix) {
  const auto trace = load_trace(input);
  if (!trace.labeled) throw Error(input + ": evaluation needs a labeled trace (CSV with a label column)");
  const auto flows = labeled_flows(trace.packets, parse_key_mode(cfg.key_mode));

  const StoredModel spectral = load_model(model_path);
  if (spectral.is_flow_stats()) throw Error(model_path + ": expected a spectral model");
  std::vector<MethodReport> methods;
  methods.push_back({"spectral", score_flows(flows, [&](auto p) { return spectral_flow_score(spectral.cluster, p); }),
                     &spectral.cluster});
  StoredModel fsc_model;
  if (!fsc_path.empty()) {
    fsc_model = load_model(fsc_path);
    if (!fsc_model.is_flow_stats()) throw Error(fsc_path + ": expected a flow-stats model");
    const FlowStatsModel fsc{fsc_model.cluster, *fsc_model.scaler};
    methods.push_back({"fsc", score_flows(flows, [&](auto p) { return flow_stats_score(fsc, p); }), &fsc_model.cluster});
  }

  const auto phis = phi_sweep(cfg.phi_lo, cfg.phi_hi, cfg.phi_count);
  Json report{{"flows", flows.size()},
              {"positives", methods.front().scores.positives()},
              {"negatives", methods.front().scores.negatives()},
              {"methods", Json::array()}};
  std::ofstream sweep_csv = open_output(prefix + "_sweep.csv");
  std::ofstream roc_csv = open_output(prefix + "_roc.csv");
  sweep_csv << std::setprecision(10) << "method,phi,threshold,tpr,fpr\n";
  roc_csv << std::setprecision(10) << "method,fpr,tpr\n";
  for (const auto& m : methods) {
    Json entry{{"method", m.name}, {"auc", auc(m.scores)}, {"eer", eer(m.scores)}, {"sweep", Json::array()}};
    for (double phi : phis) {
      const double threshold = detection_threshold(*m.cluster, phi);
      const Rates r = confusion_at(m.scores, threshold);
      entry["sweep"].push_back(Json{{"phi", phi}, {"threshold", threshold}, {"tpr", r.tpr}, {"fpr", r.fpr}});
      sweep_csv << m.name << ',' << phi << ',' << threshold << ',' << r.tpr << ',' << r.fpr << '\n';
    }
    for (const auto& p : roc_curve(m.scores)) roc_csv << m.name << ',' << p.fpr << ',' << p.tpr << '\n';
    report["methods"].push_back(std::move(entry));
  }
  write_json_file(prefix + ".json", report);
  for (const auto& m : report["methods"]) {
    std::cout << m["method"].get<std::string>() << " auc " << m["auc"].get<double>() << " eer "
              << m["eer"].get<double>() << '\n';
  }
  return kExitOk;
}

TrafficKind parse_kind(const std::string& s) {
  if (s == "benign") return TrafficKind::BenignGP;
  if (s == "syn-flood") return TrafficKind::SynFlood;
  if (s == "low-rate-burst") return TrafficKind::LowRateBurst;
  if (s == "scan") return TrafficKind::ConstantScan;
  throw Error("unknown traffic kind '" + s + "'");
}

std::pair<std::size_t, std::size_t> parse_ratio(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw Error("mix ratio must look like M:B, got '" + s + "'");
  try {
    const long m = std::stol(s.substr(0, colon));
    const long b = std::stol(s.substr(colon + 1));
    if (m < 0 || b < 0) throw Error("negative mix ratio");
    return {static_cast<std::size_t>(m), static_cast<std::size_t>(b)};
  } catch (const std::logic_error&) {
    throw Error("bad mix ratio '" + s + "'");
  }
}

struct SynthArgs {
  std::string kind = "benign";
  TrafficProfile profile;
  TrafficProfile noise;
  std::string mix;
  bool scenario = false;
  std::size_t benign_flows = 60;
  std::size_t attack_flows = 10;
};

int cmd_synth(const RunConfig& cfg, SynthArgs args, const std::string& output) {
  std::vector<LabeledPacket> trace;
  if (args.scenario) {
    ScenarioSpec spec;
    spec.benign_flows = args.benign_flows;
    spec.attack_flows = args.attack_flows;
    spec.attack = parse_kind(args.kind);
    spec.burst_interval_s = args.profile.burst_interval_s;
    spec.seed = cfg.seed;
    if (!args.mix.empty()) std::tie(spec.ratio_malicious, spec.ratio_benign) = parse_ratio(args.mix);
    if (spec.ratio_malicious == 0 || (!args.mix.empty() && spec.ratio_benign == 0)) {
      throw InvalidProfile("mix ratio components must be positive");
    }
    trace = build_scenario(spec);
  } else {
    args.profile.kind = parse_kind(args.kind);
    if (args.mix.empty()) {
      trace = generate(args.profile, cfg.seed);
    } else {
      const auto [m, b] = parse_ratio(args.mix);
      trace = mix(MixSpec{args.profile, args.noise, m, b}, cfg.seed);
    }
  }
  if (is_pcap_path(output)) {
    write_pcap_file(output, strip_labels(trace));
  } else {
    const KeyMode mode = parse_key_mode(cfg.key_mode);
    for (auto& lp : trace) lp.record.flow_key = project(lp.record.flow_key, mode);
    std::ofstream out = open_output(output);
    write_labeled_csv(out, trace);
  }
  std::cout << trace.size() << " packets\n";
  return kExitOk;
}

int cmd_spectrogram(const RunConfig& cfg, const std::string& input, const std::string& flow_id,
                    const std::string& weights, const std::string& encoding_path, const std::string& output) {
  const auto trace = load_trace(input);
  const auto flows = labeled_flows(trace.packets, parse_key_mode(cfg.key_mode));
  const LabeledFlow* chosen = nullptr;
  for (const auto& f : flows) {
    if (flow_id.empty() ? (!chosen || f.packets.size() > chosen->packets.size()) : to_string(f.key) == flow_id) {
      chosen = &f;
    }
  }
  if (!chosen) throw Error(flow_id.empty() ? "trace has no flows" : "flow '" + flow_id + "' not found");
  HyperParams hp = cfg.hp;
  EncodingVector w;
  if (weights.empty() && !encoding_path.empty()) {
    const Json j = read_json_file(encoding_path);
    if (j.contains("hyperparams")) merge_json(j.at("hyperparams"), hp);
  }
  w = weights.empty() && encoding_path.empty() ? EncodingVector{{hp.weight_min, hp.weight_min, hp.weight_min}}
                                               : resolve_encoding(weights, encoding_path);
  hp.validate();
  const auto r = extract(to_feature_rows(chosen->packets), w, hp);
  if (r.empty()) {
    throw Error("flow " + to_string(chosen->key) + " has fewer packets than one frame (" +
                std::to_string(hp.frame_length) + ")");
  }
  spectrogram_export(r, output);
  std::cout << to_string(chosen->key) << ": " << r.frames() << "x" << r.bins() << " image\n";
  return kExitOk;
}

int cmd_entropy_check(const RunConfig& cfg, const std::string& output) {
  const auto spec = GaussianProcessSpec::stationary_zero_mean(cfg.entropy_n, cfg.entropy_sigma);
  McBudget budget;
  budget.samples = cfg.entropy_samples;
  budget.seed = cfg.seed;
  budget.weight = cfg.entropy_weight;
  Json reports = Json::array();
  bool all_passed = true;
  for (LossCheck check : kAllLossChecks) {
    const LossReport rep = verify_loss_bound(check, spec, budget);
    if (rep.checked && !rep.passed) all_passed = false;
    reports.push_back(to_json(rep));
    std::cerr << to_string(check) << ": " << (rep.checked ? (rep.passed ? "pass" : "FAIL") : "reported") << " ("
              << rep.detail << ")\n";
  }
  if (output.empty()) {
    std::cout << reports.dump(2) << '\n';
  } else {
    write_json_file(output, reports);
  }
  return all_passed ? kExitOk : kExitViolation;
}

void add_hyperparam_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--frame-length", cfg.hp.frame_length, "Frame length W_seg")->capture_default_str();
  app.add_option("--window-length", cfg.hp.window_length, "Frames averaged per clustering sample W_win")
      ->capture_default_str();
  app.add_option("--log-scale", cfg.hp.log_scale, "Log scale C")->capture_default_str();
  app.add_option("--clusters", cfg.hp.clusters, "Number of cluster centers K_C")->capture_default_str();
  app.add_option("--weight-min", cfg.hp.weight_min, "Lower encoding weight bound")->capture_default_str();
  app.add_option("--weight-max", cfg.hp.weight_max, "Upper encoding weight bound")->capture_default_str();
  app.add_option("--encoded-bound", cfg.hp.encoded_bound, "Budget B on encoded values")->capture_default_str();
}

void add_selection_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--mode", cfg.selection_mode, "Constraint mode")
      ->check(CLI::IsMember({"hard", "quantile"}))
      ->capture_default_str();
  app.add_option("--quantile", cfg.quantile, "Share of rows that must satisfy the constraints in quantile mode")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--fraction", cfg.fraction, "Leading share of the trace used for the search")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--search-budget", cfg.search_budget, "Number of candidate vectors evaluated")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  const std::string config_path = find_config_arg(argc, argv);
  try {
    if (!config_path.empty()) load_config(config_path, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  CLI::App app{"Frequency-domain malicious traffic detector"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_unused;
  app.add_option("--config", config_unused, "JSON config file; command-line flags override its values");
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--key-mode", cfg.key_mode, "Flow grouping")
      ->check(CLI::IsMember({"source", "five-tuple"}))
      ->capture_default_str();

  std::string input, output, model_path, fsc_path, weights, encoding_path, kind = "spectral", flow_id;
  std::size_t queue_capacity = 64, watermark = std::size_t{1} << 22;

  auto* select = app.add_subcommand("select-params", "Search the encoding vector on the first packets of a trace");
  select->add_option("-i,--input", input, "Training trace (.csv or .pcap)")->required();
  select->add_option("-o,--output", output, "Result JSON (default: standard output)");
  add_hyperparam_options(*select, cfg);
  add_selection_options(*select, cfg);

  auto* train_cmd = app.add_subcommand("train", "Fit cluster centers on benign traffic");
  train_cmd->add_option("-i,--input", input, "Benign training trace")->required();
  train_cmd->add_option("-o,--output", output, "Model JSON")->required();
  train_cmd->add_option("--kind", kind, "Model kind")
      ->check(CLI::IsMember({"spectral", "flow-stats"}))
      ->capture_default_str();
  train_cmd->add_option("--weights", weights, "Encoding vector as comma-separated weights");
  train_cmd->add_option("--encoding", encoding_path, "select-params result or model file holding the encoding");
  add_hyperparam_options(*train_cmd, cfg);
  add_selection_options(*train_cmd, cfg);

  auto* detect_cmd = app.add_subcommand("detect", "Score each flow and print one JSON line per flow");
  detect_cmd->add_option("-m,--model", model_path, "Model JSON")->required();
  detect_cmd->add_option("-i,--input", input, "Trace to inspect")->required();
  detect_cmd->add_option("--phi", cfg.phi, "Threshold multiplier on the training loss; no default, give it here or in --config");
  detect_cmd->add_option("-o,--output", output, "JSON-lines output (default: standard output)");
  detect_cmd->add_option("--queue-capacity", queue_capacity, "Capacity of each inter-stage queue")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  detect_cmd->add_option("--watermark", watermark, "Buffered packets before the oldest flow is cut")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* eval_cmd = app.add_subcommand("eval", "Sweep phi and report TPR/FPR, AUC and EER on a labeled trace");
  eval_cmd->add_option("-m,--model", model_path, "Spectral model JSON")->required();
  eval_cmd->add_option("--fsc-model", fsc_path, "Flow-statistics model JSON to report side by side");
  eval_cmd->add_option("-i,--input", input, "Labeled trace")->required();
  eval_cmd->add_option("-o,--output-prefix", output, "Writes PREFIX.json, PREFIX_sweep.csv and PREFIX_roc.csv")
      ->required();
  eval_cmd->add_option("--phi-min", cfg.phi_lo, "Smallest phi of the sweep")->capture_default_str();
  eval_cmd->add_option("--phi-max", cfg.phi_hi, "Largest phi of the sweep")->capture_default_str();
  eval_cmd->add_option("--phi-count", cfg.phi_count, "Number of log-spaced phi values")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic trace");
  synth_cmd->add_option("-o,--output", output, "Output trace; .pcap writes a capture, anything else labeled CSV")
      ->required();
  synth_cmd->add_option("--kind", synth_args.kind, "Traffic kind")
      ->check(CLI::IsMember({"benign", "syn-flood", "low-rate-burst", "scan"}))
      ->capture_default_str();
  synth_cmd->add_option("--rate", synth_args.profile.rate_pps, "Packets per second")->capture_default_str();
  synth_cmd->add_option("--duration", synth_args.profile.duration_s, "Seconds")->capture_default_str();
  synth_cmd->add_option("--length-mean", synth_args.profile.length_mean, "Mean packet length")->capture_default_str();
  synth_cmd->add_option("--length-std", synth_args.profile.length_std, "Packet length deviation (benign)")
      ->capture_default_str();
  synth_cmd->add_option("--ipt-std-ratio", synth_args.profile.ipt_std_ratio,
                        "Inter-arrival deviation over its mean (benign)")
      ->capture_default_str();
  synth_cmd->add_option("--proto", synth_args.profile.proto_code, "IP protocol number")
      ->check(CLI::Range(0, 255))
      ->default_str(std::to_string(synth_args.profile.proto_code));
  synth_cmd->add_option("--burst-interval", synth_args.profile.burst_interval_s, "Seconds between bursts")
      ->capture_default_str();
  synth_cmd->add_option("--burst-len", synth_args.profile.burst_len, "Packets per burst")->capture_default_str();
  synth_cmd->add_option("--source", synth_args.profile.source, "Source address")->capture_default_str();
  synth_cmd->add_option("--mix", synth_args.mix, "Inject benign noise at malicious:benign packet ratio, e.g. 1:4");
  synth_cmd->add_option("--noise-rate", synth_args.noise.rate_pps, "Noise packets per second")->capture_default_str();
  synth_cmd->add_option("--noise-length-mean", synth_args.noise.length_mean, "Noise mean length")
      ->capture_default_str();
  synth_cmd->add_option("--noise-length-std", synth_args.noise.length_std, "Noise length deviation")
      ->capture_default_str();
  synth_cmd->add_flag("--scenario", synth_args.scenario,
                      "Emit a population of randomized benign flows plus attack flows of --kind");
  synth_cmd->add_option("--benign-flows", synth_args.benign_flows, "Benign flows in --scenario mode")
      ->capture_default_str();
  synth_cmd->add_option("--attack-flows", synth_args.attack_flows, "Attack flows in --scenario mode")
      ->capture_default_str();

  auto* spec_cmd = app.add_subcommand("spectrogram", "Export one flow's spectral features as a PPM image");
  spec_cmd->add_option("-i,--input", input, "Trace")->required();
  spec_cmd->add_option("--flow", flow_id, "Flow id (default: the flow with the most packets)");
  spec_cmd->add_option("--weights", weights, "Encoding vector as comma-separated weights");
  spec_cmd->add_option("--encoding", encoding_path, "select-params result or model file holding the encoding");
  spec_cmd->add_option("-o,--output", output, "PPM image")->required();
  add_hyperparam_options(*spec_cmd, cfg);

  auto* entropy_cmd = app.add_subcommand("entropy-check", "Check the information-loss bounds by Monte Carlo");
  entropy_cmd->add_option("--n", cfg.entropy_n, "Packets per sequence")->check(CLI::Range(3, 100000))
      ->capture_default_str();
  entropy_cmd->add_option("--sigma", cfg.entropy_sigma, "Per-packet standard deviation")->capture_default_str();
  entropy_cmd->add_option("--weight", cfg.entropy_weight, "Encoding weight")->capture_default_str();
  entropy_cmd->add_option("--samples", cfg.entropy_samples, "Monte-Carlo samples per estimate")
      ->check(CLI::Range(1000, 100000000))
      ->capture_default_str();
  entropy_cmd->add_option("-o,--output", output, "Report JSON (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*select) return cmd_select_params(cfg, input, output);
    if (*train_cmd) return cmd_train(cfg, input, output, kind, weights, encoding_path);
    if (*detect_cmd) return cmd_detect(cfg, model_path, input, output, queue_capacity, watermark);
    if (*eval_cmd) return cmd_eval(cfg, model_path, fsc_path, input, output);
    if (*synth_cmd) return cmd_synth(cfg, synth_args, output);
    if (*spec_cmd) return cmd_spectrogram(cfg, input, flow_id, weights, encoding_path, output);
    if (*entropy_cmd) return cmd_entropy_check(cfg, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
