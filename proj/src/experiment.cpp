#include "pcfed/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>

namespace pcfed {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {
    "data_csv", "synth",         "preprocess", "sigma",          "nu",       "eta",   "epsilon",
    "max_epochs", "epochs",      "rounds",     "parallel",       "policy",   "personalize",
    "edge_k",   "edge_gamma",    "train_fraction", "seed",       "output_dir"};

const std::set<std::string> kSynthKeys = {"clients",        "per_client",     "dim",           "healthy_centers",
                                          "healthy_spread", "anomaly_count",  "anomaly_offset", "center_radius",
                                          "seed"};

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

template <typename T>
void read_opt(const json& j, const std::string& key, T& out) {
  if (j.contains(key)) out = get_as<T>(j, key);
}

std::string to_string(Preprocess p) { return p == Preprocess::Spectrum ? "spectrum" : "none"; }

SynthConfig parse_synth(const json& j, std::uint64_t default_seed) {
  if (!j.is_object()) throw ConfigError("config key 'synth' must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!kSynthKeys.contains(key)) throw ConfigError("unknown synth key '" + key + "'");
  }
  SynthConfig s;
  s.seed = default_seed;
  read_opt(j, "clients", s.clients);
  read_opt(j, "per_client", s.per_client);
  read_opt(j, "dim", s.dim);
  read_opt(j, "healthy_spread", s.healthy_spread);
  read_opt(j, "anomaly_count", s.anomaly_count);
  read_opt(j, "anomaly_offset", s.anomaly_offset);
  read_opt(j, "seed", s.seed);
  double radius = 6.0;
  read_opt(j, "center_radius", radius);
  if (j.contains("healthy_centers")) {
    s.healthy_centers = get_as<std::vector<Vector>>(j, "healthy_centers");
  } else {
    if (s.clients < 1 || s.dim < 1) throw ConfigError("synth: clients and dim must be >= 1");
    s.healthy_centers = ring_centers(s.clients, s.dim, radius);
  }
  try {
    s.validate();
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

json synth_echo(const SynthConfig& s) {
  return json{{"clients", s.clients},
              {"per_client", s.per_client},
              {"dim", s.dim},
              {"healthy_centers", s.healthy_centers},
              {"healthy_spread", s.healthy_spread},
              {"anomaly_count", s.anomaly_count},
              {"anomaly_offset", s.anomaly_offset},
              {"seed", s.seed}};
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double pop_std(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kTopLevelKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig cfg;
  read_opt(j, "seed", cfg.seed);
  if (j.contains("data_csv") == j.contains("synth")) {
    throw ConfigError("config needs exactly one data source: 'data_csv' or 'synth'");
  }
  if (j.contains("data_csv")) cfg.data_csv = get_as<std::string>(j, "data_csv");
  if (j.contains("synth")) cfg.synth = parse_synth(j.at("synth"), cfg.seed);

  if (j.contains("preprocess")) {
    const auto p = get_as<std::string>(j, "preprocess");
    if (p == "none") {
      cfg.preprocess = Preprocess::None;
    } else if (p == "spectrum") {
      cfg.preprocess = Preprocess::Spectrum;
    } else {
      throw ConfigError("config key 'preprocess' must be 'none' or 'spectrum'");
    }
  }
  if (j.contains("sigma") && !j.at("sigma").is_null()) {
    cfg.sigma = get_as<double>(j, "sigma");
    if (!(*cfg.sigma > 0.0)) throw ConfigError("config key 'sigma' must be positive");
  }
  read_opt(j, "nu", cfg.train.nu);
  read_opt(j, "eta", cfg.train.eta);
  read_opt(j, "epsilon", cfg.train.epsilon);
  read_opt(j, "max_epochs", cfg.train.max_epochs);
  read_opt(j, "epochs", cfg.rounds.epochs);
  read_opt(j, "rounds", cfg.rounds.rounds);
  read_opt(j, "parallel", cfg.rounds.parallel);
  if (j.contains("policy")) {
    try {
      cfg.policy = parse_policy(get_as<std::string>(j, "policy"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  read_opt(j, "personalize", cfg.personalize);
  read_opt(j, "edge_k", cfg.edge.k);
  read_opt(j, "edge_gamma", cfg.edge.gamma);
  read_opt(j, "train_fraction", cfg.train_fraction);
  if (j.contains("output_dir")) cfg.output_dir = get_as<std::string>(j, "output_dir");

  try {
    cfg.train.validate();
    cfg.rounds.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.edge.k < 1) throw ConfigError("config key 'edge_k' must be >= 1");
  if (!(cfg.edge.gamma > 0.0 && cfg.edge.gamma < 0.5)) throw ConfigError("config key 'edge_gamma' must lie in (0, 0.5)");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw ConfigError("config key 'train_fraction' must lie in (0, 1)");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json config_echo(const ExperimentConfig& cfg) {
  json j;
  if (cfg.data_csv) j["data_csv"] = cfg.data_csv->string();
  if (cfg.synth) j["synth"] = synth_echo(*cfg.synth);
  j["preprocess"] = to_string(cfg.preprocess);
  j["sigma"] = cfg.sigma ? json(*cfg.sigma) : json(nullptr);
  j["nu"] = cfg.train.nu;
  j["eta"] = cfg.train.eta;
  j["epsilon"] = cfg.train.epsilon;
  j["max_epochs"] = cfg.train.max_epochs;
  j["epochs"] = cfg.rounds.epochs;
  j["rounds"] = cfg.rounds.rounds;
  j["policy"] = to_string(cfg.policy);
  j["personalize"] = cfg.personalize;
  j["edge_k"] = cfg.edge.k;
  j["edge_gamma"] = cfg.edge.gamma;
  j["train_fraction"] = cfg.train_fraction;
  j["seed"] = cfg.seed;
  return j;
}

json to_json(const MetricsReport& report) {
  json per_client = json::array();
  for (const auto& m : report.per_client) {
    per_client.push_back({{"client_id", m.client_id},
                          {"f_score", m.f_score},
                          {"precision", m.precision},
                          {"recall", m.recall},
                          {"tp", m.confusion.tp},
                          {"fp", m.confusion.fp},
                          {"fn", m.confusion.fn},
                          {"tn", m.confusion.tn},
                          {"n_support_vectors", m.n_support_vectors},
                          {"n_edge_support_vectors", m.n_edge_support_vectors}});
  }
  return json{{"config_echo", report.config_echo},
              {"per_client", per_client},
              {"summary", {{"mean_f", report.mean_f}, {"std_f", report.std_f}}},
              {"rounds_run", report.rounds_run}};
}

std::uint64_t client_split_seed(std::uint64_t seed, int client_id) {
  // splitmix64 finaliser over (seed, client_id)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(client_id) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void write_report(const MetricsReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::ofstream metrics(dir / "metrics.json");
  if (!metrics) throw DataError("cannot write " + (dir / "metrics.json").string());
  metrics << to_json(report).dump(2) << '\n';
  std::ofstream conv(dir / "convergence.csv");
  if (!conv) throw DataError("cannot write " + (dir / "convergence.csv").string());
  write_history_csv(conv, report.history);
}

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.data_csv.has_value() == cfg.synth.has_value()) {
    throw ConfigError("experiment needs exactly one data source");
  }

  // Ingest and preprocess.
  std::vector<Event> events;
  try {
    events = cfg.data_csv ? load_events_csv(*cfg.data_csv) : synth_generate(*cfg.synth);
    if (cfg.preprocess == Preprocess::Spectrum) {
      for (auto& e : events) e.features = spectrum_features(e.features);
    }
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(std::string("ingest: ") + e.what());
  }
  if (events.empty()) throw DataError("ingest: no events");

  // Per-client split.
  std::map<int, std::vector<Event>> by_client;
  for (auto& e : events) by_client[e.client_id].push_back(std::move(e));
  std::vector<int> client_ids;
  std::vector<TrainTestSplit> splits;
  for (const auto& [id, evs] : by_client) {
    client_ids.push_back(id);
    try {
      splits.push_back(split_train_test(evs, cfg.train_fraction, client_split_seed(cfg.seed, id)));
    } catch (const DataError& e) {
      throw DataError("split (client " + std::to_string(id) + "): " + e.what());
    }
  }
  const std::size_t n_train = splits.front().train.size();
  for (std::size_t c = 0; c < splits.size(); ++c) {
    if (splits[c].train.size() != n_train) {
      throw DataError("split: clients must have equal training counts (client " + std::to_string(client_ids[c]) +
                      " has " + std::to_string(splits[c].train.size()) + ", client " +
                      std::to_string(client_ids.front()) + " has " + std::to_string(n_train) + ")");
    }
  }

  MetricsReport report;
  report.config_echo = config_echo(cfg);
  try {
    std::vector<Matrix> train_data;
    std::vector<KernelConfig> kernels;
    for (const auto& s : splits) {
      train_data.push_back(features_matrix(s.train));
      kernels.emplace_back(cfg.sigma ? *cfg.sigma : median_sigma(train_data.back()));
    }
    TrainingResult trained = run_training(train_data, kernels, cfg.train, cfg.rounds, cfg.policy);
    for (auto& rec : trained.server.history) {
      for (int& id : rec.client_ids) id = client_ids[static_cast<std::size_t>(id)];
    }
    report.history = std::move(trained.server.history);
    report.rounds_run = trained.server.round;

    std::vector<double> fs;
    for (std::size_t c = 0; c < splits.size(); ++c) {
      const OcsvmModel& base = trained.models[c];
      const PersonalizeResult pers = personalize_model(base, train_data[c], cfg.edge, cfg.train);
      const OcsvmModel& deployed = cfg.personalize ? pers.model : base;

      std::vector<int> preds;
      std::vector<Label> truths;
      for (const auto& e : splits[c].test) {
        preds.push_back(classify(deployed, e.features));
        truths.push_back(e.label);
      }
      ClientMetrics m;
      m.client_id = client_ids[c];
      m.confusion = confusion(preds, truths);
      m.f_score = f_score(m.confusion);
      m.precision = precision(m.confusion);
      m.recall = recall(m.confusion);
      m.n_support_vectors = base.n_support();
      m.n_edge_support_vectors = pers.n_edge;
      fs.push_back(m.f_score);
      report.per_client.push_back(m);
    }
    report.mean_f = mean_of(fs);
    report.std_f = pop_std(fs);
  } catch (const std::exception& e) {
    throw TrainingError(std::string("training: ") + e.what());
  }

  if (!cfg.output_dir.empty()) write_report(report, cfg.output_dir);
  return report;
}

SweepResult sweep(const ExperimentConfig& cfg, const std::vector<int>& epochs_list) {
  if (epochs_list.empty()) throw ConfigError("sweep: no epoch values");
  SweepResult result;
  for (int e : epochs_list) {
    if (e < 1) throw ConfigError("sweep: epoch values must be >= 1");
    ExperimentConfig run = cfg;
    run.rounds.epochs = e;
    if (!cfg.output_dir.empty()) run.output_dir = cfg.output_dir / ("E" + std::to_string(e));
    MetricsReport r = run_experiment(run);
    result.table.push_back({e, r.mean_f, r.std_f});
    result.reports.push_back(std::move(r));
  }
  if (!cfg.output_dir.empty()) {
    std::ofstream out(cfg.output_dir / "sweep_summary.csv");
    if (!out) throw DataError("cannot write sweep summary in " + cfg.output_dir.string());
    out << "epochs,mean_f,std_f\n" << std::setprecision(17);
    for (const auto& row : result.table) out << row.epochs << ',' << row.mean_f << ',' << row.std_f << '\n';
  }
  return result;
}

}  // namespace pcfed
