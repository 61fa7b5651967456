#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcfed/data.hpp"
#include "pcfed/eval.hpp"
#include "pcfed/federated.hpp"
#include "pcfed/ocsvm.hpp"
#include "pcfed/personalize.hpp"

namespace pcfed {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Preprocess {
  None,      // features are used as given
  Spectrum,  // each feature row is a raw signal: normalize then FFT magnitude
};

struct ExperimentConfig {
  std::optional<std::filesystem::path> data_csv;
  std::optional<SynthConfig> synth;
  Preprocess preprocess = Preprocess::None;
  std::optional<double> sigma;  // per-client median heuristic when absent
  TrainConfig train;
  RoundConfig rounds;
  AggregationPolicy policy = AggregationPolicy::ConditionalMedian;
  bool personalize = true;
  EdgeConfig edge;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;  // empty: nothing written
};

/// Parses the flat JSON config; unknown keys and bad values raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every result-relevant setting with defaults filled in (output_dir omitted).
nlohmann::json config_echo(const ExperimentConfig& cfg);

struct ClientMetrics {
  int client_id = 0;
  Confusion confusion;
  double f_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t n_support_vectors = 0;
  std::size_t n_edge_support_vectors = 0;
};

struct MetricsReport {
  nlohmann::json config_echo;
  std::vector<ClientMetrics> per_client;
  double mean_f = 0.0;
  double std_f = 0.0;  // population standard deviation over clients
  int rounds_run = 0;
  std::vector<RoundRecord> history;
};

nlohmann::json to_json(const MetricsReport& report);

/// Deterministic seed for a client's train/test split.
std::uint64_t client_split_seed(std::uint64_t seed, int client_id);

/// ingest -> preprocess -> split -> federated training -> personalization
/// -> per-client evaluation. Writes metrics.json and convergence.csv when
/// output_dir is set. Stage failures surface as ConfigError, DataError or
/// TrainingError.
MetricsReport run_experiment(const ExperimentConfig& cfg);

struct SweepRow {
  int epochs = 0;
  double mean_f = 0.0;
  double std_f = 0.0;
};

struct SweepResult {
  std::vector<MetricsReport> reports;
  std::vector<SweepRow> table;
};

/// One run per local-epoch count. With output_dir set, each run writes to
/// output_dir/E<epochs>/ and the table goes to output_dir/sweep_summary.csv.
SweepResult sweep(const ExperimentConfig& cfg, const std::vector<int>& epochs_list);

void write_report(const MetricsReport& report, const std::filesystem::path& dir);

}  // namespace pcfed
