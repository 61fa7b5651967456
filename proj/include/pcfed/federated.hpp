#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pcfed/kernel.hpp"
#include "pcfed/linalg.hpp"
#include "pcfed/ocsvm.hpp"

namespace pcfed {

enum class AggregationPolicy {
  ConditionalMedian,  // average only clients whose loss is at or below the median
  PlainAverage,       // FedAvg baseline: average every client
};

std::string to_string(AggregationPolicy p);
/// Accepts "conditional_median" and "plain_average".
AggregationPolicy parse_policy(const std::string& s);

struct RoundConfig {
  int epochs = 50;  // local epochs per round
  int rounds = 40;
  bool parallel = false;  // run client updates on worker threads

  void validate() const;
};

struct ClientState {
  int client_id = 0;
  Matrix X;
  KernelMatrix K;
  KernelConfig kernel;
  AlphaVector alpha;
  CoefficientVector w;
  double last_loss = 0.0;

  std::size_t n() const { return X.rows(); }
};

/// Builds a client with uniform alpha and w = alpha K.
ClientState make_client(int client_id, Matrix X, const KernelConfig& kcfg, const TrainConfig& cfg);

struct RoundRecord {
  int round = 0;  // 1-based
  std::vector<int> client_ids;
  std::vector<double> losses;  // aligned with client_ids
  std::vector<bool> selected;  // aligned with client_ids
  double mean_loss = 0.0;
  double median_loss = 0.0;
};

struct ServerState {
  int round = 0;
  CoefficientVector global_w;
  AggregationPolicy policy = AggregationPolicy::ConditionalMedian;
  std::vector<RoundRecord> history;
};

/// Initial server state: global w is the mean of the clients' initial w.
ServerState make_server(const std::vector<ClientState>& clients, AggregationPolicy policy);

/// Local update for one round. The first sweep steps against the received
/// global w, held fixed; the remaining epochs - 1 sweeps are ordinary
/// Gauss-Seidel sweeps on local data. Returns (w = alpha K, -J(alpha)).
std::pair<CoefficientVector, double> client_update(ClientState& client, const CoefficientVector& w_global,
                                                   const TrainConfig& cfg, int epochs);

double median(std::vector<double> values);

/// Indices whose loss is <= the median (ties all included).
std::vector<std::size_t> select_by_median(const std::vector<double>& losses);

/// Coordinate-wise mean over the selected vectors.
CoefficientVector aggregate(const std::vector<CoefficientVector>& ws, const std::vector<std::size_t>& selected);

void run_round(ServerState& server, std::vector<ClientState>& clients, const TrainConfig& cfg,
               const RoundConfig& rcfg);

struct TrainingResult {
  std::vector<OcsvmModel> models;
  ServerState server;
  std::vector<ClientState> clients;
};

TrainingResult run_training(const std::vector<Matrix>& clients_data, const std::vector<KernelConfig>& kernels,
                            const TrainConfig& cfg, const RoundConfig& rcfg, AggregationPolicy policy);

/// Same kernel for every client.
TrainingResult run_training(const std::vector<Matrix>& clients_data, const KernelConfig& kcfg,
                            const TrainConfig& cfg, const RoundConfig& rcfg, AggregationPolicy policy);

/// CSV with header round,client_id,loss,selected.
void write_history_csv(std::ostream& os, const std::vector<RoundRecord>& history);

}  // namespace pcfed
