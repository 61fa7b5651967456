#include "pcfed/federated.hpp"

#include <algorithm>
#include <future>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace pcfed {

std::string to_string(AggregationPolicy p) {
  switch (p) {
    case AggregationPolicy::ConditionalMedian:
      return "conditional_median";
    case AggregationPolicy::PlainAverage:
      return "plain_average";
  }
  return "unknown";
}

AggregationPolicy parse_policy(const std::string& s) {
  if (s == "conditional_median") return AggregationPolicy::ConditionalMedian;
  if (s == "plain_average") return AggregationPolicy::PlainAverage;
  throw std::invalid_argument("unknown aggregation policy '" + s + "'");
}

void RoundConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("RoundConfig: epochs must be >= 1");
  if (rounds < 0) throw std::invalid_argument("RoundConfig: rounds must be >= 0");
}

ClientState make_client(int client_id, Matrix X, const KernelConfig& kcfg, const TrainConfig& cfg) {
  if (X.empty()) throw std::invalid_argument("make_client: client " + std::to_string(client_id) + " has no data");
  ClientState c;
  c.client_id = client_id;
  c.kernel = kcfg;
  c.K = kernel_matrix(X, kcfg);
  c.X = std::move(X);
  c.alpha = init_alpha(c.X.rows(), cfg);
  c.w = compute_w(c.alpha, c.K);
  c.last_loss = local_loss(c.alpha, c.K);
  return c;
}

ServerState make_server(const std::vector<ClientState>& clients, AggregationPolicy policy) {
  if (clients.empty()) throw std::invalid_argument("make_server: no clients");
  std::vector<CoefficientVector> ws;
  ws.reserve(clients.size());
  for (const auto& c : clients) ws.push_back(c.w);
  std::vector<std::size_t> all(clients.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  ServerState s;
  s.policy = policy;
  s.global_w = aggregate(ws, all);
  return s;
}

std::pair<CoefficientVector, double> client_update(ClientState& client, const CoefficientVector& w_global,
                                                   const TrainConfig& cfg, int epochs) {
  cfg.validate();
  if (epochs < 1) throw std::invalid_argument("client_update: epochs must be >= 1");
  const std::size_t n = client.n();
  if (w_global.size() != n || client.alpha.size() != n) {
    throw std::invalid_argument("client_update: client " + std::to_string(client.client_id) + " has " +
                                std::to_string(n) + " samples but global w has length " +
                                std::to_string(w_global.size()));
  }
  const double upper = cfg.upper_bound(n);
  auto& alpha = client.alpha.values;
  for (std::size_t k = 0; k < n; ++k) {
    alpha[k] = std::clamp(alpha[k] + cfg.eta * (1.0 - w_global.values[k]), 0.0, upper);
  }
  if (epochs > 1) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int e = 2; e <= epochs; ++e) sgd_sweep(client.alpha, client.K, cfg, 1.0, order);
  }
  client.w = compute_w(client.alpha, client.K);
  client.last_loss = local_loss(client.alpha, client.K);
  return {client.w, client.last_loss};
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  return (m % 2 == 1) ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

std::vector<std::size_t> select_by_median(const std::vector<double>& losses) {
  const double m = median(losses);
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (losses[i] <= m) selected.push_back(i);
  }
  return selected;
}

CoefficientVector aggregate(const std::vector<CoefficientVector>& ws, const std::vector<std::size_t>& selected) {
  if (selected.empty()) throw std::invalid_argument("aggregate: empty selection");
  const std::size_t n = ws.at(selected.front()).size();
  CoefficientVector out{std::vector<double>(n, 0.0)};
  for (std::size_t idx : selected) {
    const auto& w = ws.at(idx);
    if (w.size() != n) throw std::invalid_argument("aggregate: coefficient vectors differ in length");
    for (std::size_t k = 0; k < n; ++k) out.values[k] += w.values[k];
  }
  const double count = static_cast<double>(selected.size());
  for (double& v : out.values) v /= count;
  return out;
}

void run_round(ServerState& server, std::vector<ClientState>& clients, const TrainConfig& cfg,
               const RoundConfig& rcfg) {
  rcfg.validate();
  if (clients.empty()) throw std::invalid_argument("run_round: no clients");
  const std::size_t n = clients.front().n();
  for (const auto& c : clients) {
    if (c.n() != n) {
      throw std::invalid_argument("run_round: clients must hold equal sample counts (client " +
                                  std::to_string(c.client_id) + " has " + std::to_string(c.n()) + ", expected " +
                                  std::to_string(n) + ")");
    }
  }
  if (server.global_w.size() != n) throw std::invalid_argument("run_round: global w length differs from client n");

  std::vector<CoefficientVector> ws(clients.size());
  std::vector<double> losses(clients.size());
  const CoefficientVector& w_global = server.global_w;
  if (rcfg.parallel) {
    std::vector<std::future<std::pair<CoefficientVector, double>>> pending;
    pending.reserve(clients.size());
    for (auto& c : clients) {
      pending.push_back(std::async(std::launch::async, [&c, &w_global, &cfg, &rcfg] {
        return client_update(c, w_global, cfg, rcfg.epochs);
      }));
    }
    for (std::size_t i = 0; i < clients.size(); ++i) std::tie(ws[i], losses[i]) = pending[i].get();
  } else {
    for (std::size_t i = 0; i < clients.size(); ++i) {
      std::tie(ws[i], losses[i]) = client_update(clients[i], w_global, cfg, rcfg.epochs);
    }
  }

  std::vector<std::size_t> selected;
  if (server.policy == AggregationPolicy::ConditionalMedian) {
    selected = select_by_median(losses);
  } else {
    selected.resize(clients.size());
    std::iota(selected.begin(), selected.end(), std::size_t{0});
  }
  server.global_w = aggregate(ws, selected);

  RoundRecord rec;
  rec.round = server.round + 1;
  rec.losses = losses;
  rec.selected.assign(clients.size(), false);
  for (std::size_t idx : selected) rec.selected[idx] = true;
  for (const auto& c : clients) rec.client_ids.push_back(c.client_id);
  rec.mean_loss = std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
  rec.median_loss = median(losses);
  server.history.push_back(std::move(rec));
  ++server.round;
}

TrainingResult run_training(const std::vector<Matrix>& clients_data, const std::vector<KernelConfig>& kernels,
                            const TrainConfig& cfg, const RoundConfig& rcfg, AggregationPolicy policy) {
  cfg.validate();
  rcfg.validate();
  if (clients_data.empty()) throw std::invalid_argument("run_training: no clients");
  if (kernels.size() != clients_data.size()) {
    throw std::invalid_argument("run_training: need one kernel configuration per client");
  }
  const std::size_t n = clients_data.front().rows();
  for (std::size_t c = 0; c < clients_data.size(); ++c) {
    if (clients_data[c].rows() != n) {
      throw std::invalid_argument("run_training: clients must hold equal sample counts (client " +
                                  std::to_string(c) + " has " + std::to_string(clients_data[c].rows()) +
                                  ", expected " + std::to_string(n) + ")");
    }
  }

  TrainingResult result;
  result.clients.reserve(clients_data.size());
  for (std::size_t c = 0; c < clients_data.size(); ++c) {
    result.clients.push_back(make_client(static_cast<int>(c), clients_data[c], kernels[c], cfg));
  }
  result.server = make_server(result.clients, policy);
  for (int r = 0; r < rcfg.rounds; ++r) run_round(result.server, result.clients, cfg, rcfg);

  result.models.reserve(result.clients.size());
  for (const auto& c : result.clients) result.models.push_back(make_model(c.X, c.alpha, c.K, c.kernel, cfg));
  return result;
}

TrainingResult run_training(const std::vector<Matrix>& clients_data, const KernelConfig& kcfg,
                            const TrainConfig& cfg, const RoundConfig& rcfg, AggregationPolicy policy) {
  return run_training(clients_data, std::vector<KernelConfig>(clients_data.size(), kcfg), cfg, rcfg, policy);
}

void write_history_csv(std::ostream& os, const std::vector<RoundRecord>& history) {
  os << "round,client_id,loss,selected\n";
  os << std::setprecision(17);
  for (const auto& rec : history) {
    for (std::size_t i = 0; i < rec.client_ids.size(); ++i) {
      os << rec.round << ',' << rec.client_ids[i] << ',' << rec.losses[i] << ',' << (rec.selected[i] ? 1 : 0)
         << '\n';
    }
  }
}

}  // namespace pcfed
