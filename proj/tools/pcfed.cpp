// Experiment runner for personalized conditional federated one-class SVMs.
//
//   pcfed run   --config exp.json
//   pcfed sweep --config exp.json --epochs 5,10,20,30,40,50
//
// Exit codes: 0 success, 1 config error, 2 data error, 3 training error.

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pcfed/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kDataError = 2, kTrainingError = 3 };

std::vector<int> parse_epochs(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw pcfed::ConfigError("--epochs: '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw pcfed::ConfigError("--epochs: empty list");
  return out;
}

void print_report(const pcfed::MetricsReport& r) {
  std::printf("client  f_score  precision  recall   tp   fp   fn   tn   svs  edge_svs\n");
  for (const auto& m : r.per_client) {
    std::printf("%6d  %7.4f  %9.4f  %6.4f %4zu %4zu %4zu %4zu %5zu %9zu\n", m.client_id, m.f_score, m.precision,
                m.recall, m.confusion.tp, m.confusion.fp, m.confusion.fn, m.confusion.tn, m.n_support_vectors,
                m.n_edge_support_vectors);
  }
  std::printf("mean F = %.4f  std F = %.4f  rounds = %d\n", r.mean_f, r.std_f, r.rounds_run);
}

int guarded(const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const pcfed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const pcfed::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const pcfed::TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kTrainingError;
  } catch (const std::exception& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kTrainingError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personalized conditional federated one-class SVM experiments"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run one experiment and write metrics.json / convergence.csv");
  run->add_option("--config", run_config, "Experiment config (JSON)")->required();

  std::string sweep_config;
  std::string epochs_text = "5,10,20,30,40,50";
  auto* sweep = app.add_subcommand("sweep", "Run the experiment once per local-epoch count");
  sweep->add_option("--config", sweep_config, "Experiment config (JSON)")->required();
  sweep->add_option("--epochs", epochs_text, "Comma-separated local epoch counts")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  if (*run) {
    return guarded([&] {
      const auto cfg = pcfed::load_config(run_config);
      print_report(pcfed::run_experiment(cfg));
    });
  }
  return guarded([&] {
    const auto cfg = pcfed::load_config(sweep_config);
    const auto result = pcfed::sweep(cfg, parse_epochs(epochs_text));
    std::printf("epochs  mean_f   std_f\n");
    for (const auto& row : result.table) std::printf("%6d  %6.4f  %6.4f\n", row.epochs, row.mean_f, row.std_f);
  });
}
