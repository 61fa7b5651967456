#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcfed/linalg.hpp"

namespace pcfed {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Label { Healthy, Damaged };

std::string to_string(Label label);

struct Event {
  int client_id = 0;
  Label label = Label::Healthy;
  Vector features;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Zero mean, unit population standard deviation.
Vector normalize(std::span<const double> signal);

/// One-sided magnitude spectrum: zero-pads to the next power of two N and
/// returns |X_0| .. |X_{N/2-1}|.
Vector fft_magnitude(std::span<const double> signal);

/// normalize followed by fft_magnitude.
Vector spectrum_features(std::span<const double> signal);

struct TrainTestSplit {
  std::vector<Event> train;  // healthy only
  std::vector<Event> test;   // held-out healthy followed by every damaged event
};

/// Random healthy fraction for training; everything else is test data.
/// The training count is round(train_fraction * healthy), at least 1.
TrainTestSplit split_train_test(const std::vector<Event>& events, double train_fraction, std::uint64_t seed);

struct SynthConfig {
  int clients = 6;
  int per_client = 120;  // healthy events per client
  int dim = 2;
  std::vector<Vector> healthy_centers;  // one per client
  double healthy_spread = 1.0;
  int anomaly_count = 20;  // damaged events per client
  double anomaly_offset = 4.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Centers evenly spaced on a circle of the given radius in the first two
/// coordinates (the rest zero).
std::vector<Vector> ring_centers(int clients, int dim, double radius);

/// Healthy events ~ N(center_c, spread^2 I); damaged events at distance
/// >= anomaly_offset * spread from every healthy center. Events are
/// ordered by client, healthy before damaged.
std::vector<Event> synth_generate(const SynthConfig& cfg);

/// Header: client_id,label,f_0,...,f_{d-1}; labels healthy|damaged.
std::vector<Event> read_events_csv(std::istream& is);
std::vector<Event> load_events_csv(const std::filesystem::path& path);
void write_events_csv(std::ostream& os, const std::vector<Event>& events);

/// Stacks feature vectors as matrix rows.
Matrix features_matrix(const std::vector<Event>& events);

}  // namespace pcfed
