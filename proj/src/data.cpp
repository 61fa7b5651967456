#include "pcfed/data.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace pcfed {

std::string to_string(Label label) { return label == Label::Healthy ? "healthy" : "damaged"; }

Vector normalize(std::span<const double> signal) {
  if (signal.size() < 2) throw DataError("normalize: need at least two samples");
  const double n = static_cast<double>(signal.size());
  const double mean = std::accumulate(signal.begin(), signal.end(), 0.0) / n;
  double var = 0.0;
  for (double x : signal) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / n);
  if (!(sd > 0.0)) throw DataError("normalize: constant signal");
  Vector out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) out[i] = (signal[i] - mean) / sd;
  return out;
}

namespace {

// FFTW planning is not thread-safe; execution on a private plan is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

Vector fft_magnitude(std::span<const double> signal) {
  if (signal.size() < 2) throw DataError("fft_magnitude: need at least two samples");
  const std::size_t N = next_pow2(signal.size());
  std::vector<double> in(N, 0.0);
  std::copy(signal.begin(), signal.end(), in.begin());
  std::vector<fftw_complex> out(N / 2 + 1);

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(N), in.data(), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  Vector mags(N / 2);
  for (std::size_t k = 0; k < N / 2; ++k) mags[k] = std::hypot(out[k][0], out[k][1]);
  return mags;
}

Vector spectrum_features(std::span<const double> signal) { return fft_magnitude(normalize(signal)); }

TrainTestSplit split_train_test(const std::vector<Event>& events, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw DataError("split_train_test: train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> healthy;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].label == Label::Healthy) healthy.push_back(i);
  }
  if (healthy.empty()) throw DataError("split_train_test: no healthy events to train on");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order = healthy;
  std::shuffle(order.begin(), order.end(), rng);
  const auto h = static_cast<long long>(healthy.size());
  const auto n_train = static_cast<std::size_t>(std::clamp(std::llround(train_fraction * static_cast<double>(h)), 1LL, h));
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::sort(train_idx.begin(), train_idx.end());

  TrainTestSplit split;
  std::vector<bool> in_train(events.size(), false);
  for (std::size_t i : train_idx) {
    in_train[i] = true;
    split.train.push_back(events[i]);
  }
  for (std::size_t i : healthy) {
    if (!in_train[i]) split.test.push_back(events[i]);
  }
  for (const auto& e : events) {
    if (e.label == Label::Damaged) split.test.push_back(e);
  }
  return split;
}

void SynthConfig::validate() const {
  if (clients < 1) throw DataError("synth: clients must be >= 1");
  if (per_client < 1) throw DataError("synth: per_client must be >= 1");
  if (dim < 1) throw DataError("synth: dim must be >= 1");
  if (!(healthy_spread > 0.0)) throw DataError("synth: healthy_spread must be positive");
  if (anomaly_count < 0) throw DataError("synth: anomaly_count must be >= 0");
  if (!(anomaly_offset > 0.0)) throw DataError("synth: anomaly_offset must be positive");
  if (healthy_centers.size() != static_cast<std::size_t>(clients)) {
    throw DataError("synth: need one healthy center per client");
  }
  for (const auto& c : healthy_centers) {
    if (c.size() != static_cast<std::size_t>(dim)) throw DataError("synth: center dimension differs from dim");
  }
}

std::vector<Vector> ring_centers(int clients, int dim, double radius) {
  std::vector<Vector> centers;
  for (int c = 0; c < clients; ++c) {
    Vector v(static_cast<std::size_t>(dim), 0.0);
    const double angle = 2.0 * std::numbers::pi * c / clients;
    v[0] = radius * std::cos(angle);
    if (dim > 1) v[1] = radius * std::sin(angle);
    centers.push_back(std::move(v));
  }
  return centers;
}

std::vector<Event> synth_generate(const SynthConfig& cfg) {
  cfg.validate();
  const auto dim = static_cast<std::size_t>(cfg.dim);
  const double min_dist = cfg.anomaly_offset * cfg.healthy_spread;
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(cfg.clients) * static_cast<std::size_t>(cfg.per_client + cfg.anomaly_count));

  for (int c = 0; c < cfg.clients; ++c) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Vector& center = cfg.healthy_centers[static_cast<std::size_t>(c)];

    for (int i = 0; i < cfg.per_client; ++i) {
      Event e{c, Label::Healthy, Vector(dim)};
      for (std::size_t d = 0; d < dim; ++d) e.features[d] = center[d] + cfg.healthy_spread * gauss(rng);
      events.push_back(std::move(e));
    }
    for (int i = 0; i < cfg.anomaly_count; ++i) {
      constexpr int kMaxAttempts = 10000;
      bool placed = false;
      for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
        Vector dir(dim);
        for (double& x : dir) x = gauss(rng);
        const double len = norm(dir);
        if (!(len > 0.0)) continue;
        const double radius = min_dist * (1.0 + unit(rng));
        Vector p(dim);
        for (std::size_t d = 0; d < dim; ++d) p[d] = center[d] + radius * dir[d] / len;
        placed = std::all_of(cfg.healthy_centers.begin(), cfg.healthy_centers.end(),
                             [&](const Vector& hc) { return std::sqrt(squared_distance(p, hc)) >= min_dist; });
        if (placed) events.push_back(Event{c, Label::Damaged, std::move(p)});
      }
      if (!placed) throw DataError("synth: could not place a damaged event clear of every healthy center");
    }
  }
  return events;
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::vector<Event> read_events_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("events csv: missing header");
  const auto header = split_commas(trim_cr(line));
  if (header.size() < 3 || header[0] != "client_id" || header[1] != "label") {
    throw DataError("events csv: header must be client_id,label,f_0,...");
  }
  for (std::size_t j = 2; j < header.size(); ++j) {
    if (header[j] != "f_" + std::to_string(j - 2)) {
      throw DataError("events csv: unexpected header column '" + header[j] + "'");
    }
  }
  const std::size_t dim = header.size() - 2;

  std::vector<Event> events;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    line = trim_cr(line);
    if (line.empty()) continue;
    ++row;
    const std::string where = "events csv row " + std::to_string(row);
    const auto fields = split_commas(line);
    if (fields.size() != dim + 2) {
      throw DataError(where + ": expected " + std::to_string(dim + 2) + " columns, found " +
                      std::to_string(fields.size()));
    }
    Event e;
    if (!parse_number(fields[0], e.client_id)) throw DataError(where + ": bad client_id '" + fields[0] + "'");
    if (fields[1] == "healthy") {
      e.label = Label::Healthy;
    } else if (fields[1] == "damaged") {
      e.label = Label::Damaged;
    } else {
      throw DataError(where + ": unknown label '" + fields[1] + "'");
    }
    e.features.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!parse_number(fields[j + 2], e.features[j]) || !std::isfinite(e.features[j])) {
        throw DataError(where + ": non-numeric feature f_" + std::to_string(j) + " '" + fields[j + 2] + "'");
      }
    }
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<Event> load_events_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open events file " + path.string());
  return read_events_csv(in);
}

void write_events_csv(std::ostream& os, const std::vector<Event>& events) {
  if (events.empty()) throw DataError("write_events_csv: no events");
  const std::size_t dim = events.front().features.size();
  os << "client_id,label";
  for (std::size_t j = 0; j < dim; ++j) os << ",f_" << j;
  os << '\n' << std::setprecision(17);
  for (const auto& e : events) {
    if (e.features.size() != dim) throw DataError("write_events_csv: ragged feature vectors");
    os << e.client_id << ',' << to_string(e.label);
    for (double f : e.features) os << ',' << f;
    os << '\n';
  }
}

Matrix features_matrix(const std::vector<Event>& events) {
  Matrix m;
  for (const auto& e : events) m.append_row(e.features);
  return m;
}

}  // namespace pcfed
