#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ratchet/field.hpp"
#include "ratchet/model.hpp"
#include "ratchet/profile.hpp"

namespace ratchet {

/// Demes -W..W at spacing 1/L_N, classes 0..K plus overflow K+1.
struct LatticeWindow {
  std::int64_t half_width = 32;
  std::size_t class_cap = 8;
  /// Any particle within this many demes of either edge aborts the run;
  /// 0 disables the check.
  std::int64_t boundary_guard = 5;

  [[nodiscard]] std::size_t num_demes() const noexcept {
    return static_cast<std::size_t>(2 * half_width + 1);
  }
  void validate() const;

  friend bool operator==(const LatticeWindow&, const LatticeWindow&) = default;
};

/// Binary indexed tree of nonnegative weights with prefix-sum search.
class FenwickTree {
 public:
  explicit FenwickTree(std::size_t n = 0) : tree_(n + 1, 0.0) {}

  void add(std::size_t i, double delta);
  void rebuild(const std::vector<double>& values);
  /// Smallest index whose inclusive prefix sum exceeds `target`.
  [[nodiscard]] std::size_t find(double target) const;
  [[nodiscard]] std::size_t size() const noexcept { return tree_.size() - 1; }

 private:
  std::vector<double> tree_;
};

class ParticleState {
 public:
  ParticleState(const ModelParams& params, const LatticeWindow& window);

  [[nodiscard]] const LatticeWindow& window() const noexcept { return window_; }
  [[nodiscard]] std::size_t num_demes() const noexcept { return n_.size(); }
  [[nodiscard]] std::size_t num_classes() const noexcept { return window_.class_cap + 2; }
  [[nodiscard]] double deme_position(std::size_t d) const noexcept;

  [[nodiscard]] std::int64_t count(std::size_t k, std::size_t d) const {
    return counts_[d * num_classes() + k];
  }
  [[nodiscard]] std::int64_t deme_total(std::size_t d) const { return n_[d]; }
  [[nodiscard]] double deme_weight(std::size_t d) const { return w_[d]; }
  [[nodiscard]] double deme_rate(std::size_t d) const { return r_[d]; }
  [[nodiscard]] double total_rate() const noexcept { return total_rate_; }
  [[nodiscard]] std::int64_t total_particles() const noexcept { return particles_; }

  /// Adds `delta` particles of class k at deme d and refreshes the caches.
  void add(std::size_t k, std::size_t d, std::int64_t delta);

  /// Recomputes n, w, r, R from counts; returns the largest relative
  /// discrepancy of the cached rates.
  [[nodiscard]] double verify() const;

  [[nodiscard]] DensityField density(double time) const;

  // Rate pieces of deme d from its current counts.
  [[nodiscard]] double migration_rate(std::size_t d) const;
  [[nodiscard]] double birth_rate(std::size_t d) const;
  [[nodiscard]] double death_rate(std::size_t d) const;

  void check_boundary(std::size_t d) const;
  [[nodiscard]] std::size_t sample_deme(double u) const;
  [[nodiscard]] const ModelParams& params() const noexcept { return params_; }
  [[nodiscard]] const std::vector<double>& fitness() const noexcept { return fitness_; }

 private:
  void refresh(std::size_t d);
  [[nodiscard]] double rate_from_counts(std::size_t d, double w) const;
  [[nodiscard]] double weight_from_counts(std::size_t d) const;

  ModelParams params_;
  LatticeWindow window_;
  double m_N_ = 0.0;
  double L_ = 1.0;
  double N_ = 1.0;
  std::vector<double> fitness_;  // s_0..s_K
  std::vector<std::int64_t> counts_;  // deme-major
  std::vector<std::int64_t> n_;
  std::vector<double> w_;
  std::vector<double> r_;
  FenwickTree tree_;
  double total_rate_ = 0.0;
  std::int64_t particles_ = 0;
  std::uint32_t updates_ = 0;
};

/// Uniform [0,1) doubles from the top 53 bits of a 64-bit Mersenne twister
/// seeded through splitmix64.
class SimClock {
 public:
  explicit SimClock(std::uint64_t seed = 0);

  [[nodiscard]] double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  [[nodiscard]] std::uint64_t next_u64() { return rng_(); }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  double t = 0.0;
  std::uint64_t events = 0;

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

std::uint64_t splitmix64(std::uint64_t x);

enum class EventType { Migration, Birth, Death };

struct EventRecord {
  double time = 0.0;
  EventType type = EventType::Migration;
  std::size_t deme = 0;
  std::size_t cls = 0;
  /// Destination deme for migration, the child's class for birth.
  std::size_t target = 0;
};

/// eta_k(x) = floor(N * cell average of f_k); classes above K are pooled
/// into the overflow class before flooring.
ParticleState init_from_profile(const InitialProfile& profile, const ModelParams& params,
                                const LatticeWindow& window, double sup_bound = 10.0);

/// Draws the holding time and applies one event. Throws EmptySystem when
/// the total rate is zero.
EventRecord step(ParticleState& state, SimClock& clock);

/// Snapshots counts / N at each output time (state after the last event at
/// or before it). An absorbed system repeats its final state.
std::vector<DensityField> simulate(ParticleState state, double T,
                                   const std::vector<double>& output_times, std::uint64_t seed);
std::vector<DensityField> simulate(const ModelParams& params, const InitialProfile& profile,
                                   const LatticeWindow& window, double T,
                                   const std::vector<double>& output_times, std::uint64_t seed);

/// Mean of the time-T densities over replicates seeded base_seed + r.
/// `threads` = 0 uses the hardware concurrency; the result does not depend
/// on it.
DensityField replicate_mean_density(const ModelParams& params, const InitialProfile& profile,
                                     const LatticeWindow& window, double T, std::size_t n_reps,
                                     std::uint64_t base_seed, unsigned threads = 0);

}  // namespace ratchet
