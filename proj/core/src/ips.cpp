#include "ratchet/ips.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "ratchet/errors.hpp"

namespace ratchet {

void LatticeWindow::validate() const {
  require(half_width >= 1, ErrorKind::InvalidArgument, "window half width must be >= 1");
  require(boundary_guard >= 0, ErrorKind::InvalidArgument, "boundary guard must be >= 0");
}

void FenwickTree::add(std::size_t i, double delta) {
  for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += delta;
}

void FenwickTree::rebuild(const std::vector<double>& values) {
  tree_.assign(values.size() + 1, 0.0);
  for (std::size_t i = 1; i < tree_.size(); ++i) {
    tree_[i] += values[i - 1];
    const std::size_t parent = i + (i & (~i + 1));
    if (parent < tree_.size()) tree_[parent] += tree_[i];
  }
}

std::size_t FenwickTree::find(double target) const {
  const std::size_t n = size();
  std::size_t pos = 0;
  for (std::size_t step = std::bit_floor(n); step > 0; step >>= 1) {
    if (pos + step <= n && tree_[pos + step] <= target) {
      pos += step;
      target -= tree_[pos];
    }
  }
  return std::min(pos, n - 1);
}

ParticleState::ParticleState(const ModelParams& params, const LatticeWindow& window)
    : params_(params), window_(window) {
  window.validate();
  m_N_ = params.migration_rate();
  L_ = static_cast<double>(params.scaling.lattice_scale());
  N_ = static_cast<double>(params.scaling.N);
  fitness_.resize(window.class_cap + 1);
  for (std::size_t k = 0; k <= window.class_cap; ++k) fitness_[k] = params.fitness(k);
  const std::size_t D = window.num_demes();
  counts_.assign(D * num_classes(), 0);
  n_.assign(D, 0);
  w_.assign(D, 0.0);
  r_.assign(D, 0.0);
  tree_ = FenwickTree(D);
}

double ParticleState::deme_position(std::size_t d) const noexcept {
  return static_cast<double>(static_cast<std::int64_t>(d) - window_.half_width) / L_;
}

double ParticleState::migration_rate(std::size_t d) const {
  return m_N_ * static_cast<double>(n_[d]);
}

double ParticleState::birth_rate(std::size_t d) const {
  const double U = static_cast<double>(n_[d]) / N_;
  return std::max(0.0, params_.rates.q_plus(U)) * w_[d];
}

double ParticleState::death_rate(std::size_t d) const {
  const double U = static_cast<double>(n_[d]) / N_;
  return std::max(0.0, params_.rates.q_minus(U)) * static_cast<double>(n_[d]);
}

double ParticleState::weight_from_counts(std::size_t d) const {
  double w = 0.0;
  const std::int64_t* c = counts_.data() + d * num_classes();
  for (std::size_t k = 0; k < fitness_.size(); ++k) w += fitness_[k] * static_cast<double>(c[k]);
  return w;
}

double ParticleState::rate_from_counts(std::size_t d, double w) const {
  const double n = static_cast<double>(n_[d]);
  const double U = n / N_;
  return m_N_ * n + std::max(0.0, params_.rates.q_plus(U)) * w +
         std::max(0.0, params_.rates.q_minus(U)) * n;
}

void ParticleState::refresh(std::size_t d) {
  w_[d] = weight_from_counts(d);
  const double next = rate_from_counts(d, w_[d]);
  const double delta = next - r_[d];
  r_[d] = next;
  tree_.add(d, delta);
  total_rate_ += delta;
  if (++updates_ >= (1u << 16)) {
    tree_.rebuild(r_);
    total_rate_ = 0.0;
    for (double r : r_) total_rate_ += r;
    updates_ = 0;
  }
}

void ParticleState::add(std::size_t k, std::size_t d, std::int64_t delta) {
  std::int64_t& c = counts_.at(d * num_classes() + k);
  require(c + delta >= 0, ErrorKind::InvalidArgument, "particle count would become negative");
  c += delta;
  n_[d] += delta;
  particles_ += delta;
  refresh(d);
}

double ParticleState::verify() const {
  double worst = 0.0;
  double sum = 0.0;
  for (std::size_t d = 0; d < num_demes(); ++d) {
    std::int64_t n = 0;
    for (std::size_t k = 0; k < num_classes(); ++k) n += count(k, d);
    if (n != n_[d]) return std::numeric_limits<double>::infinity();
    const double w = weight_from_counts(d);
    const double r = rate_from_counts(d, w);
    worst = std::max(worst, std::abs(w - w_[d]) / std::max(1.0, std::abs(w)));
    worst = std::max(worst, std::abs(r - r_[d]) / std::max(1.0, std::abs(r)));
    sum += r;
  }
  worst = std::max(worst, std::abs(sum - total_rate_) / std::max(1.0, sum));
  return worst;
}

DensityField ParticleState::density(double time) const {
  const double W = static_cast<double>(window_.half_width);
  DensityField f(Grid1D(-W / L_, W / L_, num_demes()), window_.class_cap, time);
  for (std::size_t k = 0; k < num_classes(); ++k)
    for (std::size_t d = 0; d < num_demes(); ++d)
      f.at(k, d) = static_cast<double>(count(k, d)) / N_;
  return f;
}

void ParticleState::check_boundary(std::size_t d) const {
  const auto g = static_cast<std::size_t>(window_.boundary_guard);
  if (g == 0 || n_[d] == 0) return;
  if (d < g || d + g >= num_demes())
    fail(ErrorKind::BoundaryReached,
         "particles reached deme " + std::to_string(static_cast<std::int64_t>(d) - window_.half_width) +
             ", within " + std::to_string(g) + " demes of the window edge; enlarge the window");
}

std::size_t ParticleState::sample_deme(double u) const {
  std::size_t d = tree_.find(u * total_rate_);
  if (r_[d] > 0.0) return d;
  // Round-off can land on an empty deme next to the intended one.
  for (std::size_t j = 1; j < num_demes(); ++j) {
    if (d + j < num_demes() && r_[d + j] > 0.0) return d + j;
    if (j <= d && r_[d - j] > 0.0) return d - j;
  }
  fail(ErrorKind::EmptySystem, "no deme has a positive rate");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SimClock::SimClock(std::uint64_t seed) : seed_(seed), rng_(splitmix64(seed)) {}

ParticleState init_from_profile(const InitialProfile& profile, const ModelParams& params,
                                const LatticeWindow& window, double sup_bound) {
  params.validate();
  ParticleState state(params, window);
  const double L = static_cast<double>(params.scaling.lattice_scale());
  const double N = static_cast<double>(params.scaling.N);
  const double half = 0.5 / L;
  const double sup = profile.sup_norm(state.deme_position(0) - half,
                                      state.deme_position(state.num_demes() - 1) + half);
  require(sup <= sup_bound, ErrorKind::ProfileUnbounded,
          "initial profile sup " + std::to_string(sup) + " exceeds bound " + std::to_string(sup_bound));

  auto to_count = [N](double average) {
    double v = N * average;
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) v = r;
    return static_cast<std::int64_t>(std::floor(v));
  };
  const std::size_t K = window.class_cap;
  for (std::size_t d = 0; d < state.num_demes(); ++d) {
    const double x = state.deme_position(d);
    for (std::size_t k = 0; k <= K; ++k) {
      const std::int64_t c = to_count(profile.cell_average(k, x - half, x + half));
      if (c > 0) state.add(k, d, c);
    }
    const std::int64_t over = to_count(profile.overflow_cell_average(K, x - half, x + half));
    if (over > 0) state.add(K + 1, d, over);
  }
  for (std::size_t d = 0; d < state.num_demes(); ++d) state.check_boundary(d);
  return state;
}

namespace {

double holding_time(const ParticleState& state, SimClock& clock) {
  const double R = state.total_rate();
  if (!(R > 0.0)) fail(ErrorKind::EmptySystem, "total event rate is zero");
  return -std::log1p(-clock.uniform()) / R;
}

std::size_t uniform_class(const ParticleState& s, std::size_t d, SimClock& clock) {
  const auto n = s.deme_total(d);
  auto j = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(clock.uniform() * static_cast<double>(n)));
  for (std::size_t k = 0; k < s.num_classes(); ++k) {
    j -= s.count(k, d);
    if (j < 0) return k;
  }
  return s.num_classes() - 1;
}

std::size_t birth_class(const ParticleState& s, std::size_t d, SimClock& clock) {
  const auto& fit = s.fitness();
  double target = clock.uniform() * s.deme_weight(d);
  std::size_t last = 0;
  for (std::size_t k = 0; k < fit.size(); ++k) {
    const double w = fit[k] * static_cast<double>(s.count(k, d));
    if (w <= 0.0) continue;
    last = k;
    target -= w;
    if (target < 0.0) return k;
  }
  return last;
}

EventRecord apply_event(ParticleState& s, SimClock& clock) {
  EventRecord ev;
  ev.time = clock.t;
  const std::size_t d = s.sample_deme(clock.uniform());
  ev.deme = d;
  const double mig = s.migration_rate(d);
  const double birth = s.birth_rate(d);
  const double death = s.death_rate(d);
  const double v = clock.uniform() * (mig + birth + death);
  const std::size_t D = s.num_demes();

  if (v < mig) {
    ev.type = EventType::Migration;
    ev.cls = uniform_class(s, d, clock);
    const bool left = clock.uniform() < 0.5;
    // A jump out of the window is reflected: the particle stays put.
    const bool blocked = (left && d == 0) || (!left && d + 1 == D);
    const std::size_t dest = blocked ? d : (left ? d - 1 : d + 1);
    ev.target = dest;
    if (!blocked) {
      s.add(ev.cls, d, -1);
      s.add(ev.cls, dest, 1);
      s.check_boundary(dest);
    }
  } else if (v < mig + birth) {
    ev.type = EventType::Birth;
    ev.cls = birth_class(s, d, clock);
    const double mu = s.params().mu;
    const bool mutate = mu > 0.0 && clock.uniform() < mu;
    ev.target = mutate ? ev.cls + 1 : ev.cls;
    s.add(ev.target, d, 1);
  } else {
    ev.type = EventType::Death;
    ev.cls = uniform_class(s, d, clock);
    s.add(ev.cls, d, -1);
  }
  ++clock.events;
  return ev;
}

}  // namespace

EventRecord step(ParticleState& state, SimClock& clock) {
  clock.t += holding_time(state, clock);
  return apply_event(state, clock);
}

std::vector<DensityField> simulate(ParticleState state, double T,
                                   const std::vector<double>& output_times, std::uint64_t seed) {
  require(T >= 0.0, ErrorKind::InvalidArgument, "horizon T must be >= 0");
  require(std::is_sorted(output_times.begin(), output_times.end()), ErrorKind::InvalidArgument,
          "output times must be sorted");
  for (double t : output_times)
    require(t >= 0.0 && t <= T, ErrorKind::InvalidArgument, "output times must lie in [0, T]");

  SimClock clock(seed);
  std::vector<DensityField> out;
  out.reserve(output_times.size());
  std::size_t next = 0;
  while (next < output_times.size() && state.total_rate() > 0.0) {
    const double t_next = clock.t + holding_time(state, clock);
    while (next < output_times.size() && output_times[next] < t_next)
      out.push_back(state.density(output_times[next++]));
    if (next == output_times.size()) break;
    clock.t = t_next;
    apply_event(state, clock);
  }
  while (next < output_times.size()) out.push_back(state.density(output_times[next++]));
  return out;
}

std::vector<DensityField> simulate(const ModelParams& params, const InitialProfile& profile,
                                   const LatticeWindow& window, double T,
                                   const std::vector<double>& output_times, std::uint64_t seed) {
  return simulate(init_from_profile(profile, params, window), T, output_times, seed);
}

DensityField replicate_mean_density(const ModelParams& params, const InitialProfile& profile,
                                     const LatticeWindow& window, double T, std::size_t n_reps,
                                     std::uint64_t base_seed, unsigned threads) {
  require(n_reps >= 1, ErrorKind::InvalidArgument, "need at least one replicate");
  const ParticleState initial = init_from_profile(profile, params, window);
  std::vector<DensityField> results(n_reps);
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (std::size_t r = cursor++; r < n_reps && !failed; r = cursor++) {
      try {
        results[r] = simulate(initial, T, {T}, base_seed + r).front();
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  DensityField mean = results.front();
  for (std::size_t r = 1; r < n_reps; ++r) {
    auto src = results[r].data();
    auto dst = mean.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  for (double& v : mean.data()) v /= static_cast<double>(n_reps);
  return mean;
}

}  // namespace ratchet
