#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gramspec/classical_words.hpp"
#include "gramspec/dynamics.hpp"
#include "gramspec/fit.hpp"
#include "gramspec/gram.hpp"
#include "gramspec/mp_law.hpp"
#include "gramspec/random_states.hpp"
#include "gramspec/spectrum.hpp"

namespace gramspec {

enum class Mode { random, floquet, permutation, classical, mp_grid };

enum class OutputFormat { csv, json };

inline const char* mode_name(Mode mode) noexcept {
  switch (mode) {
    case Mode::random: return "random";
    case Mode::floquet: return "floquet";
    case Mode::permutation: return "permutation";
    case Mode::classical: return "classical";
    case Mode::mp_grid: return "mp-grid";
  }
  return "unknown";
}

/// Invalid configuration, carrying the name of the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config error in '" + field + "': " + message),
        field_(std::move(field)) {}

  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Everything needed to reproduce a run. Exactly one of tau/steps is
/// given for the sequence modes; steps resolves to ceil(tau * dim).
struct ExperimentConfig {
  Mode mode = Mode::random;
  Eigen::Index dim = 0;
  std::optional<double> tau;
  std::optional<std::size_t> steps;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<std::size_t> bins;
  double kick_strength = 0.0;
  double rotation = 0.0;
  std::size_t start = 0;
  std::optional<std::vector<std::size_t>> permutation;

  // mp-grid shape (overridable via a JSON config file)
  double tau_min = 0.02;
  double tau_max = 3.0;
  std::size_t tau_points = 150;
  std::size_t x_points = 400;

  std::string out;  // empty writes to stdout
  OutputFormat format = OutputFormat::csv;

  [[nodiscard]] std::size_t resolved_steps() const {
    if (steps) return *steps;
    if (!tau) throw ConfigError("tau", "one of tau/steps must be given");
    return static_cast<std::size_t>(std::ceil(*tau * static_cast<double>(dim)));
  }

  /// Ratio K/N of the run, the tau at which the reference law is taken.
  [[nodiscard]] double law_tau() const {
    return static_cast<double>(resolved_steps()) / static_cast<double>(dim);
  }

  [[nodiscard]] RngSeed base_seed() const noexcept { return RngSeed{seed, 0}; }

  void validate() const {
    if (trials < 1) throw ConfigError("trials", "must be at least 1");
    if (bins && *bins < 10) throw ConfigError("bins", "must be at least 10");
    if (mode == Mode::mp_grid) {
      if (!(tau_min > 0.0)) throw ConfigError("tau_min", "must be positive");
      if (!(tau_max > tau_min)) throw ConfigError("tau_max", "must exceed tau_min");
      if (tau_points < 2) throw ConfigError("tau_points", "must be at least 2");
      if (x_points < 2) throw ConfigError("x_points", "must be at least 2");
      return;
    }
    if (mode == Mode::permutation && permutation) {
      if (dim > 0 && static_cast<std::size_t>(dim) != permutation->size())
        throw ConfigError("dim", "disagrees with the size of the loaded permutation");
    } else if (dim < 1) {
      throw ConfigError("dim", "must be at least 1");
    }
    if (tau && steps) throw ConfigError("tau", "give either tau or steps, not both");
    if (!tau && !steps) throw ConfigError("tau", "one of tau/steps must be given");
    if (tau && !(*tau > 0.0)) throw ConfigError("tau", "must be positive");
    if (steps && *steps < 1) throw ConfigError("steps", "must be at least 1");
    if (mode == Mode::floquet) {
      if (dim < 2) throw ConfigError("dim", "floquet needs dim at least 2");
      if (!std::isfinite(kick_strength)) throw ConfigError("kick", "must be finite");
      if (!std::isfinite(rotation)) throw ConfigError("rot", "must be finite");
      if (start >= static_cast<std::size_t>(dim))
        throw ConfigError("start", "initial basis index out of range");
    }
    if (mode == Mode::permutation) {
      const std::size_t n = permutation ? permutation->size() : static_cast<std::size_t>(dim);
      if (start >= n) throw ConfigError("start", "start index out of range");
    }
  }
};

/// Pooled eigenvalue histogram over [0, (sqrt(tau)+1)^2 + 0.5], with the
/// exact zeros kept apart as an atom count so the mixed shape of the
/// limit law stays visible. atom_count + sum(counts) = number of values.
struct Histogram {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t atom_count = 0;
  std::vector<std::size_t> counts;
};

inline Histogram make_histogram(const std::vector<double>& values, std::size_t bins,
                                double law_tau) {
  Histogram h;
  h.lower = 0.0;
  const double edge = std::sqrt(law_tau) + 1.0;
  h.upper = edge * edge + 0.5;
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (v == 0.0) {
      ++h.atom_count;
      continue;
    }
    auto index = static_cast<std::size_t>(v / h.upper * static_cast<double>(bins));
    if (index >= bins) index = bins - 1;  // outliers fold into the last bin
    ++h.counts[index];
  }
  return h;
}

struct GridRow {
  double tau = 0.0;
  double x = 0.0;
  double density = 0.0;
  double cdf = 0.0;
  double atom_weight = 0.0;
};

/// Outcome of one experiment run. duration_seconds is console-only and
/// never serialized, so identical configs give byte-identical files.
struct RunResult {
  ExperimentConfig config;
  std::vector<std::vector<double>> trial_eigenvalues;  // sorted descending per trial
  std::optional<SpectralMeasure> pooled;
  std::optional<double> law_tau;
  std::optional<FitReport> fit;
  std::optional<Histogram> histogram;
  std::vector<std::size_t> cycles;                         // permutation mode
  std::optional<MultiplicityDistribution> multiplicity;    // classical mode, pooled
  std::optional<double> tv_distance;                       // classical mode
  std::vector<GridRow> grid;                               // mp-grid mode
  double duration_seconds = 0.0;
};

namespace detail {

/// Runs body(0..count-1) on a small worker pool. Bodies write to disjoint
/// slots keyed by index, so results never depend on the schedule.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& body) {
  const unsigned hardware = std::thread::hardware_concurrency();
  const std::size_t workers = std::min<std::size_t>(hardware == 0 ? 1 : hardware, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& thread : pool) thread.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline void pool_and_fit(RunResult& result) {
  std::vector<double> pooled;
  for (const auto& trial : result.trial_eigenvalues)
    pooled.insert(pooled.end(), trial.begin(), trial.end());
  result.pooled = SpectralMeasure(std::move(pooled));
  const MPLaw law(*result.law_tau);
  result.fit = fit_spectrum(*result.pooled, law);
  result.histogram = make_histogram(result.pooled->eigenvalues(),
                                    result.config.bins.value_or(64), *result.law_tau);
}

}  // namespace detail

/// Monte Carlo over Haar-uniform sequences: per trial, sample K states in
/// dimension N, take the Gram spectrum, pool across trials and fit
/// against the limit law at tau = K/N. Trial t draws from substream(t).
inline RunResult run_random(const ExperimentConfig& config) {
  if (config.mode != Mode::random) throw ConfigError("mode", "run_random expects mode=random");
  config.validate();
  const std::size_t k = config.resolved_steps();
  RunResult result;
  result.config = config;
  result.law_tau = config.law_tau();
  result.trial_eigenvalues.assign(config.trials, {});
  detail::parallel_for(config.trials, [&](std::size_t t) {
    const StateSequence seq = sample_state_sequence(config.dim, k, config.base_seed().substream(t));
    result.trial_eigenvalues[t] = hermitian_spectrum(build_gram(seq)).eigenvalues();
  });
  detail::pool_and_fit(result);
  return result;
}

/// Deterministic kicked evolution, pooled and fitted like run_random.
/// Trial 0 starts from the basis ray e_start; further trials start from
/// Haar-uniform initial conditions to probe the generic behaviour.
inline RunResult run_floquet(const ExperimentConfig& config) {
  if (config.mode != Mode::floquet) throw ConfigError("mode", "run_floquet expects mode=floquet");
  config.validate();
  const std::size_t k = config.resolved_steps();
  const FloquetOperator op =
      build_phase_kick_operator(config.dim, config.kick_strength, config.rotation);
  RunResult result;
  result.config = config;
  result.law_tau = config.law_tau();
  result.trial_eigenvalues.assign(config.trials, {});
  detail::parallel_for(config.trials, [&](std::size_t t) {
    const ProjectiveState initial =
        t == 0 ? ProjectiveState::basis_vector(config.dim, static_cast<Eigen::Index>(config.start))
               : sample_uniform_state(config.dim, config.base_seed().substream(t));
    const StateSequence seq = evolve_sequence(op, initial, k);
    result.trial_eigenvalues[t] = hermitian_spectrum(build_gram(seq)).eigenvalues();
  });
  detail::pool_and_fit(result);
  return result;
}

/// Coarse-grained classical map: cycle structure of the permutation plus
/// the exact Gram spectrum of the orbit word from `start`.
inline RunResult run_permutation(const ExperimentConfig& config) {
  if (config.mode != Mode::permutation)
    throw ConfigError("mode", "run_permutation expects mode=permutation");
  config.validate();
  const Permutation perm = config.permutation
                               ? Permutation(*config.permutation)
                               : Permutation::random(static_cast<std::size_t>(config.dim),
                                                     config.base_seed());
  ExperimentConfig resolved = config;
  resolved.dim = static_cast<Eigen::Index>(perm.size());
  resolved.permutation = perm.map();
  const std::size_t k = resolved.resolved_steps();
  RunResult result;
  result.config = resolved;
  result.cycles = cycle_type(perm);
  const std::vector<std::size_t> word = permutation_word(perm, resolved.start, k);
  const SpectralMeasure spectrum = word_gram_spectrum(ClassicalWord(word, perm.size()));
  result.trial_eigenvalues = {spectrum.eigenvalues()};
  result.pooled = spectrum;
  return result;
}

/// Uniform random words: pooled multiplicity distribution across trials
/// with the Poisson(K/N) reference and their total variation distance.
inline RunResult run_classical(const ExperimentConfig& config) {
  if (config.mode != Mode::classical)
    throw ConfigError("mode", "run_classical expects mode=classical");
  config.validate();
  const std::size_t k = config.resolved_steps();
  const auto n = static_cast<std::size_t>(config.dim);
  RunResult result;
  result.config = config;
  result.law_tau = config.law_tau();
  std::vector<MultiplicityDistribution> per_trial(config.trials);
  detail::parallel_for(config.trials, [&](std::size_t t) {
    per_trial[t] = multiplicity_distribution(
        sample_uniform_word(n, k, config.base_seed().substream(t)));
  });
  MultiplicityDistribution pooled;
  pooled.alphabet_size = n * config.trials;
  for (const auto& dist : per_trial)
    for (const auto& [mult, letters] : dist.letter_counts) pooled.letter_counts[mult] += letters;
  result.tv_distance = total_variation_to_poisson(pooled, *result.law_tau);
  result.multiplicity = std::move(pooled);
  return result;
}

/// The limit-law surface as data: rows (tau, x, density, cdf, atom_weight)
/// over a tau grid, with the atom column carrying max(0, (tau-1)/tau).
inline RunResult run_mp_grid(const ExperimentConfig& config) {
  if (config.mode != Mode::mp_grid) throw ConfigError("mode", "run_mp_grid expects mode=mp-grid");
  config.validate();
  RunResult result;
  result.config = config;
  result.grid.reserve(config.tau_points * config.x_points);
  for (std::size_t i = 0; i < config.tau_points; ++i) {
    const double tau = config.tau_min + static_cast<double>(i) *
                                            (config.tau_max - config.tau_min) /
                                            static_cast<double>(config.tau_points - 1);
    const MPLaw law(tau);
    const double atom = mp_atom_weight(law);
    const auto [a, b] = mp_support(law);
    const double x_max = b + 0.5;
    for (std::size_t j = 0; j < config.x_points; ++j) {
      const double x =
          static_cast<double>(j) * x_max / static_cast<double>(config.x_points - 1);
      result.grid.push_back(GridRow{tau, x, mp_density(law, x), mp_cdf(law, x), atom});
    }
  }
  return result;
}

/// Dispatch on config.mode.
inline RunResult run_experiment(const ExperimentConfig& config) {
  switch (config.mode) {
    case Mode::random: return run_random(config);
    case Mode::floquet: return run_floquet(config);
    case Mode::permutation: return run_permutation(config);
    case Mode::classical: return run_classical(config);
    case Mode::mp_grid: return run_mp_grid(config);
  }
  throw ConfigError("mode", "unknown mode");
}

}  // namespace gramspec
