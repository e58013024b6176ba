#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "gramspec/experiment.hpp"
#include "gramspec/io.hpp"

using namespace gramspec;

namespace {

ExperimentConfig base_config(Mode mode) {
  ExperimentConfig config;
  config.mode = mode;
  config.dim = 16;
  config.tau = 1.0;
  config.trials = 2;
  config.seed = 7;
  return config;
}

std::string render_csv(const RunResult& result) {
  std::ostringstream os;
  result_to_csv(result, os);
  return os.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("run_random with K = 1 yields the single eigenvalue 1") {
  ExperimentConfig config = base_config(Mode::random);
  config.trials = 1;
  config.tau.reset();
  config.steps = 1;
  const RunResult result = run_random(config);
  REQUIRE(result.pooled.has_value());
  CHECK(result.pooled->count() == 1);
  CHECK((*result.pooled)[0] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("run_random at N = 200, K = 400 has empirical atom fraction exactly 1/2") {
  ExperimentConfig config = base_config(Mode::random);
  config.dim = 200;
  config.tau.reset();
  config.steps = 400;
  config.trials = 1;
  config.seed = 99;  // any seed: the rank bound makes the zero count deterministic
  const RunResult result = run_random(config);
  CHECK(result.fit->atom_fraction_empirical == 0.5);
}

TEST_CASE("steps resolve to ceil(tau * dim)") {
  ExperimentConfig config = base_config(Mode::random);
  config.dim = 10;
  config.tau = 0.55;
  CHECK(config.resolved_steps() == 6);
  config.tau = 2.0;
  CHECK(config.resolved_steps() == 20);
}

TEST_CASE("identical configs give byte-identical serialized output") {
  ExperimentConfig config = base_config(Mode::random);
  config.trials = 4;  // exercises the worker pool
  const std::string first = render_csv(run_random(config));
  const std::string second = render_csv(run_random(config));
  CHECK(first == second);
  CHECK(result_to_json(run_random(config)).dump() == result_to_json(run_random(config)).dump());
}

TEST_CASE("the threaded driver reproduces the serial per-trial computation bitwise") {
  ExperimentConfig config = base_config(Mode::random);
  config.dim = 12;
  config.tau.reset();
  config.steps = 18;
  config.trials = 4;
  config.seed = 3;
  const RunResult result = run_random(config);
  for (std::size_t t = 0; t < config.trials; ++t) {
    const StateSequence seq =
        sample_state_sequence(12, 18, RngSeed{3, 0}.substream(t));
    const SpectralMeasure expected = hermitian_spectrum(build_gram(seq));
    CHECK(result.trial_eigenvalues[t] == expected.eigenvalues());
  }
}

TEST_CASE("histogram pooling conserves counts") {
  ExperimentConfig config = base_config(Mode::random);
  config.trials = 3;
  config.bins = 24;
  const RunResult result = run_random(config);
  const std::size_t k = config.resolved_steps();
  const std::size_t total = result.histogram->atom_count +
                            std::accumulate(result.histogram->counts.begin(),
                                            result.histogram->counts.end(), std::size_t{0});
  CHECK(total == config.trials * k);
}

TEST_CASE("config validation reports the offending field") {
  ExperimentConfig config = base_config(Mode::random);
  config.dim = 0;
  try {
    config.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "dim");
  }

  config = base_config(Mode::random);
  config.steps = 10;  // both tau and steps
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = base_config(Mode::random);
  config.tau.reset();  // neither
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = base_config(Mode::random);
  config.bins = 5;
  try {
    config.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "bins");
  }

  config = base_config(Mode::random);
  config.trials = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  CHECK_THROWS_AS(run_random(base_config(Mode::classical)), ConfigError);
}

TEST_CASE("run_floquet with zero kick and rotation is the identity evolution") {
  ExperimentConfig config = base_config(Mode::floquet);
  config.dim = 12;
  config.tau.reset();
  config.steps = 9;
  config.trials = 1;
  config.kick_strength = 0.0;
  config.rotation = 0.0;
  const RunResult result = run_floquet(config);
  CHECK((*result.pooled)[0] == Catch::Approx(9.0).margin(1e-9));
  CHECK(result.pooled->zero_count() == 8);
}

TEST_CASE("run_permutation of the identity gives the constant-word spectrum") {
  ExperimentConfig config = base_config(Mode::permutation);
  config.dim = 6;
  config.tau.reset();
  config.steps = 10;
  std::vector<std::size_t> identity(6);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  config.permutation = identity;
  config.start = 3;
  const RunResult result = run_permutation(config);
  CHECK(result.cycles == std::vector<std::size_t>(6, 1));
  CHECK((*result.pooled)[0] == 10.0);
  CHECK(result.pooled->zero_count() == 9);
}

TEST_CASE("run_classical reports a small TV distance against Poisson") {
  ExperimentConfig config = base_config(Mode::classical);
  config.dim = 2000;
  config.tau = 1.0;
  config.trials = 4;
  const RunResult result = run_classical(config);
  REQUIRE(result.tv_distance.has_value());
  CHECK(*result.tv_distance <= 0.05);
  double total = 0.0;
  for (std::size_t k = 0; k <= result.multiplicity->max_multiplicity(); ++k)
    total += result.multiplicity->pmf(k);
  CHECK(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("run_mp_grid rows satisfy the law's structure") {
  ExperimentConfig config;
  config.mode = Mode::mp_grid;
  config.tau_points = 12;
  config.x_points = 40;
  const RunResult result = run_mp_grid(config);
  REQUIRE(result.grid.size() == 12 * 40);
  for (const GridRow& row : result.grid) {
    CHECK(row.atom_weight == std::max(0.0, (row.tau - 1.0) / row.tau));
    const MPLaw law(row.tau);
    const auto [a, b] = mp_support(law);
    if (row.density > 1e-12) {
      CHECK(row.x > a);
      CHECK(row.x < b);
    }
    CHECK(row.cdf >= 0.0);
    CHECK(row.cdf <= 1.0);
  }
}

TEST_CASE("at tau = 0.02 nearly all spectral mass sits near x = 1") {
  const MPLaw law(0.02);
  CHECK(mp_cdf(law, 1.6) - mp_cdf(law, 0.5) >= 0.99);
}

TEST_CASE("CSV spectra round-trip through the spectrum loader") {
  ExperimentConfig config = base_config(Mode::random);
  config.trials = 2;
  const RunResult result = run_random(config);
  const auto path = temp_file("gramspec_test_spectrum.csv");
  {
    std::ofstream out(path);
    result_to_csv(result, out);
  }
  const SpectralMeasure loaded = load_spectrum_file(path.string());
  REQUIRE(loaded.count() == result.pooled->count());
  for (std::size_t i = 0; i < loaded.count(); ++i)
    CHECK(loaded[i] == (*result.pooled)[i]);  // bit-exact via shortest round-trip format
  std::filesystem::remove(path);
}

TEST_CASE("the spectrum loader refuses files with a foreign schema") {
  ExperimentConfig config = base_config(Mode::random);
  config.bins = 16;  // histogram rows instead of spectra
  const RunResult result = run_random(config);
  const auto path = temp_file("gramspec_test_histogram.csv");
  {
    std::ofstream out(path);
    result_to_csv(result, out);
  }
  CHECK_THROWS_AS(load_spectrum_file(path.string()), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("JSON output parses and round-trips eigenvalues") {
  ExperimentConfig config = base_config(Mode::random);
  config.format = OutputFormat::json;
  const RunResult result = run_random(config);
  const auto path = temp_file("gramspec_test_spectrum.json");
  {
    std::ofstream out(path);
    write_result(result, out);
  }
  const SpectralMeasure loaded = load_spectrum_file(path.string());
  CHECK(loaded.count() == result.pooled->count());
  std::filesystem::remove(path);
}

TEST_CASE("config files overlay and flags stay overridable") {
  const auto path = temp_file("gramspec_test_config.json");
  {
    std::ofstream out(path);
    out << R"({"dim": 32, "tau": 2.0, "trials": 3, "seed": 11, "format": "json"})";
  }
  ExperimentConfig config;
  config.mode = Mode::random;
  apply_config_file(path.string(), config);
  CHECK(config.dim == 32);
  CHECK(config.tau == 2.0);
  CHECK(config.trials == 3);
  CHECK(config.seed == 11);
  CHECK(config.format == OutputFormat::json);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(apply_config_file("/nonexistent/config.json", config), ConfigError);
}

TEST_CASE("the config echo contains what a re-run needs") {
  ExperimentConfig config = base_config(Mode::random);
  const nlohmann::json echo = config_to_json(config);
  CHECK(echo["mode"] == "random");
  CHECK(echo["dim"] == 16);
  CHECK(echo["steps"] == 16);
  CHECK(echo["tau"] == 1.0);
  CHECK(echo["trials"] == 2);
  CHECK(echo["seed"] == 7);
}
