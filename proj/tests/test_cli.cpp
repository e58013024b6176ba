// End-to-end checks of the command-line surface: exit codes, output
// determinism, and the documented file schemas. The binary path arrives
// through the GRAMSPEC_CLI environment variable set by CTest.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

std::string cli_path() {
  const char* path = std::getenv("GRAMSPEC_CLI");
  REQUIRE(path != nullptr);
  return path;
}

CommandResult run_command(const std::string& args) {
  const std::string command = cli_path() + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer{};
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("help exits 0, config errors exit 2") {
  CHECK(run_command("--help").exit_code == 0);
  CHECK(run_command("random --tau 1").exit_code == 2);        // missing dim
  CHECK(run_command("random --dim 8").exit_code == 2);        // neither tau nor steps
  CHECK(run_command("random --dim 8 --tau 1 --steps 8").exit_code == 2);
  CHECK(run_command("random --no-such-flag").exit_code == 2);
  CHECK(run_command("").exit_code == 2);                      // subcommand required
  CHECK(run_command("fit /nonexistent.csv --tau 1").exit_code == 1);  // runtime failure
}

TEST_CASE("random runs are byte-identical across invocations") {
  const auto first = temp_file("gramspec_cli_a.csv");
  const auto second = temp_file("gramspec_cli_b.csv");
  const std::string args = "random --dim 16 --tau 1 --trials 4 --seed 42 --out ";
  REQUIRE(run_command(args + first.string()).exit_code == 0);
  REQUIRE(run_command(args + second.string()).exit_code == 0);
  CHECK(slurp(first) == slurp(second));

  const std::string body = slurp(first);
  CHECK(body.find("# config") == 0);
  CHECK(body.find("trial,index,eigenvalue") != std::string::npos);
  std::filesystem::remove(first);
  std::filesystem::remove(second);
}

TEST_CASE("fit consumes a stored spectrum") {
  const auto spectrum = temp_file("gramspec_cli_fit.csv");
  REQUIRE(run_command("random --dim 32 --tau 1 --trials 2 --seed 5 --out " + spectrum.string())
              .exit_code == 0);
  const CommandResult fit = run_command("fit " + spectrum.string() + " --tau 1");
  CHECK(fit.exit_code == 0);
  CHECK(fit.output.find("ks_distance") != std::string::npos);
  std::filesystem::remove(spectrum);
}

TEST_CASE("bins switch the csv schema to histogram rows") {
  const CommandResult result =
      run_command("random --dim 12 --tau 1 --trials 2 --seed 3 --bins 10");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("bin_left,bin_right,count") != std::string::npos);
}

TEST_CASE("mp-grid emits the documented columns") {
  const auto config = temp_file("gramspec_cli_grid.json");
  {
    std::ofstream out(config);
    out << R"({"tau_points": 5, "x_points": 8})";
  }
  const CommandResult result = run_command("mp-grid --config " + config.string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("tau,x,density,cdf,atom_weight") != std::string::npos);
  std::filesystem::remove(config);
}

TEST_CASE("permutation mode loads a JSON permutation") {
  const auto perm = temp_file("gramspec_cli_perm.json");
  {
    std::ofstream out(perm);
    out << "[1, 2, 0]";
  }
  const CommandResult result =
      run_command("permutation --perm " + perm.string() + " --steps 6 --format json");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("cycle_type") != std::string::npos);
  std::filesystem::remove(perm);
}

TEST_CASE("classical mode reports the Poisson comparison") {
  const CommandResult result =
      run_command("classical --dim 500 --tau 1 --trials 2 --seed 9");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("multiplicity,empirical,poisson") != std::string::npos);
  CHECK(result.output.find("# tv_distance") != std::string::npos);
}
