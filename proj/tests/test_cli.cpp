#include <catch_amalgamated.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>

#include "kerrcat/errors.hpp"
#include "kerrcat_cli/commands.hpp"

using namespace kerrcat;
using namespace kerrcat::cli;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("kerrcat_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

RunConfig vacuum_config() {
  return parse_config(
      "alpha = 0\n"
      "r = 0\n"
      "kappa = 0\n"
      "c = 0\n"
      "grid_points = 201\n");
}

}  // namespace

TEST_CASE("real literals", "[cli]") {
  CHECK(parse_real("1.25") == 1.25);
  CHECK(parse_real(" -3e-2 ") == -0.03);
  CHECK(parse_real("pi") == kPi);
  CHECK(parse_real("pi/8") == kPi / 8.0);
  CHECK(parse_real("3*pi/4") == 3.0 * kPi / 4.0);
  CHECK(std::isinf(parse_real("inf")));
  CHECK_THROWS_AS(parse_real("2pi"), InvalidArgument);
  CHECK_THROWS_AS(parse_real("pi/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_real("abc"), InvalidArgument);
}

TEST_CASE("config parsing and validation", "[cli]") {
  const auto cfg = parse_config(
      "# squeezed cat, three times\n"
      "alpha = 4\n"
      "r = 0.5   # squeezing\n"
      "times = 0, pi/8, pi/4\n"
      "sigma = 0.5, 0.8\n"
      "damping = phase\n"
      "gamma = 0.5\n");
  CHECK(cfg.params.alpha == cplx(4.0, 0.0));
  CHECK(cfg.params.r == 0.5);
  REQUIRE(cfg.times.size() == 3u);
  CHECK(cfg.times[1] == kPi / 8.0);
  CHECK(cfg.sigmas == std::vector<double>{0.5, 0.8});
  REQUIRE(cfg.damping.has_value());
  CHECK(cfg.damping->kind == DampingKind::phase);
  CHECK(cfg.damping->gamma == 0.5);

  CHECK_THROWS_AS(parse_config("alpah = 2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("alpha 2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("times = inf\n"), InvalidArgument);
  CHECK_NOTHROW(parse_config("times = inf\ndamping = amplitude\ngamma = 1\n"));
  CHECK_THROWS_AS(parse_config("sigma = 1.5\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("kappa = -1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("eps_trunc = 1e-3\n"), InvalidArgument);
  CHECK(config_keys().size() >= 20u);
}

TEST_CASE("config hash is stable and ignores output locations", "[cli]") {
  const auto a = parse_config("alpha = 2\nr = 0.5\n");
  const auto b = parse_config("r = 0.5\n\nalpha = 2.0\noutput_dir = /tmp/elsewhere\nthreads = 3\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16u);
  CHECK(a.hash() != parse_config("alpha = 2\nr = 0.50000000001\n").hash());
  // FNV-1a 64-bit reference vectors.
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("quantity and target names round trip", "[cli]") {
  for (auto q : {Quantity::wigner, Quantity::husimi, Quantity::polarq, Quantity::wehrl, Quantity::negativity,
                 Quantity::rdist, Quantity::negativity_r, Quantity::tomogram, Quantity::hs_scan})
    CHECK(parse_quantity(quantity_name(q)) == q);
  for (auto t : {ReproTarget::table1, ReproTarget::table2, ReproTarget::fig1_negativities,
                 ReproTarget::fig7_negativities, ReproTarget::kitten_times})
    CHECK(parse_target(target_name(t)) == t);
  CHECK_THROWS_AS(parse_quantity("entropy"), InvalidArgument);
  CHECK_THROWS_AS(parse_target("table3"), InvalidArgument);
}

TEST_CASE("vacuum Wehrl entropy through the compute command", "[cli]") {
  auto cfg = vacuum_config();
  cfg.output_dir = scratch_dir("wehrl");
  const auto manifest = nlohmann::json::parse(cmd_compute(Quantity::wehrl, cfg));
  CHECK(manifest["quantity"] == "wehrl");
  CHECK(manifest["config_hash"] == cfg.hash());
  const auto& row = manifest["results"][0];
  CHECK(row["s_q"]["value"].get<double>() == Approx(1.0 + std::log(kPi)).epsilon(1e-8));
  CHECK(row["q_norm"].get<double>() == Approx(1.0).epsilon(1e-8));

  std::ifstream csv(cfg.output_dir / "wehrl.csv");
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(csv, line)) lines.push_back(line);
  REQUIRE(lines.size() >= 2u);
  CHECK(lines[lines.size() - 2] == "lambda_t, s_q");
  CHECK(std::stod(lines.back().substr(lines.back().find(',') + 1)) == Approx(1.0 + std::log(kPi)).epsilon(1e-8));
  std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("cached states reproduce fresh results bit for bit", "[cli]") {
  auto cfg = parse_config("grid_points = 101\ntimes = 0, pi/8\n");
  cfg.output_dir = scratch_dir("fresh");
  const auto fresh = cmd_compute(Quantity::negativity, cfg);

  cfg.cache_dir = scratch_dir("cache");
  const auto first = cmd_compute(Quantity::negativity, cfg);
  const auto second = cmd_compute(Quantity::negativity, cfg);
  CHECK(first == fresh);
  CHECK(second == fresh);
  CHECK(std::distance(std::filesystem::directory_iterator(cfg.cache_dir), std::filesystem::directory_iterator{}) == 2);

  const auto rho = state_at(cfg, kPi / 8.0);
  auto nocache = cfg;
  nocache.cache_dir.clear();
  CHECK(rho.elements == state_at(nocache, kPi / 8.0).elements);
  std::filesystem::remove_all(cfg.cache_dir);
  std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("exit codes by error class", "[cli]") {
  CHECK(exit_code_for(InvalidArgument("x")) == 2);
  CHECK(exit_code_for(SigmaOutOfRange("x")) == 2);
  CHECK(exit_code_for(UnsupportedSelection("x")) == 2);
  CHECK(exit_code_for(WrongKappa("x")) == 2);
  CHECK(exit_code_for(UnderResolvedGrid("x")) == 3);
  CHECK(exit_code_for(DegenerateState("x")) == 4);
  CHECK(exit_code_for(DivergentSeries("x")) == 1);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("report formatting", "[cli]") {
  std::vector<ReproLine> lines(2);
  lines[0] = {"delta_W(pi/8)", 1.9221, 1.9224, 0.02, "within", true, "abc"};
  lines[1] = {"d_HS(pi/8)", 2e-4, 1e-3, 0.0, "below", false, "abc"};
  const auto text = format_report(ReproTarget::fig1_negativities, lines);
  CHECK(text.find("delta_W(pi/8)") != std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
}
