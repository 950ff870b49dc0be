#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "kerrcat/decoherence.hpp"
#include "kerrcat/errors.hpp"
#include "kerrcat/fock_state.hpp"
#include "kerrcat/kitten.hpp"
#include "kerrcat/phase_space.hpp"
#include "kerrcat/tomography.hpp"
#include "kerrcat_cli/commands.hpp"

#ifndef KERRCAT_VERSION
#define KERRCAT_VERSION "unknown"
#endif

namespace kerrcat::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

const char* kQuantityNames[] = {"wigner", "husimi",       "polarq",   "wehrl",  "negativity",
                                "rdist",  "negativity_r", "tomogram", "hs_scan"};

std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PhaseSpaceGrid grid_for(const RunConfig& cfg) {
  PhaseSpaceGrid g = default_grid(cfg.params, cfg.grid_points);
  if (cfg.half_width) g.half_width = *cfg.half_width;
  g.validate();
  return g;
}

json grid_meta(const PhaseSpaceGrid& g) {
  return {{"half_width", g.half_width}, {"points_per_axis", g.points_per_axis}, {"spacing", g.spacing()}};
}

json quad_meta(const QuadratureResult& q) { return {{"value", q.value}, {"error_estimate", q.error_estimate}}; }

// Everything that determines the density matrix, on one line.
std::string state_key(const RunConfig& cfg, double lambda_t, int n_max) {
  const auto& p = cfg.params;
  std::string k = "alpha=" + fmt(p.alpha.real()) + "," + fmt(p.alpha.imag()) + ";r=" + fmt(p.r) +
                  ";theta=" + fmt(p.theta_sq) + ";c=" + fmt(p.c.real()) + "," + fmt(p.c.imag()) +
                  ";kappa=" + std::to_string(p.kappa) + ";omega=" + fmt(p.omega) + ";lambda=" + fmt(p.lambda_kerr) +
                  ";eps=" + fmt(cfg.eps_trunc) + ";t=" + fmt(lambda_t) + ";n_max=" + std::to_string(n_max);
  if (cfg.damping)
    k += std::string(";damping=") + (cfg.damping->kind == DampingKind::amplitude ? "amplitude" : "phase") +
         ";gamma=" + fmt(cfg.damping->gamma);
  return k;
}

DensityMatrix compute_state(const RunConfig& cfg, double lambda_t, int n_max) {
  const auto& p = cfg.params;
  if (cfg.damping && std::isinf(lambda_t)) {
    if (cfg.damping->kind == DampingKind::phase) return PhaseAsymptote(p, cfg.eps_trunc).density();
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(1, 1);
    vac(0, 0) = 1.0;
    return DensityMatrix(std::move(vac));
  }
  const FockState psi = n_max < 0 ? build_state(p, cfg.eps_trunc) : build_state_to(p, n_max);
  if (!cfg.damping) return density(evolve_lambda_t(psi, p, lambda_t));
  return damped_rho(density(psi), p, *cfg.damping, lambda_t / p.lambda_kerr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string time_tag(std::size_t i) { return "_t" + std::to_string(i); }

std::vector<std::string> csv_comments(const RunConfig& cfg, double lambda_t) {
  return {"kerrcat " KERRCAT_VERSION, "config_hash=" + cfg.hash(), "lambda_t=" + fmt(lambda_t),
          "params: " + cfg.params.describe()};
}

struct Ctx {
  const RunConfig& cfg;
  json& results;
  std::filesystem::path out;
};

void do_field(const Ctx& c, double sigma, const char* stem) {
  const auto grid = grid_for(c.cfg);
  for (std::size_t i = 0; i < c.cfg.times.size(); ++i) {
    const double lt = c.cfg.times[i];
    const auto rho = state_at(c.cfg, lt);
    const auto field = evaluate_field(QuasiDistribution(rho, sigma), grid, c.cfg.threads);
    const std::string file = std::string(stem) + time_tag(i) + ".csv";
    write_field_csv(c.out / file, field, csv_comments(c.cfg, lt));
    c.results.push_back({{"lambda_t", fmt(lt)},
                         {"file", file},
                         {"fock_dim", rho.dim()},
                         {"integral", quad_meta(field.integral())},
                         {"boundary_ratio", field.boundary_ratio()},
                         {"grid", grid_meta(grid)}});
  }
}

void do_polarq(const Ctx& c) {
  const int n = c.cfg.theta_points;
  for (std::size_t i = 0; i < c.cfg.times.size(); ++i) {
    const double lt = c.cfg.times[i];
    const auto rho = state_at(c.cfg, lt);
    const std::string file = "polarq" + time_tag(i) + ".csv";
    std::string text;
    for (const auto& line : csv_comments(c.cfg, lt)) text += "# " + line + "\n";
    text += "theta, q\n";
    std::vector<double> vals(n);
    char buf[96];
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * kPi * k / n;
      vals[k] = polar_q(rho, th);
      std::snprintf(buf, sizeof buf, "%.12g, %.17g\n", th, vals[k]);
      text += buf;
    }
    write_text(c.out / file, text);
    // The periodic trapezoid rule is spectrally accurate here.
    c.results.push_back({{"lambda_t", fmt(lt)}, {"file", file}, {"integral", pairwise_sum(vals) * 2.0 * kPi / n}});
  }
}

void do_wehrl_negativity(const Ctx& c, bool wehrl) {
  const auto grid = grid_for(c.cfg);
  std::vector<TimeSeriesRow> series;
  std::string text;
  for (const auto& line : csv_comments(c.cfg, c.cfg.times.front())) text += "# " + line + "\n";
  text += wehrl ? "lambda_t, s_q\n" : "lambda_t, delta_w\n";
  for (double lt : c.cfg.times) {
    const auto rho = state_at(c.cfg, lt);
    json row = {{"lambda_t", fmt(lt)}, {"fock_dim", rho.dim()}};
    TimeSeriesRow ts{lt, std::nan(""), std::nan("")};
    if (wehrl || c.cfg.damping) {
      const auto qf = evaluate_decayed(QuasiDistribution::husimi(rho), grid, c.cfg.threads);
      const auto s = wehrl_entropy(qf);
      ts.s_q = s.value;
      row["s_q"] = quad_meta(s);
      row["q_norm"] = qf.integral().value;
      row["q_grid"] = grid_meta(qf.grid);
    }
    if (!wehrl || c.cfg.damping) {
      const auto wf = evaluate_decayed(QuasiDistribution::wigner(rho), grid, c.cfg.threads);
      const auto n = negativity_w(wf);
      ts.delta_w = n.value;
      row["delta_w"] = quad_meta(n);
      row["w_norm"] = wf.integral().value;
      row["w_grid"] = grid_meta(wf.grid);
    }
    series.push_back(ts);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s, %.17g\n", fmt(lt).c_str(), wehrl ? ts.s_q : ts.delta_w);
    text += buf;
    c.results.push_back(row);
  }
  write_text(c.out / (wehrl ? "wehrl.csv" : "negativity.csv"), text);
  if (c.cfg.damping)
    write_time_series_csv(c.out / "time_series.csv", series, {"kerrcat " KERRCAT_VERSION, "config_hash=" + c.cfg.hash()});
}

void do_rdist(const Ctx& c, bool negativity) {
  const auto grid = grid_for(c.cfg);
  std::string text;
  for (const auto& line : csv_comments(c.cfg, c.cfg.times.front())) text += "# " + line + "\n";
  text += "lambda_t, sigma, delta_r\n";
  for (std::size_t i = 0; i < c.cfg.times.size(); ++i) {
    const double lt = c.cfg.times[i];
    for (std::size_t k = 0; k < c.cfg.sigmas.size(); ++k) {
      const double sigma = c.cfg.sigmas[k];
      json row = {{"lambda_t", fmt(lt)}, {"sigma", sigma}};
      int n_max = -1;
      try {
        if (sigma < 0.5) n_max = sigma_truncation(c.cfg.params, sigma, c.cfg.eps_trunc);
      } catch (const DivergentSeries& e) {
        row["divergent"] = e.what();
        c.results.push_back(row);
        text += fmt(lt) + ", " + fmt(sigma) + ", divergent\n";
        continue;
      }
      const auto rho = state_at(c.cfg, lt, n_max);
      const QuasiDistribution dist(rho, sigma);
      row["fock_dim"] = rho.dim();
      if (negativity) {
        const auto field = evaluate_decayed(dist, grid, c.cfg.threads);
        require_boundary_decay(field);
        std::vector<double> a(field.values.size());
        for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::abs(field.values[j]);
        auto q = integrate_samples(a, field.grid);
        q.value -= 1.0;
        row["delta_r"] = quad_meta(q);
        row["grid"] = grid_meta(field.grid);
        text += fmt(lt) + ", " + fmt(sigma) + ", " + fmt(q.value) + "\n";
      } else {
        const auto field = evaluate_field(dist, grid, c.cfg.threads);
        const std::string file = "rdist" + time_tag(i) + "_s" + std::to_string(k) + ".csv";
        auto comments = csv_comments(c.cfg, lt);
        comments.push_back("sigma=" + fmt(sigma));
        write_field_csv(c.out / file, field, comments);
        row["file"] = file;
        row["integral"] = quad_meta(field.integral());
        row["boundary_ratio"] = field.boundary_ratio();
        row["grid"] = grid_meta(grid);
      }
      c.results.push_back(row);
    }
  }
  if (negativity) write_text(c.out / "negativity_r.csv", text);
}

void do_tomogram(const Ctx& c) {
  for (std::size_t i = 0; i < c.cfg.times.size(); ++i) {
    const double lt = c.cfg.times[i];
    const auto rho = state_at(c.cfg, lt);
    const auto tom = tomogram_surface([&](double x, double phi) { return tomogram_series(rho, x, phi); },
                                      default_x_grid(c.cfg.params, c.cfg.x_points),
                                      uniform_phi_grid(c.cfg.phi_points), c.cfg.threads);
    double worst = 0.0;
    if ((tom.x_grid.size() - 1) % 4 == 0)
      for (std::size_t k = 0; k < tom.phi_grid.size(); ++k)
        worst = std::max(worst, std::abs(tomogram_marginal(tom, k).value - 1.0));
    const std::string file = "tomogram" + time_tag(i) + ".csv";
    write_tomogram_csv(c.out / file, tom, csv_comments(c.cfg, lt));
    c.results.push_back({{"lambda_t", fmt(lt)},
                         {"file", file},
                         {"fock_dim", rho.dim()},
                         {"x_max", tom.x_grid.back()},
                         {"max_marginal_deviation", worst}});
  }
}

void do_hs_scan(const Ctx& c) {
  if (c.cfg.damping) throw InvalidArgument("hs_scan compares pure states; remove the damping setting");
  const auto spec = kitten_selection(c.cfg.kitten_p, c.cfg.params);
  const auto ref = fiducial_state(spec, c.cfg.eps_trunc);
  const double span = c.cfg.scan_end - c.cfg.scan_begin;
  const int points = c.cfg.scan_points > 0 ? c.cfg.scan_points
                                           : static_cast<int>(std::ceil(kHsPointsPerPi * span / kPi)) + 1;
  const auto rows = hs_scan(c.cfg.params, ref, c.cfg.scan_begin, c.cfg.scan_end, points, c.cfg.threads);
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].d_hs < rows[best].d_hs) best = i;
  write_hs_scan_csv(c.out / "hs_scan.csv", rows, csv_comments(c.cfg, c.cfg.scan_begin));
  const double tk = kitten_time(c.cfg.kitten_p);
  c.results.push_back({{"file", "hs_scan.csv"},
                       {"points", points},
                       {"kitten_p", c.cfg.kitten_p},
                       {"kitten_time", tk},
                       {"min_d_hs", rows[best].d_hs},
                       {"argmin_lambda_t", rows[best].lambda_t},
                       {"d_hs_at_kitten_time", hs_distance(evolve_lambda_t(build_state(c.cfg.params, c.cfg.eps_trunc),
                                                                           c.cfg.params, tk),
                                                           ref)}});
}

}  // namespace

Quantity parse_quantity(const std::string& name) {
  for (int i = 0; i < 9; ++i)
    if (name == kQuantityNames[i]) return static_cast<Quantity>(i);
  throw InvalidArgument("unknown quantity '" + name + "'");
}

std::string quantity_name(Quantity q) { return kQuantityNames[static_cast<int>(q)]; }

DensityMatrix state_at(const RunConfig& cfg, double lambda_t, int n_max) {
  if (cfg.cache_dir.empty()) return compute_state(cfg, lambda_t, n_max);
  const std::string key = state_key(cfg, lambda_t, n_max);
  const auto path = cfg.cache_dir / ("rho_" + fnv1a_hex(key) + ".txt");
  if (std::filesystem::exists(path)) {
    DensityCacheHeader h;
    auto rho = read_density_cache(path, &h);
    if (h.meta["key"] == key) return rho;
  }
  auto rho = compute_state(cfg, lambda_t, n_max);
  DensityCacheHeader h;
  h.meta["key"] = key;
  std::filesystem::create_directories(cfg.cache_dir);
  write_density_cache(path, rho, h);
  return rho;
}

std::string cmd_compute(Quantity q, const RunConfig& cfg) {
  cfg.validate();
  json manifest;
  manifest["tool"] = "kerrcat";
  manifest["version"] = KERRCAT_VERSION;
  manifest["command"] = "compute";
  manifest["quantity"] = quantity_name(q);
  manifest["config_hash"] = cfg.hash();
  json conf = json::object();
  {
    std::stringstream ss(cfg.canonical());
    std::string line;
    while (std::getline(ss, line)) {
      const auto eq = line.find('=');
      conf[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  manifest["config"] = conf;
  manifest["tolerances"] = {{"eps_trunc", cfg.eps_trunc}, {"boundary_ratio", kBoundaryRatio}};
  json results = json::array();
  const Ctx c{cfg, results, cfg.output_dir};
  std::filesystem::create_directories(cfg.output_dir);
  switch (q) {
    case Quantity::wigner: do_field(c, 0.5, "wigner"); break;
    case Quantity::husimi: do_field(c, 1.0, "husimi"); break;
    case Quantity::polarq: do_polarq(c); break;
    case Quantity::wehrl: do_wehrl_negativity(c, true); break;
    case Quantity::negativity: do_wehrl_negativity(c, false); break;
    case Quantity::rdist: do_rdist(c, false); break;
    case Quantity::negativity_r: do_rdist(c, true); break;
    case Quantity::tomogram: do_tomogram(c); break;
    case Quantity::hs_scan: do_hs_scan(c); break;
  }
  manifest["results"] = results;
  const std::string text = manifest.dump(2) + "\n";
  write_text(cfg.output_dir / "manifest.json", text);
  return text;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UnderResolvedGrid*>(&e)) return 3;
  if (dynamic_cast<const DegenerateState*>(&e)) return 4;
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const UnsupportedSelection*>(&e) ||
      dynamic_cast<const WrongKappa*>(&e) || dynamic_cast<const SigmaOutOfRange*>(&e))
    return 2;
  return 1;
}

}  // namespace kerrcat::cli
