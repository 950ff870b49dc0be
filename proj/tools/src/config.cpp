#include "kerrcat_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "kerrcat/errors.hpp"

namespace kerrcat::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw InvalidArgument("not a number: '" + text + "'");
  return v;
}

int parse_int(const std::string& text) {
  int v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw InvalidArgument("not an integer: '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item)));
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"alpha", [](RunConfig& c, const std::string& v) { c.params.alpha.real(parse_real(v)); }},
      {"alpha_im", [](RunConfig& c, const std::string& v) { c.params.alpha.imag(parse_real(v)); }},
      {"r", [](RunConfig& c, const std::string& v) { c.params.r = parse_real(v); }},
      {"theta", [](RunConfig& c, const std::string& v) { c.params.theta_sq = parse_real(v); }},
      {"c", [](RunConfig& c, const std::string& v) { c.params.c.real(parse_real(v)); }},
      {"c_im", [](RunConfig& c, const std::string& v) { c.params.c.imag(parse_real(v)); }},
      {"kappa", [](RunConfig& c, const std::string& v) { c.params.kappa = parse_int(v); }},
      {"omega", [](RunConfig& c, const std::string& v) { c.params.omega = parse_real(v); }},
      {"lambda", [](RunConfig& c, const std::string& v) { c.params.lambda_kerr = parse_real(v); }},
      {"damping",
       [](RunConfig& c, const std::string& v) {
         if (v == "none") {
           c.damping.reset();
           return;
         }
         DampingParams d = c.damping.value_or(DampingParams{});
         if (v == "amplitude")
           d.kind = DampingKind::amplitude;
         else if (v == "phase")
           d.kind = DampingKind::phase;
         else
           throw InvalidArgument("damping must be none, amplitude or phase");
         c.damping = d;
       }},
      {"gamma",
       [](RunConfig& c, const std::string& v) {
         DampingParams d = c.damping.value_or(DampingParams{});
         d.gamma = parse_real(v);
         c.damping = d;
       }},
      {"times", [](RunConfig& c, const std::string& v) { c.times = parse_list(v); }},
      {"grid_points", [](RunConfig& c, const std::string& v) { c.grid_points = parse_int(v); }},
      {"half_width", [](RunConfig& c, const std::string& v) { c.half_width = parse_real(v); }},
      {"sigma", [](RunConfig& c, const std::string& v) { c.sigmas = parse_list(v); }},
      {"x_points", [](RunConfig& c, const std::string& v) { c.x_points = parse_int(v); }},
      {"phi_points", [](RunConfig& c, const std::string& v) { c.phi_points = parse_int(v); }},
      {"theta_points", [](RunConfig& c, const std::string& v) { c.theta_points = parse_int(v); }},
      {"kitten_p", [](RunConfig& c, const std::string& v) { c.kitten_p = parse_int(v); }},
      {"scan_begin", [](RunConfig& c, const std::string& v) { c.scan_begin = parse_real(v); }},
      {"scan_end", [](RunConfig& c, const std::string& v) { c.scan_end = parse_real(v); }},
      {"scan_points", [](RunConfig& c, const std::string& v) { c.scan_points = parse_int(v); }},
      {"eps_trunc", [](RunConfig& c, const std::string& v) { c.eps_trunc = parse_real(v); }},
      {"threads", [](RunConfig& c, const std::string& v) { c.threads = parse_int(v); }},
      {"output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      {"cache_dir", [](RunConfig& c, const std::string& v) { c.cache_dir = v; }},
  };
  return table;
}

}  // namespace

double parse_real(const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "inf") return std::numeric_limits<double>::infinity();
  const auto pos = text.find("pi");
  if (pos == std::string::npos) return parse_number(text);
  // [a*]pi[/b]
  double a = 1.0;
  if (pos > 0) {
    if (text[pos - 1] != '*') throw InvalidArgument("malformed multiple of pi: '" + text + "'");
    a = parse_number(text.substr(0, pos - 1));
  }
  double b = 1.0;
  const std::string rest = text.substr(pos + 2);
  if (!rest.empty()) {
    if (rest[0] != '/') throw InvalidArgument("malformed multiple of pi: '" + text + "'");
    b = parse_number(rest.substr(1));
    if (b == 0.0) throw InvalidArgument("division by zero in '" + text + "'");
  }
  return a * std::numbers::pi / b;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw InvalidArgument("unknown config key '" + key + "'");
  try {
    it->second(cfg, value);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(key + ": " + e.what());
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected key=value");
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void RunConfig::validate() const {
  params.validate();
  if (damping && !(damping->gamma >= 0.0 && std::isfinite(damping->gamma)))
    throw InvalidArgument("gamma must be finite and >= 0");
  for (double t : times) {
    if (std::isnan(t) || t < 0.0) throw InvalidArgument("times must be >= 0");
    if (std::isinf(t) && !damping) throw InvalidArgument("times=inf needs damping");
  }
  if (grid_points < 5) throw InvalidArgument("grid_points must be >= 5");
  if (half_width && !(*half_width > 0.0)) throw InvalidArgument("half_width must be > 0");
  for (double s : sigmas)
    if (!(s > 0.0 && s <= 1.0)) throw InvalidArgument("sigma values must lie in (0, 1]");
  if (x_points < 5 || phi_points < 1 || theta_points < 4) throw InvalidArgument("tomogram/polar point counts too small");
  if (kitten_p < 2) throw InvalidArgument("kitten_p must be >= 2");
  if (!(scan_end > scan_begin)) throw InvalidArgument("scan_end must exceed scan_begin");
  if (scan_points < 0) throw InvalidArgument("scan_points must be >= 0");
  if (!(eps_trunc > 0.0 && eps_trunc <= 1e-6)) throw InvalidArgument("eps_trunc must be in (0, 1e-6]");
  if (threads < 0) throw InvalidArgument("threads must be >= 0");
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["alpha"] = fmt(params.alpha.real());
  kv["alpha_im"] = fmt(params.alpha.imag());
  kv["r"] = fmt(params.r);
  kv["theta"] = fmt(params.theta_sq);
  kv["c"] = fmt(params.c.real());
  kv["c_im"] = fmt(params.c.imag());
  kv["kappa"] = std::to_string(params.kappa);
  kv["omega"] = fmt(params.omega);
  kv["lambda"] = fmt(params.lambda_kerr);
  kv["damping"] = !damping ? "none" : damping->kind == DampingKind::amplitude ? "amplitude" : "phase";
  kv["gamma"] = fmt(damping ? damping->gamma : 0.0);
  kv["times"] = fmt_list(times);
  kv["grid_points"] = std::to_string(grid_points);
  kv["half_width"] = half_width ? fmt(*half_width) : "default";
  kv["sigma"] = fmt_list(sigmas);
  kv["x_points"] = std::to_string(x_points);
  kv["phi_points"] = std::to_string(phi_points);
  kv["theta_points"] = std::to_string(theta_points);
  kv["kitten_p"] = std::to_string(kitten_p);
  kv["scan_begin"] = fmt(scan_begin);
  kv["scan_end"] = fmt(scan_end);
  kv["scan_points"] = std::to_string(scan_points);
  kv["eps_trunc"] = fmt(eps_trunc);
  // threads, output_dir and cache_dir do not change any result.
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical()); }

}  // namespace kerrcat::cli
