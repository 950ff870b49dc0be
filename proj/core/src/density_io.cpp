#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "kerrcat/errors.hpp"
#include "kerrcat/fock_state.hpp"

namespace kerrcat {

namespace {

constexpr const char* kMagic = "# kerrcat-density";

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

}  // namespace

void write_density_cache(const std::filesystem::path& path, const DensityMatrix& rho,
                         const DensityCacheHeader& header) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw CacheError("cannot open " + tmp.string() + " for writing");
    out << kMagic << " version=" << header.format_version << "\n";
    out << "# dim=" << rho.dim() << "\n";
    for (const auto& [k, v] : header.meta) {
      if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos)
        throw CacheError("cache metadata must be single-line key=value");
      out << "# " << k << "=" << v << "\n";
    }
    for (int n = 0; n < rho.dim(); ++n)
      for (int m = 0; m < rho.dim(); ++m) {
        const cplx z = rho(n, m);
        out << n << ' ' << m << ' ' << hexfloat(z.real()) << ' ' << hexfloat(z.imag()) << '\n';
      }
    out.flush();
    if (!out) throw CacheError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

DensityMatrix read_density_cache(const std::filesystem::path& path, DensityCacheHeader* header) {
  std::ifstream in(path);
  if (!in) throw CacheError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind(kMagic, 0) != 0)
    throw CacheError(path.string() + ": not a density cache file");
  DensityCacheHeader h;
  {
    const auto pos = line.find("version=");
    if (pos == std::string::npos) throw CacheError(path.string() + ": missing version");
    h.format_version = std::atoi(line.c_str() + pos + 8);
    if (h.format_version != 1)
      throw CacheError(path.string() + ": unsupported version " + std::to_string(h.format_version));
  }
  int dim = -1;
  Eigen::MatrixXcd m;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos || line.size() < 2) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string val = line.substr(eq + 1);
      if (key == "dim") {
        dim = std::atoi(val.c_str());
        if (dim <= 0) throw CacheError(path.string() + ": bad dim");
        m = Eigen::MatrixXcd::Zero(dim, dim);
      } else {
        h.meta[key] = val;
      }
      continue;
    }
    if (dim < 0) throw CacheError(path.string() + ": data before dim header");
    std::istringstream ls(line);
    int n = 0, k = 0;
    std::string re, im;
    if (!(ls >> n >> k >> re >> im) || n < 0 || k < 0 || n >= dim || k >= dim)
      throw CacheError(path.string() + ": malformed row '" + line + "'");
    m(n, k) = cplx(std::strtod(re.c_str(), nullptr), std::strtod(im.c_str(), nullptr));
    ++rows;
  }
  if (dim < 0 || rows != static_cast<std::size_t>(dim) * dim)
    throw CacheError(path.string() + ": incomplete matrix");
  if (header) *header = std::move(h);
  return DensityMatrix(std::move(m));
}

}  // namespace kerrcat
