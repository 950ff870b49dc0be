#include "kerrcat/model.hpp"

#include <cstdio>

#include "kerrcat/errors.hpp"

namespace kerrcat {

namespace {
bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
}  // namespace

void ModelParams::validate() const {
  if (!finite(alpha) || !finite(c)) throw InvalidArgument("alpha and c must be finite");
  if (!std::isfinite(r) || r < 0.0) throw InvalidArgument("r must be finite and >= 0");
  if (!std::isfinite(theta_sq)) throw InvalidArgument("theta_sq must be finite");
  if (kappa < 0) throw InvalidArgument("kappa must be >= 0");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be > 0");
  if (!(lambda_kerr > 0.0) || !std::isfinite(lambda_kerr))
    throw InvalidArgument("lambda_kerr must be > 0");
}

std::string ModelParams::describe() const {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "alpha=%.17g%+.17gi r=%.17g theta_sq=%.17g c=%.17g%+.17gi kappa=%d omega=%.17g "
                "lambda=%.17g",
                alpha.real(), alpha.imag(), r, theta_sq, c.real(), c.imag(), kappa, omega,
                lambda_kerr);
  return buf;
}

double FockState::norm_squared() const {
  double s = 0.0;
  for (const auto& v : coeffs) s += std::norm(v);
  return s;
}

double DensityMatrix::hermiticity_error() const {
  return (elements - elements.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::purity() const {
  // Tr rho^2 = sum |rho_nm|^2 for Hermitian rho.
  return elements.cwiseAbs2().sum();
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (elements + elements.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::resized(int dim) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const int k = std::min(dim, this->dim());
  m.topLeftCorner(k, k) = elements.topLeftCorner(k, k);
  return DensityMatrix(std::move(m));
}

}  // namespace kerrcat
