#include "annulus/pattern.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "annulus/errors.hpp"

namespace annulus::pattern {

using symmetry::Complex;

namespace {

void check_raster(int n_r, int n_theta) {
  if (n_r < 2 || n_theta < 4)
    throw ConfigError("raster needs n_r >= 2 and n_theta >= 4");
}

Eigen::MatrixXd combine(const Amplitudes& z, const ModePair& modes,
                        const Eigen::VectorXcd& f1_at_rows,
                        const Eigen::VectorXcd& f2_at_rows, int n_theta) {
  const int n_r = static_cast<int>(f1_at_rows.size());
  Eigen::MatrixXd field(n_r, n_theta);
  for (int i = 0; i < n_theta; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / n_theta;
    const Complex e1 = std::polar(1.0, modes.lower() * theta);
    const Complex e2 = std::polar(1.0, modes.upper() * theta);
    for (int j = 0; j < n_r; ++j)
      field(j, i) =
          (z.z1 * f1_at_rows[j] * e1 + z.z2 * f2_at_rows[j] * e2).real();
  }
  return field;
}

}  // namespace

Eigen::MatrixXd synthesize(const Amplitudes& z, const ModePair& modes,
                           double r_inner, double r_outer, int n_r,
                           int n_theta) {
  check_raster(n_r, n_theta);
  if (!(r_outer > r_inner))
    throw ConfigError("raster needs r_outer > r_inner");
  Eigen::VectorXcd f(n_r);
  for (int j = 0; j < n_r; ++j) {
    const double frac = static_cast<double>(j) / (n_r - 1);
    f[j] = std::sin(std::numbers::pi * frac);
  }
  return combine(z, modes, f, f, n_theta);
}

Eigen::MatrixXd synthesize(const Amplitudes& z, const ModePair& modes,
                           const chebyshev::Grid& grid,
                           const Eigen::VectorXcd& profile1,
                           const Eigen::VectorXcd& profile2, int n_theta) {
  const int n_r = grid.size();
  check_raster(n_r, n_theta);
  if (profile1.size() != n_r || profile2.size() != n_r)
    throw ConfigError("profile length must match the collocation grid");
  // Resample the collocation profiles onto the uniform raster rows
  // (row 0 = inner wall, so the radius runs opposite to the grid ordering).
  Eigen::VectorXcd f1(n_r), f2(n_r);
  const double gap = grid.r_outer - grid.r_inner;
  for (int j = 0; j < n_r; ++j) {
    const double r = grid.r_inner + gap * j / (n_r - 1);
    const auto both = [&](const Eigen::VectorXcd& p) {
      const Eigen::VectorXd re = p.real(), im = p.imag();
      return Complex{chebyshev::interpolate_at(grid, re, r),
                     chebyshev::interpolate_at(grid, im, r)};
    };
    f1[j] = both(profile1);
    f2[j] = both(profile2);
  }
  return combine(z, modes, f1, f2, n_theta);
}

int count_vortex_pairs(const Eigen::MatrixXd& field, int row) {
  if (field.rows() == 0 || field.cols() < 4)
    throw ConfigError("field too small to count cells");
  const int r = row < 0 ? static_cast<int>(field.rows()) / 2 : row;
  if (r >= field.rows())
    throw ConfigError("ring row out of range");
  const Eigen::RowVectorXd ring = field.row(r);
  const double peak = ring.cwiseAbs().maxCoeff();
  if (peak < 1e-12)
    throw DegenerateField("ring has no signal above the noise floor");
  const double floor = 1e-12 * peak;

  int changes = 0;
  double prev_sign = 0.0;
  double first_sign = 0.0;
  for (Eigen::Index i = 0; i < ring.size(); ++i) {
    const double v = ring[i];
    if (std::fabs(v) <= floor) continue;
    const double sgn = v > 0.0 ? 1.0 : -1.0;
    if (prev_sign != 0.0 && sgn != prev_sign) ++changes;
    if (first_sign == 0.0) first_sign = sgn;
    prev_sign = sgn;
  }
  if (prev_sign != 0.0 && first_sign != 0.0 && prev_sign != first_sign)
    ++changes;  // wrap-around crossing
  return changes / 2;
}

Eigen::MatrixXd rotate_columns(const Eigen::MatrixXd& field, int shift) {
  const int n = static_cast<int>(field.cols());
  if (n == 0) return field;
  const int s = ((shift % n) + n) % n;
  Eigen::MatrixXd out(field.rows(), n);
  for (int i = 0; i < n; ++i) out.col((i + s) % n) = field.col(i);
  return out;
}

Eigen::MatrixXd to_gray(const Eigen::MatrixXd& field) {
  const double peak = field.cwiseAbs().maxCoeff();
  if (peak <= 0.0)
    return Eigen::MatrixXd::Constant(field.rows(), field.cols(), 128.0);
  return 127.5 * (1.0 + field.array() / peak).matrix();
}

}  // namespace annulus::pattern
