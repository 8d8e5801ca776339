#include "annulus/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace annulus::chebyshev {

namespace {

// Barycentric weights of a Gauss–Lobatto family: alternating signs with the
// endpoint weights halved. Any common scale factor cancels in both the
// differentiation matrix and the interpolation formula.
Eigen::VectorXd lobatto_weights(int n_nodes) {
  Eigen::VectorXd w(n_nodes);
  for (int j = 0; j < n_nodes; ++j) {
    w[j] = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n_nodes - 1) w[j] *= 0.5;
  }
  return w;
}

}  // namespace

Eigen::MatrixXd differentiation_matrix(const Eigen::VectorXd& x) {
  const int m = static_cast<int>(x.size());
  if (m < 2) throw std::invalid_argument("differentiation_matrix: need >= 2 nodes");
  const Eigen::VectorXd w = lobatto_weights(m);
  Eigen::MatrixXd d(m, m);
  for (int i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      d(i, j) = (w[j] / w[i]) / (x[i] - x[j]);
      row_sum += d(i, j);
    }
    // The derivative of a constant vanishes, which pins the diagonal and
    // absorbs the cancellation error of the off-diagonal entries.
    d(i, i) = -row_sum;
  }
  return d;
}

Grid make_grid(int n, double r_inner, double r_outer) {
  if (n < 2) throw std::invalid_argument("make_grid: degree must be >= 2");
  if (!(r_outer > r_inner) || !std::isfinite(r_inner) || !std::isfinite(r_outer))
    throw std::invalid_argument("make_grid: invalid radial interval");

  Grid g;
  g.n = n;
  g.r_inner = r_inner;
  g.r_outer = r_outer;
  g.x.resize(n + 1);
  g.r.resize(n + 1);
  const double length = r_outer - r_inner;
  for (int j = 0; j <= n; ++j) {
    g.x[j] = std::cos(std::numbers::pi * j / n);
    g.r[j] = r_inner + 0.5 * (1.0 + g.x[j]) * length;
  }
  const double scale = 2.0 / length;
  g.d = scale * differentiation_matrix(g.x);
  g.d2 = g.d * g.d;
  return g;
}

double interpolate_at(const Grid& g, const Eigen::VectorXd& values, double r) {
  if (values.size() != g.size())
    throw std::invalid_argument("interpolate_at: value count mismatch");
  const Eigen::VectorXd w = lobatto_weights(g.size());
  double num = 0.0, den = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const double diff = r - g.r[j];
    if (diff == 0.0) return values[j];
    const double q = w[j] / diff;
    num += q * values[j];
    den += q;
  }
  return num / den;
}

Eigen::VectorXd interpolate(const Grid& g, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& r_eval) {
  Eigen::VectorXd out(r_eval.size());
  for (Eigen::Index i = 0; i < r_eval.size(); ++i)
    out[i] = interpolate_at(g, values, r_eval[i]);
  return out;
}

}  // namespace annulus::chebyshev
