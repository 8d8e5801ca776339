#include "annulus/normal_form.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>

#include "annulus/errors.hpp"

namespace annulus::normal_form {

using symmetry::equivariant_generators;
using symmetry::invariants;
using symmetry::ipow;
using symmetry::isotropy_label;

PQValues pq_values(const Coefficients& c, const InvariantTriple& inv) {
  PQValues pq;
  pq.p1 = c.mu + c.a11 * inv.u + c.a12 * inv.v + c.e1 * inv.w;
  pq.p2 = c.mu + c.split + c.a21 * inv.u + c.a22 * inv.v + c.e2 * inv.w;
  pq.q1 = c.q10;
  pq.q2 = c.q20;
  return pq;
}

std::vector<std::string> degeneracy_warnings(const Coefficients& c) {
  std::vector<std::string> w;
  if (c.a11 == 0.0) w.push_back("a11 = 0: lower pure-mode branch degenerate");
  if (c.a22 == 0.0) w.push_back("a22 = 0: upper pure-mode branch degenerate");
  if (c.a11 * c.a22 - c.a12 * c.a21 == 0.0)
    w.push_back("a11*a22 - a12*a21 = 0: mixed-mode branch degenerate");
  return w;
}

Coefficients z2z2_truncation(const Coefficients& c) {
  Coefficients t = c;
  t.e1 = t.e2 = t.q10 = t.q20 = 0.0;
  return t;
}

Amplitudes rhs(const Amplitudes& z, const Coefficients& c,
               const ModePair& modes) {
  assert(z.finite());
  const PQValues pq = pq_values(c, invariants(z, modes));
  const auto gen = equivariant_generators(z, modes);
  Amplitudes out;
  out.z1 = pq.p1 * gen[0].z1 + pq.q1 * gen[2].z1;
  out.z2 = pq.p2 * gen[1].z2 + pq.q2 * gen[3].z2;
  return out;
}

Eigen::Vector4d rhs_real4(const Eigen::Vector4d& x, const Coefficients& c,
                          const ModePair& modes) {
  const Amplitudes z{{x[0], x[1]}, {x[2], x[3]}};
  const Amplitudes f = rhs(z, c, modes);
  return {f.z1.real(), f.z1.imag(), f.z2.real(), f.z2.imag()};
}

namespace {

// Wirtinger derivatives of the two field components with respect to
// (z1, conj z1, z2, conj z2); row i holds the derivatives of component i.
struct WirtingerRows {
  Complex d_z1, d_z1c, d_z2, d_z2c;
};

std::array<WirtingerRows, 2> wirtinger_jacobian(const Amplitudes& z,
                                                const Coefficients& c,
                                                const ModePair& modes) {
  const int m = modes.lower();
  const int l = modes.upper();
  const Complex z1 = z.z1, z2 = z.z2;
  const Complex z1c = std::conj(z1), z2c = std::conj(z2);
  const PQValues pq = pq_values(c, invariants(z, modes));

  const Complex z1_l = ipow(z1, l), z1c_m = ipow(z1c, m);
  const Complex z2_m = ipow(z2, m), z2c_m = ipow(z2c, m);

  std::array<WirtingerRows, 2> J;
  // Component 1: p1*z1 + q10*conj(z1)^m*z2^m.
  J[0].d_z1 = pq.p1 + c.a11 * std::norm(z1) +
              c.e1 * static_cast<double>(l) * z1_l * z2c_m;
  J[0].d_z1c = c.a11 * z1 * z1 +
               c.e1 * static_cast<double>(l) * z1 * ipow(z1c, m) * z2_m +
               c.q10 * static_cast<double>(m) * ipow(z1c, m - 1) * z2_m;
  J[0].d_z2 = z1 * (c.a12 * z2c +
                    c.e1 * static_cast<double>(m) * ipow(z1c, l) * ipow(z2, m - 1)) +
              c.q10 * static_cast<double>(m) * z1c_m * ipow(z2, m - 1);
  J[0].d_z2c = z1 * (c.a12 * z2 +
                     c.e1 * static_cast<double>(m) * z1_l * ipow(z2c, m - 1));
  // Component 2: p2*z2 + q20*z1^(m+1)*conj(z2)^(m-1).
  J[1].d_z1 = z2 * (c.a21 * z1c +
                    c.e2 * static_cast<double>(l) * ipow(z1, m) * z2c_m) +
              c.q20 * static_cast<double>(l) * ipow(z1, m) * ipow(z2c, m - 1);
  J[1].d_z1c = z2 * (c.a21 * z1 + c.e2 * static_cast<double>(l) * z1c_m * z2_m);
  J[1].d_z2 = pq.p2 + c.a22 * std::norm(z2) +
              c.e2 * static_cast<double>(m) * ipow(z1c, l) * ipow(z2, m - 1) * z2;
  J[1].d_z2c = z2 * (c.a22 * z2 +
                     c.e2 * static_cast<double>(m) * z1_l * ipow(z2c, m - 1)) +
               c.q20 * static_cast<double>(m - 1) * z1_l * ipow(z2c, m - 2);
  return J;
}

}  // namespace

Eigen::Matrix4d jacobian(const Amplitudes& z, const Coefficients& c,
                         const ModePair& modes) {
  const auto W = wirtinger_jacobian(z, c, modes);
  Eigen::Matrix4d J;
  const Complex I{0.0, 1.0};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Complex A = (j == 0) ? W[i].d_z1 : W[i].d_z2;
      const Complex B = (j == 0) ? W[i].d_z1c : W[i].d_z2c;
      const Complex dFdx = A + B;       // d/d(Re z_j)
      const Complex dFdy = I * (A - B); // d/d(Im z_j)
      J(2 * i, 2 * j) = dFdx.real();
      J(2 * i, 2 * j + 1) = dFdy.real();
      J(2 * i + 1, 2 * j) = dFdx.imag();
      J(2 * i + 1, 2 * j + 1) = dFdy.imag();
    }
  }
  return J;
}

std::array<Complex, 4> eigenvalues4(const Eigen::Matrix4d& J) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(J, /*computeEigenvectors=*/false);
  std::array<Complex, 4> ev;
  for (int i = 0; i < 4; ++i) ev[i] = es.eigenvalues()[i];
  std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return ev;
}

namespace {

// Powers with potentially zero base and zero exponent (x^0 = 1).
double rpow(double x, int n) {
  assert(n >= 0);
  double r = 1.0;
  while (n-- > 0) r *= x;
  return r;
}

struct RestrictedPoint {
  double u, v, w, p1, p2;
};

RestrictedPoint restricted_point(double x, double y, const Coefficients& c,
                                 const ModePair& modes) {
  const int m = modes.lower(), l = modes.upper();
  RestrictedPoint r;
  r.u = x * x;
  r.v = y * y;
  r.w = 2.0 * rpow(x, l) * rpow(y, m);
  r.p1 = c.mu + c.a11 * r.u + c.a12 * r.v + c.e1 * r.w;
  r.p2 = c.mu + c.split + c.a21 * r.u + c.a22 * r.v + c.e2 * r.w;
  return r;
}

}  // namespace

Eigen::Vector2d rhs_fix_z2(double x, double y, const Coefficients& c,
                           const ModePair& modes) {
  const int m = modes.lower(), l = modes.upper();
  const RestrictedPoint r = restricted_point(x, y, c, modes);
  return {r.p1 * x + c.q10 * rpow(x, m) * rpow(y, m),
          r.p2 * y + c.q20 * rpow(x, l) * rpow(y, m - 1)};
}

Eigen::Matrix2d jacobian_fix_z2(double x, double y, const Coefficients& c,
                                const ModePair& modes) {
  const int m = modes.lower(), l = modes.upper();
  const RestrictedPoint r = restricted_point(x, y, c, modes);
  Eigen::Matrix2d J;
  J(0, 0) = r.p1 + 2.0 * c.a11 * x * x + 2.0 * c.e1 * l * rpow(x, l) * rpow(y, m) +
            c.q10 * m * rpow(x, m - 1) * rpow(y, m);
  J(0, 1) = x * (2.0 * c.a12 * y + 2.0 * c.e1 * m * rpow(x, l) * rpow(y, m - 1)) +
            c.q10 * m * rpow(x, m) * rpow(y, m - 1);
  J(1, 0) = y * (2.0 * c.a21 * x + 2.0 * c.e2 * l * rpow(x, m) * rpow(y, m)) +
            c.q20 * l * rpow(x, m) * rpow(y, m - 1);
  J(1, 1) = r.p2 + 2.0 * c.a22 * y * y + 2.0 * c.e2 * m * rpow(x, l) * rpow(y, m) +
            c.q20 * (m - 1) * rpow(x, l) * rpow(y, m - 2);
  return J;
}

Eigen::Matrix2d transverse_block(double x, double y, const Coefficients& c,
                                 const ModePair& modes) {
  const Eigen::Matrix4d J = jacobian({{x, 0.0}, {y, 0.0}}, c, modes);
  Eigen::Matrix2d T;
  T(0, 0) = J(1, 1);
  T(0, 1) = J(1, 3);
  T(1, 0) = J(3, 1);
  T(1, 1) = J(3, 3);
  return T;
}

double parity_symmetry_residual(const Coefficients& c, const ModePair& modes,
                                int n_samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  const bool odd = modes.lower() % 2 != 0;
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double x = dist(rng), y = dist(rng);
    const Eigen::Vector2d f = rhs_fix_z2(x, y, c, modes);
    Eigen::Vector2d g;
    if (odd) {
      // (x, y) -> (-x, y) conjugates component 1.
      g = rhs_fix_z2(-x, y, c, modes);
      g[0] = -g[0];
    } else {
      // (x, y) -> (x, -y) conjugates component 2.
      g = rhs_fix_z2(x, -y, c, modes);
      g[1] = -g[1];
    }
    worst = std::max(worst, (f - g).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

SteadyState make_steady_state(double x, double y, const Coefficients& c,
                              const ModePair& modes) {
  SteadyState s;
  s.z = {{x, 0.0}, {y, 0.0}};
  s.mu = c.mu;
  s.isotropy = isotropy_label(s.z, modes);
  const Eigen::Matrix4d J = jacobian(s.z, c, modes);
  s.eigenvalues = eigenvalues4(J);
  if (s.z.norm() == 0.0) {
    s.stable = std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                           [](const Complex& e) { return e.real() < 0.0; });
  } else {
    // Drop the group-forced zero: the eigenvalue of smallest modulus.
    int drop = 0;
    double best = std::abs(s.eigenvalues[0]);
    for (int i = 1; i < 4; ++i) {
      const double a = std::abs(s.eigenvalues[i]);
      if (a < best) {
        best = a;
        drop = i;
      }
    }
    s.stable = true;
    for (int i = 0; i < 4; ++i) {
      if (i != drop && s.eigenvalues[i].real() >= 0.0) s.stable = false;
    }
  }
  return s;
}

PrimaryBranch::PrimaryBranch(const Coefficients& c, const ModePair& modes,
                             PrimaryMode which)
    : c_(c), modes_(modes), which_(which) {}

double PrimaryBranch::onset_mu() const {
  return which_ == PrimaryMode::LowerPure ? 0.0 : -c_.split;
}

bool PrimaryBranch::supercritical() const {
  const double a = which_ == PrimaryMode::LowerPure ? c_.a11 : c_.a22;
  return a < 0.0;
}

std::optional<double> PrimaryBranch::amplitude(double mu) const {
  const double a = which_ == PrimaryMode::LowerPure ? c_.a11 : c_.a22;
  const double lin = which_ == PrimaryMode::LowerPure ? mu : mu + c_.split;
  const double sq = -lin / a;
  if (sq < 0.0) return std::nullopt;
  return std::sqrt(sq);
}

std::optional<SteadyState> PrimaryBranch::state(double mu) const {
  const auto amp = amplitude(mu);
  if (!amp) return std::nullopt;
  const Coefficients at_mu = c_.with_mu(mu);
  if (which_ == PrimaryMode::LowerPure)
    return make_steady_state(*amp, 0.0, at_mu, modes_);
  return make_steady_state(0.0, *amp, at_mu, modes_);
}

PrimaryBranches primary_branches(const Coefficients& c, const ModePair& modes) {
  if (c.a11 == 0.0 || c.a22 == 0.0) {
    throw DegenerateCoefficient(
        "primary_branches: vanishing cubic coefficient (a11 or a22)");
  }
  return {PrimaryBranch(c, modes, PrimaryMode::LowerPure),
          PrimaryBranch(c, modes, PrimaryMode::UpperPure)};
}

std::optional<std::array<double, 2>> newton_refine(double x0, double y0,
                                                   const Coefficients& c,
                                                   const ModePair& modes) {
  constexpr int kMaxIter = 50;
  constexpr double kTol = 1e-12;
  double x = x0, y = y0;
  Eigen::Vector2d f = rhs_fix_z2(x, y, c, modes);
  for (int it = 0; it < kMaxIter; ++it) {
    if (f.lpNorm<Eigen::Infinity>() <= kTol) return std::array<double, 2>{x, y};
    const Eigen::Matrix2d J = jacobian_fix_z2(x, y, c, modes);
    const Eigen::Vector2d step = J.fullPivLu().solve(-f);
    if (!step.allFinite()) return std::nullopt;
    // Damped update: halve until the residual does not increase.
    double lambda = 1.0;
    const double f0 = f.lpNorm<Eigen::Infinity>();
    for (int k = 0; k < 30; ++k) {
      const double xn = x + lambda * step[0], yn = y + lambda * step[1];
      const Eigen::Vector2d fn = rhs_fix_z2(xn, yn, c, modes);
      if (fn.lpNorm<Eigen::Infinity>() < f0 || lambda * step.norm() < 1e-16) {
        x = xn;
        y = yn;
        f = fn;
        break;
      }
      lambda *= 0.5;
      if (k == 29) return std::nullopt;
    }
  }
  if (f.lpNorm<Eigen::Infinity>() <= kTol) return std::array<double, 2>{x, y};
  return std::nullopt;
}

EnumerationResult steady_states_fix_z2(const Coefficients& c,
                                       const ModePair& modes, const Box& box,
                                       int grid_n) {
  if (grid_n < 2) throw ResolutionTooLow("steady_states_fix_z2: grid_n < 2");
  if (!(box.xmax > box.xmin) || !(box.ymax > box.ymin))
    throw ConfigError("steady_states_fix_z2: empty box");

  const int n = grid_n;
  const double hx = (box.xmax - box.xmin) / n;
  const double hy = (box.ymax - box.ymin) / n;

  // Corner samples of both field components.
  std::vector<double> F1((n + 1) * (n + 1)), F2((n + 1) * (n + 1));
  double scale = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double x = box.xmin + i * hx;
      const double y = box.ymin + j * hy;
      const Eigen::Vector2d f = rhs_fix_z2(x, y, c, modes);
      F1[i * (n + 1) + j] = f[0];
      F2[i * (n + 1) + j] = f[1];
      scale = std::max({scale, std::fabs(f[0]), std::fabs(f[1])});
    }
  }
  const double zero_tol = 1e-13 * std::max(1.0, scale);

  // A component "changes sign" over a cell when its four corner values are
  // not all strictly positive or all strictly negative; corner values within
  // zero_tol of 0 count as both signs.
  auto cell_brackets = [&](const std::vector<double>& F, int i, int j) {
    bool pos = false, neg = false;
    for (int di = 0; di <= 1; ++di) {
      for (int dj = 0; dj <= 1; ++dj) {
        const double f = F[(i + di) * (n + 1) + (j + dj)];
        if (f >= -zero_tol) pos = true;
        if (f <= zero_tol) neg = true;
      }
    }
    return pos && neg;
  };

  EnumerationResult result;
  std::vector<std::array<double, 2>> roots;
  const double margin = 1e-9 * std::max(box.xmax - box.xmin, box.ymax - box.ymin);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!cell_brackets(F1, i, j) || !cell_brackets(F2, i, j)) continue;
      const double xc = box.xmin + (i + 0.5) * hx;
      const double yc = box.ymin + (j + 0.5) * hy;
      const auto root = newton_refine(xc, yc, c, modes);
      if (!root) {
        result.newton_failures.push_back({xc, yc});
        continue;
      }
      const auto [x, y] = *root;
      if (x < box.xmin - margin || x > box.xmax + margin || y < box.ymin - margin ||
          y > box.ymax + margin)
        continue;
      roots.push_back({x, y});
    }
  }

  // Deduplicate within 1e-8 (Euclidean), then order deterministically.
  std::sort(roots.begin(), roots.end());
  std::vector<std::array<double, 2>> unique;
  for (const auto& r : roots) {
    bool dup = false;
    for (const auto& u : unique) {
      const double dx = r[0] - u[0], dy = r[1] - u[1];
      if (dx * dx + dy * dy <= 1e-16) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(r);
  }

  for (const auto& r : unique)
    result.states.push_back(make_steady_state(r[0], r[1], c, modes));
  return result;
}

}  // namespace annulus::normal_form
