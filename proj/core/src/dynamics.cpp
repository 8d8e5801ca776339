#include "annulus/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace annulus::dynamics {

using Eigen::Vector4d;
using symmetry::Complex;

const char* to_string(AttractorKind k) {
  switch (k) {
    case AttractorKind::Equilibrium:
      return "equilibrium";
    case AttractorKind::RotatingWave:
      return "rotating_wave";
    case AttractorKind::StandingWave:
      return "standing_wave";
    case AttractorKind::Unclassified:
      return "unclassified";
  }
  return "?";
}

namespace {

// Dormand–Prince embedded pair: fifth-order solution with a fourth-order
// error estimate.
struct StepResult {
  Vector4d y;
  Vector4d error;
};

StepResult dp_step(const Coefficients& c, const ModePair& modes,
                   const Vector4d& y, double dt) {
  const auto f = [&](const Vector4d& s) {
    return normal_form::rhs_real4(s, c, modes);
  };
  const Vector4d k1 = f(y);
  const Vector4d k2 = f(y + dt * (1.0 / 5.0) * k1);
  const Vector4d k3 = f(y + dt * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2));
  const Vector4d k4 =
      f(y + dt * ((44.0 / 45.0) * k1 - (56.0 / 15.0) * k2 + (32.0 / 9.0) * k3));
  const Vector4d k5 =
      f(y + dt * ((19372.0 / 6561.0) * k1 - (25360.0 / 2187.0) * k2 +
                  (64448.0 / 6561.0) * k3 - (212.0 / 729.0) * k4));
  const Vector4d k6 =
      f(y + dt * ((9017.0 / 3168.0) * k1 - (355.0 / 33.0) * k2 +
                  (46732.0 / 5247.0) * k3 + (49.0 / 176.0) * k4 -
                  (5103.0 / 18656.0) * k5));
  const Vector4d y5 =
      y + dt * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 +
                (125.0 / 192.0) * k4 - (2187.0 / 6784.0) * k5 +
                (11.0 / 84.0) * k6);
  const Vector4d k7 = f(y5);
  const Vector4d err =
      dt * ((71.0 / 57600.0) * k1 - (71.0 / 16695.0) * k3 +
            (71.0 / 1920.0) * k4 - (17253.0 / 339200.0) * k5 +
            (22.0 / 525.0) * k6 - (1.0 / 40.0) * k7);
  return {y5, err};
}

}  // namespace

Trajectory integrate(const Coefficients& c, const ModePair& modes,
                     const Amplitudes& z0, const SimSettings& s) {
  if (!(s.t_end > 0.0) || !(s.dt_sample > 0.0) || s.dt_sample > s.t_end)
    throw ConfigError("integration needs 0 < dt_sample <= t_end");
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0) || !(s.dt_init > 0.0) ||
      !(s.dt_min > 0.0))
    throw ConfigError("integration tolerances and steps must be positive");
  if (!z0.finite()) throw ConfigError("initial state must be finite");

  Trajectory traj;
  Vector4d y{z0.z1.real(), z0.z1.imag(), z0.z2.real(), z0.z2.imag()};
  double t = 0.0;
  traj.samples.push_back({0.0, z0});

  // Targets are the uniform grid points, plus the end time when it falls off
  // the grid.
  const long on_grid = static_cast<long>(s.t_end / s.dt_sample + 1e-9);
  const bool extra_end = on_grid * s.dt_sample < s.t_end * (1.0 - 1e-12);
  const long total_targets = on_grid + (extra_end ? 1 : 0);
  const auto target_time = [&](long k) {
    return k <= on_grid ? static_cast<double>(k) * s.dt_sample : s.t_end;
  };

  long next_target = 1;
  double dt = std::min(s.dt_init, s.dt_sample);

  while (next_target <= total_targets) {
    const double t_target = target_time(next_target);
    const bool hits_target = dt >= t_target - t;
    const double dt_used = hits_target ? t_target - t : dt;

    const StepResult r = dp_step(c, modes, y, dt_used);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc =
          s.abs_tol + s.rel_tol * std::max(std::fabs(y[i]), std::fabs(r.y[i]));
      const double e = r.error[i] / sc;
      sum += e * e;
    }
    const double scaled = std::sqrt(sum / 4.0);

    if (scaled <= 1.0 && r.y.allFinite()) {
      ++traj.steps_accepted;
      y = r.y;
      if (y.norm() > s.blowup_norm)
        throw BlowupError("state norm exceeded the blow-up guard at t=" +
                              std::to_string(t),
                          std::move(traj));
      if (hits_target) {
        t = t_target;
        traj.samples.push_back(
            {t, Amplitudes{{y[0], y[1]}, {y[2], y[3]}}});
        ++next_target;
      } else {
        t += dt_used;
      }
    } else {
      ++traj.steps_rejected;
    }

    double factor = 5.0;
    if (!std::isfinite(scaled))
      factor = 0.2;
    else if (scaled > 0.0)
      factor = std::clamp(0.9 * std::pow(scaled, -0.2), 0.2, 5.0);
    dt = dt_used * factor;
    if (dt < s.dt_min)
      throw StepSizeUnderflow("step size underflow at t=" + std::to_string(t),
                              std::move(traj));
  }
  return traj;
}

namespace {

double unwrap_slope(const std::vector<double>& t, const std::vector<double>& phase,
                    double* residual) {
  const std::size_t n = t.size();
  std::vector<double> phi(n);
  phi[0] = phase[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double d = std::remainder(phase[k] - phi[k - 1], 2.0 * std::numbers::pi);
    phi[k] = phi[k - 1] + d;
  }
  double st = 0.0, sp = 0.0, stt = 0.0, stp = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    st += t[k];
    sp += phi[k];
    stt += t[k] * t[k];
    stp += t[k] * phi[k];
  }
  const double nn = static_cast<double>(n);
  const double denom = nn * stt - st * st;
  const double slope = denom != 0.0 ? (nn * stp - st * sp) / denom : 0.0;
  const double intercept = (sp - slope * st) / nn;
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = phi[k] - (intercept + slope * t[k]);
    ss += e * e;
  }
  *residual = std::sqrt(ss / nn);
  return slope;
}

}  // namespace

Classification classify(const Trajectory& traj, const ModePair& modes,
                        double tail_fraction, double tol) {
  Classification out;
  if (!traj.samples.empty()) out.final_state = traj.samples.back().z;
  if (traj.samples.size() < 16) return out;
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0 || !(tol > 0.0))
    throw ConfigError("classification needs tail_fraction in (0, 1] and tol > 0");

  const double t_last = traj.samples.back().t;
  const double t_start = t_last * (1.0 - tail_fraction);
  std::size_t begin = 0;
  while (begin < traj.samples.size() && traj.samples[begin].t < t_start) ++begin;
  // Keep the tail on the uniform grid: drop a trailing off-grid point.
  std::size_t end = traj.samples.size();
  if (end - begin >= 3) {
    const double dt0 = traj.samples[begin + 1].t - traj.samples[begin].t;
    if (std::fabs((traj.samples[end - 1].t - traj.samples[end - 2].t) - dt0) >
        1e-9)
      --end;
  }
  if (end - begin < 16) return out;

  const std::size_t n = end - begin;
  const double dt = traj.samples[begin + 1].t - traj.samples[begin].t;
  std::vector<double> ts(n), us(n), vs(n), ws(n);
  std::vector<Complex> z1(n), z2(n);
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Sample& smp = traj.samples[begin + k];
    ts[k] = smp.t;
    const auto inv = symmetry::invariants(smp.z, modes);
    us[k] = inv.u;
    vs[k] = inv.v;
    ws[k] = inv.w;
    z1[k] = smp.z.z1;
    z2[k] = smp.z.z2;
    scale = std::max(scale, smp.z.norm());
  }
  const double s1 = std::max(1.0, scale);

  // Settled state: the sampled derivative vanishes.
  double max_fd = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double d = std::sqrt(std::norm(z1[k] - z1[k - 1]) +
                               std::norm(z2[k] - z2[k - 1]));
    max_fd = std::max(max_fd, d / dt);
  }
  if (max_fd <= tol * s1) {
    out.kind = AttractorKind::Equilibrium;
    return out;
  }

  // Rigid rotation: all invariants frozen while the phases drift linearly.
  auto spread = [](const std::vector<double>& a) {
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    return *hi - *lo;
  };
  const double s2 = std::max(1.0, scale * scale);
  const int total_power = modes.lower() + modes.upper();
  const double sw = std::max(1.0, std::pow(scale, total_power));
  if (spread(us) <= tol * s2 && spread(vs) <= tol * s2 &&
      spread(ws) <= tol * sw) {
    double min1 = std::abs(z1[0]), min2 = std::abs(z2[0]);
    for (std::size_t k = 1; k < n; ++k) {
      min1 = std::min(min1, std::abs(z1[k]));
      min2 = std::min(min2, std::abs(z2[k]));
    }
    const bool use_z1 = min1 > 1e-8 * s1 || min1 >= min2;
    const int divisor = use_z1 ? modes.lower() : modes.upper();
    std::vector<double> phases(n);
    for (std::size_t k = 0; k < n; ++k)
      phases[k] = std::arg(use_z1 ? z1[k] : z2[k]);
    double residual = 0.0;
    const double slope = unwrap_slope(ts, phases, &residual);
    if (residual <= 1e-3 && std::fabs(slope) > 0.0) {
      out.kind = AttractorKind::RotatingWave;
      out.drift_rate = slope / divisor;
      return out;
    }
  }

  // Standing oscillation: the mixed-phase angle is pinned modulo pi and the
  // amplitude invariants are periodic.
  {
    Complex acc{0.0, 0.0};
    std::size_t valid = 0;
    const double amp_floor = 1e-8 * s1;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(z1[k]) < amp_floor || std::abs(z2[k]) < amp_floor) continue;
      const double chi = modes.upper() * std::arg(z1[k]) -
                         modes.lower() * std::arg(z2[k]);
      acc += std::exp(Complex{0.0, 2.0 * chi});
      ++valid;
    }
    const bool phase_pinned =
        valid >= n / 2 && std::abs(acc) / static_cast<double>(valid) >= 0.999;

    const std::vector<double>& series = spread(us) >= spread(vs) ? us : vs;
    double mean = 0.0;
    for (double u : series) mean += u;
    mean /= static_cast<double>(n);
    std::vector<double> centered(n);
    double var = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      centered[k] = series[k] - mean;
      var += centered[k] * centered[k];
    }
    if (phase_pinned && var > 0.0 && spread(series) > tol * s2) {
      auto rho = [&](std::size_t lag) {
        double num = 0.0, den_a = 0.0, den_b = 0.0;
        for (std::size_t k = 0; k + lag < n; ++k) {
          num += centered[k] * centered[k + lag];
          den_a += centered[k] * centered[k];
          den_b += centered[k + lag] * centered[k + lag];
        }
        const double den = std::sqrt(den_a * den_b);
        return den > 0.0 ? num / den : 0.0;
      };
      // First local autocorrelation peak above threshold gives the
      // fundamental period.
      const std::size_t lag_max = n / 2;
      double prev = rho(1);
      for (std::size_t lag = 2; lag + 1 <= lag_max; ++lag) {
        const double cur = rho(lag);
        const double nxt = rho(lag + 1);
        if (cur >= 0.99 && cur >= prev && cur >= nxt) {
          const double denom = prev - 2.0 * cur + nxt;
          const double shift = denom != 0.0 ? 0.5 * (prev - nxt) / denom : 0.0;
          out.kind = AttractorKind::StandingWave;
          out.period = (static_cast<double>(lag) + shift) * dt;
          return out;
        }
        prev = cur;
      }
    }
  }

  return out;
}

}  // namespace annulus::dynamics
