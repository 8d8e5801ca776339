#include "annulus/pde_stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>
#include <tuple>
#include <utility>

#include "annulus/errors.hpp"

namespace annulus::pde {

const char* to_string(Model m) {
  return m == Model::Gfd ? "gfd" : "ehd";
}

namespace {

// Natural cubic spline through strictly increasing abscissae; evaluates the
// interpolant and its first derivative.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> xs, std::vector<double> ys)
      : x_(std::move(xs)), y_(std::move(ys)) {
    const int n = static_cast<int>(x_.size());
    m_.assign(n, 0.0);
    if (n < 3) return;  // degenerates to a chord
    // Tridiagonal system for the interior second derivatives.
    std::vector<double> diag(n, 2.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      sub[i] = h0 / (h0 + h1);
      sup[i] = h1 / (h0 + h1);
      rhs[i] = 6.0 / (h0 + h1) *
               ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    for (int i = 2; i + 1 < n; ++i) {
      const double f = sub[i] / diag[i - 1];
      diag[i] -= f * sup[i - 1];
      rhs[i] -= f * rhs[i - 1];
    }
    for (int i = n - 2; i >= 1; --i)
      m_[i] = (rhs[i] - sup[i] * (i + 1 < n - 1 ? m_[i + 1] : 0.0)) / diag[i];
  }

  double value(double x) const {
    const auto [i, t, h] = locate(x);
    const double a = y_[i], b = y_[i + 1];
    return a + t * (b - a) -
           t * (1.0 - t) * h * h / 6.0 *
               ((2.0 - t) * m_[i] + (1.0 + t) * m_[i + 1]);
  }

  double derivative(double x) const {
    const auto [i, t, h] = locate(x);
    const double a = y_[i], b = y_[i + 1];
    return (b - a) / h +
           h / 6.0 *
               (-(2.0 - 6.0 * t + 3.0 * t * t) * m_[i] +
                (3.0 * t * t - 1.0) * m_[i + 1]);
  }

 private:
  std::tuple<int, double, double> locate(double x) const {
    const int n = static_cast<int>(x_.size());
    int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), x) -
                             x_.begin()) -
            1;
    i = std::clamp(i, 0, n - 2);
    const double h = x_[i + 1] - x_[i];
    return {i, (x - x_[i]) / h, h};
  }

  std::vector<double> x_, y_;
  std::vector<double> m_;  // second derivatives at the knots
};

struct ChargeProfile {
  bool zero = true;
  std::optional<CubicSpline> spline;

  double derivative(double r) const {
    return zero ? 0.0 : spline->derivative(r);
  }
};

ChargeProfile make_charge_profile(const StabilityConfig& cfg) {
  ChargeProfile p;
  if (cfg.charge_profile.empty()) return p;
  std::vector<double> xs, ys;
  xs.reserve(cfg.charge_profile.size());
  ys.reserve(cfg.charge_profile.size());
  for (const auto& row : cfg.charge_profile) {
    xs.push_back(row[0]);
    ys.push_back(row[1]);
  }
  p.zero = false;
  p.spline.emplace(std::move(xs), std::move(ys));
  return p;
}

}  // namespace

std::vector<std::string> validate(const StabilityConfig& cfg) {
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
  if (!(cfg.eta > 0.0) || !(cfg.eta < 1.0) || !std::isfinite(cfg.eta))
    errors.push_back("eta must lie strictly inside (0, 1)");
  if (!(cfg.prandtl > 0.0) || !std::isfinite(cfg.prandtl))
    errors.push_back("prandtl must be positive");
  if (cfg.delta < 0.0 || !std::isfinite(cfg.delta))
    errors.push_back("delta must be non-negative");
  if (cfg.gravity_sign != 1 && cfg.gravity_sign != -1)
    errors.push_back("gravity_sign must be +1 or -1");
  if (cfg.charge_sign != 1 && cfg.charge_sign != -1)
    errors.push_back("charge_sign must be +1 or -1");
  if (!errors.empty()) {
    std::string joined = "invalid stability configuration:";
    for (const auto& e : errors) joined += "\n  - " + e;
    throw ConfigError(joined);
  }
  if (cfg.resolution < 16)
    throw ResolutionTooLow("resolution " + std::to_string(cfg.resolution) +
                           " is below the minimum of 16");

  if (!cfg.charge_profile.empty()) {
    if (cfg.charge_profile.size() < 4)
      throw ConfigError("charge profile needs at least 4 sample points");
    for (std::size_t i = 1; i < cfg.charge_profile.size(); ++i)
      if (!(cfg.charge_profile[i][0] > cfg.charge_profile[i - 1][0]))
        throw ConfigError("charge profile radii must increase strictly");
    const double tol = 1e-9 * cfg.r_outer();
    if (cfg.charge_profile.front()[0] > cfg.r_inner() + tol ||
        cfg.charge_profile.back()[0] < cfg.r_outer() - tol)
      throw ConfigError("charge profile must cover the radial interval [" +
                        std::to_string(cfg.r_inner()) + ", " +
                        std::to_string(cfg.r_outer()) + "]");
  }

  if (cfg.model == Model::Ehd && cfg.charge_profile.empty()) {
    if (!cfg.allow_zero_charge)
      throw MissingProfile(
          "the charge-injection model needs a base charge profile; pass one "
          "or set allow_zero_charge to proceed with a zero profile");
    warnings.push_back(
        "no base charge profile supplied; using a zero profile, which "
        "removes the destabilizing feedback");
  }
  if (cfg.model == Model::Gfd && !cfg.charge_profile.empty())
    warnings.push_back("charge profile is ignored by the buoyancy model");
  return warnings;
}

Pencil assemble_pencil(const StabilityConfig& cfg, int m, double rayleigh) {
  validate(cfg);
  if (m < 0) throw ConfigError("azimuthal wavenumber must be non-negative");

  Pencil p;
  p.grid = chebyshev::make_grid(cfg.resolution, cfg.r_inner(), cfg.r_outer());
  const int n1 = p.grid.size();
  const Eigen::VectorXd& r = p.grid.r;

  // Laplacian of a single azimuthal harmonic.
  Eigen::MatrixXd lap = p.grid.d2;
  for (int i = 0; i < n1; ++i) {
    lap.row(i) += p.grid.d.row(i) / r[i];
    lap(i, i) -= static_cast<double>(m) * m / (r[i] * r[i]);
  }
  const Eigen::MatrixXd lap2 = lap * lap;

  p.fields = cfg.model == Model::Gfd ? 2 : 3;
  const int size = p.fields * n1;
  p.a = Eigen::MatrixXd::Zero(size, size);
  p.b = Eigen::MatrixXd::Zero(size, size);

  // Streamfunction block: no-slip walls take four bordered rows, the value
  // rows at the walls and the wall-derivative rows just inside them.
  p.a(0, 0) = 1.0;
  p.a(n1 - 1, n1 - 1) = 1.0;
  p.a.block(1, 0, 1, n1) = p.grid.d.row(0);
  p.a.block(n1 - 2, 0, 1, n1) = p.grid.d.row(n1 - 1);

  const double pr = cfg.prandtl;
  const double log_eta = std::log(cfg.eta);

  if (cfg.model == Model::Gfd) {
    const int t0 = n1;
    for (int i = 2; i < n1 - 2; ++i) {
      p.a.block(i, 0, 1, n1) = pr * lap2.row(i);
      p.a(i, t0 + i) = -pr * rayleigh * cfg.gravity_sign * m / r[i];
      p.b.block(i, 0, 1, n1) = lap.row(i);
    }
    // Temperature block: fixed-temperature walls, advected base profile
    // with slope 1 / (r log eta) inside.
    p.a(t0, t0) = 1.0;
    p.a(t0 + n1 - 1, t0 + n1 - 1) = 1.0;
    for (int i = 1; i < n1 - 1; ++i) {
      p.a.block(t0 + i, t0, 1, n1) = lap.row(i);
      const double te_prime = 1.0 / (r[i] * log_eta);
      p.a(t0 + i, i) = -te_prime * m / r[i];
      p.b(t0 + i, t0 + i) = 1.0;
    }
  } else {
    const int q0 = n1, f0 = 2 * n1;
    const ChargeProfile charge = make_charge_profile(cfg);
    for (int i = 2; i < n1 - 2; ++i) {
      p.a.block(i, 0, 1, n1) = pr * lap2.row(i);
      const double e_base = -1.0 / (r[i] * log_eta);  // radial base field
      p.a(i, q0 + i) = -pr * rayleigh * m * e_base / r[i];
      p.a(i, f0 + i) = -pr * rayleigh * m * charge.derivative(r[i]) / r[i];
      p.b.block(i, 0, 1, n1) = lap.row(i);
    }
    // Charge block: relaxation, optional diffusion, advected base charge.
    p.a(q0, q0) = 1.0;
    p.a(q0 + n1 - 1, q0 + n1 - 1) = 1.0;
    for (int i = 1; i < n1 - 1; ++i) {
      p.a(q0 + i, q0 + i) += static_cast<double>(cfg.charge_sign);
      if (cfg.delta > 0.0)
        p.a.block(q0 + i, q0, 1, n1) += cfg.delta * pr * lap.row(i);
      p.a(q0 + i, i) = -charge.derivative(r[i]) * m / r[i];
      p.b(q0 + i, q0 + i) = 1.0;
    }
    // Potential block: algebraic Gauss constraint between grounded walls.
    p.a(f0, f0) = 1.0;
    p.a(f0 + n1 - 1, f0 + n1 - 1) = 1.0;
    for (int i = 1; i < n1 - 1; ++i) {
      p.a(f0 + i, q0 + i) = 1.0;
      p.a.block(f0 + i, f0, 1, n1) += lap.row(i);
    }
  }
  return p;
}

namespace {

struct Eigenpairs {
  std::vector<Complex> values;                // descending real part
  std::vector<Eigen::VectorXcd> vectors;      // matching order (may be empty)
};

Eigenpairs solve_pencil(const Pencil& p, bool want_vectors) {
  const int size = static_cast<int>(p.a.rows());
  for (int attempt = 0; attempt < 3; ++attempt) {
    const double sigma = 0.1 + 0.05 * attempt;
    const Eigen::MatrixXd shifted = p.a - sigma * p.b;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(shifted);
    if (!lu.isInvertible()) continue;
    const Eigen::MatrixXd c = lu.solve(p.b);
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, want_vectors);
    if (es.info() != Eigen::Success) continue;

    // Invert the spectral transform; near-zero transformed eigenvalues are
    // the infinite artifacts of the bordered and algebraic rows.
    std::vector<int> keep;
    for (int i = 0; i < size; ++i)
      if (std::abs(es.eigenvalues()[i]) >= 1e-8) keep.push_back(i);
    if (keep.empty()) continue;
    std::sort(keep.begin(), keep.end(), [&](int i, int j) {
      const Complex li = sigma + 1.0 / es.eigenvalues()[i];
      const Complex lj = sigma + 1.0 / es.eigenvalues()[j];
      if (li.real() != lj.real()) return li.real() > lj.real();
      return li.imag() > lj.imag();
    });
    Eigenpairs out;
    out.values.reserve(keep.size());
    for (int i : keep) out.values.push_back(sigma + 1.0 / es.eigenvalues()[i]);
    if (want_vectors) {
      out.vectors.reserve(keep.size());
      for (int i : keep) out.vectors.push_back(es.eigenvectors().col(i));
    }
    return out;
  }
  throw EigensolveFailure(
      "shift-and-invert factorization failed for every shift attempted");
}

}  // namespace

Spectrum spectrum(const StabilityConfig& cfg, int m, double rayleigh) {
  const Pencil p = assemble_pencil(cfg, m, rayleigh);
  Eigenpairs pairs = solve_pencil(p, false);
  Spectrum s;
  s.eigenvalues = std::move(pairs.values);
  s.leading = s.eigenvalues.front();
  return s;
}

double growth_rate(const StabilityConfig& cfg, int m, double rayleigh) {
  return spectrum(cfg, m, rayleigh).leading.real();
}

ModeProfile leading_mode(const StabilityConfig& cfg, int m, double rayleigh) {
  const Pencil p = assemble_pencil(cfg, m, rayleigh);
  Eigenpairs pairs = solve_pencil(p, true);
  ModeProfile profile;
  profile.grid = p.grid;
  profile.eigenvalue = pairs.values.front();
  profile.streamfunction = pairs.vectors.front().head(p.grid.size());
  // Fix the arbitrary eigenvector phase: largest entry becomes real positive.
  Eigen::Index peak = 0;
  profile.streamfunction.cwiseAbs().maxCoeff(&peak);
  const Complex z = profile.streamfunction[peak];
  if (std::abs(z) > 0.0) profile.streamfunction *= std::abs(z) / z;
  return profile;
}

namespace {

constexpr double kRaFloor = 1e-6;
constexpr double kRaCeil = 1e9;

struct GrowthFn {
  const StabilityConfig& cfg;
  int m;
  mutable int evals = 0;

  double operator()(double ra) const {
    ++evals;
    return growth_rate(cfg, m, ra);
  }
};

}  // namespace

NeutralPoint neutral_rayleigh(const StabilityConfig& cfg, int m,
                              double ra_guess) {
  validate(cfg);
  const GrowthFn f{cfg, m};
  NeutralPoint out;
  out.m = m;

  double lo = ra_guess > 0.0 ? ra_guess / 1.5 : 700.0;
  double hi = ra_guess > 0.0 ? ra_guess * 1.5 : 2500.0;
  double f_lo = f(lo), f_hi = f(hi);
  // Slide the bracket geometrically until it straddles the sign change.
  for (int i = 0; i < 120 && f_lo > 0.0; ++i) {
    hi = lo;
    f_hi = f_lo;
    lo /= 1.5;
    if (lo < kRaFloor) break;
    f_lo = f(lo);
  }
  for (int i = 0; i < 120 && f_hi < 0.0; ++i) {
    lo = hi;
    f_lo = f_hi;
    hi *= 1.5;
    if (hi > kRaCeil) break;
    f_hi = f(hi);
  }
  if (!(f_lo < 0.0) || !(f_hi > 0.0)) {
    out.evaluations = f.evals;
    throw NoNeutralPoint("growth rate of mode m=" + std::to_string(m) +
                         " never changes sign for Rayleigh numbers in [" +
                         std::to_string(kRaFloor) + ", " +
                         std::to_string(kRaCeil) + "]");
  }

  // Secant steps inside a maintained bracket, falling back to bisection
  // whenever the secant point degenerates.
  double best = std::fabs(f_lo) < std::fabs(f_hi) ? lo : hi;
  double f_best = std::fabs(f_lo) < std::fabs(f_hi) ? f_lo : f_hi;
  for (int it = 0; it < 200; ++it) {
    if ((hi - lo) <= 1e-10 * hi || std::fabs(f_best) <= 1e-12) break;
    double trial = hi - f_hi * (hi - lo) / (f_hi - f_lo);
    const double margin = 1e-3 * (hi - lo);
    if (!std::isfinite(trial) || trial <= lo + margin || trial >= hi - margin)
      trial = 0.5 * (lo + hi);
    const double f_trial = f(trial);
    if (std::fabs(f_trial) < std::fabs(f_best)) {
      best = trial;
      f_best = f_trial;
    }
    if (f_trial < 0.0) {
      lo = trial;
      f_lo = f_trial;
    } else {
      hi = trial;
      f_hi = f_trial;
    }
  }
  out.rayleigh = best;
  out.converged = std::fabs(f_best) <= 1e-8;
  out.evaluations = f.evals;
  return out;
}

std::vector<NeutralPoint> neutral_curve(const StabilityConfig& cfg, int m_lo,
                                        int m_hi, int threads) {
  if (m_hi < m_lo) throw ConfigError("empty wavenumber range");
  validate(cfg);
  const int count = m_hi - m_lo + 1;
  std::vector<NeutralPoint> results(count);
  const int workers = std::clamp(threads, 1, count);

  // Contiguous chunks keep the within-chunk warm starts deterministic no
  // matter how the threads are scheduled.
  std::vector<std::exception_ptr> failures(workers);
  auto run_chunk = [&](int w) {
    const int chunk = (count + workers - 1) / workers;
    const int begin = w * chunk, end = std::min(count, begin + chunk);
    double guess = 0.0;
    for (int i = begin; i < end; ++i) {
      try {
        results[i] = neutral_rayleigh(cfg, m_lo + i, guess);
        if (results[i].converged) guess = results[i].rayleigh;
      } catch (const NumericalError&) {
        results[i].m = m_lo + i;
        results[i].rayleigh = std::numeric_limits<double>::quiet_NaN();
        results[i].converged = false;
        guess = 0.0;
      } catch (...) {
        failures[w] = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    run_chunk(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_chunk, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : failures)
    if (e) std::rethrow_exception(e);
  return results;
}

NeutralPoint critical_mode(const StabilityConfig& cfg, int m_lo, int m_hi,
                           int threads) {
  const auto curve = neutral_curve(cfg, m_lo, m_hi, threads);
  const NeutralPoint* best = nullptr;
  for (const auto& p : curve) {
    if (!p.converged) continue;
    if (best == nullptr || p.rayleigh < best->rayleigh) best = &p;
  }
  if (best == nullptr)
    throw NoNeutralPoint("no wavenumber in [" + std::to_string(m_lo) + ", " +
                         std::to_string(m_hi) + "] produced a neutral value");
  return *best;
}

Codim2Result codim2_point(const StabilityConfig& cfg, int m, double eta_lo,
                          double eta_hi) {
  if (!(eta_lo > 0.0) || !(eta_hi < 1.0) || !(eta_lo < eta_hi))
    throw ConfigError("codim2 search needs 0 < eta_lo < eta_hi < 1");
  if (m < 1) throw ConfigError("codim2 search needs m >= 1");

  struct Sample {
    double diff = 0.0;
    double ra_a = 0.0, ra_b = 0.0;
  };
  double guess_a = 0.0, guess_b = 0.0;
  auto eval = [&](double eta) {
    StabilityConfig local = cfg;
    local.eta = eta;
    const NeutralPoint a = neutral_rayleigh(local, m, guess_a);
    const NeutralPoint b = neutral_rayleigh(local, m + 1, guess_b);
    if (a.converged) guess_a = a.rayleigh;
    if (b.converged) guess_b = b.rayleigh;
    return Sample{a.rayleigh - b.rayleigh, a.rayleigh, b.rayleigh};
  };

  constexpr int kScan = 13;
  double lo = eta_lo, hi = eta_hi;
  Sample s_lo, s_hi;
  bool bracketed = false;
  Sample prev = eval(eta_lo);
  double prev_eta = eta_lo;
  for (int k = 1; k < kScan; ++k) {
    const double eta = eta_lo + (eta_hi - eta_lo) * k / (kScan - 1);
    const Sample cur = eval(eta);
    if (prev.diff == 0.0 || prev.diff * cur.diff < 0.0) {
      lo = prev_eta;
      hi = eta;
      s_lo = prev;
      s_hi = cur;
      bracketed = true;
      break;
    }
    prev = cur;
    prev_eta = eta;
  }
  if (!bracketed)
    throw NoCrossing("neutral values of modes " + std::to_string(m) + " and " +
                     std::to_string(m + 1) +
                     " never cross for eta in the scanned interval");

  Codim2Result result;
  result.m = m;
  result.bracket_lo = lo;
  result.bracket_hi = hi;

  Sample s_mid = s_lo;
  double mid = lo;
  while (hi - lo > 1e-12) {
    mid = 0.5 * (lo + hi);
    s_mid = eval(mid);
    if (std::fabs(s_mid.diff) <= 1e-9) break;
    if (s_lo.diff * s_mid.diff <= 0.0) {
      hi = mid;
      s_hi = s_mid;
    } else {
      lo = mid;
      s_lo = s_mid;
    }
  }

  result.eta_star = mid;
  result.ra_star = 0.5 * (s_mid.ra_a + s_mid.ra_b);
  result.residual = std::fabs(s_mid.diff);

  StabilityConfig local = cfg;
  local.eta = result.eta_star;
  const double step = 1e-4 * result.ra_star;
  for (int k = 0; k < 2; ++k) {
    const double up = growth_rate(local, m + k, result.ra_star + step);
    const double dn = growth_rate(local, m + k, result.ra_star - step);
    result.dlambda_dra[k] = (up - dn) / (2.0 * step);
  }
  return result;
}

}  // namespace annulus::pde
