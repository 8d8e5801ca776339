#include "annulus/continuation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <limits>

#include "annulus/errors.hpp"

namespace annulus::continuation {

using normal_form::jacobian;
using normal_form::jacobian_fix_z2;
using normal_form::make_steady_state;
using normal_form::rhs_fix_z2;
using normal_form::transverse_block;
using symmetry::isotropy_label;

namespace {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat23 = Eigen::Matrix<double, 2, 3>;

constexpr double kEventTol = 1e-10;       // bisection width target in X
constexpr double kNeutralBand = 1e-9;  // |Re| below this counts as neutral
constexpr double kAmplitudeCap = 1e3;     // runaway-branch guard

struct System {
  Coefficients base;  // mu field unused
  ModePair modes;

  Vec2 G(const Vec3& X) const {
    return rhs_fix_z2(X[0], X[1], base.with_mu(X[2]), modes);
  }
  Mat23 Gjac(const Vec3& X) const {
    Mat23 J;
    J.leftCols<2>() = jacobian_fix_z2(X[0], X[1], base.with_mu(X[2]), modes);
    // d/dmu of both components: the linear parameter enters p1 and p2 with
    // unit coefficient.
    J(0, 2) = X[0];
    J(1, 2) = X[1];
    return J;
  }
};

struct CorrectorResult {
  Vec3 X;
  int iters = 0;
};

// Newton on [G(X); t.(X - X_plane)] = 0.
std::optional<CorrectorResult> correct(const System& sys, Vec3 X, const Vec3& t,
                                       const Vec3& X_plane, double tol,
                                       int max_iters) {
  for (int it = 0; it <= max_iters; ++it) {
    const Vec2 g = sys.G(X);
    const double h = t.dot(X - X_plane);
    const double res = std::max(g.lpNorm<Eigen::Infinity>(), std::fabs(h));
    if (res <= tol) return CorrectorResult{X, it};
    if (it == max_iters) break;
    Eigen::Matrix3d M;
    M.topRows<2>() = sys.Gjac(X);
    M.row(2) = t.transpose();
    Eigen::Vector3d rhs{-g[0], -g[1], -h};
    const Vec3 dX = M.fullPivLu().solve(rhs);
    if (!dX.allFinite()) return std::nullopt;
    X += dX;
    if (!X.allFinite()) return std::nullopt;
  }
  return std::nullopt;
}

// Unit tangent at X continuing the orientation of t_prev.
std::optional<Vec3> tangent_at(const System& sys, const Vec3& X,
                               const Vec3& t_prev) {
  Eigen::Matrix3d M;
  M.topRows<2>() = sys.Gjac(X);
  M.row(2) = t_prev.transpose();
  Eigen::FullPivLU<Eigen::Matrix3d> lu(M);
  if (!lu.isInvertible()) return std::nullopt;
  Vec3 t = lu.solve(Vec3{0.0, 0.0, 1.0});
  const double n = t.norm();
  if (!(n > 0.0) || !t.allFinite()) return std::nullopt;
  return Vec3(t / n);
}

BranchPoint record_point(const System& sys, const Vec3& X, double arclength) {
  BranchPoint p;
  p.mu = X[2];
  p.x = X[0];
  p.y = X[1];
  p.arclength = arclength;
  const Eigen::Matrix4d J =
      jacobian({{X[0], 0.0}, {X[1], 0.0}}, sys.base.with_mu(X[2]), sys.modes);
  p.eigenvalues = normal_form::eigenvalues4(J);
  return p;
}

struct HalfBranch {
  std::vector<Vec3> points;
  StopReason stop = StopReason::MaxPoints;
};

HalfBranch run_direction(const System& sys, const Vec3& X0, const Vec3& t0,
                         const Settings& s) {
  HalfBranch out;
  out.points.push_back(X0);
  Vec3 X = X0;
  Vec3 t = t0.normalized();
  double ds = s.ds_init;
  double travelled = 0.0;

  while (static_cast<int>(out.points.size()) < s.max_points) {
    if (const auto tn = tangent_at(sys, X, t)) t = *tn;
    const Vec3 X_pred = X + ds * t;
    const auto corr =
        correct(sys, X_pred, t, X_pred, s.corrector_tol, s.max_corrector_iters);
    const bool jumped = corr && (corr->X - X).norm() > 3.0 * ds + 1e-12;
    if (!corr || jumped) {
      ds *= 0.5;
      if (ds < s.ds_min) {
        out.stop = StopReason::StepCollapse;
        return out;
      }
      continue;
    }
    const Vec3 Xn = corr->X;
    travelled += (Xn - X).norm();
    X = Xn;
    out.points.push_back(X);

    if (corr->iters <= 3)
      ds = std::min(ds * 1.4, s.ds_max);
    else if (corr->iters >= s.max_corrector_iters - 1)
      ds = std::max(ds * 0.5, s.ds_min);

    if (std::hypot(X[0], X[1]) > kAmplitudeCap) {
      out.stop = StopReason::StepCollapse;
      return out;
    }

    // Closed-loop detection: mixed-mode branches and their conjugates can
    // join into a loop; stop after returning to the start.
    if (travelled > 10.0 * s.ds_init &&
        (X - X0).norm() < std::max(0.75 * ds, 1e-8)) {
      out.stop = StopReason::ClosedLoop;
      return out;
    }

    if (X[2] > s.mu_max || X[2] < s.mu_min) {
      // Land the endpoint exactly on the sweep boundary when possible.
      const double mu_b = X[2] > s.mu_max ? s.mu_max : s.mu_min;
      const auto r =
          normal_form::newton_refine(X[0], X[1], sys.base.with_mu(mu_b), sys.modes);
      if (r) {
        out.points.back() = Vec3{(*r)[0], (*r)[1], mu_b};
      } else {
        out.points.pop_back();
      }
      out.stop = StopReason::ParameterBound;
      return out;
    }
  }
  out.stop = StopReason::MaxPoints;
  return out;
}

bool is_truncated(const Coefficients& c) {
  return c.e1 == 0.0 && c.e2 == 0.0 && c.q10 == 0.0 && c.q20 == 0.0;
}

int conjugacy_multiplicity(IsotropyClass label, const Coefficients& c,
                           const ModePair& modes) {
  const bool trunc = is_truncated(c);
  const bool odd = modes.lower() % 2 != 0;
  switch (label) {
    case IsotropyClass::FullO2:
      return 1;
    case IsotropyClass::Dm:
      return trunc ? 2 : (odd ? 2 : 1);
    case IsotropyClass::Dl:
      return trunc ? 2 : (odd ? 1 : 2);
    case IsotropyClass::Z2:
    case IsotropyClass::Trivial:
      return trunc ? 4 : 2;
  }
  return 1;
}

IsotropyClass branch_label(const Branch& b) {
  // Use the most symmetric-looking interior representative: labels are
  // constant between events, but endpoints can sit exactly on an axis.
  if (b.points.empty()) return IsotropyClass::Trivial;
  double best_score = -1.0;
  IsotropyClass label = IsotropyClass::Trivial;
  const std::size_t stride = std::max<std::size_t>(1, b.points.size() / 16);
  for (std::size_t i = 0; i < b.points.size(); i += stride) {
    const auto& p = b.points[i];
    const double score = std::min(std::fabs(p.x), std::fabs(p.y));
    const symmetry::Amplitudes z{{p.x, 0.0}, {p.y, 0.0}};
    if (z.norm() < 1e-8) continue;
    if (score > best_score) {
      best_score = score;
      label = isotropy_label(z, b.modes());
    }
  }
  if (best_score < 0.0) label = IsotropyClass::FullO2;  // all points trivial
  return label;
}

}  // namespace

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::ParameterBound:
      return "parameter_bound";
    case StopReason::StepCollapse:
      return "step_collapse";
    case StopReason::MaxPoints:
      return "max_points";
    case StopReason::SeedFailure:
      return "seed_failure";
    case StopReason::ClosedLoop:
      return "closed_loop";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Pitchfork:
      return "pitchfork";
    case EventKind::Transcritical:
      return "transcritical";
    case EventKind::SaddleNode:
      return "saddle_node";
    case EventKind::Hopf:
      return "hopf";
    case EventKind::DriftRW:
      return "drift_rw";
  }
  return "?";
}

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::ExchangeHysteresis:
      return "exchange_hysteresis";
    case Scenario::SmoothTransition:
      return "smooth_transition";
    case Scenario::SubcriticalSWRW:
      return "subcritical_sw_rw";
    case Scenario::Other:
      return "other";
  }
  return "?";
}

Branch continue_branch(const Coefficients& base, const ModePair& modes,
                       const Seed& seed, const Settings& settings) {
  const System sys{base, modes};
  Branch branch;
  branch.coeffs = base;
  branch.mode_m = modes.lower();

  const Vec3 X_seed{seed.x, seed.y, seed.mu};
  Vec3 hint = seed.tangent_hint;
  if (!(hint.norm() > 0.0)) hint = Vec3{0.0, 0.0, 1.0};
  hint.normalize();

  // Settle the seed onto the curve within the plane orthogonal to the hint.
  const auto settled =
      correct(sys, X_seed, hint, X_seed, settings.corrector_tol, 20);
  if (!settled) {
    branch.stop_begin = branch.stop_end = StopReason::SeedFailure;
    return branch;
  }
  const Vec3 X0 = settled->X;

  const HalfBranch fwd = run_direction(sys, X0, hint, settings);
  HalfBranch bwd;
  if (fwd.stop == StopReason::ClosedLoop) {
    // The forward sweep already covered the whole curve.
    bwd.points.push_back(X0);
    bwd.stop = StopReason::ClosedLoop;
  } else {
    bwd = run_direction(sys, X0, -hint, settings);
  }

  // Merge: reversed backward half + forward half (shared seed point once),
  // dropping coincident neighbours (a sweep that exits immediately at a
  // parameter bound re-lands on its own start).
  std::vector<Vec3> xs;
  xs.reserve(bwd.points.size() + fwd.points.size());
  for (auto it = bwd.points.rbegin(); it != bwd.points.rend(); ++it)
    xs.push_back(*it);
  for (std::size_t i = 1; i < fwd.points.size(); ++i) xs.push_back(fwd.points[i]);
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](const Vec3& a, const Vec3& b) {
                         return (a - b).norm() < 1e-14;
                       }),
           xs.end());

  double arc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) arc += (xs[i] - xs[i - 1]).norm();
    branch.points.push_back(record_point(sys, xs[i], arc));
  }
  branch.stop_begin = bwd.stop;
  branch.stop_end = fwd.stop;
  branch.label = branch_label(branch);
  branch.multiplicity = conjugacy_multiplicity(branch.label, base, modes);
  return branch;
}

namespace {

// CoordX and CoordY catch branch attachments the det family cannot: where
// a mixed branch meets a pure-mode axis, det is quadratic in the vanishing
// coordinate and touches zero without a sign change, while the coordinate
// itself crosses transversally.
enum class Family { Det, Hopf, Drift, CoordX, CoordY };

struct TestValues {
  double det = 0.0;
  bool complex_pair = false;
  double hopf_re = 0.0;
  double drift = 0.0;
  bool mixed = false;
  double coord_x = 0.0;
  double coord_y = 0.0;
};

TestValues eval_tests(const System& sys, const Vec3& X) {
  TestValues v;
  const Eigen::Matrix2d J2 =
      jacobian_fix_z2(X[0], X[1], sys.base.with_mu(X[2]), sys.modes);
  v.det = J2.determinant();
  const double tr = J2.trace();
  const double disc = tr * tr - 4.0 * v.det;
  if (disc < 0.0) {
    v.complex_pair = true;
    v.hopf_re = 0.5 * tr;
  }
  v.drift =
      transverse_block(X[0], X[1], sys.base.with_mu(X[2]), sys.modes).trace();
  // The out-of-plane trace signals drift only on mixed states, where the
  // block holds the group zero plus the drift eigenvalue. On pure states it
  // tracks the ordinary transverse eigenvalues, which the det family
  // already watches.
  v.mixed = std::min(std::fabs(X[0]), std::fabs(X[1])) >
            1e-8 * std::max(1.0, std::hypot(X[0], X[1]));
  v.coord_x = X[0];
  v.coord_y = X[1];
  return v;
}

double family_value(const TestValues& v, Family f) {
  switch (f) {
    case Family::Det:
      return v.det;
    case Family::Hopf:
      return v.hopf_re;
    case Family::Drift:
      return v.drift;
    case Family::CoordX:
      return v.coord_x;
    case Family::CoordY:
      return v.coord_y;
  }
  return 0.0;
}

bool family_defined(const TestValues& v, Family f) {
  switch (f) {
    case Family::Det:
    case Family::CoordX:
    case Family::CoordY:
      return true;
    case Family::Hopf:
      return v.complex_pair;
    case Family::Drift:
      return v.mixed;
  }
  return false;
}

// Bisect the crossing of `fam` between branch points lo and hi (indices into
// xs). Probe points are pulled back onto the curve by the plane corrector;
// if that fails the linear interpolant is close enough for a sign query.
Vec3 refine_crossing(const System& sys, const std::vector<Vec3>& xs,
                     std::size_t lo_idx, std::size_t hi_idx, Family fam,
                     double sign_lo) {
  Vec3 lo = xs[lo_idx], hi = xs[hi_idx];
  for (int it = 0; it < 80; ++it) {
    if ((hi - lo).lpNorm<Eigen::Infinity>() <= kEventTol) break;
    const Vec3 mid_pred = 0.5 * (lo + hi);
    const Vec3 tsec = (hi - lo).normalized();
    Vec3 probe = mid_pred;
    if (const auto c = correct(sys, mid_pred, tsec, mid_pred, 1e-9, 12))
      probe = c->X;
    const TestValues tv = eval_tests(sys, probe);
    double val = family_value(tv, fam);
    if (!family_defined(tv, fam)) val = sign_lo;  // push toward the far side
    if (val * sign_lo > 0.0)
      lo = probe;
    else
      hi = probe;
  }
  Vec3 mid = 0.5 * (lo + hi);
  if (const auto c = correct(sys, mid, (hi - lo).norm() > 0.0
                                            ? Vec3((hi - lo).normalized())
                                            : Vec3{0, 0, 1},
                             mid, 1e-9, 12))
    mid = c->X;
  return mid;
}

bool axis_protected_dm(const Coefficients& c, const ModePair& modes) {
  // Transverse reflection y -> -y of the lower pure-mode axis survives the
  // symmetry-breaking terms only for even m (or when those terms vanish).
  return modes.lower() % 2 == 0 || is_truncated(c);
}

bool axis_protected_dl(const Coefficients& c, const ModePair& modes) {
  return modes.lower() % 2 != 0 || is_truncated(c);
}

}  // namespace

std::vector<Event> detect_events(Branch& branch) {
  if (branch.points.size() < 2)
    throw std::invalid_argument("detect_events: branch needs >= 2 points");
  const System sys{branch.coeffs, branch.modes()};

  std::vector<Vec3> xs;
  xs.reserve(branch.points.size() + 2);
  for (const auto& p : branch.points) xs.push_back(Vec3{p.x, p.y, p.mu});

  // On a closed loop the scan below is linear in arclength, so a crossing
  // that straddles the start/end seam would be missed; wrapping the first
  // points past the end closes the gap.
  std::vector<double> arcs;
  arcs.reserve(xs.size() + 2);
  for (const auto& p : branch.points) arcs.push_back(p.arclength);
  if ((branch.stop_begin == StopReason::ClosedLoop ||
       branch.stop_end == StopReason::ClosedLoop) &&
      xs.size() > 2) {
    for (std::size_t k = 0; k < 2; ++k) {
      arcs.push_back(arcs.back() + (xs[k] - xs[xs.size() - 1]).norm());
      xs.push_back(xs[k]);
    }
  }

  std::vector<TestValues> tv(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) tv[i] = eval_tests(sys, xs[i]);

  // Per-family deadband relative to the largest magnitude seen on the
  // branch; a family whose values never rise above noise is inactive (for
  // example the out-of-plane eigenvalue of the truncated field, which is
  // identically zero).
  auto deadband = [&](Family f) {
    double scale = 0.0;
    for (const auto& v : tv)
      if (family_defined(v, f)) scale = std::max(scale, std::fabs(family_value(v, f)));
    if (scale < 1e-12) return std::numeric_limits<double>::infinity();
    return 1e-9 * std::max(1.0, scale);
  };

  std::vector<Event> events;
  for (Family fam : {Family::Det, Family::Hopf, Family::Drift, Family::CoordX,
                     Family::CoordY}) {
    const double db = deadband(fam);
    if (!std::isfinite(db)) continue;
    bool have_solid = false;
    std::size_t solid_idx = 0;
    double solid_sign = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!family_defined(tv[i], fam)) {
        have_solid = false;
        continue;
      }
      const double val = family_value(tv[i], fam);
      if (std::fabs(val) <= db) continue;
      const double sgn = val > 0.0 ? 1.0 : -1.0;
      if (have_solid && sgn != solid_sign) {
        const Vec3 X =
            refine_crossing(sys, xs, solid_idx, i, fam, solid_sign);
        Event ev;
        ev.mu = X[2];
        ev.x = X[0];
        ev.y = X[1];
        ev.arclength = arcs[solid_idx] + (X - xs[solid_idx]).norm();
        if (fam == Family::Hopf) {
          ev.kind = EventKind::Hopf;
          const Eigen::Matrix2d J2 = jacobian_fix_z2(
              X[0], X[1], branch.coeffs.with_mu(X[2]), branch.modes());
          ev.omega = std::sqrt(std::max(J2.determinant(), 0.0));
        } else if (fam == Family::Drift) {
          ev.kind = EventKind::DriftRW;
        } else {
          // Axis checks come first: at a branch attachment the crossing can
          // sit at a parameter extremum of the attaching curve, which would
          // otherwise read as a fold.
          const double span = std::max({1.0, std::fabs(X[0]), std::fabs(X[1])});
          const bool on_y0 = std::fabs(X[1]) <= 1e-6 * span;
          const bool on_x0 = std::fabs(X[0]) <= 1e-6 * span;
          const double mu_lo = xs[solid_idx][2], mu_hi = xs[i][2];
          const bool fold = (X[2] - mu_lo) * (mu_hi - X[2]) < 0.0;
          if (on_x0 && on_y0) {
            ev.kind = EventKind::Pitchfork;  // primary, on the trivial state
          } else if (on_y0) {
            ev.kind = axis_protected_dm(branch.coeffs, branch.modes())
                          ? EventKind::Pitchfork
                          : EventKind::Transcritical;
          } else if (on_x0) {
            ev.kind = axis_protected_dl(branch.coeffs, branch.modes())
                          ? EventKind::Pitchfork
                          : EventKind::Transcritical;
          } else if (fold) {
            ev.kind = EventKind::SaddleNode;
          } else {
            ev.kind = EventKind::Transcritical;
          }
        }
        events.push_back(ev);
      }
      have_solid = true;
      solid_idx = i;
      solid_sign = sgn;
    }
  }

  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.arclength < b.arclength; });
  branch.events = events;
  return events;
}

std::array<Seed, 2> branch_switch(const Branch& branch, const Event& ev,
                                  const Settings& settings) {
  const Eigen::Matrix2d J2 = jacobian_fix_z2(
      ev.x, ev.y, branch.coeffs.with_mu(ev.mu), branch.modes());
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(J2, Eigen::ComputeFullV);
  const Eigen::Vector2d v = svd.matrixV().col(1);  // smallest singular value
  std::array<Seed, 2> seeds;
  for (int s = 0; s < 2; ++s) {
    const double dir = s == 0 ? 1.0 : -1.0;
    seeds[s].x = ev.x + dir * settings.switch_amplitude * v[0];
    seeds[s].y = ev.y + dir * settings.switch_amplitude * v[1];
    seeds[s].mu = ev.mu;
    seeds[s].tangent_hint = Vec3{dir * v[0], dir * v[1], 0.0};
  }
  return seeds;
}

bool point_is_stable(const BranchPoint& p) {
  // Group-forced directions (phase rotation, and the whole drift family of
  // the truncated field) sit on the imaginary axis; only real parts beyond
  // the neutral band count as unstable.
  for (const auto& e : p.eigenvalues)
    if (e.real() > kNeutralBand) return false;
  return true;
}

namespace {

double stable_fraction_over(const std::vector<BranchPoint>& pts) {
  if (pts.size() < 2)
    return pts.size() == 1 && point_is_stable(pts[0]) ? 1.0 : 0.0;
  double total = 0.0, stable = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double dx = pts[i].x - pts[i - 1].x;
    const double dy = pts[i].y - pts[i - 1].y;
    const double dmu = pts[i].mu - pts[i - 1].mu;
    const double len = std::sqrt(dx * dx + dy * dy + dmu * dmu);
    total += len;
    if (point_is_stable(pts[i]) && point_is_stable(pts[i - 1])) stable += len;
  }
  return total > 0.0 ? stable / total : 0.0;
}

// Sign changes of (x, y) that map solution curves to conjugate copies: the
// half-turn rotation flips one coordinate depending on the parity of m, and
// the truncated field admits both flips independently.
std::vector<Eigen::Array2d> conjugacy_flips(const Coefficients& c,
                                            const ModePair& modes) {
  std::vector<Eigen::Array2d> flips{{1.0, 1.0}};
  if (is_truncated(c)) {
    flips.push_back({-1.0, 1.0});
    flips.push_back({1.0, -1.0});
    flips.push_back({-1.0, -1.0});
  } else if (modes.lower() % 2 != 0) {
    flips.push_back({-1.0, 1.0});
  } else {
    flips.push_back({1.0, -1.0});
  }
  return flips;
}

// Whether P lies on the polyline of `b` up to discretization error: two
// independent samplings of the same smooth curve differ by the chord sag,
// which scales with the local segment length.
bool near_branch(const Vec3& P, const Branch& b) {
  for (std::size_t i = 1; i < b.points.size(); ++i) {
    const Vec3 A{b.points[i - 1].x, b.points[i - 1].y, b.points[i - 1].mu};
    const Vec3 B{b.points[i].x, b.points[i].y, b.points[i].mu};
    const Vec3 AB = B - A;
    const double len2 = AB.squaredNorm();
    double t = len2 > 0.0 ? AB.dot(P - A) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dist = (P - (A + t * AB)).norm();
    if (dist <= std::max(1e-6, 0.3 * std::sqrt(len2))) return true;
  }
  return false;
}

bool duplicates_existing(const Branch& cand, const std::vector<Branch>& all,
                         const std::vector<Eigen::Array2d>& flips) {
  if (cand.points.size() < 2) return true;
  const std::size_t n = cand.points.size();
  std::array<std::size_t, 7> probes;
  for (std::size_t k = 1; k <= 7; ++k) probes[k - 1] = k * n / 8;
  for (const auto& b : all) {
    for (const auto& f : flips) {
      bool all_close = true;
      for (const std::size_t i : probes) {
        const Vec3 P{f[0] * cand.points[i].x, f[1] * cand.points[i].y,
                     cand.points[i].mu};
        if (!near_branch(P, b)) {
          all_close = false;
          break;
        }
      }
      if (all_close) return true;
    }
  }
  return false;
}

}  // namespace

double stable_fraction(const Branch& branch) {
  return stable_fraction_over(branch.points);
}

bool is_stable_branch(const Branch& branch) {
  return stable_fraction(branch) >= 0.9;
}

Diagram assemble_diagram(const Coefficients& c, const ModePair& modes,
                         const Settings& settings) {
  constexpr int kMaxBranches = 24;
  constexpr int kMaxDepth = 4;

  Diagram diagram;
  Seed trivial_seed;
  trivial_seed.x = trivial_seed.y = 0.0;
  trivial_seed.mu = settings.mu_min;
  trivial_seed.tangent_hint = Vec3{0.0, 0.0, 1.0};
  Branch trivial = continue_branch(c, modes, trivial_seed, settings);
  if (trivial.points.size() < 2) {
    diagram.scenario = Scenario::Other;
    return diagram;
  }
  diagram.branches.push_back(std::move(trivial));

  const auto flips = conjugacy_flips(c, modes);
  std::deque<std::pair<std::size_t, int>> queue;  // branch index, depth
  queue.emplace_back(0, 0);
  while (!queue.empty()) {
    const auto [bi, depth] = queue.front();
    queue.pop_front();
    detect_events(diagram.branches[bi]);
    if (depth >= kMaxDepth) continue;
    const auto events = diagram.branches[bi].events;  // copy: vector may grow
    for (const Event& ev : events) {
      if (ev.kind != EventKind::Pitchfork && ev.kind != EventKind::Transcritical)
        continue;
      if (static_cast<int>(diagram.branches.size()) >= kMaxBranches) break;
      const auto seeds = branch_switch(diagram.branches[bi], ev, settings);
      for (const Seed& seed : seeds) {
        if (static_cast<int>(diagram.branches.size()) >= kMaxBranches) break;
        Branch nb = continue_branch(c, modes, seed, settings);
        if (nb.points.size() < 2) continue;
        if (duplicates_existing(nb, diagram.branches, flips)) continue;
        diagram.branches.push_back(std::move(nb));
        queue.emplace_back(diagram.branches.size() - 1, depth + 1);
      }
    }
  }

  // --- Scenario classification ---
  bool any_hopf = false, any_drift = false;
  for (const auto& b : diagram.branches) {
    for (const auto& ev : b.events) {
      any_hopf |= ev.kind == EventKind::Hopf;
      any_drift |= ev.kind == EventKind::DriftRW;
    }
  }
  const bool lower_super = c.a11 < 0.0, upper_super = c.a22 < 0.0;
  const bool one_subcritical = lower_super != upper_super;

  // A connecting branch is genuinely mixed in its interior and attaches to
  // both pure-mode axes. Attachments are read off the refined steady-state
  // events rather than the raw grid, whose spacing can dwarf the distance
  // of the nearest sample to an axis.
  const Branch* connector = nullptr;
  for (const auto& b : diagram.branches) {
    if (b.label != IsotropyClass::Z2 || b.points.size() < 3) continue;
    double span = 0.0, best_mixed = 0.0;
    for (const auto& p : b.points) {
      span = std::max({span, std::fabs(p.x), std::fabs(p.y)});
      best_mixed = std::max(best_mixed, std::min(std::fabs(p.x), std::fabs(p.y)));
    }
    if (span <= 0.0) continue;
    bool touch_x0 = false, touch_y0 = false;
    for (const auto& ev : b.events) {
      if (ev.kind != EventKind::Pitchfork && ev.kind != EventKind::Transcritical)
        continue;
      const double s = std::max({1.0, std::fabs(ev.x), std::fabs(ev.y)});
      touch_x0 |= std::fabs(ev.x) <= 1e-6 * s;
      touch_y0 |= std::fabs(ev.y) <= 1e-6 * s;
    }
    if (touch_x0 && touch_y0 && best_mixed >= 0.25 * span) {
      connector = &b;
      break;
    }
  }

  if (one_subcritical && (any_hopf || any_drift)) {
    diagram.scenario = Scenario::SubcriticalSWRW;
  } else if (connector != nullptr && lower_super && upper_super) {
    // Judge stability on the genuinely mixed interior of the connector.
    double span = 0.0;
    for (const auto& p : connector->points)
      span = std::max({span, std::fabs(p.x), std::fabs(p.y)});
    const double attach = 1e-2 * span;
    std::vector<BranchPoint> interior;
    for (const auto& p : connector->points)
      if (std::fabs(p.x) > attach && std::fabs(p.y) > attach)
        interior.push_back(p);
    const double frac = stable_fraction_over(interior);
    diagram.scenario = frac >= 0.9 ? Scenario::SmoothTransition
                                   : Scenario::ExchangeHysteresis;
  } else {
    diagram.scenario = Scenario::Other;
  }
  return diagram;
}

}  // namespace annulus::continuation
