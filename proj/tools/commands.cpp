#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "annulus/config.hpp"
#include "annulus/continuation.hpp"
#include "annulus/dynamics.hpp"
#include "annulus/errors.hpp"
#include "annulus/io.hpp"
#include "annulus/normal_form.hpp"
#include "annulus/pattern.hpp"
#include "annulus/pde_stability.hpp"
#include "json.hpp"

namespace annulus::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

#ifndef ANNULUS_VERSION
#define ANNULUS_VERSION "0.0.0"
#endif

constexpr const char* kVersion = ANNULUS_VERSION;

/// Creates the output directory (and parents) and returns it.
fs::path prepare_out_dir(const Invocation& inv) {
  if (inv.out_dir.empty()) throw ConfigError("--out must not be empty");
  const fs::path out(inv.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec && !fs::is_directory(out))
    throw IoError("cannot create output directory " + out.string() + ": " +
                  ec.message());
  return out;
}

/// Resolves a possibly relative path against the directory holding the
/// config file, so configs can reference sibling data files.
std::string resolve_against_config(const Invocation& inv,
                                   const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(inv.config_path).parent_path() / p).string();
}

/// Comment lines carried by every text output: tool identity plus the fully
/// resolved configuration, so a result file is reproducible on its own.
std::vector<std::string> meta_lines(const std::string& verb,
                                    const config::Reader& reader,
                                    const std::vector<std::string>& warnings) {
  std::vector<std::string> lines;
  lines.push_back("tool: annulus " + verb + " " + kVersion);
  for (const auto& item : reader.resolved()) lines.push_back("config: " + item);
  for (const auto& w : warnings) lines.push_back("warning: " + w);
  return lines;
}

Json meta_json(const std::string& verb, const config::Reader& reader,
               const std::vector<std::string>& warnings) {
  Json meta;
  meta["tool"] = "annulus " + verb;
  meta["version"] = kVersion;
  meta["config"] = reader.resolved();
  meta["warnings"] = warnings;
  return meta;
}

void write_json(const fs::path& path, const Json& j) {
  io::write_text_atomic(path.string(), j.dump(2) + "\n");
}

pde::StabilityConfig read_model(const Invocation& inv, config::Reader& r) {
  pde::StabilityConfig cfg;
  const std::string kind = r.text("model", "type", "gfd");
  if (kind == "gfd") {
    cfg.model = pde::Model::Gfd;
  } else if (kind == "ehd") {
    cfg.model = pde::Model::Ehd;
  } else {
    r.error("model.type must be 'gfd' or 'ehd', got '" + kind + "'");
  }
  cfg.eta = r.number("model", "eta", cfg.eta);
  cfg.prandtl = r.number("model", "prandtl", cfg.prandtl);
  cfg.delta = r.number("model", "delta", cfg.delta);
  cfg.resolution = static_cast<int>(r.integer("model", "resolution", cfg.resolution));
  cfg.gravity_sign = static_cast<int>(r.integer("model", "gravity_sign", cfg.gravity_sign));
  cfg.charge_sign = static_cast<int>(r.integer("model", "charge_sign", cfg.charge_sign));
  cfg.allow_zero_charge = r.flag("model", "allow_zero_charge", cfg.allow_zero_charge);
  if (const auto path = r.optional_text("model", "charge_profile"))
    cfg.charge_profile = config::read_profile_table(resolve_against_config(inv, *path));
  return cfg;
}

/// Reads the amplitude-equation coefficients; the mode number is read
/// separately because it feeds ModePair validation.
normal_form::Coefficients read_coefficients(config::Reader& r) {
  normal_form::Coefficients c;
  c.mu = r.number("coefficients", "mu", 0.0);
  c.split = r.number("coefficients", "delta", 0.0);
  c.a11 = r.number("coefficients", "a11", c.a11);
  c.a12 = r.number("coefficients", "a12", c.a12);
  c.a21 = r.number("coefficients", "a21", c.a21);
  c.a22 = r.number("coefficients", "a22", c.a22);
  c.e1 = r.number("coefficients", "e1", c.e1);
  c.e2 = r.number("coefficients", "e2", c.e2);
  c.q10 = r.number("coefficients", "q10", c.q10);
  c.q20 = r.number("coefficients", "q20", c.q20);
  return c;
}

int read_mode_m(config::Reader& r, const std::string& section) {
  const int m = static_cast<int>(r.integer(section, "m", 2));
  if (m < 2) r.error(section + ".m must be >= 2");
  return std::max(m, 2);
}

std::string fmt(double v) { return io::format_double(v); }

}  // namespace

int cmd_neutral(const Invocation& inv) {
  const fs::path out = prepare_out_dir(inv);
  const auto ini = config::Ini::parse_file(inv.config_path);
  config::Reader r(ini);

  pde::StabilityConfig cfg = read_model(inv, r);
  const int m_lo = static_cast<int>(r.integer("neutral", "m_min", 1));
  const int m_hi = static_cast<int>(r.integer("neutral", "m_max", 12));
  const double eta_lo = r.number("neutral", "eta_min", cfg.eta);
  const double eta_hi = r.number("neutral", "eta_max", eta_lo);
  const int eta_count = static_cast<int>(r.integer("neutral", "eta_count", 1));
  if (m_lo < 0) r.error("neutral.m_min must be >= 0");
  if (m_hi < m_lo) r.error("neutral.m_max must be >= neutral.m_min");
  if (eta_count < 1) r.error("neutral.eta_count must be >= 1");
  if (eta_count > 1 && !(eta_lo < eta_hi))
    r.error("neutral.eta_min must be below eta_max when eta_count > 1");
  r.finish();

  std::vector<double> etas;
  for (int k = 0; k < eta_count; ++k) {
    etas.push_back(eta_count == 1 ? eta_lo
                                  : eta_lo + k * (eta_hi - eta_lo) / (eta_count - 1));
  }
  std::vector<std::string> warnings;
  for (double eta : etas) {
    cfg.eta = eta;
    auto w = pde::validate(cfg);  // throws ConfigError on hard problems
    if (warnings.empty()) warnings = std::move(w);
  }

  io::Table table;
  table.comments = meta_lines("neutral", r, warnings);
  table.header = {"model", "eta", "m", "Ra_n", "converged"};

  bool any_failed = false;
  for (double eta : etas) {
    cfg.eta = eta;
    const auto points = pde::neutral_curve(cfg, m_lo, m_hi, inv.threads);
    const pde::NeutralPoint* best = nullptr;
    for (const auto& p : points) {
      table.row({to_string(cfg.model), fmt(eta), std::to_string(p.m),
                 fmt(p.rayleigh), p.converged ? "1" : "0"});
      if (!p.converged) {
        any_failed = true;
        std::printf("eta=%s m=%d: no neutral point located\n", fmt(eta).c_str(),
                    p.m);
      } else if (best == nullptr || p.rayleigh < best->rayleigh) {
        best = &p;
      }
    }
    if (best != nullptr) {
      std::printf("eta=%s: minimizing m=%d Ra_n=%s\n", fmt(eta).c_str(),
                  best->m, fmt(best->rayleigh).c_str());
    } else {
      std::printf("eta=%s: no mode in [%d, %d] has a neutral point\n",
                  fmt(eta).c_str(), m_lo, m_hi);
    }
  }

  io::write_text_atomic((out / "neutral.csv").string(), table.render());
  return any_failed ? 3 : 0;
}

int cmd_codim2(const Invocation& inv) {
  const fs::path out = prepare_out_dir(inv);
  const auto ini = config::Ini::parse_file(inv.config_path);
  config::Reader r(ini);

  pde::StabilityConfig cfg = read_model(inv, r);
  const int m = static_cast<int>(r.integer("codim2", "m", 2));
  const double eta_lo = r.number("codim2", "eta_min", 0.3);
  const double eta_hi = r.number("codim2", "eta_max", 0.9);
  if (m < 1) r.error("codim2.m must be >= 1");
  if (!(eta_lo < eta_hi)) r.error("codim2.eta_min must be below eta_max");
  r.finish();

  cfg.eta = eta_lo;
  const auto warnings = pde::validate(cfg);
  const auto result = pde::codim2_point(cfg, m, eta_lo, eta_hi);
  const double tolerance = 1e-6 * result.ra_star;

  Json j;
  j["meta"] = meta_json("codim2", r, warnings);
  j["model"] = to_string(cfg.model);
  j["m"] = result.m;
  j["eta_star"] = result.eta_star;
  j["ra_star"] = result.ra_star;
  j["dlambda_dRa"] = {result.dlambda_dra[0], result.dlambda_dra[1]};
  j["residual"] = result.residual;
  j["bracket"] = {result.bracket_lo, result.bracket_hi};
  write_json(out / "codim2.json", j);

  std::printf("codim2 (%s): modes %d and %d share Ra_n at eta*=%s, Ra*=%s\n",
              to_string(cfg.model), result.m, result.m + 1,
              fmt(result.eta_star).c_str(), fmt(result.ra_star).c_str());
  std::printf("defining-equation residual |Ra_n(%d) - Ra_n(%d)| = %s "
              "(tolerance %s)\n",
              result.m, result.m + 1, fmt(result.residual).c_str(),
              fmt(tolerance).c_str());
  std::printf("scan bracket before bisection: eta in [%s, %s]\n",
              fmt(result.bracket_lo).c_str(), fmt(result.bracket_hi).c_str());
  std::printf("d(Re lambda)/dRa at the crossing: m=%d: %s, m=%d: %s\n",
              result.m, fmt(result.dlambda_dra[0]).c_str(), result.m + 1,
              fmt(result.dlambda_dra[1]).c_str());

  return result.residual <= tolerance ? 0 : 3;
}

int cmd_diagram(const Invocation& inv) {
  const fs::path out = prepare_out_dir(inv);
  const auto ini = config::Ini::parse_file(inv.config_path);
  config::Reader r(ini);

  normal_form::Coefficients coeffs = read_coefficients(r);
  const int m = read_mode_m(r, "coefficients");
  continuation::Settings settings;
  settings.mu_min = r.require_number("continuation", "mu_min");
  settings.mu_max = r.require_number("continuation", "mu_max");
  settings.ds_init = r.number("continuation", "ds_init", settings.ds_init);
  settings.ds_min = r.number("continuation", "ds_min", settings.ds_min);
  settings.ds_max = r.number("continuation", "ds_max", settings.ds_max);
  settings.max_points = static_cast<int>(
      r.integer("continuation", "max_points", settings.max_points));
  settings.switch_amplitude =
      r.number("continuation", "switch_amplitude", settings.switch_amplitude);
  if (!(settings.mu_min < settings.mu_max))
    r.error("continuation.mu_min must be below mu_max (empty sweep range)");
  if (settings.ds_init <= 0.0 || settings.ds_min <= 0.0 ||
      settings.ds_max < settings.ds_init)
    r.error("continuation steps must satisfy 0 < ds_init <= ds_max, ds_min > 0");
  r.finish();

  const symmetry::ModePair modes(m);
  const auto warnings = normal_form::degeneracy_warnings(coeffs);

  Json j;
  j["meta"] = meta_json("diagram", r, warnings);
  j["mode_m"] = m;

  continuation::Diagram diagram;
  try {
    diagram = continuation::assemble_diagram(coeffs, modes, settings);
  } catch (const NumericalError& e) {
    j["error"] = e.what();
    write_json(out / "diagram.json", j);
    std::fprintf(stderr, "diagram assembly failed: %s\n", e.what());
    return 3;
  }

  j["scenario"] = to_string(diagram.scenario);
  Json branch_list = Json::array();
  for (std::size_t b = 0; b < diagram.branches.size(); ++b) {
    const auto& branch = diagram.branches[b];
    char name[32];
    std::snprintf(name, sizeof(name), "branch_%02zu.csv", b);

    io::Table table;
    table.comments = meta_lines("diagram", r, warnings);
    table.comment(std::string("branch: ") + name);
    table.comment(std::string("label: ") + to_string(branch.label) +
                  ", conjugate copies: " + std::to_string(branch.multiplicity));
    table.comment(std::string("stops: ") + to_string(branch.stop_begin) + " / " +
                  to_string(branch.stop_end));
    table.header = {"mu", "x", "y", "stable", "isotropy"};
    double mu_lo = 0.0, mu_hi = 0.0;
    for (std::size_t i = 0; i < branch.points.size(); ++i) {
      const auto& p = branch.points[i];
      mu_lo = i == 0 ? p.mu : std::min(mu_lo, p.mu);
      mu_hi = i == 0 ? p.mu : std::max(mu_hi, p.mu);
      const symmetry::Amplitudes z{{p.x, 0.0}, {p.y, 0.0}};
      table.row({fmt(p.mu), fmt(p.x), fmt(p.y),
                 continuation::point_is_stable(p) ? "1" : "0",
                 to_string(symmetry::isotropy_label(z, modes))});
    }
    io::write_text_atomic((out / name).string(), table.render());

    Json info;
    info["file"] = name;
    info["label"] = to_string(branch.label);
    info["conjugate_copies"] = branch.multiplicity;
    info["points"] = branch.points.size();
    info["mu_range"] = {mu_lo, mu_hi};
    info["stable_fraction"] = continuation::stable_fraction(branch);
    info["stops"] = {to_string(branch.stop_begin), to_string(branch.stop_end)};
    Json events = Json::array();
    for (const auto& ev : branch.events) {
      Json e;
      e["kind"] = to_string(ev.kind);
      e["mu"] = ev.mu;
      e["x"] = ev.x;
      e["y"] = ev.y;
      if (ev.kind == continuation::EventKind::Hopf) e["omega"] = ev.omega;
      events.push_back(std::move(e));
    }
    info["events"] = std::move(events);
    branch_list.push_back(std::move(info));

    std::printf("branch %02zu: %s x%d, %zu points, stable fraction %.3f, "
                "%zu events\n",
                b, to_string(branch.label), branch.multiplicity,
                branch.points.size(), continuation::stable_fraction(branch),
                branch.events.size());
  }
  j["branches"] = std::move(branch_list);
  write_json(out / "diagram.json", j);

  std::printf("scenario: %s (%zu branches)\n", to_string(diagram.scenario),
              diagram.branches.size());
  return 0;
}

int cmd_simulate(const Invocation& inv) {
  const fs::path out = prepare_out_dir(inv);
  const auto ini = config::Ini::parse_file(inv.config_path);
  config::Reader r(ini);

  normal_form::Coefficients coeffs = read_coefficients(r);
  const int m = read_mode_m(r, "coefficients");
  dynamics::SimSettings settings;
  const double z1_re = r.number("simulate", "z1_re", 0.0);
  const double z1_im = r.number("simulate", "z1_im", 0.0);
  const double z2_re = r.number("simulate", "z2_re", 0.0);
  const double z2_im = r.number("simulate", "z2_im", 0.0);
  settings.t_end = r.number("simulate", "t_end", settings.t_end);
  settings.dt_sample = r.number("simulate", "dt_sample", settings.dt_sample);
  settings.rel_tol = r.number("simulate", "rel_tol", settings.rel_tol);
  settings.abs_tol = r.number("simulate", "abs_tol", settings.abs_tol);
  const double tail_fraction = r.number("simulate", "tail_fraction", 0.5);
  const double classify_tol = r.number("simulate", "classify_tol", 1e-6);
  if (!(settings.t_end > 0.0) || !(settings.dt_sample > 0.0) ||
      settings.dt_sample > settings.t_end)
    r.error("simulate needs 0 < dt_sample <= t_end");
  if (!(settings.rel_tol > 0.0) || !(settings.abs_tol > 0.0))
    r.error("simulate tolerances must be positive");
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0 || !(classify_tol > 0.0))
    r.error("simulate needs tail_fraction in (0, 1] and classify_tol > 0");
  r.finish();

  const symmetry::ModePair modes(m);
  const auto warnings = normal_form::degeneracy_warnings(coeffs);
  const symmetry::Amplitudes z0{{z1_re, z1_im}, {z2_re, z2_im}};

  dynamics::Trajectory traj;
  std::string abort_reason;
  try {
    traj = dynamics::integrate(coeffs, modes, z0, settings);
  } catch (const dynamics::BlowupError& e) {
    traj = e.partial;
    abort_reason = e.what();
  } catch (const dynamics::StepSizeUnderflow& e) {
    traj = e.partial;
    abort_reason = e.what();
  }

  io::Table table;
  table.comments = meta_lines("simulate", r, warnings);
  if (!abort_reason.empty())
    table.comment("aborted: " + abort_reason);
  table.header = {"t", "re_z1", "im_z1", "re_z2", "im_z2", "u", "v", "w"};
  for (const auto& s : traj.samples) {
    const auto inv3 = symmetry::invariants(s.z, modes);
    table.row({fmt(s.t), fmt(s.z.z1.real()), fmt(s.z.z1.imag()),
               fmt(s.z.z2.real()), fmt(s.z.z2.imag()), fmt(inv3.u),
               fmt(inv3.v), fmt(inv3.w)});
  }
  io::write_text_atomic((out / "trajectory.csv").string(), table.render());

  Json j;
  j["meta"] = meta_json("simulate", r, warnings);
  j["samples"] = traj.samples.size();
  j["steps_accepted"] = traj.steps_accepted;
  j["steps_rejected"] = traj.steps_rejected;

  const symmetry::Amplitudes last =
      traj.samples.empty() ? z0 : traj.samples.back().z;
  Json final_state;
  final_state["re_z1"] = last.z1.real();
  final_state["im_z1"] = last.z1.imag();
  final_state["re_z2"] = last.z2.real();
  final_state["im_z2"] = last.z2.imag();
  j["final_state"] = std::move(final_state);

  if (!abort_reason.empty()) {
    j["kind"] = "aborted";
    j["error"] = abort_reason;
    write_json(out / "classification.json", j);
    std::fprintf(stderr, "integration aborted: %s\n", abort_reason.c_str());
    std::printf("wrote %zu samples up to the failure point\n",
                traj.samples.size());
    return 3;
  }

  const auto cls = dynamics::classify(traj, modes, tail_fraction, classify_tol);
  j["kind"] = to_string(cls.kind);
  if (cls.kind == dynamics::AttractorKind::RotatingWave)
    j["drift_rate"] = cls.drift_rate;
  if (cls.kind == dynamics::AttractorKind::StandingWave)
    j["period"] = cls.period;
  write_json(out / "classification.json", j);

  std::printf("classification: %s", to_string(cls.kind));
  if (cls.kind == dynamics::AttractorKind::RotatingWave)
    std::printf(" (drift rate %s)", fmt(cls.drift_rate).c_str());
  if (cls.kind == dynamics::AttractorKind::StandingWave)
    std::printf(" (period %s)", fmt(cls.period).c_str());
  std::printf("\n");
  return 0;
}

int cmd_render(const Invocation& inv) {
  const fs::path out = prepare_out_dir(inv);
  const auto ini = config::Ini::parse_file(inv.config_path);
  config::Reader r(ini);

  const std::string source = r.text("render", "source", "synthetic");
  const int m = read_mode_m(r, "render");
  const double z1_re = r.number("render", "z1_re", 1.0);
  const double z1_im = r.number("render", "z1_im", 0.0);
  const double z2_re = r.number("render", "z2_re", 0.0);
  const double z2_im = r.number("render", "z2_im", 0.0);
  const int n_r = static_cast<int>(r.integer("render", "n_r", 64));
  const int n_theta = static_cast<int>(r.integer("render", "n_theta", 256));
  if (n_r < 2 || n_theta < 4)
    r.error("render needs n_r >= 2 and n_theta >= 4");
  if (source != "synthetic" && source != "eigenmode")
    r.error("render.source must be 'synthetic' or 'eigenmode', got '" + source +
            "'");

  const symmetry::Amplitudes z{{z1_re, z1_im}, {z2_re, z2_im}};
  Eigen::MatrixXd field;
  if (source == "eigenmode") {
    pde::StabilityConfig cfg = read_model(inv, r);
    const double rayleigh = r.require_number("render", "rayleigh");
    r.finish();
    pde::validate(cfg);
    const symmetry::ModePair modes(m);
    const auto mode1 = pde::leading_mode(cfg, modes.lower(), rayleigh);
    const auto mode2 = pde::leading_mode(cfg, modes.upper(), rayleigh);
    field = pattern::synthesize(z, modes, mode1.grid, mode1.streamfunction,
                                mode2.streamfunction, n_theta);
  } else {
    const double eta = r.number("render", "eta", 0.5);
    if (!(eta > 0.0) || !(eta < 1.0))
      r.error("render.eta must lie strictly between 0 and 1");
    r.finish();
    const symmetry::ModePair modes(m);
    const double r_inner = eta / (1.0 - eta);
    field = pattern::synthesize(z, modes, r_inner, r_inner + 1.0, n_r, n_theta);
  }

  io::write_text_atomic((out / "pattern.pgm").string(),
                        io::encode_pgm(pattern::to_gray(field)));

  try {
    const int pairs = pattern::count_vortex_pairs(field);
    std::printf("vortex pairs along the middle ring: %d\n", pairs);
  } catch (const DegenerateField&) {
    std::printf("field is uniformly zero; wrote a flat mid-gray image\n");
  }
  return 0;
}

}  // namespace annulus::cli
