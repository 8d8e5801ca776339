// End-to-end tests of the command-line tool: exit codes, file formats,
// and rerun determinism. Each case spawns the installed binary with a
// config written into a scratch directory, so these tests see exactly what
// a user sees.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "annulus_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "run.log";
  const std::string cmd = std::string("\"") + ANNULUS_CLI_PATH + "\" " + args +
                          " > \"" + log.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.output = read_file(log);
  return r;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Amplitude-equation coefficients of the smooth-exchange reference set.
std::string smooth_coefficients() {
  return "[coefficients]\n"
         "m = 5\n"
         "mu = 0\n"
         "delta = 0.1\n"
         "a11 = -1\n"
         "a12 = -0.5\n"
         "a21 = -1.5\n"
         "a22 = -1\n";
}

std::string gfd_neutral_config() {
  return "[model]\n"
         "type = gfd\n"
         "eta = 0.5\n"
         "resolution = 24\n"
         "[neutral]\n"
         "m_min = 4\n"
         "m_max = 6\n";
}

}  // namespace

TEST_CASE("help exits cleanly and bad usage does not") {
  const auto dir = scratch_dir("usage");
  CHECK(run_cli("--help", dir).exit_code == 0);
  CHECK(run_cli("neutral --help", dir).exit_code == 0);
  CHECK(run_cli("frobnicate --config a --out b", dir).exit_code == 2);
  CHECK(run_cli("neutral", dir).exit_code == 2);  // required options missing
}

TEST_CASE("a missing config file is an i/o failure") {
  const auto dir = scratch_dir("missing_config");
  const auto r = run_cli("neutral --config " + (dir / "nope.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 4);
  CHECK(contains(r.output, "cannot read configuration file"));
}

TEST_CASE("unknown config keys are flagged with their full name") {
  const auto dir = scratch_dir("typo");
  write_file(dir / "bad.ini",
             "[model]\ntype = gfd\neta = 0.5\nresolutoin = 24\n");
  const auto r = run_cli("neutral --config " + (dir / "bad.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "unknown key 'model.resolutoin'"));
}

TEST_CASE("the charged model without a measured profile is rejected") {
  const auto dir = scratch_dir("no_profile");
  write_file(dir / "ehd.ini",
             "[model]\ntype = ehd\ndelta = 0.1\nresolution = 24\n");
  const auto r = run_cli("neutral --config " + (dir / "ehd.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "charge"));
}

TEST_CASE("a sweep that cannot bracket any onset exits as a numerical failure") {
  const auto dir = scratch_dir("no_crossing");
  // An explicitly zeroed charge profile removes the only driving term, so
  // no Rayleigh number changes the sign of the growth rate.
  write_file(dir / "zero.dat", "0.9 0\n1.2 0\n1.5 0\n1.8 0\n2.1 0\n");
  write_file(dir / "ehd.ini",
             "[model]\ntype = ehd\neta = 0.5\ndelta = 0.1\nresolution = 24\n"
             "charge_sign = -1\nallow_zero_charge = true\n"
             "charge_profile = zero.dat\n"
             "[neutral]\nm_min = 2\nm_max = 3\n");
  const auto r = run_cli("neutral --config " + (dir / "ehd.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 3);
  CHECK(contains(r.output, "no neutral point located"));
  // The table is still written, with the convergence flag cleared.
  const auto lines = data_lines(read_file(dir / "out" / "neutral.csv"));
  REQUIRE(lines.size() == 3);  // header plus one row per mode
  CHECK(lines[1].back() == '0');
  CHECK(lines[2].back() == '0');
}

TEST_CASE("an empty continuation range is rejected up front") {
  const auto dir = scratch_dir("empty_range");
  write_file(dir / "d.ini", smooth_coefficients() +
                                "[continuation]\nmu_min = 0.2\nmu_max = 0.2\n");
  const auto r = run_cli("diagram --config " + (dir / "d.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "empty sweep range"));
}

TEST_CASE("an output path occupied by a file is an i/o failure") {
  const auto dir = scratch_dir("out_is_file");
  write_file(dir / "blocker", "occupied\n");
  write_file(dir / "n.ini", gfd_neutral_config());
  const auto r = run_cli("neutral --config " + (dir / "n.ini").string() +
                             " --out " + (dir / "blocker").string(),
                         dir);
  CHECK(r.exit_code == 4);
  CHECK(contains(r.output, "output directory"));
}

TEST_CASE("neutral writes the advertised table with its meta header") {
  const auto dir = scratch_dir("neutral_table");
  write_file(dir / "n.ini", gfd_neutral_config());
  const auto r = run_cli("neutral --config " + (dir / "n.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "minimizing m=5"));

  const std::string csv = read_file(dir / "out" / "neutral.csv");
  CHECK(csv.rfind("# tool: annulus neutral", 0) == 0);
  CHECK(contains(csv, "# config: model.eta = 0.5"));
  const auto lines = data_lines(csv);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "model,eta,m,Ra_n,converged");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i].rfind("gfd,", 0) == 0);
    CHECK(lines[i].back() == '1');
  }
  // The middle mode is the minimizer at this radius ratio; its onset value
  // is pinned from an independent run at the same resolution.
  std::istringstream row(lines[2]);
  std::string field;
  std::vector<std::string> fields;
  while (std::getline(row, field, ',')) fields.push_back(field);
  REQUIRE(fields.size() == 5);
  CHECK(fields[2] == "5");
  CHECK(std::stod(fields[3]) == doctest::Approx(1750.303206).epsilon(1e-6));
}

TEST_CASE("codim2 reports the frozen mode-exchange point") {
  const auto dir = scratch_dir("codim2");
  write_file(dir / "c.ini",
             "[model]\ntype = gfd\neta = 0.5\nresolution = 24\n"
             "[codim2]\nm = 12\neta_min = 0.72\neta_max = 0.84\n");
  const auto r = run_cli("codim2 --config " + (dir / "c.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(read_file(dir / "out" / "codim2.json"));
  CHECK(j["meta"]["tool"] == "annulus codim2");
  CHECK(j["m"] == 12);
  CHECK(j["eta_star"].get<double>() == doctest::Approx(0.778864).epsilon(1e-3));
  CHECK(j["ra_star"].get<double>() == doctest::Approx(1714.418544).epsilon(1e-4));
  CHECK(j["residual"].get<double>() <= 1e-6 * j["ra_star"].get<double>());
  CHECK(j["dlambda_dRa"].size() == 2);
}

TEST_CASE("diagram emits the scenario and one table per branch") {
  const auto dir = scratch_dir("diagram");
  write_file(dir / "d.ini", smooth_coefficients() +
                                "[continuation]\nmu_min = -0.3\nmu_max = 0.4\n");
  const auto r = run_cli("diagram --config " + (dir / "d.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(read_file(dir / "out" / "diagram.json"));
  CHECK(j["meta"]["tool"] == "annulus diagram");
  CHECK(j["mode_m"] == 5);
  CHECK(j["scenario"] == "smooth_transition");
  REQUIRE(j["branches"].size() >= 4);
  for (const auto& b : j["branches"]) {
    const fs::path table = dir / "out" / b["file"].get<std::string>();
    CHECK(fs::is_regular_file(table));
    const double frac = b["stable_fraction"].get<double>();
    CHECK(frac >= 0.0);
    CHECK(frac <= 1.0);
  }
  const auto lines = data_lines(read_file(dir / "out" / "branch_00.csv"));
  REQUIRE(!lines.empty());
  CHECK(lines[0] == "mu,x,y,stable,isotropy");
}

TEST_CASE("simulate settles onto the expected state on the full sample grid") {
  const auto dir = scratch_dir("simulate");
  write_file(dir / "s.ini",
             "[coefficients]\nm = 5\nmu = 0.075\ndelta = 0.1\n"
             "a11 = -1\na12 = -0.5\na21 = -3\na22 = -1\n"
             "[simulate]\nz1_re = 0.001\nz2_re = 0.418\n"
             "t_end = 400\ndt_sample = 1.0\n");
  const auto r = run_cli("simulate --config " + (dir / "s.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "classification: equilibrium"));

  const auto j =
      nlohmann::json::parse(read_file(dir / "out" / "classification.json"));
  CHECK(j["kind"] == "equilibrium");
  CHECK(j["samples"] == 401);
  // The surviving state is the pure upper-mode branch at this parameter.
  const double y = std::sqrt(0.175);
  CHECK(std::fabs(j["final_state"]["re_z2"].get<double>()) ==
        doctest::Approx(y).epsilon(1e-3));
  CHECK(std::fabs(j["final_state"]["re_z1"].get<double>()) <= 1e-3);

  const auto lines = data_lines(read_file(dir / "out" / "trajectory.csv"));
  REQUIRE(lines.size() == 402);  // header plus one row per sample
  CHECK(lines[0] == "t,re_z1,im_z1,re_z2,im_z2,u,v,w");
  CHECK(lines[1].rfind("0,", 0) == 0);
}

TEST_CASE("simulate surfaces a blow-up with the partial trajectory") {
  const auto dir = scratch_dir("blowup");
  write_file(dir / "s.ini",
             "[coefficients]\nm = 2\nmu = 0.5\na11 = 1\n"
             "[simulate]\nz1_re = 1.0\nt_end = 50\ndt_sample = 0.1\n");
  const auto r = run_cli("simulate --config " + (dir / "s.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 3);
  const std::string csv = read_file(dir / "out" / "trajectory.csv");
  CHECK(contains(csv, "# aborted: "));
  const auto j =
      nlohmann::json::parse(read_file(dir / "out" / "classification.json"));
  CHECK(j["kind"] == "aborted");
  CHECK(!j["error"].get<std::string>().empty());
  CHECK(j["samples"].get<int>() < 501);  // stopped before the full grid
}

TEST_CASE("render writes a raster of the advertised size") {
  const auto dir = scratch_dir("render");
  write_file(dir / "r.ini",
             "[render]\nsource = synthetic\nm = 4\nz1_re = 1.0\nz2_re = 0.3\n"
             "n_r = 48\nn_theta = 192\neta = 0.4\n");
  const auto r = run_cli("render --config " + (dir / "r.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "vortex pairs along the middle ring: 4"));

  const std::string pgm = read_file(dir / "out" / "pattern.pgm");
  const std::string header = "P5\n192 48\n255\n";
  REQUIRE(pgm.rfind(header, 0) == 0);
  CHECK(pgm.size() == header.size() + 192 * 48);
}

TEST_CASE("rendering the zero state yields a flat mid-gray image") {
  const auto dir = scratch_dir("render_zero");
  write_file(dir / "r.ini",
             "[render]\nsource = synthetic\nm = 3\nz1_re = 0\n"
             "n_r = 8\nn_theta = 16\n");
  const auto r = run_cli("render --config " + (dir / "r.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "uniformly zero"));
  const std::string pgm = read_file(dir / "out" / "pattern.pgm");
  const std::string header = "P5\n16 8\n255\n";
  REQUIRE(pgm.rfind(header, 0) == 0);
  REQUIRE(pgm.size() == header.size() + 16 * 8);
  for (std::size_t i = header.size(); i < pgm.size(); ++i)
    CHECK(static_cast<unsigned char>(pgm[i]) == 128);
}

TEST_CASE("an eigenmode render carries the computed radial structure") {
  const auto dir = scratch_dir("render_eigen");
  write_file(dir / "r.ini",
             "[model]\ntype = gfd\neta = 0.5\nresolution = 24\n"
             "[render]\nsource = eigenmode\nm = 5\nz1_re = 1.0\n"
             "n_theta = 128\nrayleigh = 1750.303206\n");
  const auto r = run_cli("render --config " + (dir / "r.ini").string() +
                             " --out " + (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "vortex pairs along the middle ring: 5"));
  // The raster rows come from the collocation grid, not render.n_r.
  const std::string pgm = read_file(dir / "out" / "pattern.pgm");
  CHECK(pgm.rfind("P5\n128 25\n255\n", 0) == 0);
}

TEST_CASE("reruns, seeds, and thread counts do not change the results") {
  const auto dir = scratch_dir("determinism");
  write_file(dir / "n.ini", gfd_neutral_config());
  const std::string base = "neutral --config " + (dir / "n.ini").string();

  CHECK(run_cli(base + " --out " + (dir / "a").string(), dir).exit_code == 0);
  CHECK(run_cli(base + " --out " + (dir / "b").string(), dir).exit_code == 0);
  CHECK(read_file(dir / "a" / "neutral.csv") ==
        read_file(dir / "b" / "neutral.csv"));

  // The seed is reserved for future stochastic paths; today it must be inert.
  write_file(dir / "r.ini",
             "[render]\nsource = synthetic\nm = 3\nz1_re = 0.8\nz2_re = 0.4\n"
             "n_r = 24\nn_theta = 96\n");
  const std::string render = "render --config " + (dir / "r.ini").string();
  CHECK(run_cli(render + " --out " + (dir / "s1").string() + " --seed 1", dir)
            .exit_code == 0);
  CHECK(run_cli(render + " --out " + (dir / "s2").string() + " --seed 2", dir)
            .exit_code == 0);
  CHECK(read_file(dir / "s1" / "pattern.pgm") ==
        read_file(dir / "s2" / "pattern.pgm"));

  // Thread counts may reorder the warm starts inside the solver, so the
  // values are compared numerically rather than byte for byte.
  CHECK(run_cli(base + " --out " + (dir / "t2").string() + " --threads 2", dir)
            .exit_code == 0);
  const auto serial = data_lines(read_file(dir / "a" / "neutral.csv"));
  const auto threaded = data_lines(read_file(dir / "t2" / "neutral.csv"));
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 1; i < serial.size(); ++i) {
    std::istringstream ra(serial[i]), rb(threaded[i]);
    std::string fa, fb;
    std::vector<std::string> va, vb;
    while (std::getline(ra, fa, ',')) va.push_back(fa);
    while (std::getline(rb, fb, ',')) vb.push_back(fb);
    REQUIRE(va.size() == 5);
    REQUIRE(vb.size() == 5);
    CHECK(va[2] == vb[2]);
    CHECK(std::stod(va[3]) ==
          doctest::Approx(std::stod(vb[3])).epsilon(1e-7));
  }
}
