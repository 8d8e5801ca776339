#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "annulus/errors.hpp"
#include "commands.hpp"

// Exit codes: 0 success, 2 configuration or validation problem, 3 numerical
// failure, 4 I/O failure, 1 anything unexpected.

int main(int argc, char** argv) {
  CLI::App app{"annular two-mode convection toolkit"};
  app.require_subcommand(1);

  annulus::cli::Invocation inv;
  int (*run)(const annulus::cli::Invocation&) = nullptr;

  const auto add_verb = [&](const char* name, const char* description,
                            int (*fn)(const annulus::cli::Invocation&)) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", inv.config_path, "configuration file (INI)")
        ->required();
    sub->add_option("--out", inv.out_dir, "output directory")->required();
    sub->add_option("--threads", inv.threads, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", inv.seed,
                    "random seed (reserved; no stochastic paths yet)");
    sub->callback([&run, fn] { run = fn; });
    return sub;
  };

  add_verb("neutral", "neutral Rayleigh numbers over a mode/eta grid",
           annulus::cli::cmd_neutral);
  add_verb("codim2", "radius ratio where adjacent modes onset together",
           annulus::cli::cmd_codim2);
  add_verb("diagram", "steady-state bifurcation diagram of the amplitude equations",
           annulus::cli::cmd_diagram);
  add_verb("simulate", "time integration and attractor classification",
           annulus::cli::cmd_simulate);
  add_verb("render", "streamfunction raster of a two-mode state",
           annulus::cli::cmd_render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly, bad usage is 2
  }

  try {
    return run(inv);
  } catch (const annulus::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const annulus::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const annulus::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
}
