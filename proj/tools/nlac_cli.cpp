#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlac/config.hpp"
#include "nlac/experiments.hpp"
#include "nlac/initial_conditions.hpp"
#include "nlac/kernel.hpp"
#include "nlac/potentials.hpp"
#include "nlac/spectral.hpp"
#include "nlac/stepper.hpp"

using namespace nlac;

namespace {

using Driver = int (*)(const KeyValueConfig&, const std::string&);

struct SubArgs {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  CLI::Option* seed_opt = nullptr;
  CLI::App* sub = nullptr;
  Driver driver = nullptr;
};

int dispatch(const SubArgs& a) {
  KeyValueConfig cfg = KeyValueConfig::parse_file(a.config);
  if (a.seed_opt->count() > 0) cfg.set("run.seed", std::to_string(a.seed));
  for (const std::string& o : a.overrides) cfg.apply_override(o);
  return a.driver(cfg, a.out);
}

// Quick wiring checks that need no configuration file: proximal pins, the
// FFT convolution against a direct sum, a spectral round trip, a pure-phase
// energy. Failures here mean the build is broken, not the physics.
int selftest() {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::printf("selftest: %-38s %s\n", name, ok ? "ok" : "FAILED");
    failures += !ok;
  };

  check("obstacle prox clamps",
        prox(PotentialSpec::obstacle(1.0), {203.0, 1}, 5.0) == 1.0 &&
            prox(PotentialSpec::obstacle(1.0), {203.0, 1}, -0.25) == -0.25);
  check("quartic prox solves s^3 + s = 2",
        std::fabs(prox(PotentialSpec::regular(1.0), {1.0, 1}, 2.0) - 1.0) <= 1e-15);
  check("logarithmic prox pinned value",
        std::fabs(prox(PotentialSpec::logarithmic(1.0, 0.2), {1.0, 1}, 0.3) -
                  0.24910774098973265) <= 1e-12);
  check("analytic interaction constant",
        KernelSpec{0.1, 0.1, 1}.analytic_c_gamma() == 4.0);

  {
    const Grid g = make_grid(1, {16, 1, 1}, {1.0, 0.0, 0.0});
    SpectralContext ctx(g);
    const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.15, 1}, g, ctx);
    Field u = make_field(g);
    for (int i = 0; i < 16; ++i) u.data[i] = std::sin(0.7 * i + 0.3);
    const Field fft = circular_convolve(u, k, ctx);
    double worst = 0.0;
    const double vol = g.cell_volume();
    for (int i = 0; i < 16; ++i) {
      double direct = 0.0;
      for (int j = 0; j < 16; ++j)
        direct += k.values.data[((i - j) % 16 + 16) % 16] * u.data[j];
      worst = std::max(worst, std::fabs(fft.data[i] - vol * direct));
    }
    check("fft convolution matches direct sum", worst <= 1e-12 * max_abs(u));

    const double e = energy_discrete(make_field(g, 1.0), k, PotentialSpec::obstacle(1.0),
                                     ctx);
    check("pure phase has zero obstacle energy", std::fabs(e) <= 1e-12);
  }

  {
    const Grid g = make_grid(2, {8, 8, 1}, {1.0, 1.0, 0.0});
    SpectralContext ctx(g);
    Field u = make_field(g);
    for (std::size_t i = 0; i < u.data.size(); ++i) u.data[i] = std::cos(0.1 * i) - 0.4;
    const Field back = ctx.dft_inverse(ctx.dft_forward(u));
    double worst = 0.0;
    for (std::size_t i = 0; i < u.data.size(); ++i)
      worst = std::max(worst, std::fabs(back.data[i] - u.data[i]));
    check("spectral round trip", worst <= 1e-13 * max_abs(u));
  }

  std::printf(failures == 0 ? "selftest passed\n" : "selftest failed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal Allen-Cahn solver (obstacle, quartic and logarithmic wells)"};
  app.require_subcommand(1);

  const struct {
    const char* name;
    const char* help;
    Driver driver;
  } commands[] = {
      {"evolve", "run one simulation: energy trace, snapshots and a manifest", run_evolve},
      {"converge", "tau-halving error ladder against an implicit benchmark", run_converge},
      {"cost", "convolution-count vs error ladder (energy tracking off)", run_cost},
      {"coupled", "non-isothermal run with heat flow and undercooling", run_coupled_experiment},
  };

  SubArgs args[4];
  for (int i = 0; i < 4; ++i) {
    SubArgs& a = args[i];
    a.driver = commands[i].driver;
    a.sub = app.add_subcommand(commands[i].name, commands[i].help);
    a.sub->add_option("--config", a.config, "key=value configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    a.sub->add_option("--out", a.out, "output directory (created if missing)");
    a.seed_opt = a.sub->add_option("--seed", a.seed,
                                   "seed for random initial conditions (sets run.seed)");
    a.sub->add_option("--override", a.overrides,
                      "section.key=value applied after the file; repeatable");
  }
  CLI::App* self = app.add_subcommand("selftest", "quick built-in wiring checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (self->parsed()) return selftest();
    for (const SubArgs& a : args)
      if (a.sub->parsed()) return dispatch(a);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
