// fhlab: scenario runner.
//
//   fhlab run <axioms|extend|moyal-check|quantize|representation> [flags]
//
// Exit status: 0 all assertions pass, 2 an assertion failed (report still
// written), 1 usage or input error.

#include <chrono>
#include <ctime>
#include <iostream>

#include "CLI11.hpp"
#include "fhlab/scenario.hpp"

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for Frechet-Hilbert algebras"};
  app.require_subcommand(1);
  fhlab::ScenarioConfig cfg;
  std::size_t dim = 0, samples = 0;

  auto* run = app.add_subcommand("run", "Run a scenario and write its report");
  run->fallthrough();
  run->footer("Flags are global: see fhlab --help.");
  run->add_option("scenario", cfg.scenario, "axioms | extend | moyal-check | quantize | representation")->required();
  app.set_config("--config", "", "Config file (TOML/INI); flags given on the command line take precedence");
  app.add_option("--model", cfg.model, "pointwise | matrix | transported")->capture_default_str();
  app.add_option("--family", cfg.family, "weyl-heisenberg:<n> | random:<N>,<d>,<seed> | file:<path>")
      ->capture_default_str();
  auto* dim_opt = app.add_option("--dim", dim, "Truncation size of the model");
  app.add_option("--ladder", cfg.ladder, "Truncation ladder, e.g. 16,32,64")->delimiter(',');
  app.add_option("--seed", cfg.seed, "Corpus seed")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Tolerance")->capture_default_str();
  app.add_option("--out", cfg.out, "Report path (JSON); CSV and metadata are written next to it");
  app.add_option("--mutate", cfg.mutations, "Planted defect key=value (involution=transpose, product=dropconj)");
  auto* samples_opt = app.add_option("--samples", samples, "Corpus size");
  app.add_option("--element", cfg.element, "Element file (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (dim_opt->count()) cfg.dim = dim;
  if (samples_opt->count()) cfg.samples = samples;

  try {
    const auto start = std::chrono::steady_clock::now();
    const auto result = fhlab::run_scenario(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cfg.out.empty()) {
      std::cout << result.report.dump(2) << "\n";
    } else {
      fhlab::io::Json meta{{"generated_at", utc_now()}, {"wall_seconds", seconds}, {"report", cfg.out}};
      fhlab::write_outputs(result, cfg.out, meta);
    }
    for (const auto& a : result.assertions)
      if (!a.pass) std::cerr << "FAIL " << a.name << " (value " << a.value << ", limit " << a.limit << ")\n";
    return result.exit_code();
  } catch (const fhlab::FormatError& e) {
    std::cerr << "error: malformed input, field " << e.field() << ": " << e.what() << "\n";
    return 1;
  } catch (const fhlab::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
