// silradar command-line front end: run, antenna, validate.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "silradar/pipeline.hpp"
#include "silradar/scenario.hpp"

namespace {

enum Exit : int { ok = 0, scenario_error = 2, runtime_error = 3, estimation_error = 4 };

struct Options {
  std::string scenario_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_s;
};

silradar::Scenario load(const Options& opt) {
  silradar::Scenario s =
      opt.scenario_path.empty() ? silradar::Scenario{} : silradar::load_scenario_file(opt.scenario_path);
  if (opt.out_dir) s.run.output_dir = *opt.out_dir;
  if (opt.seed) s.channel.rng_seed = *opt.seed;
  if (opt.duration_s) s.run.duration_s = *opt.duration_s;
  s.validate();
  return s;
}

void add_common(CLI::App* cmd, Options& opt, bool outputs) {
  cmd->add_option("--scenario", opt.scenario_path, "scenario file (defaults apply when omitted)");
  if (!outputs) return;
  cmd->add_option("--out", opt.out_dir, "output directory (overrides run.output_dir)");
  cmd->add_option("--seed", opt.seed, "noise seed (overrides run.seed)");
  cmd->add_option("--duration", opt.duration_s, "record length in seconds (overrides run.duration_s)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Through-wall SIL radar vital-sign simulator"};
  app.require_subcommand(1);

  Options opt;
  auto* run = app.add_subcommand("run", "simulate the radar chain and estimate vital rates");
  auto* antenna = app.add_subcommand("antenna", "analyse the antenna model and write pattern.csv");
  auto* validate = app.add_subcommand("validate", "parse and validate a scenario");
  add_common(run, opt, true);
  add_common(antenna, opt, true);
  add_common(validate, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Exit::ok : Exit::scenario_error;
  }

  try {
    const silradar::Scenario s = load(opt);
    if (*validate) {
      std::cout << silradar::serialize_scenario(s);
    } else if (*run) {
      const auto report = silradar::run_pipeline(s, s.run.output_dir);
      std::cout << report.render(s);
    } else if (*antenna) {
      const auto report = silradar::analyze_antenna(s, s.run.output_dir);
      std::cout << report.render();
    }
    return Exit::ok;
  } catch (const silradar::ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::scenario_error;
  } catch (const silradar::PipelineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.cause() == silradar::PipelineError::Cause::estimation ? Exit::estimation_error
                                                                   : Exit::runtime_error;
  } catch (const silradar::EstimationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::estimation_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::runtime_error;
  }
}
