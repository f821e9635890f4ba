// Command-line front end: one subcommand per pipeline stage.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "spkl/config.hpp"
#include "spkl/error.hpp"
#include "spkl/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  std::string stage_out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  bool deterministic = false;
};

spkl::RunConfig resolve(const Options& o) {
  spkl::RunConfig c = spkl::load_config(o.config);
  if (!o.stage_out.empty()) c.output_dir = o.stage_out;
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.train.workers = *o.workers;
  if (o.deterministic) c.train.workers = 1;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speaker-landscape toolkit"};
  app.require_subcommand(1, 1);

  Options opt;
  app.add_option("--config", opt.config, "configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--stage-out", opt.stage_out, "artifact directory (overrides run.output_dir)");
  app.add_option("--seed", opt.seed, "master seed (overrides run.seed)");
  app.add_option("--workers", opt.workers, "training threads")->check(CLI::PositiveNumber);
  app.add_flag("--deterministic", opt.deterministic, "force a single training thread");
  // Options may follow the subcommand as well.
  app.fallthrough();

  const char* descriptions[][2] = {
      {"synth", "generate a planted synthetic corpus"},
      {"ingest", "select the cohort from a comment dump"},
      {"preprocess", "clean the cohort and inject speaker tokens"},
      {"train", "train skip-gram embeddings"},
      {"analyze", "concentration, audience shift and topic affinity tables"},
      {"project", "2-D layout of speaker points"},
      {"plot", "SVG figures"},
      {"pipeline", "ingest through plot"},
  };
  for (const auto& d : descriptions) app.add_subcommand(d[0], d[1]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    const spkl::RunConfig config = resolve(opt);
    if (stage == "pipeline") {
      spkl::run_pipeline(config, std::cerr);
    } else {
      spkl::run_stage(stage, config, std::cerr);
    }
  } catch (const spkl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const spkl::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const spkl::InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
