#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "irtpart/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"IRT-guided train/test partitioning pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool offline = false;

  auto* matrix = app.add_subcommand("matrix", "build folds, model specs, and the response matrix");
  auto* calibrate = app.add_subcommand("calibrate", "estimate item parameters per fold");
  auto* evaluate = app.add_subcommand("evaluate", "build partitions, tune, score, and test");
  auto* plotdata = app.add_subcommand("plotdata", "emit plot-ready CSVs from the report");
  for (auto* sub : {matrix, calibrate, evaluate, plotdata}) {
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--seed", seed, "override the root seed");
    sub->add_option("--out", out_dir, "override the output directory");
    sub->add_flag("--offline", offline, "fail instead of touching the network");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    auto* sub = app.get_subcommands().front();
    irtpart::RunConfig cfg = irtpart::parse_config(irtpart::detail::read_file(config_path));
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--out")) cfg.out_dir = out_dir;
    if (offline) cfg.offline = true;

    if (sub == matrix)
      irtpart::cmd_matrix(cfg);
    else if (sub == calibrate)
      irtpart::cmd_calibrate(cfg);
    else if (sub == evaluate)
      irtpart::cmd_evaluate(cfg);
    else
      irtpart::cmd_plotdata(cfg);
    return 0;
  } catch (const irtpart::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
