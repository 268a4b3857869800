#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "irtpart/pipeline.hpp"

using namespace irtpart;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

std::string tiny_csv() {
  std::string text = "x,y,class\n";
  Rng rng(2024);
  for (int i = 0; i < 60; ++i) {
    const int label = i < 36 ? 0 : 1;  // "yes" is the minority
    const double cx = label ? 2.0 : -2.0;
    text += format_double(cx + rng.next_normal()) + "," +
            format_double(0.5 * cx + rng.next_normal()) + "," + (label ? "yes" : "no") + "\n";
  }
  return text;
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::path("pipeline_scratch") / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

std::string tiny_config_text(const fs::path& csv, const fs::path& out, std::uint64_t seed) {
  return "source = " + csv.string() + "\n" +
         "folds = 4\n"
         "models = 12\n"
         "seed = " + std::to_string(seed) + "\n" +
         "out = " + out.string() + "\n" +
         "families = decision_tree, knn, lda\n"
         "samples_per_family = 2\n"
         "inner_folds = 2\n";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(IRTPART_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("run configs parse with defaults, overrides, and name derivation", "[pipeline]") {
  const auto minimal = parse_config("source = data/heart.csv\n");
  CHECK(minimal.name == "heart");
  CHECK(minimal.folds == 10);
  CHECK(minimal.model_count == 100);
  CHECK(minimal.seed == 0);
  CHECK(minimal.out_dir == "run_out");
  CHECK(minimal.train_fraction == 0.7);
  CHECK(minimal.strategies.empty());
  CHECK(minimal.families.empty());
  CHECK(minimal.tuning.samples_per_family == 30);
  CHECK(minimal.tuning.inner_folds == 5);
  CHECK(minimal.tuning.selection_metric == "accuracy");
  CHECK(minimal.calibration.quadrature_points == 21);
  CHECK_FALSE(minimal.offline);
  CHECK(minimal.config_digest.size() == 16);

  CHECK(parse_config("source = openml:31\n").name == "openml_31");
  CHECK(parse_config("source = x.csv\nname = custom\n").name == "custom");

  const auto full = parse_config(
      "# full override\n"
      "source = d.arff\n"
      "target = outcome\n"
      "positive_label = sick\n"
      "folds = 5\n"
      "models = 40\n"
      "seed = 99\n"
      "out = elsewhere\n"
      "strategies = Random_0, Dif_balanced\n"
      "families = knn, mlp\n"
      "train_fraction = 0.8\n"
      "quadrature_points = 31\n"
      "max_em_iters = 200\n"
      "loglik_tol = 0.001\n"
      "c_max = 0.9\n"
      "a_max = 25\n"
      "b_max = 5\n"
      "samples_per_family = 10\n"
      "inner_folds = 3\n"
      "selection_metric = f1\n"
      "offline = yes\n"
      "cache_dir = /tmp/c\n"
      "base_url = http://localhost:1\n");
  CHECK(full.target_name == "outcome");
  CHECK(full.positive_label == "sick");
  CHECK(full.folds == 5);
  CHECK(full.model_count == 40);
  CHECK(full.seed == 99);
  CHECK(full.out_dir == "elsewhere");
  CHECK(full.strategies == std::vector<std::string>{"Random_0", "Dif_balanced"});
  CHECK(full.families == std::vector<std::string>{"knn", "mlp"});
  CHECK(full.train_fraction == 0.8);
  CHECK(full.calibration.quadrature_points == 31);
  CHECK(full.calibration.max_em_iters == 200);
  CHECK(full.calibration.loglik_tol == 0.001);
  CHECK(full.calibration.c_max == 0.9);
  CHECK(full.calibration.a_max == 25.0);
  CHECK(full.calibration.b_max == 5.0);
  CHECK(full.tuning.samples_per_family == 10);
  CHECK(full.tuning.inner_folds == 3);
  CHECK(full.tuning.selection_metric == "f1");
  CHECK(full.offline);
  CHECK(full.cache_dir == "/tmp/c");
  CHECK(full.base_url == "http://localhost:1");
  CHECK(full.config_digest != minimal.config_digest);
}

TEST_CASE("run configs reject bad keys, values, and filters", "[pipeline]") {
  CHECK_THROWS_WITH(parse_config("source = a.csv\nbogus = 1\n"), ContainsSubstring("line 2"));
  CHECK_THROWS_WITH(parse_config("source = a.csv\nstrategies =\n"),
                    ContainsSubstring("strategies filter is empty"));
  CHECK_THROWS_WITH(parse_config("source = a.csv\nfamilies = ,\n"),
                    ContainsSubstring("families filter is empty"));
  CHECK_THROWS_WITH(parse_config("folds = 3\n"), ContainsSubstring("'source' is required"));
  CHECK_THROWS_AS(parse_config("source = a.csv\nfolds = 0\n"), DataError);
  CHECK_THROWS_AS(parse_config("source = a.csv\ntrain_fraction = 1\n"), DataError);
  CHECK_THROWS_AS(parse_config("source = a.csv\ntrain_fraction = 0\n"), DataError);
  CHECK_THROWS_AS(parse_config("source = a.csv\nstrategies = Dif_sideways\n"), DataError);
  CHECK_THROWS_AS(parse_config("source = a.csv\noffline = maybe\n"), DataError);
  CHECK_THROWS_AS(parse_config("source = a.csv\nno equals sign\n"), DataError);
}

TEST_CASE("pipeline stages produce their artifacts and reproduce bytes", "[pipeline]") {
  Scratch scratch("full_run");
  const fs::path csv = scratch.dir / "data.csv";
  detail::write_file_atomic(csv, tiny_csv());

  const fs::path out_a = scratch.dir / "out_a";
  const auto cfg = parse_config(tiny_config_text(csv, out_a, 5));
  const RunPaths paths(out_a);

  cmd_matrix(cfg);
  REQUIRE(fs::exists(paths.dataset_csv()));
  REQUIRE(fs::exists(paths.dataset_meta_json()));
  REQUIRE(fs::exists(paths.folds_csv()));
  REQUIRE(fs::exists(paths.model_specs_csv()));
  REQUIRE(fs::exists(paths.response_matrix_csv()));
  REQUIRE(fs::exists(paths.matrix_diagnostics_csv()));
  CHECK_FALSE(fs::exists(paths.lock_file()));

  const auto meta = nlohmann::json::parse(detail::read_file(paths.dataset_meta_json()));
  CHECK(meta.at("target") == "class");
  CHECK(meta.at("positive_label") == "yes");
  CHECK(meta.at("instances") == 60);
  CHECK(meta.at("positives") == 24);

  const auto matrix = import_matrix(detail::read_file(paths.response_matrix_csv()));
  CHECK(matrix.models() == 12);
  CHECK(matrix.items() == 60);

  cmd_calibrate(cfg);
  REQUIRE(fs::exists(paths.item_parameters_csv()));
  const auto items = items_from_csv(detail::read_file(paths.item_parameters_csv()));
  CHECK(items.size() == 60);
  const auto summary = nlohmann::json::parse(detail::read_file(paths.calibration_summary_json()));
  CHECK(summary.at("items") == 60);
  CHECK(summary.at("folds").size() == 4);
  CHECK(summary.at("flag_counts").size() == 4);
  CHECK(summary.at("parameter_means").contains("difficulty"));

  cmd_evaluate(cfg);
  REQUIRE(fs::exists(paths.report_json()));
  REQUIRE(fs::exists(paths.report_csv()));
  const auto report = nlohmann::json::parse(detail::read_file(paths.report_json()));
  CHECK(report.at("dataset") == "data");
  CHECK(report.at("strategies").size() == 12);
  for (const auto& strat : report.at("strategies")) {
    REQUIRE(strat.at("families").size() == 3);
    for (const auto& fam : strat.at("families")) CHECK(fam.at("ok") == true);
    CHECK(fs::exists(paths.partition_csv(strat.at("strategy").get<std::string>())));
  }
  REQUIRE_FALSE(report.at("statistics").is_null());
  const auto& stats = report.at("statistics");
  CHECK(stats.at("strategies").size() == 12);
  CHECK(stats.at("nemenyi_p").size() == 12);
  double rank_sum = 0;
  for (const auto& [name, rank] : stats.at("mean_ranks").items()) {
    (void)name;
    rank_sum += rank.get<double>();
  }
  CHECK(rank_sum == Catch::Approx(12.0 * 13.0 / 2.0).margin(1e-9));
  REQUIRE(fs::exists(paths.nemenyi_csv("data")));

  cmd_plotdata(cfg);
  for (const auto& plot :
       {paths.box_accuracy_csv(), paths.bar_mcc_csv(), paths.line_f1_csv(), paths.heatmap_nemenyi_csv()}) {
    REQUIRE(fs::exists(plot));
  }
  const auto box = parse_csv_records(detail::read_file(paths.box_accuracy_csv()));
  REQUIRE(box.size() == 4);  // header + one row per family
  CHECK(box[0][0] == "family");
  CHECK(box[0].size() == 13);
  CHECK(box[1][0] == "decision_tree");
  for (const auto& rec : box) CHECK(rec.size() == 13);
  const auto heat = parse_csv_records(detail::read_file(paths.heatmap_nemenyi_csv()));
  REQUIRE(heat.size() == 13);
  CHECK(heat[0][0] == "strategy");

  const auto manifest = nlohmann::json::parse(detail::read_file(paths.manifest_json()));
  CHECK(manifest.at("tool") == "irt-partition");
  CHECK(manifest.at("dataset") == "data");
  for (const char* stage : {"matrix", "calibrate", "evaluate", "plotdata"})
    CHECK(manifest.at("stages").contains(stage));
  CHECK(manifest.at("artifacts").at("response_matrix.csv").get<std::string>().size() == 16);
  CHECK(manifest.at("artifacts").contains("plots/box_accuracy.csv"));

  // identical rerun into a second directory: every artifact byte-equal
  const fs::path out_b = scratch.dir / "out_b";
  const auto cfg_b = parse_config(tiny_config_text(csv, out_b, 5));
  cmd_matrix(cfg_b);
  cmd_calibrate(cfg_b);
  cmd_evaluate(cfg_b);
  cmd_plotdata(cfg_b);
  const RunPaths paths_b(out_b);
  std::vector<std::pair<fs::path, fs::path>> pairs = {
      {paths.dataset_csv(), paths_b.dataset_csv()},
      {paths.folds_csv(), paths_b.folds_csv()},
      {paths.model_specs_csv(), paths_b.model_specs_csv()},
      {paths.response_matrix_csv(), paths_b.response_matrix_csv()},
      {paths.matrix_diagnostics_csv(), paths_b.matrix_diagnostics_csv()},
      {paths.item_parameters_csv(), paths_b.item_parameters_csv()},
      {paths.calibration_summary_json(), paths_b.calibration_summary_json()},
      {paths.report_json(), paths_b.report_json()},
      {paths.report_csv(), paths_b.report_csv()},
      {paths.nemenyi_csv("data"), paths_b.nemenyi_csv("data")},
      {paths.box_accuracy_csv(), paths_b.box_accuracy_csv()},
      {paths.bar_mcc_csv(), paths_b.bar_mcc_csv()},
      {paths.line_f1_csv(), paths_b.line_f1_csv()},
      {paths.heatmap_nemenyi_csv(), paths_b.heatmap_nemenyi_csv()},
  };
  for (const auto& strat : report.at("strategies")) {
    const auto name = strat.at("strategy").get<std::string>();
    pairs.emplace_back(paths.partition_csv(name), paths_b.partition_csv(name));
  }
  for (const auto& [pa, pb] : pairs) {
    INFO(pa.string());
    CHECK(detail::read_file(pa) == detail::read_file(pb));
  }

  // a different seed must change the sampled models and the matrix
  const fs::path out_c = scratch.dir / "out_c";
  cmd_matrix(parse_config(tiny_config_text(csv, out_c, 6)));
  const RunPaths paths_c(out_c);
  CHECK(detail::read_file(paths.response_matrix_csv()) !=
        detail::read_file(paths_c.response_matrix_csv()));
  CHECK(detail::read_file(paths.model_specs_csv()) !=
        detail::read_file(paths_c.model_specs_csv()));
}

TEST_CASE("evaluate builds missing prerequisites itself", "[pipeline]") {
  Scratch scratch("chain");
  const fs::path csv = scratch.dir / "data.csv";
  detail::write_file_atomic(csv, tiny_csv());
  const fs::path out = scratch.dir / "out";
  auto text = tiny_config_text(csv, out, 3);
  text += "strategies = Random_0, Random_1, Random_2, Dif_balanced\n";
  const auto cfg = parse_config(text);

  cmd_evaluate(cfg);

  const RunPaths paths(out);
  CHECK(fs::exists(paths.response_matrix_csv()));
  CHECK(fs::exists(paths.item_parameters_csv()));
  CHECK(fs::exists(paths.report_json()));
  std::size_t partition_files = 0;
  for (const auto& entry : fs::directory_iterator(paths.partitions_dir())) {
    (void)entry;
    ++partition_files;
  }
  CHECK(partition_files == 4);
  const auto report = nlohmann::json::parse(detail::read_file(paths.report_json()));
  CHECK_FALSE(report.at("statistics").is_null());
}

TEST_CASE("evaluate runs from hand-written artifacts and skips one-family stats", "[pipeline]") {
  Scratch scratch("compose");
  const fs::path out = scratch.dir / "out";
  fs::create_directories(out);
  const RunPaths paths(out);

  std::string csv_text = "v,class\n";
  for (int i = 0; i < 24; ++i)
    csv_text += std::to_string(i) + "," + (i % 3 == 0 ? "pos" : "neg") + "\n";
  const Dataset ds = parse_csv(csv_text, "class", "pos");
  detail::write_file_atomic(paths.dataset_csv(), to_csv(ds));
  nlohmann::json meta;
  meta["target"] = "class";
  meta["positive_label"] = "pos";
  detail::write_file_atomic(paths.dataset_meta_json(), meta.dump(2) + "\n");

  std::vector<ItemParameters> items(ds.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    items[i].item_id = ds.instance_ids[i];
    items[i].discrimination = 1.0 + 0.01 * (double)i;
    items[i].difficulty = -2.0 + 4.0 * (double)i / 23.0;
    items[i].guessing = 0.1;
  }
  detail::write_file_atomic(paths.item_parameters_csv(), items_to_csv(items));

  auto cfg = parse_config(
      "source = unused.csv\n"
      "families = knn\n"
      "strategies = Dif_min_max, Dif_max_min, Dif_balanced\n"
      "samples_per_family = 2\n"
      "inner_folds = 2\n"
      "out = " + out.string() + "\n");
  cmd_evaluate(cfg);

  // no response matrix was ever needed or created
  CHECK_FALSE(fs::exists(paths.response_matrix_csv()));
  const auto report = nlohmann::json::parse(detail::read_file(paths.report_json()));
  CHECK(report.at("statistics").is_null());
  CHECK_THAT(report.at("statistics_warning").get<std::string>(),
             ContainsSubstring("at least 2 families"));
  CHECK_FALSE(fs::exists(paths.nemenyi_csv("unused")));
  CHECK(fs::exists(paths.partition_csv("Dif_balanced")));

  // under three completed strategies the rank tests are skipped too
  auto cfg2 = parse_config(
      "source = unused.csv\n"
      "families = knn, lda\n"
      "strategies = Random_0\n"
      "samples_per_family = 2\n"
      "inner_folds = 2\n"
      "out = " + out.string() + "\n");
  cmd_evaluate(cfg2);
  const auto report2 = nlohmann::json::parse(detail::read_file(paths.report_json()));
  CHECK(report2.at("statistics").is_null());
  CHECK_THAT(report2.at("statistics_warning").get<std::string>(),
             ContainsSubstring("fewer than 3 strategies"));
}

TEST_CASE("a second process cannot enter a locked run directory", "[pipeline]") {
  Scratch scratch("lock");
  const fs::path csv = scratch.dir / "data.csv";
  detail::write_file_atomic(csv, tiny_csv());
  const fs::path out = scratch.dir / "out";
  fs::create_directories(out);
  const RunPaths paths(out);
  detail::write_file_atomic(paths.lock_file(), "12345\n");

  const auto cfg = parse_config(tiny_config_text(csv, out, 1));
  CHECK_THROWS_AS(cmd_matrix(cfg), StageError);

  fs::remove(paths.lock_file());
  cmd_matrix(cfg);
  CHECK(fs::exists(paths.response_matrix_csv()));
  CHECK_FALSE(fs::exists(paths.lock_file()));
}

TEST_CASE("the command line maps outcomes to exit codes", "[pipeline]") {
  Scratch scratch("cli");
  const fs::path csv = scratch.dir / "data.csv";
  detail::write_file_atomic(csv, tiny_csv());

  CHECK(run_cli("") == 1);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("transmogrify") == 1);
  CHECK(run_cli("matrix") == 1);  // --config is required

  const fs::path bad = scratch.dir / "bad.conf";
  detail::write_file_atomic(bad, "source = x.csv\nbogus = 1\n");
  CHECK(run_cli("matrix --config " + bad.string()) == 2);

  // config parses but the source file cannot be read
  const fs::path missing_src = scratch.dir / "missing_src.conf";
  detail::write_file_atomic(missing_src, "source = no_such_file.csv\n");
  CHECK(run_cli("matrix --config " + missing_src.string()) == 3);

  // plotdata refuses to run before evaluate
  const fs::path out = scratch.dir / "out";
  const fs::path good = scratch.dir / "good.conf";
  detail::write_file_atomic(good, tiny_config_text(csv, out, 2));
  CHECK(run_cli("plotdata --config " + good.string()) == 3);

  CHECK(run_cli("matrix --config " + good.string()) == 0);
  CHECK(fs::exists(RunPaths(out).response_matrix_csv()));

  // --seed override changes the matrix relative to the config seed
  const fs::path out2 = scratch.dir / "out2";
  CHECK(run_cli("matrix --config " + good.string() + " --out " + out2.string() + " --seed 9") == 0);
  CHECK(detail::read_file(RunPaths(out).response_matrix_csv()) !=
        detail::read_file(RunPaths(out2).response_matrix_csv()));
}
