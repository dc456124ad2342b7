// Command-line front end: level-set rasters, equivalence and containment
// checks, invariant suites, training runs, experiment sweeps, and dataset
// statistics. All outputs land in --out-dir with a JSON-lines manifest
// recording one entry per emitted file.
//
// Exit codes: 0 success/pass, 1 I/O or data failure, 2 usage/config error,
// 3 property counterexample or invariant violation found.

#include "fairprop/data.hpp"
#include "fairprop/elicitation.hpp"
#include "fairprop/io_util.hpp"
#include "fairprop/parallel.hpp"
#include "fairprop/raster.hpp"
#include "fairprop/rng.hpp"
#include "fairprop/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fairprop;

namespace {

const std::vector<double> kDefaultLambdaSweep = {0.0,       0.1,  0.2,
                                                 1.0 / 3.0, 0.5,  0.75,
                                                 0.95};

struct CommonOut {
  std::string out_dir = "./out";
  int jobs = default_jobs();

  fs::path prepare() const {
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      throw IoError("cannot create output directory: " + out_dir);
    }
    return dir;
  }

  void manifest_append(const json& record) const {
    const fs::path path = fs::path(out_dir) / "manifest.jsonl";
    std::ofstream out(path, std::ios::app);
    if (!out) {
      throw IoError("cannot open for writing: " + path.string());
    }
    out << record.dump() << '\n';
  }
};

// Splits a config value into option tokens. A quoted value stays one token;
// an unquoted value splits on whitespace so repeatable options can list
// several entries on one line.
std::vector<std::string> split_config_value(const std::string& raw) {
  const std::string value = CLI::detail::trim_copy(raw);
  if (value.size() >= 2 &&
      ((value.front() == '"' && value.back() == '"') ||
       (value.front() == '\'' && value.back() == '\''))) {
    return {value.substr(1, value.size() - 2)};
  }
  std::vector<std::string> parts;
  std::istringstream stream(value);
  std::string token;
  while (stream >> token) {
    parts.push_back(token);
  }
  if (parts.empty()) {
    parts.emplace_back();
  }
  return parts;
}

// Expands `--config <file>` into option tokens appended to the argument
// list. The file holds flat key=value lines (blank lines and #/; comments
// ignored). A key is skipped when the matching --key flag already appears
// on the command line, so explicit flags always win.
void expand_config_args(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(std::string("--config=").size());
    }
  }
  if (path.empty()) {
    return;
  }
  std::ifstream in = open_input(path);
  std::vector<std::string> extra;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = CLI::detail::trim_copy(line);
    if (trimmed.empty() || trimmed[0] == '#' || trimmed[0] == ';') {
      continue;
    }
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config " + path + " line " +
                        std::to_string(line_no) +
                        " is not key=value: " + trimmed);
    }
    const std::string key = CLI::detail::trim_copy(trimmed.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config " + path + " line " +
                        std::to_string(line_no) + " has an empty key");
    }
    if (key == "config") {
      continue;
    }
    const std::string flag = "--" + key;
    const std::string flag_eq = flag + "=";
    const auto mentions = [&](const std::vector<std::string>& list) {
      for (const std::string& arg : list) {
        if (arg == flag || arg.rfind(flag_eq, 0) == 0) {
          return true;
        }
      }
      return false;
    };
    if (mentions(args) || mentions(extra)) {
      continue;
    }
    extra.push_back(flag);
    for (const std::string& token :
         split_config_value(trimmed.substr(eq + 1))) {
      extra.push_back(token);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
}

// Group-rule flags shared by every dataset-consuming subcommand.
struct DataArgs {
  std::string data_path;
  std::string label_col = "label";
  std::string group_col = "group";
  double group_threshold = 0.0;
  bool has_threshold = false;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--data", data_path, "CSV dataset path");
    cmd->add_option("--label-col", label_col, "Label column name");
    cmd->add_option("--group-col", group_col, "Group source column name");
    cmd->add_option("--group-threshold", group_threshold,
                    "Numeric rule: group b iff value < threshold")
        ->trigger_on_parse();
  }

  TabularDataset load(CLI::App* cmd) const {
    GroupRule rule{group_col, std::nullopt};
    if (cmd->count("--group-threshold") > 0) {
      rule.threshold = group_threshold;
    }
    return load_csv(data_path, label_col, rule);
  }
};

struct SyntheticArgs {
  SyntheticSpec spec;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--pa", spec.p_a, "Group-a positive rate");
    cmd->add_option("--pb", spec.p_b, "Group-b positive rate");
    cmd->add_option("--n", spec.n_samples, "Samples per dataset");
    cmd->add_option("--k", spec.k_noise, "Noise feature count");
    cmd->add_option("--balance", spec.group_balance,
                    "Probability of group b");
  }
};

std::string summarize_rows(const std::vector<ResultRow>& rows) {
  // Aggregate per (regularizer, grid_value) for a human-readable recap.
  std::ostringstream out;
  std::map<std::pair<std::string, double>, std::vector<double>> dp_by_cell;
  std::map<std::pair<std::string, double>, std::vector<double>> acc_by_cell;
  for (const ResultRow& row : rows) {
    const auto key = std::make_pair(to_string(row.regularizer),
                                    row.grid_value);
    dp_by_cell[key].push_back(row.metrics.dp_violation);
    acc_by_cell[key].push_back(row.metrics.accuracy);
  }
  for (const auto& [key, dps] : dp_by_cell) {
    out << "  " << key.first << " grid=" << format_double_short(key.second)
        << " mean_acc=" << format_double_short(mean_of(acc_by_cell[key]))
        << " mean_dp=" << format_double_short(mean_of(dps));
    if (dps.size() > 1) {
      out << " se_dp=" << format_double_short(standard_error(dps));
    }
    out << '\n';
  }
  return out.str();
}

int cmd_levelset(const CommonOut& common, RegularizerKind reg,
                 std::vector<double> lambdas, int res,
                 const std::string& format) {
  if (lambdas.empty()) lambdas = kDefaultLambdaSweep;
  const fs::path dir = common.prepare();
  const std::vector<std::string> formats =
      format == "both" ? std::vector<std::string>{"csv", "pgm"}
                       : std::vector<std::string>{format};
  for (const double lambda : lambdas) {
    const LevelSetRaster raster = rasterize(reg, lambda, res, common.jobs);
    json areas;
    int ties = 0;
    for (std::uint64_t code = 0; code < 4; ++code) {
      const TreatmentVector tv = decode_treatments(code, 2, 2);
      areas[treatment_label(tv)] = cell_area(raster, tv);
    }
    ties = static_cast<int>((raster.tie_mask.array() != 0).count());
    for (const std::string& fmt : formats) {
      const std::string name = raster_filename(reg, lambda, res, fmt);
      export_raster(raster, (dir / name).string(), fmt);
      json record;
      record["command"] = "levelset";
      record["file"] = name;
      record["format"] = fmt;
      record["reg"] = to_string(reg);
      record["lambda"] = lambda;
      record["res"] = res;
      record["areas"] = areas;
      record["tie_cells"] = ties;
      common.manifest_append(record);
      std::cout << "wrote " << (dir / name).string() << '\n';
    }
  }
  return 0;
}

int cmd_equiv(const CommonOut& common, RegularizerKind reg, double lambda,
              LossKind loss, double grid_step, int samples,
              std::uint64_t seed) {
  const RegularizedObjective obj{loss, reg, lambda};
  std::vector<Eigen::VectorXd> points = grid_points_2d(grid_step);
  const std::vector<Eigen::VectorXd> extra = random_points(2, samples, seed);
  points.insert(points.end(), extra.begin(), extra.end());
  const EquivalenceReport report =
      check_equivalence(loss, obj, {0, 1}, points, common.jobs);

  // Print the report, capping the counterexample listing.
  EquivalenceReport shown = report;
  constexpr std::size_t kMaxShown = 50;
  if (shown.counterexamples.size() > kMaxShown) {
    shown.counterexamples.resize(kMaxShown);
  }
  std::cout << format_equivalence_report(shown);
  if (report.counterexamples.size() > kMaxShown) {
    std::cout << "(" << report.counterexamples.size() - kMaxShown
              << " further counterexamples omitted)\n";
  }
  return report.equivalent ? 0 : 3;
}

int check_suite_subset(const CommonOut& common, std::uint64_t seed) {
  int violations = 0;
  const std::vector<Eigen::VectorXd> grid = grid_points_2d(0.1);
  const std::vector<int> groups = {0, 1};
  const std::vector<RegularizerKind> all_regs = {
      RegularizerKind::Dp,  RegularizerKind::Fpr, RegularizerKind::Fnr,
      RegularizerKind::Eeo, RegularizerKind::Cal, RegularizerKind::Bgl};
  Rng rng(seed);
  for (int k = 0; k < 10; ++k) {
    TreatmentVector t;
    t.num_treatments = 2;
    t.t.resize(2);
    t.t << static_cast<int>(rng.below(2)), static_cast<int>(rng.below(2));
    const double lambda = rng.uniform(0.05, 0.95);
    const RegularizerKind reg = all_regs[static_cast<std::size_t>(k) %
                                         all_regs.size()];
    const RegularizedObjective obj{LossKind::ZeroOne, reg, lambda};
    const ContainmentReport report = check_subset_intersection(
        LossKind::ZeroOne, obj, t, groups, grid, common.jobs);
    std::cout << "subset-intersection reg=" << to_string(reg)
              << " lambda=" << format_double_short(lambda)
              << " t=" << treatment_label(t)
              << " applicable=" << report.applicable
              << (report.holds ? " pass" : " VIOLATION") << '\n';
    if (!report.holds) ++violations;
  }
  for (const RegularizerKind reg :
       {RegularizerKind::Dp, RegularizerKind::Fpr, RegularizerKind::Eeo}) {
    TreatmentVector zero;
    zero.num_treatments = 2;
    zero.t = Eigen::VectorXi::Zero(2);
    const RegularizedObjective obj{LossKind::ZeroOne, reg, 0.4};
    const ContainmentReport report = check_subset_intersection(
        LossKind::ZeroOne, obj, zero, groups, grid, common.jobs);
    std::cout << "vec0-corollary reg=" << to_string(reg)
              << " applicable=" << report.applicable
              << (report.holds ? " pass" : " VIOLATION") << '\n';
    if (!report.holds) ++violations;
  }
  return violations;
}

int check_suite_containment(const CommonOut& common) {
  int violations = 0;
  const std::vector<Eigen::VectorXd> grid = grid_points_2d(0.05);
  for (const double lambda : {0.1, 0.2}) {
    const ContainmentReport report =
        check_unfair_optimum_containment(lambda, {0, 1}, grid, common.jobs);
    std::cout << "unfair-optimum-containment lambda="
              << format_double_short(lambda)
              << " applicable=" << report.applicable
              << (report.holds ? " pass" : " VIOLATION") << '\n';
    if (!report.holds) ++violations;
  }
  return violations;
}

int check_suite_nonenforcing(const CommonOut& common, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> points = grid_points_2d(0.05);
  const std::vector<Eigen::VectorXd> extra = random_points(2, 200, seed);
  points.insert(points.end(), extra.begin(), extra.end());
  int unexpected = 0;
  for (const RegularizerKind reg :
       {RegularizerKind::Dp, RegularizerKind::Fpr, RegularizerKind::Fnr,
        RegularizerKind::Eeo, RegularizerKind::Cal, RegularizerKind::Bgl}) {
    const bool nonenf =
        check_nonenforcing(reg, {0, 1}, points, LossKind::ZeroOne,
                           common.jobs);
    std::cout << "nonenforcing reg=" << to_string(reg) << " -> "
              << (nonenf ? "nonenforcing" : "enforcing") << '\n';
    if (nonenf) ++unexpected;  // all six are expected to enforce
  }
  const bool none_nonenf = check_nonenforcing(
      RegularizerKind::None, {0, 1}, points, LossKind::ZeroOne, common.jobs);
  std::cout << "nonenforcing reg=none -> "
            << (none_nonenf ? "nonenforcing" : "enforcing") << '\n';
  if (!none_nonenf) ++unexpected;  // the constant regularizer never enforces
  return unexpected;
}

int check_suite_concavity(const CommonOut& common, std::uint64_t seed,
                          int segments) {
  int total_violations = 0;
  const std::vector<int> groups = {0, 1};
  for (const RegularizerKind reg :
       {RegularizerKind::None, RegularizerKind::Dp, RegularizerKind::Fpr,
        RegularizerKind::Fnr, RegularizerKind::Eeo, RegularizerKind::Cal,
        RegularizerKind::Bgl}) {
    Rng rng(seed + static_cast<std::uint64_t>(reg));
    int bad = 0;
    double worst = 0.0;
    for (int k = 0; k < segments; ++k) {
      const double lambda = rng.uniform(0.05, 0.95);
      const RegularizedObjective obj{LossKind::ZeroOne, reg, lambda};
      Eigen::VectorXd p0(2), p1(2);
      p0 << rng.uniform(), rng.uniform();
      p1 << rng.uniform(), rng.uniform();
      const Eigen::VectorXd mid = 0.5 * (p0 + p1);
      const auto risk = [&](const Eigen::VectorXd& p) {
        const Population pop =
            Population::binary({p[0], p[1]}, groups, 2);
        return bayes_risk(obj, pop, /*lenient=*/true);
      };
      const double gap = risk(mid) - 0.5 * (risk(p0) + risk(p1));
      if (gap < -1e-9) {
        ++bad;
        worst = std::min(worst, gap);
      }
    }
    std::cout << "bayes-risk-concavity reg=" << to_string(reg)
              << " segments=" << segments << " violations=" << bad;
    if (bad > 0) {
      std::cout << " worst_gap=" << format_double_short(worst);
    }
    std::cout << (bad == 0 ? " pass" : " VIOLATION") << '\n';
    total_violations += bad;
  }
  (void)common;
  return total_violations;
}

int cmd_check(const CommonOut& common, const std::string& suite,
              std::uint64_t seed, int segments) {
  int violations = 0;
  if (suite == "subset" || suite == "all") {
    violations += check_suite_subset(common, seed);
  }
  if (suite == "containment" || suite == "all") {
    violations += check_suite_containment(common);
  }
  if (suite == "nonenforcing" || suite == "all") {
    violations += check_suite_nonenforcing(common, seed);
  }
  if (suite == "concavity" || suite == "all") {
    violations += check_suite_concavity(common, seed, segments);
  }
  std::cout << (violations == 0 ? "all checks passed"
                                : "violations found: " +
                                      std::to_string(violations))
            << '\n';
  return violations == 0 ? 0 : 3;
}

int cmd_train(const CommonOut& common, const DataArgs& data,
              const SyntheticArgs& synth, CLI::App* cmd, TrainConfig config,
              RegularizerKind reg, double lambda) {
  config.regularizer = reg;
  config.lambda = lambda;
  const fs::path dir = common.prepare();
  std::vector<ResultRow> rows;
  if (!data.data_path.empty()) {
    const TabularDataset dataset = data.load(cmd);
    rows = run_lambda_sweep(dataset, {lambda}, config, {reg}, common.jobs);
  } else {
    rows = run_pb_sweep(synth.spec, {synth.spec.p_b}, config, {reg},
                        common.jobs);
  }
  const std::string name = "results.csv";
  write_results_csv(rows, (dir / name).string());
  json record;
  record["command"] = "train";
  record["file"] = name;
  record["reg"] = to_string(reg);
  record["lambda"] = lambda;
  record["trials"] = config.trials;
  record["rows"] = rows.size();
  common.manifest_append(record);
  std::cout << "wrote " << (dir / name).string() << '\n'
            << summarize_rows(rows);
  return 0;
}

int cmd_sweep(const CommonOut& common, const DataArgs& data,
              const SyntheticArgs& synth, CLI::App* cmd, TrainConfig config,
              const std::string& mode, double pb_start, double pb_stop,
              double pb_step, std::vector<double> lambdas, double lambda) {
  const fs::path dir = common.prepare();
  std::vector<ResultRow> rows;
  if (mode == "pb") {
    std::vector<double> pb_grid;
    for (double pb = pb_start; pb <= pb_stop + 1e-12; pb += pb_step) {
      pb_grid.push_back(pb);
    }
    config.lambda = lambda;
    rows = run_pb_sweep(synth.spec, pb_grid, config,
                        experiment_regularizers(), common.jobs);
  } else if (mode == "lambda") {
    if (lambdas.empty()) lambdas = kDefaultLambdaSweep;
    if (data.data_path.empty()) {
      throw ConfigError("lambda sweep requires --data");
    }
    const TabularDataset dataset = data.load(cmd);
    rows = run_lambda_sweep(dataset, lambdas, config,
                            experiment_regularizers(), common.jobs);
  } else {
    throw ConfigError("unknown sweep mode: '" + mode + "'");
  }
  const std::string name = "results.csv";
  write_results_csv(rows, (dir / name).string());
  json record;
  record["command"] = "sweep";
  record["file"] = name;
  record["mode"] = mode;
  record["trials"] = config.trials;
  record["rows"] = rows.size();
  common.manifest_append(record);
  std::cout << "wrote " << (dir / name).string() << '\n'
            << summarize_rows(rows);
  return 0;
}

int cmd_stats(const DataArgs& data, CLI::App* cmd,
              std::vector<double> lambdas, std::vector<std::string> regs) {
  if (lambdas.empty()) lambdas = kDefaultLambdaSweep;
  if (regs.empty()) regs = {"dp", "fpr", "fnr", "eeo"};
  const TabularDataset dataset = data.load(cmd);
  const std::vector<GroupStat> stats = dataset.group_stats();
  std::cout << "dataset: " << data.data_path << '\n';
  for (std::size_t g = 0; g < stats.size(); ++g) {
    std::cout << "group " << static_cast<char>('a' + g) << ": name="
              << stats[g].name << " count=" << stats[g].count
              << " share=" << format_double_short(stats[g].share)
              << " base_rate=" << format_double_short(stats[g].base_rate)
              << '\n';
  }
  const Population pop = population_from_group_stats(stats);
  std::cout << "placement: (" << format_double_short(pop.p1(0)) << ", "
            << format_double_short(pop.p1(1)) << ")\n";
  for (const std::string& reg_name : regs) {
    const RegularizerKind reg = parse_regularizer(reg_name);
    for (const double lambda : lambdas) {
      const RegularizedObjective obj{LossKind::ZeroOne, reg, lambda};
      const PropertyValue pv = regularized_property(obj, pop);
      const TreatmentVector canon = pv.canonical();
      const bool uniform = canon.t[0] == canon.t[1];
      std::cout << "reg=" << reg_name
                << " lambda=" << format_double_short(lambda)
                << " label=" << treatment_label(canon)
                << " uniform=" << (uniform ? "yes" : "no")
                << " ties=" << (pv.minimizer_codes.size() > 1 ? "yes" : "no")
                << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized property elicitation toolkit"};
  app.require_subcommand(1);

  CommonOut common;
  app.add_option("--out-dir", common.out_dir, "Output directory")
      ->capture_default_str();
  app.add_option("--jobs", common.jobs, "Worker thread cap")
      ->capture_default_str();

  // One backing string serves every subcommand; only the parsed one binds.
  std::string config_path;
  const char* config_help = "Flat key=value config file; explicit flags win";

  // ---- levelset ----
  auto* ls = app.add_subcommand("levelset", "Rasterize level sets");
  ls->add_option("--config", config_path, config_help);
  std::string ls_reg = "dp";
  std::vector<double> ls_lambdas;
  int ls_res = 201;
  std::string ls_format = "csv";
  ls->add_option("--reg", ls_reg, "Regularizer id")->capture_default_str();
  ls->add_option("--lambda", ls_lambdas, "Lambda values (repeatable)");
  ls->add_option("--res", ls_res, "Grid resolution")->capture_default_str();
  ls->add_option("--format", ls_format, "csv | pgm | both")
      ->capture_default_str();

  // ---- equiv ----
  auto* eq = app.add_subcommand("equiv", "Equivalence check");
  eq->add_option("--config", config_path, config_help);
  std::string eq_reg = "dp";
  double eq_lambda = 0.3;
  std::string eq_loss = "zero-one";
  double eq_grid_step = 0.02;
  int eq_samples = 1000;
  std::uint64_t eq_seed = 42;
  eq->add_option("--reg", eq_reg, "Regularizer id")->capture_default_str();
  eq->add_option("--lambda", eq_lambda, "Lambda")->capture_default_str();
  eq->add_option("--loss", eq_loss, "Base loss id")->capture_default_str();
  eq->add_option("--grid-step", eq_grid_step, "Deterministic grid step")
      ->capture_default_str();
  eq->add_option("--samples", eq_samples, "Extra random samples")
      ->capture_default_str();
  eq->add_option("--seed", eq_seed, "Random sample seed")
      ->capture_default_str();

  // ---- check ----
  auto* ck = app.add_subcommand("check", "Invariant suites");
  ck->add_option("--config", config_path, config_help);
  std::string ck_suite = "all";
  std::uint64_t ck_seed = 42;
  int ck_segments = 200;
  ck->add_option("--suite", ck_suite,
                 "subset | containment | nonenforcing | concavity | all")
      ->capture_default_str();
  ck->add_option("--seed", ck_seed, "Suite seed")->capture_default_str();
  ck->add_option("--segments", ck_segments, "Concavity segments per reg")
      ->capture_default_str();

  // ---- train ----
  auto* tr = app.add_subcommand("train", "Train one configuration");
  tr->add_option("--config", config_path, config_help);
  DataArgs tr_data;
  SyntheticArgs tr_synth;
  TrainConfig tr_config;
  std::string tr_reg = "dp";
  double tr_lambda = 0.15;
  tr_data.add_flags(tr);
  tr_synth.add_flags(tr);
  tr->add_option("--reg", tr_reg, "Regularizer id")->capture_default_str();
  tr->add_option("--lambda", tr_lambda, "Lambda")->capture_default_str();
  tr->add_option("--lr", tr_config.learning_rate, "Learning rate")
      ->capture_default_str();
  tr->add_option("--epochs", tr_config.epochs, "Epochs")
      ->capture_default_str();
  tr->add_option("--trials", tr_config.trials, "Trials")
      ->capture_default_str();
  tr->add_option("--seed", tr_config.seed, "Base seed")
      ->capture_default_str();

  // ---- sweep ----
  auto* sw = app.add_subcommand("sweep", "Experiment sweeps");
  sw->add_option("--config", config_path, config_help);
  DataArgs sw_data;
  SyntheticArgs sw_synth;
  TrainConfig sw_config;
  std::string sw_mode = "pb";
  double sw_pb_start = 0.05, sw_pb_stop = 0.95, sw_pb_step = 0.05;
  double sw_lambda = 0.15;
  std::vector<double> sw_lambdas;
  sw_data.add_flags(sw);
  sw_synth.add_flags(sw);
  sw->add_option("--mode", sw_mode, "pb | lambda")->capture_default_str();
  sw->add_option("--pb-start", sw_pb_start, "p_b grid start")
      ->capture_default_str();
  sw->add_option("--pb-stop", sw_pb_stop, "p_b grid stop")
      ->capture_default_str();
  sw->add_option("--pb-step", sw_pb_step, "p_b grid step")
      ->capture_default_str();
  sw->add_option("--lambda", sw_lambda, "Lambda for the pb sweep")
      ->capture_default_str();
  sw->add_option("--lambdas", sw_lambdas,
                 "Lambda grid for the lambda sweep (repeatable)");
  sw->add_option("--lr", sw_config.learning_rate, "Learning rate")
      ->capture_default_str();
  sw->add_option("--epochs", sw_config.epochs, "Epochs")
      ->capture_default_str();
  sw->add_option("--trials", sw_config.trials, "Trials")
      ->capture_default_str();
  sw->add_option("--seed", sw_config.seed, "Base seed")
      ->capture_default_str();

  // ---- stats ----
  auto* st = app.add_subcommand("stats", "Group statistics and placement");
  st->add_option("--config", config_path, config_help);
  DataArgs st_data;
  std::vector<double> st_lambdas;
  std::vector<std::string> st_regs;
  st_data.add_flags(st);
  st->add_option("--lambda", st_lambdas, "Lambda values (repeatable)");
  st->add_option("--reg", st_regs, "Regularizer ids (repeatable)");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    expand_config_args(args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::vector<const char*> argv_expanded;
  argv_expanded.reserve(args.size() + 1);
  argv_expanded.push_back(argv[0]);
  for (const std::string& arg : args) {
    argv_expanded.push_back(arg.c_str());
  }

  try {
    app.parse(static_cast<int>(argv_expanded.size()), argv_expanded.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ls->parsed()) {
      return cmd_levelset(common, parse_regularizer(ls_reg), ls_lambdas,
                          ls_res, ls_format);
    }
    if (eq->parsed()) {
      return cmd_equiv(common, parse_regularizer(eq_reg), eq_lambda,
                       parse_loss(eq_loss), eq_grid_step, eq_samples,
                       eq_seed);
    }
    if (ck->parsed()) {
      return cmd_check(common, ck_suite, ck_seed, ck_segments);
    }
    if (tr->parsed()) {
      return cmd_train(common, tr_data, tr_synth, tr, tr_config,
                       parse_regularizer(tr_reg), tr_lambda);
    }
    if (sw->parsed()) {
      return cmd_sweep(common, sw_data, sw_synth, sw, sw_config, sw_mode,
                       sw_pb_start, sw_pb_stop, sw_pb_step, sw_lambdas,
                       sw_lambda);
    }
    if (st->parsed()) {
      return cmd_stats(st_data, st, st_lambdas, st_regs);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const GroupStructureError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
