// Command-line harness: dataset generation, single experiment cells,
// parameter sweeps, inference runs, and the random-initialization
// demonstration. All output is deterministic given the seed (wall-clock
// columns excepted; disable with --set record_timing=false).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fone/datagen.hpp"
#include "fone/experiment.hpp"
#include "fone/report.hpp"
#include "fone/runner.hpp"

namespace {

struct CommonFlags {
  std::string spec_path;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  bool seed_set = false;
  fone::Index reps = 0;
  std::string out = "-";
  std::string format = "table";
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--spec", flags.spec_path, "experiment spec file (key = value lines)");
  cmd->add_option("--set", flags.sets, "override a spec key, e.g. --set n=20000")
      ->type_name("KEY=VALUE");
  cmd->add_option("--seed", flags.seed, "master seed override")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--reps", flags.reps, "replication count override");
  cmd->add_option("--out", flags.out, "output path ('-' = stdout)");
  cmd->add_option("--format", flags.format, "csv | table")
      ->check(CLI::IsMember({"csv", "table"}));
  cmd->add_option("--threads", flags.threads, "replication worker count")
      ->check(CLI::PositiveNumber);
}

fone::ExperimentSpec build_spec(const CommonFlags& flags) {
  fone::ExperimentSpec spec;
  if (!flags.spec_path.empty()) spec = fone::parse_spec_file(flags.spec_path);
  for (const std::string& kv : flags.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects KEY=VALUE, got '" + kv + "'");
    fone::apply_override(spec, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (flags.seed_set) spec.seed = flags.seed;
  if (flags.reps > 0) spec.reps = flags.reps;
  fone::validate(spec);
  return spec;
}

int cmd_generate(const std::string& out, const std::string& truth_out,
                 const std::vector<std::string>& sets, std::uint64_t seed, bool seed_set) {
  fone::ExperimentSpec spec;
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects KEY=VALUE, got '" + kv + "'");
    fone::apply_override(spec, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (seed_set) spec.seed = seed;
  fone::DesignSpec design;
  design.p = spec.p;
  design.covariance = spec.design;
  design.varsigma = spec.corr;
  std::optional<double> tau;
  if (spec.model == fone::LossKind::Quantile) tau = spec.tau;
  const fone::GeneratedProblem problem =
      fone::generate_problem(spec.model, design, spec.n, tau, spec.seed);
  fone::dump_csv(problem.data, out);
  if (!truth_out.empty()) {
    std::ofstream t(truth_out);
    if (!t) throw std::runtime_error("cannot open " + truth_out);
    t << "theta_star\n";
    t.precision(17);
    for (fone::Index i = 0; i < problem.theta_star.size(); ++i)
      t << problem.theta_star(i) << "\n";
  }
  std::cerr << "wrote " << problem.data.n() << " samples, p = " << problem.data.dim() << ", to "
            << out << "\n";
  return 0;
}

int cmd_run(const CommonFlags& flags) {
  const fone::ExperimentSpec spec = build_spec(flags);
  fone::RunnerOptions opts;
  opts.threads = flags.threads;
  const fone::ExperimentReport report = fone::run_experiment(spec, opts);
  fone::emit_report(report, flags.out, flags.format);
  return 0;
}

std::vector<std::pair<std::string, std::vector<std::string>>> parse_varies(
    const std::vector<std::string>& varies) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (const std::string& v : varies) {
    const auto eq = v.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--vary expects KEY=v1,v2,..., got '" + v + "'");
    const std::string key = v.substr(0, eq);
    std::vector<std::string> values;
    std::stringstream ss(v.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(item);
    if (values.empty()) throw std::invalid_argument("--vary '" + key + "' lists no values");
    out.emplace_back(key, values);
  }
  return out;
}

int cmd_sweep(const CommonFlags& flags, const std::vector<std::string>& varies) {
  const auto axes = parse_varies(varies);
  if (axes.empty()) throw std::invalid_argument("sweep needs at least one --vary");
  std::ostringstream csv;
  for (const auto& [key, values] : axes) csv << key << ",";
  csv << "estimator,count,mean_err_to_truth,se_err_to_truth,mean_err_to_erm,se_err_to_erm,"
         "mean_comm_vectors,mean_seconds,spec_hash\n";

  std::size_t total = 1;
  for (const auto& [key, values] : axes) total *= values.size();
  for (std::size_t cell_index = 0; cell_index < total; ++cell_index) {
    CommonFlags cell = flags;
    std::vector<std::string> assignment;
    std::size_t rem = cell_index;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& values = axes[a].second;
      assignment.insert(assignment.begin(), values[rem % values.size()]);
      rem /= values.size();
    }
    for (std::size_t a = 0; a < axes.size(); ++a)
      cell.sets.push_back(axes[a].first + "=" + assignment[a]);
    const fone::ExperimentSpec spec = build_spec(cell);
    fone::RunnerOptions opts;
    opts.threads = flags.threads;
    const fone::ExperimentReport report = fone::run_experiment(spec, opts);
    for (const auto& agg : fone::aggregate(report)) {
      csv.precision(10);
      for (const auto& value : assignment) csv << value << ",";
      csv << agg.estimator << "," << agg.count << "," << agg.mean_err_to_truth << ","
          << agg.se_err_to_truth << "," << agg.mean_err_to_erm << "," << agg.se_err_to_erm
          << "," << agg.mean_comm_vectors << "," << agg.mean_seconds << ","
          << report.hash << "\n";
    }
    std::cerr << "sweep cell done:";
    for (std::size_t a = 0; a < axes.size(); ++a)
      std::cerr << " " << axes[a].first << "=" << assignment[a];
    std::cerr << "\n";
  }

  if (flags.out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(flags.out);
    if (!out) throw std::runtime_error("cannot open " + flags.out);
    out << csv.str();
  }
  return 0;
}

int cmd_inference(const CommonFlags& flags_in) {
  CommonFlags flags = flags_in;
  // Inference defaults: quantile regression at the Appendix-E scale with the
  // theorem-driven tau_n / eta / T (zero sentinels), direction w = 1/sqrt(p).
  std::vector<std::string> defaults = {"model=quantile", "tau=0.25", "n=200000", "p=100",
                                       "reps=20",        "estimators=ERM,SINVW,VARIANCE"};
  defaults.insert(defaults.end(), flags.sets.begin(), flags.sets.end());
  flags.sets = std::move(defaults);
  return cmd_run(flags);
}

int cmd_demo(fone::Index p, fone::Index n, const CommonFlags& flags) {
  const fone::Index reps = flags.reps > 0 ? flags.reps : 20;
  const std::uint64_t seed = flags.seed_set ? flags.seed : 20240605ULL;
  const fone::RandomInitDemo demo = fone::run_random_init_demo(p, n, reps, seed, flags.threads);
  std::cerr.precision(4);
  std::cerr << "consistent-init mean error: " << demo.consistent_mean_error << "\n"
            << "random-init mean error:     " << demo.random_mean_error << "\n"
            << "ratio (random/consistent):  " << demo.ratio << "\n";
  fone::emit_report(demo.report, flags.out, flags.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed first-order estimation and inference harness"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "write a synthetic dataset as CSV");
  std::string gen_out = "dataset.csv";
  std::string gen_truth;
  std::vector<std::string> gen_sets;
  std::uint64_t gen_seed = 0;
  bool gen_seed_set = false;
  generate->add_option("--out", gen_out, "dataset CSV path");
  generate->add_option("--truth-out", gen_truth, "also write theta* as a one-column CSV");
  generate->add_option("--set", gen_sets, "model/design keys, e.g. --set model=quantile")
      ->type_name("KEY=VALUE");
  generate->add_option("--seed", gen_seed, "generation seed")
      ->each([&gen_seed_set](const std::string&) { gen_seed_set = true; });

  // run / sweep / inference / demo-random-init
  CommonFlags run_flags, sweep_flags, inf_flags, demo_flags;
  auto* run = app.add_subcommand("run", "run one experiment cell");
  add_common(run, run_flags);

  auto* sweep = app.add_subcommand("sweep", "cross-product sweep over spec keys");
  add_common(sweep, sweep_flags);
  std::vector<std::string> varies;
  sweep->add_option("--vary", varies, "axis, e.g. --vary machines=5,20,100 (repeatable)")
      ->type_name("KEY=V1,V2,...");

  auto* inference = app.add_subcommand("inference", "Sigma^{-1}w and variance-ratio run");
  add_common(inference, inf_flags);

  auto* demo = app.add_subcommand("demo-random-init",
                                  "one-pass SGD from consistent vs random initialization");
  fone::Index demo_p = 200;
  fone::Index demo_n = 100'000;
  demo->add_option("--p", demo_p, "dimension (with intercept)");
  demo->add_option("--n", demo_n, "sample size");
  add_common(demo, demo_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed())
      return cmd_generate(gen_out, gen_truth, gen_sets, gen_seed, gen_seed_set);
    if (run->parsed()) return cmd_run(run_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, varies);
    if (inference->parsed()) return cmd_inference(inf_flags);
    if (demo->parsed()) return cmd_demo(demo_p, demo_n, demo_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
