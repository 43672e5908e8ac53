// ign_bench: run, compare, sequence, selftest.

#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "ign/error.hpp"
#include "ign_bench/bench.hpp"

namespace {

using namespace ign;
using namespace ign::bench;

// Flags shared by run and compare. Only flags that were given on the
// command line override the config file.
struct SpecFlags {
  std::string config;
  ProblemSpec problem;
  std::string x0;
  double tol = 0.0;
  double max_epochs = 0.0;
  std::uint64_t seed = 0;
  std::size_t refresh_period = 0;
  double drift_tol = 0.0;
  std::string output_dir;
  std::string name;
  std::vector<std::pair<CLI::Option*, std::function<void(RunSpec&)>>> overrides;

  template <typename T>
  void bind(CLI::App* app, const std::string& flag, T& storage, const std::string& help,
            std::function<void(RunSpec&)> apply) {
    overrides.emplace_back(app->add_option(flag, storage, help), std::move(apply));
  }

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file; flags override its values")
        ->check(CLI::ExistingFile);
    bind(app, "--problem", problem.name, "chandrasekhar | affine | logistic | softmax",
         [this](RunSpec& s) { s.problem.name = problem.name; });
    bind(app, "--d", problem.d, "dimension (0: problem default)",
         [this](RunSpec& s) { s.problem.d = problem.d; });
    bind(app, "--samples", problem.samples, "affine rows / logistic and softmax N",
         [this](RunSpec& s) { s.problem.samples = problem.samples; });
    bind(app, "--c", problem.c, "H-equation parameter in (0, 1]",
         [this](RunSpec& s) { s.problem.c = problem.c; });
    bind(app, "--theta", problem.theta, "logistic regularizer weight",
         [this](RunSpec& s) { s.problem.theta = problem.theta; });
    bind(app, "--nu-reg", problem.nu_reg, "logistic regularizer shape",
         [this](RunSpec& s) { s.problem.nu_reg = problem.nu_reg; });
    bind(app, "--mu", problem.mu_smooth, "softmax smoothing",
         [this](RunSpec& s) { s.problem.mu_smooth = problem.mu_smooth; });
    bind(app, "--lambda", problem.lambda_reg, "softmax ridge weight",
         [this](RunSpec& s) { s.problem.lambda_reg = problem.lambda_reg; });
    bind(app, "--data", problem.data_path, "libsvm file for the logistic problem",
         [this](RunSpec& s) { s.problem.data_path = problem.data_path; });
    bind(app, "--x0", x0, "default | ones | zeros | random | const:<v>",
         [this](RunSpec& s) { s.x0 = x0; });
    bind(app, "--tol", tol, "stop when ||f(x)|| <= tol", [this](RunSpec& s) { s.tol = tol; });
    bind(app, "--max-epochs", max_epochs, "epoch budget",
         [this](RunSpec& s) { s.max_epochs = max_epochs; });
    bind(app, "--seed", seed, "seed for data and random x0", [this](RunSpec& s) { s.seed = seed; });
    bind(app, "--refresh-period", refresh_period, "passes between forced refreshes",
         [this](RunSpec& s) { s.refresh_period = refresh_period; });
    bind(app, "--drift-tol", drift_tol, "refresh when max|GH - I| exceeds this",
         [this](RunSpec& s) { s.drift_tol = drift_tol; });
    bind(app, "--output-dir", output_dir, "directory for traces (IGN_BENCH_OUTPUT_DIR wins)",
         [this](RunSpec& s) { s.output_dir = output_dir; });
    bind(app, "--name", name, "file stem for outputs", [this](RunSpec& s) { s.name = name; });
  }

  RunSpec build() const {
    RunSpec spec = config.empty() ? RunSpec{} : load_run_spec(config);
    for (const auto& [opt, apply] : overrides) {
      if (opt->count() > 0) apply(spec);
    }
    return spec;
  }
};

int report_error(const Error& e) {
  std::cerr << "ign_bench: " << e.what() << '\n';
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental Gauss-Newton benchmark harness"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run one method and write a trace CSV");
  SpecFlags run_flags;
  run_flags.attach(run_cmd);
  std::string method;
  std::size_t k = 0;
  double step_scale = 0.0;
  double forgetting = 0.0;
  auto* method_opt = run_cmd->add_option("--method", method, "ign | mb-ign | gn | ekf | ekf-s");
  auto* k_opt = run_cmd->add_option("--k", k, "MB-IGN batch size");
  auto* scale_opt = run_cmd->add_option("--step-scale", step_scale, "EKF-S step scale a");
  auto* forget_opt = run_cmd->add_option("--forgetting", forgetting, "EKF forgetting factor");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "run several methods from the same x0");
  SpecFlags compare_flags;
  compare_flags.attach(compare_cmd);
  std::vector<std::string> methods;
  auto* methods_opt = compare_cmd->add_option("--methods", methods, "e.g. mb-ign:20,gn,ekf-s")
                          ->delimiter(',');

  // sequence
  auto* sequence_cmd = app.add_subcommand("sequence", "emit the rate sequence and lemma slacks");
  SequenceSpec seq;
  std::string seq_output = "-";
  sequence_cmd->add_option("--n", seq.n, "period n")->required();
  sequence_cmd->add_option("--nu", seq.nu, "Holder exponent in (0, 1]");
  sequence_cmd->add_option("--T", seq.horizon, "last index");
  sequence_cmd->add_option("--r0", seq.r0, "initial error for the envelope");
  sequence_cmd->add_option("--output", seq_output, "CSV path, '-' for stdout");

  // selftest
  auto* selftest_cmd = app.add_subcommand("selftest", "run the invariant suite at desk scale");
  SelftestOptions selftest;
  selftest_cmd->add_option("--seeds", selftest.seeds, "number of seeds");
  selftest_cmd->add_option("--base-seed", selftest.base_seed, "first seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      RunSpec spec = run_flags.build();
      if (method_opt->count() > 0 || spec.methods.empty()) {
        std::string text = method.empty() ? "ign" : method;
        if (k_opt->count() > 0 && text.find(':') == std::string::npos) {
          text += ":" + std::to_string(k);
        }
        spec.methods = {parse_method_spec(text)};
      }
      MethodSpec& m = spec.methods.front();
      if (k_opt->count() > 0) m.k = k;
      if (scale_opt->count() > 0) m.ekf.step_scale = step_scale;
      if (forget_opt->count() > 0) m.ekf.forgetting = forgetting;
      const SummaryRow row = cmd_run(spec, std::cout);
      if (!row.error.empty()) return kExitSolver;
      return kExitOk;
    }
    if (*compare_cmd) {
      RunSpec spec = compare_flags.build();
      if (methods_opt->count() > 0) {
        spec.methods.clear();
        for (const auto& text : methods) spec.methods.push_back(parse_method_spec(text));
      }
      const ComparisonReport report = cmd_compare(spec, std::cout);
      print_summary(std::cout, report);
      return report.any_failure() ? kExitSolver : kExitOk;
    }
    if (*sequence_cmd) {
      double worst = 0.0;
      if (seq_output == "-") {
        worst = cmd_sequence(seq, std::cout);
      } else {
        std::ofstream out(seq_output);
        if (!out) fail(ErrorCode::IoError, "cannot write " + seq_output);
        worst = cmd_sequence(seq, out);
      }
      if (worst < kLemmaSlack) {
        std::cerr << "ign_bench: lemma violated, worst slack " << worst << '\n';
        return kExitCheckFailed;
      }
      return kExitOk;
    }
    if (*selftest_cmd) {
      return cmd_selftest(selftest, std::cout).passed() ? kExitOk : kExitCheckFailed;
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "ign_bench: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
