#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ign/diagnostics.hpp"
#include "ign/error.hpp"
#include "ign/problems.hpp"
#include "ign/random.hpp"
#include "ign/solvers.hpp"
#include "ign_bench/bench.hpp"

namespace ign::bench {

using nlohmann::json;

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out.exceptions(std::ios::badbit | std::ios::failbit);
  return out;
}

json schedule_json(const MethodSpec& m) {
  if (m.method == Method::Ekf) {
    return {{"alpha", "1"}, {"lambda", m.ekf.forgetting}, {"source", "artifact default"}};
  }
  if (m.method == Method::EkfS) {
    return {{"alpha", "a / (ceil(t/n) + 1)"},
            {"a", m.ekf.step_scale},
            {"lambda", m.ekf.forgetting},
            {"source", "artifact default"}};
  }
  return nullptr;
}

// Runs one method and writes its trace and sidecar; solver failures are
// recorded in the row, configuration errors propagate.
SummaryRow execute(const RunSpec& spec, const MethodSpec& m, const ResidualSystem& sys,
                   const Vector& x0, const std::filesystem::path& csv_path, std::ostream& log) {
  const SolverConfig cfg = spec.solver_config(m);
  RunResult result;
  std::string error;
  try {
    result = run(m.method, sys, cfg, x0);
  } catch (const RunError& e) {
    result = e.partial();
    error = e.what();
  }

  {
    auto out = open_output(csv_path);
    write_trace_csv(out, m.label(), result.trace);
  }
  std::filesystem::path meta_path = csv_path;
  meta_path.replace_extension(".meta.json");
  json meta = {
      {"method", m.label()},
      {"problem", spec.problem.to_json()},
      {"n", sys.components()},
      {"d", sys.dimension()},
      {"seed", spec.seed},
      {"tol", spec.tol},
      {"max_epochs", spec.max_epochs},
      {"refresh_period", spec.refresh_period},
      {"drift_tol", spec.drift_tol},
      {"x0_policy", spec.x0},
      {"x0", std::vector<double>(x0.data(), x0.data() + x0.size())},
      {"ekf_schedule", schedule_json(m)},
      {"converged", result.converged},
      {"steps", result.steps},
      {"refreshes", result.refreshes},
      {"error", error.empty() ? json(nullptr) : json(error)},
  };
  {
    auto out = open_output(meta_path);
    out << meta.dump(2) << '\n';
  }

  SummaryRow row = summarize(m.label(), result.trace, spec.tol, spec.max_epochs);
  row.error = error;
  row.trace_path = csv_path;
  log << m.label() << ": " << (error.empty() ? (row.reached ? "reached tol" : "DNF") : "FAILED")
      << ", " << result.steps << " steps, trace " << csv_path.string() << '\n';
  if (!error.empty()) log << "  " << error << '\n';
  return row;
}

std::string file_stem(const MethodSpec& m) {
  std::string s = m.label();
  std::replace(s.begin(), s.end(), ':', '-');
  return s;
}

}  // namespace

SummaryRow cmd_run(const RunSpec& spec, std::ostream& log) {
  spec.validate();
  const auto system = make_problem(spec.problem, spec.seed);
  const Vector x0 = make_x0(spec.x0, spec.problem, system->dimension(), spec.seed);
  const auto dir = resolve_output_dir(spec.output_dir);
  std::filesystem::create_directories(dir);
  return execute(spec, spec.methods.front(), *system, x0, dir / (spec.name + ".csv"), log);
}

ComparisonReport cmd_compare(const RunSpec& spec, std::ostream& log) {
  spec.validate();
  const auto system = make_problem(spec.problem, spec.seed);
  const Vector x0 = make_x0(spec.x0, spec.problem, system->dimension(), spec.seed);
  const auto dir = resolve_output_dir(spec.output_dir);
  std::filesystem::create_directories(dir);

  ComparisonReport report;
  for (const auto& m : spec.methods) {
    const auto path = dir / (spec.name + "_" + file_stem(m) + ".csv");
    report.rows.push_back(execute(spec, m, *system, x0, path, log));
  }
  auto out = open_output(dir / (spec.name + "_summary.csv"));
  write_summary_csv(out, report);
  return report;
}

double cmd_sequence(const SequenceSpec& spec, std::ostream& csv) {
  const AuxSequence seq = aux_sequence(spec.n, spec.nu, spec.horizon);
  const std::vector<double> envelope = rate_envelope(spec.n, spec.nu, spec.r0, spec.horizon);
  const std::vector<LemmaMargins> margins = lemma_margins(seq);

  auto cell = [&](const std::optional<double>& v) {
    if (!v) return std::string();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return std::string(buf);
  };
  csv << "t,a_t,envelope,at_most_one,nonincreasing,period_power,linear_contraction,superlinear\n";
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const auto& m = margins[t];
    csv << t << ',' << cell(seq[t]) << ',' << cell(envelope[t]) << ',' << cell(m.at_most_one)
        << ',' << cell(m.nonincreasing) << ',' << cell(m.period_power) << ','
        << cell(m.linear_contraction) << ',' << cell(m.superlinear) << '\n';
  }
  return worst_margin(seq);
}

bool SelftestReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

namespace {

// Each check returns an empty string on success, else the first failure.
using Check = std::function<std::string(std::uint64_t seed)>;

std::string check_smw(std::uint64_t seed) {
  Rng rng(seed);
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = static_cast<Index>(1 + rng.next() % 20);
    const auto p = static_cast<Index>(1 + rng.next() % 6);
    const Matrix b = rng.normal_matrix(d, d);
    const Matrix h = b.transpose() * b + static_cast<double>(d) * Matrix::Identity(d, d);
    const Matrix u = 0.3 * rng.normal_matrix(d, p);
    const Matrix v = 0.3 * rng.normal_matrix(d, p);
    const Matrix updated = h + u * v.transpose();
    const Eigen::JacobiSVD<Matrix> svd(updated);
    const double cond = svd.singularValues()(0) / svd.singularValues()(d - 1);
    if (!(cond < 1e8)) continue;
    const Matrix oracle = updated.partialPivLu().inverse();
    const Matrix got = smw_update(h.partialPivLu().inverse(), u, v);
    const double err = (got - oracle).cwiseAbs().maxCoeff();
    const double allowed = 1e-9 * cond * std::max(1.0, oracle.cwiseAbs().maxCoeff());
    if (!(err <= allowed)) {
      std::ostringstream os;
      os << "trial " << trial << " (d=" << d << ", p=" << p << "): max error " << err << " > "
         << allowed;
      return os.str();
    }
  }
  return {};
}

std::vector<NamedSystem> shipped_problems(std::uint64_t seed) {
  return {
      {"chandrasekhar", std::make_shared<ChandrasekharH>(10, 0.9)},
      {"affine", std::make_shared<AffineSystem>(random_affine(16, 8, seed))},
      {"logistic",
       std::make_shared<RegLogistic>(synthetic_logistic(80, 8, seed), 1e-2, 1.0)},
      {"softmax", std::make_shared<SoftMaxMin>(soft_max_min(12, 8, 5.0, 2.0, seed))},
  };
}

std::string check_gradients_of(const NamedSystem& named, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> points;
  for (int p = 0; p < 4; ++p) {
    points.push_back(rng.uniform_vector(static_cast<Index>(named.system->dimension()), -1.0, 1.0));
  }
  const auto bad = check_gradients(*named.system, points);
  if (bad.empty()) return {};
  return "problem '" + named.name + "' " + describe(bad.front());
}

double max_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::string check_equivalences(std::uint64_t seed) {
  const auto problems = shipped_problems(seed);
  for (const auto& named : problems) {
    const ResidualSystem& sys = *named.system;
    const std::size_t n = sys.components();
    const Vector x0 = named.name == "chandrasekhar" ? Vector::Ones(sys.dimension())
                                                    : Vector::Zero(sys.dimension());
    IgnState full = init_state(sys, x0, n);
    Vector x = x0;
    for (int t = 0; t < 5; ++t) {
      x = gn_step(x, sys);
      advance(full, sys);
      if (max_diff(x, full.x) > 1e-9) {
        return "mb-ign(k=n) differs from gn on " + named.name + " at t=" + std::to_string(t + 1);
      }
    }
    IgnState one = init_state(sys, x0, 1);
    IgnState mb = init_state(sys, x0, 1);
    for (std::size_t t = 0; t < 2 * n; ++t) {
      one = ign_step(std::move(one), sys);
      mb = mbign_step(std::move(mb), sys);
      if (max_diff(one.x, mb.x) > 1e-12) {
        return "ign differs from mb-ign(k=1) on " + named.name;
      }
    }
  }
  return {};
}

std::string check_aggregates(std::uint64_t seed) {
  const auto problems = shipped_problems(seed);
  for (const auto& named : problems) {
    const ResidualSystem& sys = *named.system;
    const Vector x0 = named.name == "chandrasekhar" ? Vector::Ones(sys.dimension())
                                                    : Vector::Zero(sys.dimension());
    IgnState s = init_state(sys, x0, 1);
    for (std::size_t t = 0; t < 2 * sys.components(); ++t) {
      advance(s, sys);
      const auto [h, u] = recompute_aggregates(s, sys);
      const double scale = h.norm();
      if ((h - s.h).cwiseAbs().maxCoeff() > 1e-8 * scale ||
          (u - s.u).norm() > 1e-8 * std::max(1.0, u.norm())) {
        return "maintained (H, u) drifted on " + named.name + " at t=" + std::to_string(s.t);
      }
    }
  }
  return {};
}

std::string check_affine_exactness(std::uint64_t seed) {
  const AffineSystem sys = random_affine(24, 10, seed);
  const Vector x0 = Vector::Zero(10);
  IgnState s = init_state(sys, x0, 1);
  advance(s, sys);
  const double r = full_residual(sys, s.x).norm();
  if (r > 1e-10) return "affine residual after one ign step is " + std::to_string(r);
  if (full_residual(sys, gn_step(x0, sys)).norm() > 1e-10) return "affine gn step is not exact";
  return {};
}

std::string check_sequences(std::uint64_t) {
  for (std::size_t n : {1, 2, 5, 10, 25}) {
    for (double nu : {0.25, 0.5, 0.75, 1.0}) {
      const double worst = worst_margin(aux_sequence(n, nu, 12 * n));
      if (worst < kLemmaSlack) {
        std::ostringstream os;
        os << "n=" << n << " nu=" << nu << ": worst slack " << worst;
        return os.str();
      }
    }
  }
  return {};
}

}  // namespace

SelftestReport cmd_selftest(const SelftestOptions& options, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  SelftestReport report;

  auto run_check = [&](const std::string& name, const Check& check) {
    SelftestCheck result{name, true, {}};
    for (std::size_t s = 0; s < options.seeds && result.passed; ++s) {
      const std::uint64_t seed = options.base_seed + s;
      try {
        std::string failure = check(seed);
        if (!failure.empty()) {
          result.passed = false;
          result.detail = "seed " + std::to_string(seed) + ": " + failure;
        }
      } catch (const std::exception& e) {
        result.passed = false;
        result.detail = "seed " + std::to_string(seed) + ": exception: " + e.what();
      }
    }
    log << (result.passed ? "PASS " : "FAIL ") << name;
    if (!result.passed) log << "  " << result.detail;
    log << '\n';
    report.checks.push_back(std::move(result));
  };

  run_check("smw-vs-dense-inverse", check_smw);
  for (const char* name : {"chandrasekhar", "affine", "logistic", "softmax"}) {
    run_check(std::string("gradient-check/") + name, [name](std::uint64_t seed) {
      for (const auto& p : shipped_problems(seed)) {
        if (p.name == name) return check_gradients_of(p, seed);
      }
      return std::string("missing problem");
    });
  }
  for (const auto& extra : options.extra_systems) {
    run_check("gradient-check/" + extra.name,
              [&extra](std::uint64_t seed) { return check_gradients_of(extra, seed); });
  }
  run_check("method-equivalences", check_equivalences);
  run_check("aggregate-consistency", check_aggregates);
  run_check("affine-one-step", check_affine_exactness);
  run_check("rate-sequence-lemmas", check_sequences);

  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log << (report.passed() ? "selftest passed" : "selftest FAILED") << " in " << report.seconds
      << " s\n";
  return report;
}

}  // namespace ign::bench
