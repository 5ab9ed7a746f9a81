#include "cppc/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cppc/completion.hpp"
#include "cppc/io.hpp"
#include "cppc/qp_relax.hpp"

namespace cppc {

namespace {

struct Outcome {
  Json report;
  std::string summary;
  int code = kExitOk;
};

SolveOptions solver_overrides(SolveOptions o, const RunConfig& cfg) {
  if (cfg.tol) {
    o.tol_primal = *cfg.tol;
    o.tol_dual = *cfg.tol;
    o.tol_gap = 10.0 * *cfg.tol;
  }
  if (cfg.max_iters) o.max_iters = *cfg.max_iters;
  return o;
}

std::size_t unspecified_entries(const PartialMatrix& pm) { return pm.pattern().unspecified_count(); }

Outcome do_check(const Json& in, const RunConfig& cfg) {
  const CompletionProblem problem = completion_problem_from_json(in);
  FindDataOptions fo;
  fo.seed = cfg.seed;
  if (cfg.tol) fo.residual_tol = *cfg.tol;
  const CompletabilityCertificate cert = certify_completable(problem, fo);
  Outcome o;
  o.report = certificate_to_json(cert);
  o.summary = std::string("check: ") + to_string(cert.verdict) + (cert.reason.empty() ? "" : " (" + cert.reason + ")");
  return o;
}

Outcome do_complete(const Json& in, const RunConfig& cfg) {
  const CompletionProblem problem = completion_problem_from_json(in);
  CompleteOptions co;
  co.solver = solver_overrides(co.solver, cfg);
  if (cfg.tol) co.dnn_tol = *cfg.tol;

  // Closed form first when every block is rank one.
  CompletionResult res = complete_rank_one(problem);
  std::string method = "rank-one";
  if (!res.completion) {
    res = complete_numeric(problem, co);
    method = "numeric";
  }
  Outcome o;
  o.report = completion_result_to_json(res);
  o.report["method"] = method;
  std::ostringstream sum;
  if (res.completion) {
    sum << "complete: completion found (" << method << ")";
  } else {
    sum << "complete: no completion found: " << res.message;
    if (unspecified_entries(problem.original()) <= 3) {
      const OracleResult orc = brute_force_completion_oracle(problem.original());
      o.report["oracle"] = oracle_result_to_json(orc);
      sum << "; oracle max smallest eigenvalue " << orc.best_min_eigenvalue;
      if (orc.completion) sum << " (oracle found a completion)";
    } else {
      o.report["oracle"] = nullptr;
      // Nothing decisive was computed.
      if (res.solve && res.solve->status != SolveResult::Status::Optimal) o.code = kExitNumerical;
    }
  }
  o.summary = sum.str();
  return o;
}

Outcome do_solve_qp(const Json& in, const RunConfig& cfg) {
  const QPInstance qp = qp_from_json(in);
  ExactnessOptions eo;
  eo.solver = solver_overrides(eo.solver, cfg);
  const ExactnessReport rep = exactness_report(qp, eo);
  Outcome o;
  o.report = exactness_report_to_json(rep);
  std::ostringstream sum;
  sum << "solve-qp: lower " << rep.lower;
  if (rep.upper) sum << ", upper " << *rep.upper;
  sum << ", " << to_string(rep.overall);
  if (rep.solution.diagnostics.status != SolveResult::Status::Optimal) {
    o.code = kExitNumerical;
    const auto& d = rep.solution.diagnostics;
    sum << "; solver " << to_string(d.status) << " after " << d.iterations << " iterations, residuals primal "
        << d.primal_residual << " dual " << d.dual_residual << " gap " << d.gap;
  }
  o.summary = sum.str();
  return o;
}

Outcome do_oracle(const Json& in, const RunConfig& cfg) {
  Outcome o;
  std::ostringstream sum;
  if (in.is_object() && in.contains("A")) {
    const QPInstance qp = qp_from_json(in);
    const QpOracleResult r = brute_force_qp(qp);
    o.report = {{"kind", "qp"},
                {"optimum", r.optimum ? Json(*r.optimum) : Json(nullptr)},
                {"argmin", r.optimum ? vector_to_json(r.argmin) : Json(nullptr)},
                {"faces_checked", r.faces_checked}};
    sum << "oracle: QP optimum ";
    if (r.optimum)
      sum << *r.optimum;
    else
      sum << "none (infeasible)";
    o.summary = sum.str();
    return o;
  }
  const CompletionProblem problem = completion_problem_from_json(in);
  o.report = {{"kind", "completion"}};
  if (unspecified_entries(problem.original()) <= 3) {
    const OracleResult r = brute_force_completion_oracle(problem.original());
    o.report["completion_oracle"] = oracle_result_to_json(r);
    sum << "oracle: " << (r.completion ? "completion found" : "no completion") << ", max smallest eigenvalue "
        << r.best_min_eigenvalue;
  } else {
    o.report["completion_oracle"] = nullptr;
    sum << "oracle: too many unspecified entries for grid search";
  }
  // Independent re-check of whatever certificate `check` would emit.
  FindDataOptions fo;
  fo.seed = cfg.seed;
  const CompletabilityCertificate cert = certify_completable(problem, fo);
  const bool reverified = cert.certified() && reverify_certificate(problem, cert);
  o.report["certificate_verdict"] = to_string(cert.verdict);
  o.report["certificate_reverified"] = reverified;
  sum << "; certificate " << to_string(cert.verdict) << (cert.certified() ? (reverified ? ", re-verified" : ", FAILED re-verification") : "");
  o.summary = sum.str();
  return o;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    const Json in = read_json_file(cfg.input);
    if (cfg.command == "check")
      o = do_check(in, cfg);
    else if (cfg.command == "complete")
      o = do_complete(in, cfg);
    else if (cfg.command == "solve-qp")
      o = do_solve_qp(in, cfg);
    else if (cfg.command == "oracle")
      o = do_oracle(in, cfg);
    else
      throw InputError("unknown command " + cfg.command);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }

  const std::string text = dump_json(o.report) + "\n";
  if (cfg.output.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) {
      err << "input error: cannot write " << cfg.output << "\n";
      return kExitInput;
    }
    f << text;
  }
  if (!cfg.quiet) err << o.summary << "\n";
  return o.code;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Set-completely-positive completion certificates and sparse conic QP relaxations"};
  app.require_subcommand(1);
  RunConfig cfg;
  double tol = 0.0;
  int max_iters = 0;

  auto add = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("input", cfg.input, "input JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", cfg.output, "write the JSON report here instead of stdout");
    sub->add_option("--tol", tol, "override solver and residual tolerances")->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", max_iters, "solver iteration limit")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "seed for randomized search (default 0)");
    sub->add_flag("--quiet", cfg.quiet, "no summary on stderr");
    sub->callback([&cfg, name] { cfg.command = name; });
    return sub;
  };
  add("check", "certify completability of a width-one arrowhead partial matrix");
  add("complete", "compute a completion");
  add("solve-qp", "bound a QP by its sparse relaxation and report exactness evidence");
  add("oracle", "brute-force reference answers for a completion problem or a QP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--tol")) cfg.tol = tol;
    if (sub->count("--max-iters")) cfg.max_iters = max_iters;
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace cppc
