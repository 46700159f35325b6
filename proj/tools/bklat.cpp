// Copyright 2026 The bklattice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// bklat: command-line front end for the bklattice library.
//
// Exit codes: 0 ok, 1 runtime violation or I/O failure, 2 invalid input.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bklattice/core_lattice.hpp"
#include "bklattice/error.hpp"
#include "bklattice/io.hpp"
#include "bklattice/norms.hpp"
#include "bklattice/operators.hpp"
#include "bklattice/rng.hpp"
#include "bklattice/verify.hpp"
#include "bklattice/zerotwo.hpp"

namespace fs = std::filesystem;
using namespace bklat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInvalid = 2;

const std::vector<double> kCheckPs = {1.0, 1.5, 2.0, 3.0, kInfP};

struct Globals {
  std::uint64_t seed = 0;
  bool quiet = false;
};

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::IoError:
    case Errc::InfeasibleScaling:
    case Errc::NoConvergence:
    case Errc::CheckFailed:
      return kExitViolation;
    default:
      return kExitInvalid;
  }
}

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInfP;
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw Error(Errc::InvalidP, "cannot parse p '" + text + "'");
  check_p(p);
  return p;
}

void note(const Globals& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << '\n';
}

// ---------------------------------------------------------------- gen-model

struct GenModelArgs {
  std::size_t omega = 1;
  std::size_t atoms = 1;
  bool normalize = false;
  bool uniform = false;
  std::string out;
};

int cmd_gen_model(const Globals& g, const GenModelArgs& a) {
  if (a.omega < 1 || a.atoms < 1) throw Error(Errc::InvalidArgument, "--omega and --atoms must be >= 1");
  Rng rng(g.seed);
  std::vector<double> weights(a.omega);
  for (double& w : weights) w = rng.uniform(0.5, 2.0);
  Matrix m(a.omega, a.atoms, 1.0);
  if (!a.uniform)
    for (double& v : m.data()) v = rng.uniform(0.1, 2.0);
  if (a.normalize) {
    for (std::size_t k = 0; k < a.omega; ++k) {
      double s = 0.0;
      for (double v : m.row(k)) s += v;
      for (double& v : m.row(k)) v /= s;
    }
  }
  const Model model(BaseSpace(std::move(weights)), BooleanAtoms(a.atoms), VectorMeasure(std::move(m)));
  io::save_model(a.out, model);
  note(g, "wrote model K=" + std::to_string(a.omega) + " N=" + std::to_string(a.atoms) + " to " + a.out);
  return kExitOk;
}

// ------------------------------------------------------------------ gen-op

struct GenOpArgs {
  std::string model;
  std::string mode = "positive-strict";
  std::string fibers;
  std::string out;
};

// Empty string when the draw meets every flag it will be written with.
std::string self_check(const GeneratedOperator& gen, const Model& model, GenMode mode) {
  const auto& op = gen.op;
  if (mode == GenMode::Signed) {
    if (!gen.majorant) return "signed draw without majorant";
    if (majorant_check(op, *gen.majorant, 50, 0)) return "majorant check failed";
    for (double p : kCheckPs)
      if (!is_contraction(*gen.majorant, model.measure, p)) return "majorant is not a contraction";
    return {};
  }
  if (!op.is_positive()) return "not positive";
  if (!op.is_sub_unital()) return "not sub-unital";
  for (double p : kCheckPs)
    if (!is_contraction(op, model.measure, p)) return "not a contraction for p=" + io::format_double(p);
  return {};
}

int cmd_gen_op(const Globals& g, const GenOpArgs& a) {
  const GenMode mode = parse_gen_mode(a.mode);
  const Model model = io::load_model(a.model);
  std::optional<FiberedOperator> custom;
  if (mode == GenMode::Custom) {
    if (a.fibers.empty()) throw Error(Errc::InvalidArgument, "--mode custom needs --fibers");
    custom = io::load_operator(a.fibers).op;
  }

  constexpr int kAttempts = 100;
  std::string last_failure;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    GeneratedOperator gen{FiberedOperator::zero(1, 1), std::nullopt};
    try {
      gen = gen_contraction(model, mode, g.seed + static_cast<std::uint64_t>(attempt), custom);
    } catch (const Error& e) {
      if (e.code() != Errc::InfeasibleScaling) throw;
      last_failure = e.what();
      if (mode == GenMode::Custom) break;
      continue;
    }
    if (auto why = self_check(gen, model, mode); !why.empty()) {
      last_failure = why;
      if (mode == GenMode::Custom) throw Error(Errc::NotContraction, "custom operator rejected: " + why);
      continue;
    }
    io::save_operator(a.out, gen.op, model);
    if (gen.majorant) io::save_operator(a.out + ".majorant.json", *gen.majorant, model);
    note(g, "wrote " + to_string(mode) + " operator to " + a.out +
                (attempt > 0 ? " after " + std::to_string(attempt) + " resamples" : ""));
    return kExitOk;
  }
  std::cerr << "error: no admissible operator after " << kAttempts << " attempts: " << last_failure << '\n';
  return kExitViolation;
}

// -------------------------------------------------------------------- norm

struct NormArgs {
  std::string op;
  std::string p = "1";
  std::string method = "auto";
};

int cmd_norm(const Globals& g, const NormArgs& a) {
  const double p = parse_p(a.p);
  const auto file = io::load_operator(a.op);
  const auto& op = file.op;
  const auto& m = file.model.measure;

  std::vector<NormResult> results;
  if (a.method == "auto") {
    results = l0_opnorm_detailed(op, m, p);
  } else {
    for (std::size_t k = 0; k < op.fibers(); ++k) {
      const auto w = m.weights(k);
      if (a.method == "exact") {
        if (!(p == 1.0 || p == 2.0 || std::isinf(p)))
          throw Error(Errc::InvalidArgument, "--method exact needs p in {1, 2, inf}");
        results.push_back(opnorm_exact(op.fiber(k), w, p));
      } else if (a.method == "boyd") {
        if (!all_nonnegative(op.fiber(k)))
          throw Error(Errc::InvalidArgument, "--method boyd needs nonnegative fibers");
        auto r = opnorm_boyd(op.fiber(k), w, p);
        if (!r.converged) throw Error(Errc::NoConvergence, "Boyd iteration did not converge at fiber " + std::to_string(k));
        results.push_back(std::move(r));
      } else if (a.method == "oracle") {
        results.push_back(opnorm_oracle(op.fiber(k), w, p, 2000, g.seed));
      } else {
        throw Error(Errc::InvalidArgument, "unknown method '" + a.method + "'");
      }
    }
  }
  for (const auto& r : results) std::printf("%.17g\n", r.value);
  return kExitOk;
}

// ----------------------------------------------------------------- modulus

struct ModulusArgs {
  std::string op;
  std::string out;
  std::string method = "net";
};

int cmd_modulus(const Globals& g, const ModulusArgs& a) {
  const auto file = io::load_operator(a.op);
  FiberedOperator mod = FiberedOperator::zero(1, 1);
  if (a.method == "net") {
    const auto report = modulus_net(file.op);
    mod = report.modulus;
    note(g, "partition net stabilized after " + std::to_string(report.steps_to_stabilize) + " refinements");
  } else if (a.method == "direct") {
    mod = modulus_direct(file.op);
  } else {
    throw Error(Errc::InvalidArgument, "unknown method '" + a.method + "'");
  }
  if (a.out.empty())
    std::cout << io::dump(io::operator_to_json(mod, file.model));
  else
    io::save_operator(a.out, mod, file.model);
  return kExitOk;
}

// ---------------------------------------------------------------- zero-two

struct ZeroTwoArgs {
  std::string op;
  std::string p = "1";
  unsigned n_max = 100;
  std::string out;
  std::string verdicts;
  double zero_tol = kDefaultZeroTol;
  double two_tol = kDefaultTwoTol;
};

int cmd_zero_two(const Globals& g, const ZeroTwoArgs& a) {
  const double p = parse_p(a.p);
  if (a.n_max < 1) throw Error(Errc::InvalidArgument, "--n-max must be >= 1");
  if (!(a.zero_tol > 0.0) || !(a.two_tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerances must be > 0");
  const auto file = io::load_operator(a.op);
  DichotomyOptions opts;
  opts.two_tol = a.two_tol;
  const auto trace = run_dichotomy(file.op, file.model.measure, p, a.n_max, opts);
  const auto verdicts = classify(trace, a.zero_tol, a.two_tol);
  io::write_file_atomic(a.out, io::trace_to_csv(trace));
  if (!a.verdicts.empty()) io::write_file_atomic(a.verdicts, io::dump(io::verdicts_to_json(verdicts)));
  if (!g.quiet) {
    for (const auto& v : verdicts)
      std::cerr << "fiber " << v.fiber << ": " << to_string(v.verdict) << " (final " << io::format_double(v.final_value)
                << ")\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  std::string suite = "all";
  std::string counterexample = "counterexample.json";
  std::string fault;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  verify::Options opts;
  opts.seed = g.seed;
  if (a.fault == "modulus-identity") {
    opts.modulus = [](const FiberedOperator& t) { return t; };
  } else if (!a.fault.empty()) {
    throw Error(Errc::InvalidArgument, "unknown fault '" + a.fault + "'");
  }
  const auto results = verify::run(a.suite, opts);

  nlohmann::json failures = nlohmann::json::array();
  for (const auto& r : results) {
    if (!g.quiet || !r.passed)
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << '/' << r.name << "  [" << r.statement << "]\n";
    if (!r.passed) {
      failures.push_back({{"suite", r.suite},
                          {"check", r.name},
                          {"statement", r.statement},
                          {"detail", r.detail},
                          {"seed", g.seed},
                          {"counterexample", r.counterexample}});
    }
  }
  if (failures.empty()) return kExitOk;
  io::write_file_atomic(a.counterexample, io::dump(failures));
  std::cout << failures.size() << " check(s) failed; counterexample written to " << a.counterexample << '\n';
  return kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice-normed operator experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress progress messages");

  GenModelArgs gm;
  auto* gen_model = app.add_subcommand("gen-model", "Generate a random model file");
  gen_model->add_option("--omega", gm.omega, "Number of base atoms K")->required();
  gen_model->add_option("--atoms", gm.atoms, "Number of Boolean atoms N")->required();
  gen_model->add_flag("--normalize", gm.normalize, "Scale each measure row to sum 1");
  gen_model->add_flag("--uniform", gm.uniform, "Use a constant measure");
  gen_model->add_option("-o,--out", gm.out, "Output path")->required();

  GenOpArgs go;
  auto* gen_op = app.add_subcommand("gen-op", "Generate a contraction for a model");
  gen_op->add_option("--model", go.model, "Model file")->required();
  gen_op->add_option("--mode", go.mode, "positive-strict | permutation | signed | custom")->capture_default_str();
  gen_op->add_option("--fibers", go.fibers, "Operator file supplying fibers for --mode custom");
  gen_op->add_option("-o,--out", go.out, "Output path")->required();

  NormArgs na;
  auto* norm = app.add_subcommand("norm", "Print the L0-valued operator norm, one line per fiber");
  norm->add_option("--op", na.op, "Operator file")->required();
  norm->add_option("--p", na.p, "Exponent in [1, inf]")->required();
  norm->add_option("--method", na.method, "auto | exact | boyd | oracle")->capture_default_str();

  ModulusArgs ma;
  auto* modulus = app.add_subcommand("modulus", "Compute the modulus |T|");
  modulus->add_option("--op", ma.op, "Operator file")->required();
  modulus->add_option("--method", ma.method, "net | direct")->capture_default_str();
  modulus->add_option("-o,--out", ma.out, "Output path (stdout if omitted)");

  ZeroTwoArgs za;
  auto* zero_two = app.add_subcommand("zero-two", "Trace d_n = || |T^(n+1) - T^n| || and classify fibers");
  zero_two->add_option("--op", za.op, "Operator file")->required();
  zero_two->add_option("--p", za.p, "Exponent in [1, inf]")->required();
  zero_two->add_option("--n-max", za.n_max, "Last power index")->capture_default_str();
  zero_two->add_option("-o,--out", za.out, "Trace CSV path")->required();
  zero_two->add_option("--verdicts", za.verdicts, "Verdict JSON path");
  zero_two->add_option("--zero-tol", za.zero_tol)->capture_default_str();
  zero_two->add_option("--two-tol", za.two_tol)->capture_default_str();

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suites");
  verify_cmd->add_option("--suite", va.suite, "all | core | operators | norms | zerotwo | io")->capture_default_str();
  verify_cmd->add_option("--counterexample", va.counterexample, "Where failures are written")->capture_default_str();
  verify_cmd->add_option("--inject-fault", va.fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*gen_model) return cmd_gen_model(g, gm);
    if (*gen_op) return cmd_gen_op(g, go);
    if (*norm) return cmd_norm(g, na);
    if (*modulus) return cmd_modulus(g, ma);
    if (*zero_two) return cmd_zero_two(g, za);
    if (*verify_cmd) return cmd_verify(g, va);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  }
  return kExitInvalid;
}
