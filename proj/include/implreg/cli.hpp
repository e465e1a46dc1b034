#pragma once

// Command-line front end. Exit codes: 0 success, 1 user/domain error (one
// "error: <Code>: <message>" line on stderr), 2 internal failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "implreg/diffusion.hpp"
#include "implreg/error.hpp"
#include "implreg/graph.hpp"
#include "implreg/random.hpp"
#include "implreg/regularizers.hpp"
#include "implreg/sampling.hpp"
#include "implreg/sdp_solver.hpp"
#include "implreg/serialize.hpp"
#include "implreg/spectral.hpp"
#include "implreg/verification.hpp"

namespace implreg::cli {

struct CliConfig {
  std::string command;
  std::string graph_path;
  std::string regularizer;
  std::optional<double> p;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::optional<double> alpha;
  std::optional<double> t;
  std::uint64_t seed = 0;
  int count = 1;
  int steps = 10;
  bool dense = false;
  std::string format = "json";
  std::string out;
};

namespace detail {

inline std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

inline Regularizer make_regularizer(const CliConfig& cfg) {
  if (cfg.regularizer == "entropy") {
    if (cfg.p) fail(ErrorCode::InvalidArgument, "--p only applies to --regularizer pnorm");
    return Regularizer::entropy();
  }
  if (cfg.regularizer == "logdet") {
    if (cfg.p) fail(ErrorCode::InvalidArgument, "--p only applies to --regularizer pnorm");
    return Regularizer::log_det();
  }
  if (cfg.regularizer == "pnorm") {
    if (!cfg.p) fail(ErrorCode::InvalidArgument, "--regularizer pnorm requires --p");
    return Regularizer::p_norm(*cfg.p);
  }
  fail(ErrorCode::InvalidArgument, "--regularizer must be entropy, logdet or pnorm");
}

struct Param {
  std::string name;  // "eta", "t", "gamma" or "alpha"
  double value;
};

// Exactly one of `allowed` must be set and nothing else from {eta,t,gamma,alpha}.
inline Param pick_param(const CliConfig& cfg, const std::vector<std::string>& allowed) {
  const std::vector<std::pair<std::string, std::optional<double>>> all{
      {"eta", cfg.eta}, {"t", cfg.t}, {"gamma", cfg.gamma}, {"alpha", cfg.alpha}};
  std::optional<Param> picked;
  std::string allowed_list;
  for (const auto& a : allowed) allowed_list += (allowed_list.empty() ? "--" : " or --") + a;
  for (const auto& [name, val] : all) {
    if (!val) continue;
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
      fail(ErrorCode::InvalidArgument, "--" + name + " is not valid here; expected " + allowed_list);
    }
    if (picked) fail(ErrorCode::InvalidArgument, "set exactly one of " + allowed_list);
    picked = Param{name, *val};
  }
  if (!picked) fail(ErrorCode::InvalidArgument, "missing parameter: set one of " + allowed_list);
  return *picked;
}

inline std::vector<std::string> params_for(const std::string& regularizer, bool allow_eta) {
  std::vector<std::string> out;
  if (regularizer == "entropy") out = {"eta", "t"};
  if (regularizer == "logdet") out = {"gamma"};
  if (regularizer == "pnorm") out = {"alpha"};
  if (allow_eta && regularizer != "entropy") out.insert(out.begin(), "eta");
  return out;
}

inline void require_no_diffusion_params(const CliConfig& cfg) {
  if (cfg.t || cfg.gamma || cfg.alpha) {
    fail(ErrorCode::InvalidArgument, "this command takes --eta, not --t/--gamma/--alpha");
  }
}

inline Json header(const CliConfig& cfg, const Graph& g) {
  Json out;
  out["command"] = cfg.command;
  out["graph"] = to_json(g);
  return out;
}

inline std::string kv_csv(const Json& obj) {
  std::string out = "field,value\n";
  for (const auto& [key, val] : obj.items()) {
    if (val.is_array()) {
      for (std::size_t i = 0; i < val.size(); ++i) {
        out += key + "[" + std::to_string(i) + "]," +
               (val[i].is_number() ? format_double(val[i].get<double>()) : val[i].dump()) + '\n';
      }
    } else if (val.is_number_float()) {
      out += key + ',' + format_double(val.get<double>()) + '\n';
    } else if (val.is_string()) {
      out += key + ',' + val.get<std::string>() + '\n';
    } else if (!val.is_object()) {
      out += key + ',' + val.dump() + '\n';
    }
  }
  return out;
}

inline std::string cmd_solve(const CliConfig& cfg, const GraphSpectrum& spec) {
  require_no_diffusion_params(cfg);
  if (!cfg.eta) fail(ErrorCode::InvalidArgument, "solve requires --eta");
  const Regularizer r = make_regularizer(cfg);
  const auto sol = solve(spec.basis, r, *cfg.eta);
  if (cfg.format == "csv") return kv_csv(to_json(sol.report));
  Json out = header(cfg, spec.graph);
  out["report"] = to_json(sol.report);
  out["certificate"] = to_json(verify_optimality(*spec.basis, r, *cfg.eta, sol.x));
  out["density"] = to_json(sol.x, cfg.dense);
  return out.dump(2) + '\n';
}

inline EquivalenceReport run_check(const CliConfig& cfg, const GraphSpectrum& spec) {
  const Regularizer r = make_regularizer(cfg);
  const Param param = pick_param(cfg, params_for(cfg.regularizer, false));
  switch (r.kind()) {
    case RegularizerKind::Entropy: return check_heat_kernel_lemma(spec, param.value);
    case RegularizerKind::LogDet: return check_pagerank_lemma(spec, param.value);
    case RegularizerKind::PNorm: return check_lazy_walk_lemma(spec, param.value, r.steps());
  }
  throw std::logic_error("unreachable");
}

inline std::string cmd_equiv_check(const CliConfig& cfg, const GraphSpectrum& spec) {
  const EquivalenceReport rep = run_check(cfg, spec);
  if (cfg.format == "csv") return to_csv({rep});
  Json out = header(cfg, spec.graph);
  out["report"] = to_json(rep);
  return out.dump(2) + '\n';
}

inline std::string cmd_map_params(const CliConfig& cfg, const GraphSpectrum& spec) {
  const Regularizer r = make_regularizer(cfg);
  const Param given = pick_param(cfg, params_for(cfg.regularizer, true));
  const SpectralBasis& basis = *spec.basis;

  Json m;
  m["regularizer"] = std::string(kind_name(r.kind()));
  m["p"] = r.kind() == RegularizerKind::PNorm ? Json(r.p()) : Json(nullptr);
  m["given"] = given.name;

  double eta = 0.0;
  std::optional<double> lambda;
  std::string param_name;
  std::optional<double> param;
  switch (r.kind()) {
    case RegularizerKind::Entropy:
      param_name = "t";
      eta = given.value;
      param = given.value;
      break;
    case RegularizerKind::LogDet:
      param_name = "gamma";
      if (given.name == "gamma") {
        param = given.value;
        lambda = lambda_from_gamma(given.value);
        eta = eta_for_gamma(basis, given.value);
      } else {
        eta = given.value;
      }
      break;
    case RegularizerKind::PNorm:
      param_name = "alpha";
      if (given.name == "alpha") {
        param = given.value;
        lambda = lambda_from_alpha(given.value);
        eta = eta_for_alpha(basis, given.value, r.steps());
      } else {
        eta = given.value;
      }
      break;
  }
  // Reverse direction: solve at eta and read lambda* back.
  const auto sol = solve(spec.basis, r, eta);
  if (!lambda) lambda = sol.report.lambda_star;
  if (!param) param = sol.report.mapped_param;

  m["eta"] = eta;
  m["lambda"] = *lambda;
  m["param_name"] = param_name;
  m["param"] = optional_json(param);
  m["solved_lambda_star"] = sol.report.lambda_star;
  m["solved_param"] = optional_json(sol.report.mapped_param);

  if (cfg.format == "csv") return kv_csv(m);
  Json out = header(cfg, spec.graph);
  out["mapping"] = std::move(m);
  return out.dump(2) + '\n';
}

inline std::string cmd_sample(const CliConfig& cfg, const GraphSpectrum& spec) {
  require_no_diffusion_params(cfg);
  if (!cfg.eta) fail(ErrorCode::InvalidArgument, "sample requires --eta");
  const Regularizer r = make_regularizer(cfg);
  const auto sol = solve(spec.basis, r, *cfg.eta);
  const auto samples = sample_vectors(sol.x, SampleConfig{cfg.seed, cfg.count});
  if (cfg.format == "csv") {
    std::string out = "sample";
    for (std::size_t j = 0; j < spec.graph.n(); ++j) out += ",x" + std::to_string(j);
    out += '\n';
    for (std::size_t s = 0; s < samples.size(); ++s) {
      out += std::to_string(s);
      for (Eigen::Index j = 0; j < samples[s].size(); ++j) out += ',' + format_double(samples[s](j));
      out += '\n';
    }
    return out;
  }
  Json out = header(cfg, spec.graph);
  out["seed"] = cfg.seed;
  out["count"] = cfg.count;
  out["report"] = to_json(sol.report);
  Json arr = Json::array();
  for (const auto& s : samples) arr.push_back(to_json(s));
  out["samples"] = std::move(arr);
  return out.dump(2) + '\n';
}

inline std::string cmd_power_demo(const CliConfig& cfg, const GraphSpectrum& spec) {
  if (cfg.eta || cfg.t || cfg.gamma) {
    fail(ErrorCode::InvalidArgument, "power-demo takes --alpha, --steps and --seed only");
  }
  if (!cfg.alpha) fail(ErrorCode::InvalidArgument, "power-demo requires --alpha");
  Rng rng(cfg.seed);
  Eigen::VectorXd v0(static_cast<Eigen::Index>(spec.graph.n()));
  for (Eigen::Index i = 0; i < v0.size(); ++i) v0(i) = rng.gaussian();
  const auto traj = power_demo(spec, *cfg.alpha, cfg.steps, v0);
  if (cfg.format == "csv") {
    std::string out = "step,rayleigh\n";
    for (const auto& s : traj) out += std::to_string(s.step) + ',' + format_double(s.rayleigh) + '\n';
    return out;
  }
  Json out = header(cfg, spec.graph);
  out["alpha"] = *cfg.alpha;
  out["steps"] = cfg.steps;
  out["seed"] = cfg.seed;
  out["smallest_nontrivial_eigenvalue"] = spec.basis->smallest_nontrivial();
  Json arr = Json::array();
  for (const auto& s : traj) {
    Json row;
    row["step"] = s.step;
    row["rayleigh"] = s.rayleigh;
    row["vector"] = to_json(s.vector);
    arr.push_back(std::move(row));
  }
  out["trajectory"] = std::move(arr);
  return out.dump(2) + '\n';
}

inline std::string cmd_suite(const CliConfig& cfg, const GraphSpectrum& spec) {
  const auto reports = full_suite(spec);
  if (cfg.format == "csv") return to_csv(reports);
  Json out = header(cfg, spec.graph);
  out["suite"] = to_json(reports);
  return out.dump(2) + '\n';
}

inline std::string dispatch(const CliConfig& cfg) {
  const GraphSpectrum spec = analyze(read_graph_file(cfg.graph_path));
  if (cfg.command == "solve") return cmd_solve(cfg, spec);
  if (cfg.command == "equiv-check") return cmd_equiv_check(cfg, spec);
  if (cfg.command == "map-params") return cmd_map_params(cfg, spec);
  if (cfg.command == "sample") return cmd_sample(cfg, spec);
  if (cfg.command == "power-demo") return cmd_power_demo(cfg, spec);
  if (cfg.command == "suite") return cmd_suite(cfg, spec);
  throw std::logic_error("unknown command " + cfg.command);
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Regularized spectral SDP solver and diffusion-equivalence checker", "implreg"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph_path, "Edge-list file (u v [w] per line)")->required();
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "Write output to this file instead of stdout");
  };
  auto add_regularizer = [&](CLI::App* sub) {
    sub->add_option("--regularizer", cfg.regularizer, "entropy | logdet | pnorm")
        ->required()
        ->check(CLI::IsMember({"entropy", "logdet", "pnorm"}));
    sub->add_option("--p", cfg.p, "p-norm exponent (> 1)");
  };
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--eta", cfg.eta, "Regularization strength");
    sub->add_option("--t", cfg.t, "Heat-kernel time");
    sub->add_option("--gamma", cfg.gamma, "PageRank teleportation");
    sub->add_option("--alpha", cfg.alpha, "Lazy-walk holding probability");
  };

  auto* solve_cmd = app.add_subcommand("solve", "Solve the regularized SDP in closed form");
  add_common(solve_cmd);
  add_regularizer(solve_cmd);
  add_params(solve_cmd);
  solve_cmd->add_flag("--dense", cfg.dense, "Include the dense density matrix");

  auto* equiv_cmd = app.add_subcommand("equiv-check", "Compare an SDP optimum to its diffusion");
  add_common(equiv_cmd);
  add_regularizer(equiv_cmd);
  add_params(equiv_cmd);

  auto* map_cmd = app.add_subcommand("map-params", "Map between eta, lambda and t/gamma/alpha");
  add_common(map_cmd);
  add_regularizer(map_cmd);
  add_params(map_cmd);

  auto* sample_cmd = app.add_subcommand("sample", "Draw X^{1/2} xi samples from the SDP optimum");
  add_common(sample_cmd);
  add_regularizer(sample_cmd);
  add_params(sample_cmd);
  sample_cmd->add_option("--seed", cfg.seed, "Generator seed");
  sample_cmd->add_option("--count", cfg.count, "Number of samples")->check(CLI::PositiveNumber);

  auto* power_cmd = app.add_subcommand("power-demo", "Unnormalized lazy-walk power iteration");
  add_common(power_cmd);
  add_params(power_cmd);
  power_cmd->add_option("--steps", cfg.steps, "Number of walk steps")->check(CLI::NonNegativeNumber);
  power_cmd->add_option("--seed", cfg.seed, "Seed for the random start vector");

  auto* suite_cmd = app.add_subcommand("suite", "Run all equivalence checks over default sweeps");
  add_common(suite_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: ParseError: " << detail::one_line(e.what()) << '\n';
    return 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    const std::string text = detail::dispatch(cfg);
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) fail(ErrorCode::IoError, "cannot write '" + cfg.out + "'");
      file << text;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << code_name(e.code()) << ": " << detail::one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal-error: " << detail::one_line(e.what()) << '\n';
    return 2;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"implreg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace implreg::cli
