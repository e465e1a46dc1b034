#pragma once

// JSON and CSV renderings of the report types. Keys keep insertion order so
// identical inputs give byte-identical output; doubles use the shortest
// round-trip form. NaN and infinities become null in JSON.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "implreg/format.hpp"
#include "implreg/graph.hpp"
#include "implreg/sdp_solver.hpp"
#include "implreg/spectral.hpp"
#include "implreg/verification.hpp"

namespace implreg {

using Json = nlohmann::ordered_json;

inline Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

/// Dense row-major nested arrays.
inline Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return out;
}

inline Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json to_json(const Graph& g) {
  Json out;
  out["n"] = g.n();
  out["edges"] = g.edges().size();
  out["warnings"] = g.warnings();
  return out;
}

inline Json to_json(const DensityMatrix& x, bool include_dense) {
  Json out;
  out["weights"] = to_json(x.weights());
  out["eigenvalues"] = to_json(x.basis().nontrivial_eigenvalues());
  if (include_dense) out["dense"] = matrix_to_json(x.dense());
  return out;
}

inline Json to_json(const SolveReport& r) {
  Json out;
  out["regularizer"] = std::string(kind_name(r.kind));
  out["p"] = r.kind == RegularizerKind::PNorm ? Json(r.p) : Json(nullptr);
  out["eta"] = r.eta;
  out["lambda_star"] = r.lambda_star;
  out["mapped_param_name"] = r.mapped_param_name;
  out["mapped_param"] = optional_json(r.mapped_param);
  out["weights"] = to_json(r.weights);
  out["trace_residual"] = r.trace_residual;
  out["psd_margin"] = r.psd_margin;
  out["duality_gap"] = r.duality_gap;
  out["objective"] = r.objective;
  out["primal_value"] = r.primal_value;
  out["dual_value"] = r.dual_value;
  out["bisection_iterations"] = r.bisection_iterations;
  return out;
}

inline Json to_json(const Certificate& c) {
  Json out;
  out["pass"] = c.pass;
  out["lambda_candidate"] = c.lambda_candidate;
  out["lambda_spread"] = c.lambda_spread;
  out["trace_residual"] = c.trace_residual;
  out["psd_margin"] = c.psd_margin;
  out["primal_value"] = c.primal_value;
  out["dual_value"] = c.dual_value;
  out["duality_gap"] = c.duality_gap;
  return out;
}

inline Json to_json(const EquivalenceReport& r) {
  Json out;
  out["lemma"] = std::string(lemma_name(r.lemma));
  out["diffusion_param"] = r.diffusion_param;
  out["steps"] = optional_json(r.steps);
  out["eta"] = r.eta;
  out["lambda_star"] = r.lambda_star;
  out["recovered_param"] = optional_json(r.recovered_param);
  out["param_roundtrip_error"] = r.param_roundtrip_error;
  out["max_abs_deviation"] = r.max_abs_deviation;
  out["trace_convention"] = r.trace_convention;
  out["subspace_trace"] = r.subspace_trace;
  out["full_space_trace"] = r.full_space_trace;
  out["literal_conjugation_deviation"] = optional_json(r.literal_conjugation_deviation);
  out["error"] = r.error ? Json(*r.error) : Json(nullptr);
  out["pass"] = r.pass;
  return out;
}

inline Json to_json(const std::vector<EquivalenceReport>& reports) {
  Json items = Json::array();
  std::size_t passed = 0;
  for (const auto& r : reports) {
    items.push_back(to_json(r));
    if (r.pass) ++passed;
  }
  Json out;
  out["total"] = reports.size();
  out["passed"] = passed;
  out["all_pass"] = passed == reports.size();
  out["reports"] = std::move(items);
  return out;
}

namespace detail {

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string csv_opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace detail

/// lemma,param,steps,eta,deviation,pass,error
inline std::string to_csv(const std::vector<EquivalenceReport>& reports) {
  std::string out = "lemma,param,steps,eta,deviation,pass,error\n";
  for (const auto& r : reports) {
    out += std::string(lemma_name(r.lemma)) + ',' + format_double(r.diffusion_param) + ',' +
           detail::csv_opt(r.steps) + ',' + format_double(r.eta) + ',' +
           format_double(r.max_abs_deviation) + ',' + (r.pass ? "true" : "false") + ',' +
           detail::csv_cell(r.error.value_or("")) + '\n';
  }
  return out;
}

}  // namespace implreg
