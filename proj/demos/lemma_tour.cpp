// Walks through the three SDP/diffusion equivalences on a small graph and
// prints how far apart the two sides are.
//
//   lemma_tour [edge-list-file]     (defaults to the 3-node path)

#include <algorithm>
#include <cstdio>
#include <exception>
#include <string>

#include "implreg/implreg.hpp"

using namespace implreg;

namespace {

void show(const EquivalenceReport& rep) {
  std::printf("  %-10s param=%-8.4g eta=%-10.6g lambda*=%-11.6g dev=%.2e  %s\n",
              std::string(lemma_name(rep.lemma)).c_str(), rep.diffusion_param, rep.eta,
              rep.lambda_star, rep.max_abs_deviation, rep.pass ? "ok" : "MISMATCH");
  if (rep.literal_conjugation_deviation) {
    std::printf("             conjugating by D^(-+steps/2) instead: dev=%.2e\n",
                *rep.literal_conjugation_deviation);
  }
}

}  // namespace

int main(int argc, char** argv) try {
  const Graph g = argc > 1 ? read_graph_file(argv[1]) : generators::path(3);
  const GraphSpectrum spec = analyze(g);

  std::printf("graph: %lld nodes, %zu edges\n", static_cast<long long>(g.n()), g.edges().size());
  std::printf("nontrivial spectrum of L:");
  for (double l : spec.basis->nontrivial_eigenvalues()) std::printf(" %.6f", l);
  std::printf("\n\n");

  std::printf("entropy <-> heat kernel (eta = t)\n");
  for (double t : {0.5, 1.0, 4.0}) show(check_heat_kernel_lemma(spec, t));

  std::printf("\nlog-det <-> PageRank\n");
  for (double gamma : {0.1, 0.5, 0.9}) show(check_pagerank_lemma(spec, gamma));

  const double threshold = lazy_walk_psd_threshold(*spec.basis);
  std::printf("\np-norm <-> lazy walk (alpha must be >= %.4f for a PSD walk)\n", threshold);
  for (double steps : {1.0, 2.0, 3.0}) {
    show(check_lazy_walk_lemma(spec, std::max(0.7, threshold + 0.05), steps));
  }

  std::printf("\nsmall eta spreads mass, large eta concentrates it on v2:\n");
  for (double eta : {1e-3, 1.0, 100.0}) {
    const auto sol = solve(spec.basis, Regularizer::entropy(), eta);
    std::printf("  eta=%-6g weights:", eta);
    for (double w : sol.x.weights()) std::printf(" %.4f", w);
    std::printf("   L.X=%.6f\n", sol.report.objective);
  }
  std::printf("  lambda_2 = %.6f\n", spectral_solve(*spec.basis).value);
  return 0;
} catch (const Error& e) {
  std::fprintf(stderr, "error: %s: %s\n", std::string(code_name(e.code())).c_str(), e.what());
  return 1;
} catch (const std::exception& e) {
  std::fprintf(stderr, "error: %s\n", e.what());
  return 2;
}
