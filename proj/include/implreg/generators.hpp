#pragma once

// Small named graphs used by the test sweeps and demos.

#include <cstdint>
#include <vector>

#include "implreg/graph.hpp"
#include "implreg/random.hpp"

namespace implreg::generators {

inline Graph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  return Graph(n, std::move(edges));
}

inline Graph path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, 1.0});
  return Graph(n, std::move(edges));
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) edges.push_back({u, (u + 1) % n, 1.0});
  return Graph(n, std::move(edges));
}

/// Star with one hub (node 0) and `leaves` leaves.
inline Graph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t v = 1; v <= leaves; ++v) edges.push_back({0, v, 1.0});
  return Graph(leaves + 1, std::move(edges));
}

/// G(n, p) conditioned on connectivity: draws are repeated from the same
/// stream until a connected graph appears.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Edge> edges;
    std::vector<bool> touched(n, false);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (rng.uniform() < p) {
          edges.push_back({u, v, 1.0});
          touched[u] = touched[v] = true;
        }
    bool all = true;
    for (bool t : touched) all = all && t;
    if (!all) continue;
    try {
      return Graph(n, std::move(edges));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DisconnectedGraph) throw;
    }
  }
  fail(ErrorCode::InvalidArgument, "could not draw a connected G(n, p)");
}

}  // namespace implreg::generators
