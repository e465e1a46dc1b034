#pragma once

// Weighted undirected graphs and the dense matrices derived from them:
// adjacency A, degrees D, the column-stochastic walk M = A D^{-1}, the
// normalized adjacency D^{-1/2} A D^{-1/2}, the normalized Laplacian L and
// the alpha-lazy walk W_alpha = alpha I + (1 - alpha) M.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "implreg/error.hpp"
#include "implreg/format.hpp"

namespace implreg {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Connected, weighted, undirected graph without self-loops. Each unordered
/// pair is stored once with u < v; edges are sorted by (u, v).
class Graph {
 public:
  /// Validates and canonicalizes. Duplicate pairs are summed and a warning is
  /// recorded. Throws SelfLoop, NonPositiveWeight, NodeIdGap, DisconnectedGraph.
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
    if (n_ < 2) fail(ErrorCode::InvalidArgument, "graph needs at least two nodes");
    std::map<std::pair<std::size_t, std::size_t>, double> merged;
    for (const auto& e : edges) {
      if (e.u >= n_ || e.v >= n_) {
        fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
      }
      if (e.u == e.v) {
        fail(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(e.u));
      }
      if (!(e.w > 0.0) || !std::isfinite(e.w)) {
        fail(ErrorCode::NonPositiveWeight,
             "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                 ") has non-positive or non-finite weight " + format_double(e.w));
      }
      auto key = std::minmax(e.u, e.v);
      auto [it, inserted] = merged.try_emplace({key.first, key.second}, e.w);
      if (!inserted) {
        it->second += e.w;
        warnings_.push_back("duplicate edge (" + std::to_string(key.first) + "," +
                            std::to_string(key.second) + ") summed into weight " +
                            format_double(it->second));
      }
    }
    edges_.reserve(merged.size());
    for (const auto& [key, w] : merged) edges_.push_back({key.first, key.second, w});

    degrees_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
    for (const auto& e : edges_) {
      degrees_(static_cast<Eigen::Index>(e.u)) += e.w;
      degrees_(static_cast<Eigen::Index>(e.v)) += e.w;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (degrees_(static_cast<Eigen::Index>(i)) == 0.0) {
        fail(ErrorCode::NodeIdGap,
             "node " + std::to_string(i) + " has no edges (node ids must be dense)");
      }
    }
    if (!connected()) fail(ErrorCode::DisconnectedGraph, "graph has more than one component");
  }

  std::size_t n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Eigen::VectorXd& degrees() const noexcept { return degrees_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  Eigen::MatrixXd adjacency() const {
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : edges_) {
      a(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = e.w;
      a(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = e.w;
    }
    return a;
  }

  Eigen::VectorXd sqrt_degrees() const { return degrees_.array().sqrt().matrix(); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  bool connected() const {
    std::vector<std::vector<std::size_t>> nbrs(n_);
    for (const auto& e : edges_) {
      nbrs[e.u].push_back(e.v);
      nbrs[e.v].push_back(e.u);
    }
    std::vector<bool> seen(n_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto v : nbrs[u]) {
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n_;
  }

  std::size_t n_;
  std::vector<Edge> edges_;
  Eigen::VectorXd degrees_;
  std::vector<std::string> warnings_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    auto start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Parses "u v [w]" lines; '#' starts a comment; w defaults to 1.0.
inline Graph parse_graph(std::string_view text) {
  std::vector<Edge> edges;
  std::size_t max_id = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    auto fields = detail::split_ws(line);
    if (fields.size() != 2 && fields.size() != 3) {
      detail::parse_fail(line_no, "expected 'u v [w]', got " + std::to_string(fields.size()) +
                                      " fields");
    }
    std::size_t ids[2];
    for (int k = 0; k < 2; ++k) {
      auto f = fields[static_cast<std::size_t>(k)];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), ids[k]);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        detail::parse_fail(line_no, "bad node id '" + std::string(f) + "'");
      }
    }
    double w = 1.0;
    if (fields.size() == 3) {
      auto f = fields[2];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), w);
      if (ec != std::errc{} || ptr != f.data() + f.size() || std::isnan(w)) {
        detail::parse_fail(line_no, "bad weight '" + std::string(f) + "'");
      }
    }
    max_id = std::max({max_id, ids[0], ids[1]});
    edges.push_back({ids[0], ids[1], w});
  }
  if (edges.empty()) fail(ErrorCode::ParseError, "edge list is empty");
  return Graph(max_id + 1, std::move(edges));
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open graph file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

/// Inverse of parse_graph: one "u v w" line per stored edge.
inline std::string to_edge_list(const Graph& g) {
  std::string out;
  for (const auto& e : g.edges()) {
    out += std::to_string(e.u) + ' ' + std::to_string(e.v) + ' ' + format_double(e.w) + '\n';
  }
  return out;
}

struct WalkMatrices {
  Eigen::MatrixXd M;                     // A D^{-1}, column-stochastic
  Eigen::MatrixXd normalized_adjacency;  // D^{-1/2} A D^{-1/2}
  Eigen::MatrixXd L;                     // I - normalized_adjacency
};

inline WalkMatrices build_walk_matrices(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.n());
  const Eigen::VectorXd& d = g.degrees();
  const Eigen::VectorXd inv_sqrt = d.array().rsqrt().matrix();
  WalkMatrices w;
  w.M = Eigen::MatrixXd::Zero(n, n);
  w.normalized_adjacency = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    w.M(u, v) = e.w / d(v);
    w.M(v, u) = e.w / d(u);
    const double s = e.w * inv_sqrt(u) * inv_sqrt(v);
    w.normalized_adjacency(u, v) = s;
    w.normalized_adjacency(v, u) = s;
  }
  w.L = Eigen::MatrixXd::Identity(n, n) - w.normalized_adjacency;
  return w;
}

/// One step of the alpha-lazy walk, alpha I + (1 - alpha) M.
inline Eigen::MatrixXd lazy_walk(const Graph& g, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1], got " + format_double(alpha));
  }
  const auto n = static_cast<Eigen::Index>(g.n());
  return alpha * Eigen::MatrixXd::Identity(n, n) + (1.0 - alpha) * build_walk_matrices(g).M;
}

}  // namespace implreg
