#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpsla/numerics.hpp"

namespace dpsla {

enum class GraphKind { Triangle, Complete, Ring, Path, Random };

GraphKind parse_graph_kind(std::string_view name);
std::string_view to_string(GraphKind kind);

/// Undirected, connected, loop-free graph over agents 0..n-1. Each edge is
/// stored once as (i, j) with i < j.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  /// Validates and normalizes the edge list. Throws when n < 2, on
  /// self-loops, out-of-range endpoints, or a disconnected result.
  Graph(std::size_t n_agents, std::vector<Edge> edges);

  std::size_t n_agents() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t degree(std::size_t i) const { return degree_.at(i); }
  bool has_edge(std::size_t i, std::size_t j) const;

  /// One "i j" pair per line.
  std::string to_edge_list() const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> degree_;
};

/// Builds a graph of the given kind. `triangle` requires n == 3. Random
/// graphs include each pair with probability edge_prob, then components are
/// joined along a random spanning tree if the draw is disconnected.
Graph build_graph(GraphKind kind, std::size_t n, double edge_prob, Rng& rng);

/// Symmetric doubly stochastic weight matrix over a graph.
class MixingMatrix {
 public:
  const Mat& weights() const noexcept { return w_; }
  const Graph& graph() const noexcept { return graph_; }
  std::size_t size() const noexcept { return w_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return w_(i, j); }

  /// Wraps an explicit matrix without graph checks. Only meant for tests
  /// (e.g. the identity, which has no edges).
  static MixingMatrix unchecked(Mat w, Graph g) { return MixingMatrix(std::move(w), std::move(g)); }

 private:
  friend MixingMatrix metropolis_weights(const Graph& g);
  MixingMatrix(Mat w, Graph g) : w_(std::move(w)), graph_(std::move(g)) {}

  Mat w_;
  Graph graph_;
};

/// w_ij = 1 / (1 + max(deg_i, deg_j)) on edges, remainder on the diagonal.
MixingMatrix metropolis_weights(const Graph& g);

/// z_i = Σ_j w_ij x_j.
std::vector<Vec> mix(const MixingMatrix& w, const std::vector<Vec>& states);

}  // namespace dpsla
