#include "dpsla/topology.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "dpsla/error.hpp"

namespace dpsla {

namespace {

// Labels each node with the index of its connected component.
std::vector<std::size_t> components(std::size_t n, const std::vector<Graph::Edge>& edges,
                                    std::size_t& count) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<std::size_t> label(n, n);
  count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != n) continue;
    std::vector<std::size_t> stack{s};
    label[s] = count;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : adj[u]) {
        if (label[v] == n) {
          label[v] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return label;
}

}  // namespace

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "triangle") return GraphKind::Triangle;
  if (name == "complete") return GraphKind::Complete;
  if (name == "ring") return GraphKind::Ring;
  if (name == "path") return GraphKind::Path;
  if (name == "random") return GraphKind::Random;
  fail(ErrorCode::InvalidArgument, "unknown graph kind '" + std::string(name) + "'");
}

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Triangle: return "triangle";
    case GraphKind::Complete: return "complete";
    case GraphKind::Ring: return "ring";
    case GraphKind::Path: return "path";
    case GraphKind::Random: return "random";
  }
  return "?";
}

Graph::Graph(std::size_t n_agents, std::vector<Edge> edges) : n_(n_agents), degree_(n_agents, 0) {
  if (n_ < 2) fail(ErrorCode::InvalidArgument, "graph needs at least 2 agents");
  std::set<Edge> unique;
  for (auto [i, j] : edges) {
    if (i >= n_ || j >= n_) fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
    if (i == j) fail(ErrorCode::InvalidArgument, "self-loops are not allowed");
    unique.insert({std::min(i, j), std::max(i, j)});
  }
  edges_.assign(unique.begin(), unique.end());
  for (auto [i, j] : edges_) {
    ++degree_[i];
    ++degree_[j];
  }
  std::size_t count = 0;
  components(n_, edges_, count);
  if (count != 1) fail(ErrorCode::InvalidArgument, "graph is not connected");
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  const Edge e{std::min(i, j), std::max(i, j)};
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::string Graph::to_edge_list() const {
  std::ostringstream os;
  for (auto [i, j] : edges_) os << i << ' ' << j << '\n';
  return os.str();
}

Graph build_graph(GraphKind kind, std::size_t n, double edge_prob, Rng& rng) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "build_graph: n must be at least 2");
  std::vector<Graph::Edge> edges;
  switch (kind) {
    case GraphKind::Triangle:
      if (n != 3) fail(ErrorCode::InvalidArgument, "build_graph: triangle requires n == 3");
      [[fallthrough]];
    case GraphKind::Complete:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      break;
    case GraphKind::Ring:
      for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      if (n > 2) edges.emplace_back(0, n - 1);
      break;
    case GraphKind::Path:
      for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    case GraphKind::Random: {
      if (!(edge_prob > 0.0 && edge_prob <= 1.0))
        fail(ErrorCode::InvalidArgument, "build_graph: edge_prob must lie in (0, 1]");
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (rng.uniform(0.0, 1.0) < edge_prob) edges.emplace_back(i, j);
      std::size_t count = 0;
      const auto label = components(n, edges, count);
      if (count > 1) {
        // Join components in a random order; each new edge links a random
        // node of the next component to a random node already joined.
        std::vector<std::vector<std::size_t>> members(count);
        for (std::size_t v = 0; v < n; ++v) members[label[v]].push_back(v);
        std::vector<std::size_t> order(count);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = count - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
        std::vector<std::size_t> joined = members[order[0]];
        for (std::size_t c = 1; c < count; ++c) {
          const auto& next = members[order[c]];
          const std::size_t a = joined[rng.index(joined.size())];
          const std::size_t b = next[rng.index(next.size())];
          edges.emplace_back(std::min(a, b), std::max(a, b));
          joined.insert(joined.end(), next.begin(), next.end());
        }
      }
      break;
    }
  }
  return Graph(n, std::move(edges));
}

MixingMatrix metropolis_weights(const Graph& g) {
  const std::size_t n = g.n_agents();
  Mat w(n, n);
  for (auto [i, j] : g.edges()) {
    const double wij = 1.0 / (1.0 + static_cast<double>(std::max(g.degree(i), g.degree(j))));
    w(i, j) = wij;
    w(j, i) = wij;
  }
  for (std::size_t i = 0; i < n; ++i) {
    // 1 - sum_j w_ij, written as 1/(1+deg_i) + sum_j (1/(1+deg_i) - w_ij)
    const double own = 1.0 / (1.0 + static_cast<double>(g.degree(i)));
    double slack = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && w(i, j) > 0.0) slack += own - w(i, j);
    w(i, i) = own + slack;
  }
  return MixingMatrix(std::move(w), g);
}

std::vector<Vec> mix(const MixingMatrix& w, const std::vector<Vec>& states) {
  const std::size_t n = w.size();
  if (states.size() != n) fail(ErrorCode::Dimension, "mix: expected one state per agent");
  const std::size_t m = states.front().size();
  for (const auto& s : states)
    if (s.size() != m) fail(ErrorCode::Dimension, "mix: states differ in dimension");
  std::vector<Vec> z(n, Vec(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double wij = w(i, j);
      if (wij == 0.0) continue;
      for (std::size_t c = 0; c < m; ++c) z[i][c] += wij * states[j][c];
    }
  }
  return z;
}

}  // namespace dpsla
