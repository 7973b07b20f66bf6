#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "esync/errors.hpp"
#include "esync/lie.hpp"

namespace esync {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected, connected synchronization graph over `agents` nodes (0-based).
class NetworkConfig {
 public:
  NetworkConfig(GroupTag tag, std::size_t agents, std::vector<Edge> edges)
      : tag_(tag), agents_(agents), edges_(std::move(edges)) {
    validate();
  }

  static NetworkConfig complete(GroupTag tag, std::size_t agents) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < agents; ++i)
      for (std::size_t j = i + 1; j < agents; ++j) edges.emplace_back(i, j);
    return NetworkConfig(tag, agents, std::move(edges));
  }

  GroupTag tag() const { return tag_; }
  std::size_t agents() const { return agents_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Agents adjacent to `i`.
  std::vector<std::size_t> neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (const auto& [a, b] : edges_) {
      if (a == i) out.push_back(b);
      if (b == i) out.push_back(a);
    }
    return out;
  }

 private:
  void validate() const {
    if (agents_ < 2) throw InvalidInput("network needs at least 2 agents");
    std::set<Edge> seen;
    for (const auto& [a, b] : edges_) {
      if (a >= agents_ || b >= agents_) {
        throw InvalidInput("edge " + std::to_string(a) + "-" + std::to_string(b) +
                           " references a missing agent");
      }
      if (a == b) throw InvalidInput("self-loop on agent " + std::to_string(a));
      if (!seen.insert(std::minmax(a, b)).second) {
        throw InvalidInput("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
      }
    }
    // Union-find connectivity check.
    std::vector<std::size_t> parent(agents_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&parent](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t components = agents_;
    for (const auto& [a, b] : edges_) {
      const auto ra = find(a), rb = find(b);
      if (ra != rb) {
        parent[ra] = rb;
        --components;
      }
    }
    if (components != 1) throw InvalidInput("synchronization graph is not connected");
  }

  GroupTag tag_;
  std::size_t agents_;
  std::vector<Edge> edges_;
};

namespace detail {

template <MatrixGroup G>
void check_shape(const NetworkConfig& net, const Configuration<G>& cfg) {
  if (net.tag() != G::tag) {
    throw InvalidInput("network is tagged " + std::string(to_string(net.tag())) +
                       " but configuration is " + std::string(to_string(G::tag)));
  }
  if (cfg.size() != net.agents()) {
    throw InvalidInput("configuration has " + std::to_string(cfg.size()) + " agents, network has " +
                       std::to_string(net.agents()));
  }
}

}  // namespace detail

/// J = Σ_{(i,j)∈E} (3 − tr(g_iᵀ g_j)), evaluated in the equivalent form
/// ½‖g_i − g_j‖²_F so that J is never negative through rounding.
inline double cost_so3(const NetworkConfig& net, const Configuration<SO3>& cfg) {
  detail::check_shape(net, cfg);
  double j = 0.0;
  for (const auto& [a, b] : net.edges()) {
    j += 0.5 * (cfg[a].matrix() - cfg[b].matrix()).squaredNorm();
  }
  return j;
}

/// Rotation terms ½‖R_i − R_j‖²_F plus translation terms ½‖t_i − t_j‖² per edge.
inline double cost_se3(const NetworkConfig& net, const Configuration<SE3>& cfg) {
  detail::check_shape(net, cfg);
  double j = 0.0;
  for (const auto& [a, b] : net.edges()) {
    j += 0.5 * (cfg[a].rotation() - cfg[b].rotation()).squaredNorm();
    j += 0.5 * (cfg[a].translation() - cfg[b].translation()).squaredNorm();
  }
  return j;
}

template <MatrixGroup G>
double cost(const NetworkConfig& net, const Configuration<G>& cfg) {
  if constexpr (std::same_as<G, SO3>) {
    return cost_so3(net, cfg);
  } else {
    return cost_se3(net, cfg);
  }
}

/// The synchronization cost of a fixed network as a callable on configurations.
template <MatrixGroup G>
struct SyncCost {
  const NetworkConfig* net;

  double operator()(const Configuration<G>& cfg) const { return cost<G>(*net, cfg); }
};

template <MatrixGroup G>
Configuration<G> left_translate(const GroupElement<G>& gc, const Configuration<G>& cfg) {
  Configuration<G> out;
  out.reserve(cfg.size());
  for (const auto& g : cfg) out.push_back(gc * g);
  return out;
}

/// |J(g_c·g_1, …, g_c·g_m) − J(g_1, …, g_m)| / (1 + J), maximized over `gcs`.
template <MatrixGroup G>
double check_invariance(const NetworkConfig& net, const Configuration<G>& cfg,
                        std::span<const GroupElement<G>> gcs) {
  const double base = cost<G>(net, cfg);
  double worst = 0.0;
  for (const auto& gc : gcs) {
    const double moved = cost<G>(net, left_translate(gc, cfg));
    worst = std::max(worst, std::abs(moved - base) / (1.0 + base));
  }
  return worst;
}

template <MatrixGroup G>
double check_invariance(const NetworkConfig& net, const Configuration<G>& cfg,
                        const GroupElement<G>& gc) {
  return check_invariance<G>(net, cfg, std::span<const GroupElement<G>>(&gc, 1));
}

/// Largest pairwise Frobenius distance between agents; zero exactly on the
/// synchronization set.
template <MatrixGroup G>
double dispersion(const Configuration<G>& cfg) {
  double worst = 0.0;
  for (std::size_t i = 0; i < cfg.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.size(); ++j)
      worst = std::max(worst, group_distance(cfg[i], cfg[j]));
  return worst;
}

}  // namespace esync
