#pragma once

// Extremum-seeking vector field on G^m and group-preserving integrators.
//
// Every field here is left-trivialized: agent j moves as ġ_j = g_j · hat(u^j)
// with u^j an algebra vector, so an exponential update keeps the state on the
// group exactly.

#include <algorithm>
#include <cmath>
#include <execution>
#include <functional>
#include <numeric>
#include <vector>

#include "esync/cost.hpp"
#include "esync/dither.hpp"
#include "esync/lie.hpp"

namespace esync {

enum class Execution { sequential, parallel };

template <MatrixGroup G>
struct FieldSample {
  double t = 0.0;
  std::vector<AlgebraVector<G>> u;
};

namespace detail {

// Runs f(j) for every agent. Per-agent work is independent, so both modes
// produce the same values.
template <class F>
void for_each_agent(Execution exec, std::size_t agents, F&& f) {
  if (exec == Execution::parallel && agents > 1) {
    std::vector<std::size_t> idx(agents);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::for_each(std::execution::par, idx.begin(), idx.end(), f);
  } else {
    for (std::size_t j = 0; j < agents; ++j) f(j);
  }
}

}  // namespace detail

/// Coefficients of agent `agent` given the measured (perturbed) cost:
/// u_i = −gain · a_i · sin(ω_i t) · measured_cost. This is the only place the
/// cost enters the field, and it enters as a scalar.
template <MatrixGroup G>
AlgebraVector<G> es_coefficients(const DitherSchedule& s, std::size_t agent, double t,
                                 double measured_cost, double gain = 1.0) {
  return (-gain * measured_cost) * dither_vector<G>(s, agent, t);
}

/// Each agent's state perturbed along its own dither: g_j · exp(hat(X_j(t))).
template <MatrixGroup G>
Configuration<G> perturbed_configuration(const DitherSchedule& s, const Configuration<G>& cfg,
                                         double t, Execution exec = Execution::sequential) {
  Configuration<G> out(cfg.size());
  detail::for_each_agent(exec, cfg.size(), [&](std::size_t j) {
    out[j] = cfg[j] * exp<G>(dither_vector<G>(s, j, t));
  });
  return out;
}

/// Extremum-seeking field. `cost_fn` is called exactly once, on the
/// configuration where every agent carries its own dither; all agents share
/// that single scalar.
template <MatrixGroup G, class CostFn>
FieldSample<G> es_field(const DitherSchedule& s, const Configuration<G>& cfg, double t,
                        CostFn&& cost_fn, double gain = 1.0,
                        Execution exec = Execution::sequential) {
  if (s.agents != cfg.size()) throw InvalidInput("schedule and configuration disagree on agent count");
  const double measured = cost_fn(perturbed_configuration<G>(s, cfg, t, exec));
  FieldSample<G> out{t, std::vector<AlgebraVector<G>>(cfg.size())};
  detail::for_each_agent(exec, cfg.size(), [&](std::size_t j) {
    out.u[j] = es_coefficients<G>(s, j, t, measured, gain);
  });
  return out;
}

template <MatrixGroup G>
FieldSample<G> es_field(const NetworkConfig& net, const Configuration<G>& cfg,
                        const DitherSchedule& s, double t, double gain = 1.0,
                        Execution exec = Execution::sequential) {
  return es_field<G>(s, cfg, t, SyncCost<G>{&net}, gain, exec);
}

/// Decentralized gradient flow on SO(3)^m:
/// u^i = vee(½ Σ_{j∼i} (x_iᵀx_j − x_jᵀx_i)).
inline FieldSample<SO3> gradient_field_so3(const NetworkConfig& net, const Configuration<SO3>& cfg) {
  detail::check_shape(net, cfg);
  FieldSample<SO3> out{0.0, std::vector<AlgebraVector<SO3>>(cfg.size())};
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (std::size_t j : net.neighbors(i)) {
      const Eigen::Matrix3d p = cfg[i].matrix().transpose() * cfg[j].matrix();
      m += p - p.transpose();
    }
    out.u[i] = vee<SO3>(0.5 * m);
  }
  return out;
}

/// Gradient flow of the SE(3) cost in the Frobenius metric: the rotational
/// part matches the SO(3) flow and the body-frame translation velocity is
/// −R_iᵀ Σ_{j∼i} (t_i − t_j).
inline FieldSample<SE3> gradient_field_se3(const NetworkConfig& net, const Configuration<SE3>& cfg) {
  detail::check_shape(net, cfg);
  FieldSample<SE3> out{0.0, std::vector<AlgebraVector<SE3>>(cfg.size())};
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const Eigen::Matrix3d ri = cfg[i].rotation();
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    Eigen::Vector3d pull = Eigen::Vector3d::Zero();
    for (std::size_t j : net.neighbors(i)) {
      const Eigen::Matrix3d p = ri.transpose() * cfg[j].rotation();
      m += p - p.transpose();
      pull += cfg[i].translation() - cfg[j].translation();
    }
    AlgebraVector<SE3> u;
    u.head<3>() = vee<SO3>(0.5 * m);
    u.tail<3>() = -ri.transpose() * pull;
    out.u[i] = u;
  }
  return out;
}

template <MatrixGroup G>
FieldSample<G> gradient_field(const NetworkConfig& net, const Configuration<G>& cfg) {
  if constexpr (std::same_as<G, SO3>) {
    return gradient_field_so3(net, cfg);
  } else {
    return gradient_field_se3(net, cfg);
  }
}

/// D[j](k) = d/ds J(…, g_j·exp(s·e_k), …) at s = 0, by the five-point stencil.
template <MatrixGroup G, class CostFn>
std::vector<AlgebraVector<G>> directional_derivatives(const Configuration<G>& cfg, CostFn&& cost_fn,
                                                      double step = 1e-3) {
  std::vector<AlgebraVector<G>> out(cfg.size());
  Configuration<G> probe = cfg;
  for (std::size_t j = 0; j < cfg.size(); ++j) {
    for (int k = 0; k < G::kAlgebraDim; ++k) {
      auto at = [&](double s) {
        AlgebraVector<G> e = AlgebraVector<G>::Zero();
        e(k) = s;
        probe[j] = cfg[j] * exp<G>(e);
        return cost_fn(probe);
      };
      out[j](k) = (-at(2 * step) + 8.0 * at(step) - 8.0 * at(-step) + at(-2 * step)) / (12.0 * step);
      probe[j] = cfg[j];
    }
  }
  return out;
}

/// Options for the averaged field quadrature.
struct AveragingOptions {
  std::size_t initial_intervals = 64;
  std::size_t max_intervals = std::size_t{1} << 22;
  double tolerance = 1e-10;
};

/// (1/T)∫₀ᵀ es_field dt over one common dither period, composite Simpson
/// with node doubling until successive estimates differ by less than
/// `opts.tolerance` in every component.
template <MatrixGroup G, class CostFn>
std::vector<AlgebraVector<G>> averaged_field(const DitherSchedule& s, const Configuration<G>& cfg,
                                             CostFn&& cost_fn, double gain = 1.0,
                                             const AveragingOptions& opts = {}) {
  const double period = common_period(s);
  const std::size_t m = cfg.size();
  using Field = std::vector<AlgebraVector<G>>;

  auto zero = [m] { return Field(m, AlgebraVector<G>::Zero()); };
  auto eval = [&](double t) { return es_field<G>(s, cfg, t, cost_fn, gain).u; };
  auto accumulate = [m](Field& into, const Field& add) {
    for (std::size_t j = 0; j < m; ++j) into[j] += add[j];
  };

  // Composite Simpson on [0, T] with N intervals:
  // (h/3)(f0 + fN + 4·Σodd + 2·Σeven-interior). Doubling N turns all current
  // nodes into even nodes, so only the new odd nodes are evaluated.
  std::size_t n = std::max<std::size_t>(2, opts.initial_intervals & ~std::size_t{1});
  Field ends = eval(0.0);
  accumulate(ends, eval(period));
  Field even = zero();
  Field odd = zero();
  for (std::size_t k = 1; k < n; ++k) accumulate(k % 2 ? odd : even, eval(period * k / n));

  auto simpson = [&](std::size_t intervals) {
    const double h = period / static_cast<double>(intervals);
    Field out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = (h / 3.0) * (ends[j] + 4.0 * odd[j] + 2.0 * even[j]) / period;
    return out;
  };

  Field current = simpson(n);
  while (2 * n <= opts.max_intervals) {
    accumulate(even, odd);
    odd = zero();
    const std::size_t n2 = 2 * n;
    for (std::size_t k = 1; k < n2; k += 2) accumulate(odd, eval(period * k / n2));
    Field next = simpson(n2);
    double change = 0.0;
    for (std::size_t j = 0; j < m; ++j) change = std::max(change, (next[j] - current[j]).cwiseAbs().maxCoeff());
    current = std::move(next);
    n = n2;
    if (change < opts.tolerance) break;
  }
  return current;
}

template <MatrixGroup G>
std::vector<AlgebraVector<G>> averaged_field(const NetworkConfig& net, const Configuration<G>& cfg,
                                             const DitherSchedule& s, double gain = 1.0) {
  return averaged_field<G>(s, cfg, SyncCost<G>{&net}, gain);
}

/// max_{j,k} |ū_k^j + (a_k^j)²/2 · D_k^j|: the distance between the averaged
/// field and the amplitude-weighted gradient direction it approximates.
template <MatrixGroup G>
double averaging_residual(const NetworkConfig& net, const Configuration<G>& cfg,
                          const DitherSchedule& s) {
  const SyncCost<G> j{&net};
  const auto avg = averaged_field<G>(s, cfg, j);
  const auto d = directional_derivatives<G>(cfg, j);
  double worst = 0.0;
  for (std::size_t a = 0; a < cfg.size(); ++a) {
    for (int k = 0; k < G::kAlgebraDim; ++k) {
      const double amp = s.amplitude(a, static_cast<std::size_t>(k));
      worst = std::max(worst, std::abs(avg[a](k) + 0.5 * amp * amp * d[a](k)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// integrators

/// g_j ← g_j · exp(hat(h·u^j)).
template <MatrixGroup G>
Configuration<G> lie_euler_step(const Configuration<G>& cfg, const FieldSample<G>& sample, double h,
                                Execution exec = Execution::sequential) {
  if (sample.u.size() != cfg.size()) throw InvalidInput("field sample does not match configuration");
  Configuration<G> out(cfg.size());
  detail::for_each_agent(exec, cfg.size(), [&](std::size_t j) {
    out[j] = cfg[j] * exp<G>(AlgebraVector<G>(h * sample.u[j]));
  });
  return out;
}

/// Two-stage Munthe-Kaas (midpoint) step. `field(t, cfg)` returns a FieldSample.
template <MatrixGroup G, class Field>
Configuration<G> rk_mk2_step(const Configuration<G>& cfg, Field&& field, double t, double h,
                             Execution exec = Execution::sequential) {
  const FieldSample<G> k1 = field(t, cfg);
  const Configuration<G> mid = lie_euler_step<G>(cfg, k1, 0.5 * h, exec);
  const FieldSample<G> k2 = field(t + 0.5 * h, mid);
  return lie_euler_step<G>(cfg, k2, h, exec);
}

}  // namespace esync
