#pragma once

// Sinusoidal dither schedules. Agent j perturbs algebra direction i with
// a_i^j · sin(ω · ω̄_i^j · t), where ω̄_i^j are positive integer multipliers
// chosen so that no multiplier equals another, is twice another, or is the
// sum of two others. Under those rules the products of two and three dither
// sinusoids that the averaging argument relies on integrate to zero over one
// common period.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "esync/errors.hpp"
#include "esync/lie.hpp"

namespace esync {

using Multiplier = std::int64_t;

struct FrequencyViolation {
  enum class Kind { NonPositive, Duplicate, Double, Sum };
  Kind kind;
  // Positions in the multiplier list. Duplicate/Double: (p, q, -) with
  // m[p] == m[q] or 2·m[p] == m[q]. Sum: (q, r, p) with m[q] + m[r] == m[p].
  std::size_t first;
  std::size_t second;
  std::size_t target;
  std::string message;
};

struct FrequencyReport {
  std::vector<FrequencyViolation> violations;

  bool valid() const { return violations.empty(); }

  std::string to_string() const {
    if (valid()) return "valid";
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += '\n';
      out += v.message;
    }
    return out;
  }
};

/// Exhaustive O(N³) check of the three separation rules over all index pairs
/// and triples.
inline FrequencyReport validate_frequencies(std::span<const Multiplier> m) {
  using Kind = FrequencyViolation::Kind;
  FrequencyReport report;
  const std::size_t n = m.size();
  auto idx = [](std::size_t i) { return "[" + std::to_string(i) + "]"; };
  for (std::size_t p = 0; p < n; ++p) {
    if (m[p] <= 0) {
      report.violations.push_back(
          {Kind::NonPositive, p, p, p, "non-positive multiplier " + std::to_string(m[p]) + " " + idx(p)});
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (m[p] == m[q]) {
        report.violations.push_back({Kind::Duplicate, p, q, q,
                                     "duplicate: " + std::to_string(m[p]) + " at " + idx(p) +
                                         " and " + idx(q)});
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p != q && 2 * m[p] == m[q]) {
        report.violations.push_back({Kind::Double, p, q, q,
                                     "double: 2*" + std::to_string(m[p]) + "=" +
                                         std::to_string(m[q]) + " (" + idx(p) + " -> " + idx(q) +
                                         ")"});
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p) continue;
      for (std::size_t r = q + 1; r < n; ++r) {
        if (r == p) continue;
        if (m[q] + m[r] == m[p]) {
          report.violations.push_back({Kind::Sum, q, r, p,
                                       "sum: " + std::to_string(m[q]) + "+" +
                                           std::to_string(m[r]) + "=" + std::to_string(m[p]) +
                                           " (" + idx(q) + " + " + idx(r) + " -> " + idx(p) +
                                           ")"});
        }
      }
    }
  }
  return report;
}

/// Greedy scan over 1, 2, 3, … keeping every candidate that leaves the set valid.
inline std::vector<Multiplier> generate_frequencies(std::size_t count) {
  if (count == 0) throw InvalidInput("frequency count must be at least 1");
  std::vector<Multiplier> out;
  out.reserve(count);
  // The accepted prefix is always valid, so only rules involving the
  // candidate need checking.
  auto compatible = [&out](Multiplier c) {
    for (std::size_t p = 0; p < out.size(); ++p) {
      const Multiplier a = out[p];
      if (a == c || 2 * a == c || 2 * c == a) return false;
      for (std::size_t q = 0; q < out.size(); ++q) {
        if (q == p) continue;
        const Multiplier b = out[q];
        if (a + b == c || a + c == b) return false;
      }
    }
    return true;
  };
  for (Multiplier c = 1; out.size() < count; ++c) {
    if (compatible(c)) out.push_back(c);
  }
  return out;
}

/// Amplitudes and frequencies for m agents × n algebra directions, stored
/// row-major by agent.
struct DitherSchedule {
  std::size_t agents = 0;
  std::size_t dims = 0;
  std::vector<double> amplitudes;
  double base_omega = 1.0;
  std::vector<Multiplier> multipliers;
  double amplitude_cap = 0.5;

  double amplitude(std::size_t agent, std::size_t dir) const { return amplitudes[agent * dims + dir]; }
  Multiplier multiplier(std::size_t agent, std::size_t dir) const {
    return multipliers[agent * dims + dir];
  }
  /// ω_i^j = ω · ω̄_i^j in rad/s.
  double frequency(std::size_t agent, std::size_t dir) const {
    return base_omega * static_cast<double>(multiplier(agent, dir));
  }
  double max_frequency() const {
    Multiplier top = 0;
    for (Multiplier k : multipliers) top = std::max(top, k);
    return base_omega * static_cast<double>(top);
  }
  double amplitude_norm(std::size_t agent) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dims; ++i) s += amplitude(agent, i) * amplitude(agent, i);
    return std::sqrt(s);
  }

  /// Throws InvalidInput on shape or range problems and FrequencyError when
  /// the multipliers break the separation rules.
  void validate() const {
    if (agents == 0 || dims == 0) throw InvalidInput("dither schedule needs agents and dimensions");
    if (amplitudes.size() != agents * dims || multipliers.size() != agents * dims) {
      throw InvalidInput("dither schedule expects " + std::to_string(agents * dims) +
                         " amplitudes and multipliers");
    }
    if (!(base_omega > 0.0) || !std::isfinite(base_omega)) {
      throw InvalidInput("base frequency omega must be positive");
    }
    if (!(amplitude_cap > 0.0)) throw InvalidInput("amplitude cap must be positive");
    for (double a : amplitudes) {
      if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidInput("amplitudes must be non-negative");
    }
    for (std::size_t j = 0; j < agents; ++j) {
      if (amplitude_norm(j) > amplitude_cap) {
        throw InvalidInput("agent " + std::to_string(j) + " amplitude norm " +
                           std::to_string(amplitude_norm(j)) + " exceeds cap " +
                           std::to_string(amplitude_cap));
      }
    }
    const auto report = validate_frequencies(multipliers);
    if (!report.valid()) throw FrequencyError("invalid dither multipliers: " + report.to_string());
  }
};

/// Uniform amplitude `a` for every agent and direction, multipliers from
/// generate_frequencies(agents · dims).
inline DitherSchedule make_schedule(std::size_t agents, std::size_t dims, double a,
                                    double base_omega, double amplitude_cap = 0.5) {
  DitherSchedule s;
  s.agents = agents;
  s.dims = dims;
  s.amplitudes.assign(agents * dims, a);
  s.base_omega = base_omega;
  s.multipliers = generate_frequencies(agents * dims);
  s.amplitude_cap = amplitude_cap;
  s.validate();
  return s;
}

/// coords_i = a_i^j · sin(ω_i^j · t).
template <MatrixGroup G>
AlgebraVector<G> dither_vector(const DitherSchedule& s, std::size_t agent, double t) {
  if (s.dims != static_cast<std::size_t>(G::kAlgebraDim)) {
    throw InvalidInput("dither schedule dimension does not match the group");
  }
  if (agent >= s.agents) throw InvalidInput("agent index out of range");
  AlgebraVector<G> v;
  for (std::size_t i = 0; i < s.dims; ++i) {
    v(static_cast<Eigen::Index>(i)) = s.amplitude(agent, i) * std::sin(s.frequency(agent, i) * t);
  }
  return v;
}

/// Smallest T > 0 after which every dither sinusoid repeats: 2π / (ω · gcd(ω̄)).
inline double common_period(const DitherSchedule& s) {
  Multiplier g = 0;
  for (Multiplier k : s.multipliers) g = std::gcd(g, k);
  if (g <= 0) throw InvalidInput("schedule has no positive multipliers");
  return 2.0 * std::numbers::pi / (s.base_omega * static_cast<double>(g));
}

}  // namespace esync
