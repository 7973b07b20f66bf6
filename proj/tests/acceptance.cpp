// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "esync/esync.hpp"
#include "oracles.hpp"

using namespace esync;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ExperimentConfig fixture_config(const std::string& text) { return load_config(text, ESYNC_FIXTURE_DIR); }

Eigen::Vector3d random_rotation_vector(std::mt19937_64& rng, double max_norm) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Vector3d d(n(rng), n(rng), n(rng));
  return d.normalized() * max_norm * u(rng);
}

Outcome exp_oracles() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> trans(-5.0, 5.0);
  double so3 = 0.0, se3 = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Vector3d w = random_rotation_vector(rng, std::numbers::pi);
    so3 = std::max(so3, (exp_so3(w).matrix() - oracle::expm_series(hat<SO3>(w))).norm());
    AlgebraVector<SE3> v;
    v << random_rotation_vector(rng, std::numbers::pi), trans(rng), trans(rng), trans(rng);
    se3 = std::max(se3, (exp_se3(v).matrix() - oracle::expm_series(hat<SE3>(v))).norm());
  }
  return {so3 <= 1e-10 && se3 <= 1e-9, "max error SO3 " + fmt("%.2e", so3) + ", SE3 " + fmt("%.2e", se3)};
}

Outcome group_closure() {
  const double dt = 2.0 * std::numbers::pi / (50.0 * 40.0 * 17.0);
  auto cfg = fixture_config("group = SO3\nagents = 3\ninitial = so3_triangle_initial.txt\nrecord_states = true\n"
                            "record_every = 500\ndt = " + format_real(dt) + "\nt_final = " +
                            format_real(1e5 * dt) + "\n");
  const auto rec = run(cfg);
  double worst = 0.0;
  for (const auto& sample : rec.states) {
    for (const auto& m : sample) {
      const Eigen::Matrix3d r = m;
      worst = std::max(worst, (r.transpose() * r - Eigen::Matrix3d::Identity()).norm());
    }
  }
  return {worst < 1e-10 && rec.size() > 100,
          std::to_string(rec.size()) + " samples, max drift " + fmt("%.2e", worst)};
}

template <MatrixGroup G>
double worst_invariance(std::mt19937_64& rng, double translation_scale) {
  const auto net = NetworkConfig::complete(G::tag, 4);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Configuration<G> x;
    for (int j = 0; j < 4; ++j) x.push_back(random_element<G>(rng, std::numbers::pi, translation_scale));
    worst = std::max(worst, check_invariance<G>(net, x, random_element<G>(rng, std::numbers::pi, translation_scale)));
  }
  return worst;
}

Outcome invariance() {
  std::mt19937_64 rng(303);
  const double so3 = worst_invariance<SO3>(rng, 1.0);
  const double se3 = worst_invariance<SE3>(rng, 10.0);
  return {so3 <= 1e-12 && se3 <= 1e-12,
          "max relative deviation SO3 " + fmt("%.2e", so3) + ", SE3 " + fmt("%.2e", se3)};
}

Outcome gradient_consistency() {
  std::mt19937_64 rng(404);
  const auto net = NetworkConfig::complete(GroupTag::SO3, 3);
  const double eps = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    Configuration<SO3> x;
    for (int j = 0; j < 3; ++j) x.push_back(random_element<SO3>(rng));
    const double j0 = cost_so3(net, x);
    const auto f = gradient_field_so3(net, x);
    for (std::size_t i = 0; i < 3; ++i) {
      for (int e = 0; e < 3; ++e) {
        auto moved = x;
        moved[i] = GroupElement<SO3>::unchecked(x[i].matrix() * oracle::expm_series(eps * oracle::so3_generator(e)));
        const double fd = -(cost_so3(net, moved) - j0) / eps;
        const double pairing = (hat<SO3>(f.u[i]).transpose() * oracle::so3_generator(e)).trace();
        worst = std::max(worst, std::abs(fd - pairing));
      }
    }
  }
  return {worst <= 5e-6, "max |FD - <u, e_k>| " + fmt("%.2e", worst)};
}

Outcome averaging_order() {
  const auto cfg = load_config_file(ESYNC_FIXTURE_DIR "/so3_pair.cfg");
  const auto x = initial_configuration<SO3>(cfg);
  auto residual = [&](double a) {
    auto s = cfg.schedule;
    s.amplitudes.assign(s.amplitudes.size(), a);
    return averaging_residual<SO3>(cfg.net, x, s);
  };
  const double r1 = residual(0.2), r2 = residual(0.1);
  const double ratio = r1 / r2;
  return {ratio >= 8.0 && ratio <= 32.0, "R(0.2) " + fmt("%.4e", r1) + ", R(0.1) " + fmt("%.4e", r2) +
                                             ", ratio " + fmt("%.3f", ratio)};
}

Outcome frequency_validator() {
  int disagreements = 0, subsets = 0;
  for (unsigned mask = 1; mask < (1u << 12); ++mask) {
    if (std::popcount(mask) > 4) continue;
    std::vector<Multiplier> m;
    std::set<std::int64_t> s;
    for (int b = 0; b < 12; ++b) {
      if (mask & (1u << b)) {
        m.push_back(b + 1);
        s.insert(b + 1);
      }
    }
    ++subsets;
    if (validate_frequencies(m).valid() != oracle::frequencies_valid_set(s)) ++disagreements;
  }
  const auto gen = generate_frequencies(9);
  const bool gen_valid = validate_frequencies(gen).valid();
  double worst = 0.0;
  for (std::size_t p = 0; p < gen.size(); ++p) {
    for (std::size_t q = 0; q < gen.size(); ++q) {
      if (q != p) worst = std::max(worst, std::abs(oracle::mean_sine_product({double(gen[p]), double(gen[q])})));
      for (std::size_t r = 0; r < gen.size(); ++r) {
        worst = std::max(worst,
                         std::abs(oracle::mean_sine_product({double(gen[p]), double(gen[q]), double(gen[r])})));
      }
    }
  }
  return {disagreements == 0 && gen_valid && worst <= 1e-10,
          std::to_string(subsets) + " subsets, " + std::to_string(disagreements) + " disagreements; generated " +
              (gen_valid ? "valid" : "INVALID") + ", max mean product " + fmt("%.2e", worst)};
}

Outcome so3_reproduction() {
  const auto es = run(load_config_file(ESYNC_FIXTURE_DIR "/so3_triangle.cfg"));
  auto grad_cfg = load_config_file(ESYNC_FIXTURE_DIR "/so3_triangle.cfg");
  grad_cfg.mode = Mode::gradient_flow;
  grad_cfg.dt = 1e-3;
  grad_cfg.t_final = 20.0;
  grad_cfg.record_every = 10;
  const auto gf = run(grad_cfg);
  bool decreasing = true;
  for (std::size_t k = 1; k < gf.size(); ++k) {
    // Below 1e-20 the cost is rounding noise and need not move.
    if (gf.costs[k - 1] > 1e-20 && !(gf.costs[k] < gf.costs[k - 1])) decreasing = false;
  }
  const bool es_ok = es.costs.back() < 0.1 * es.costs.front();
  const bool gf_ok = decreasing && gf.costs.back() < 1e-6;
  return {es_ok && gf_ok, "ES J " + fmt("%.4f", es.costs.front()) + " -> " + fmt("%.3e", es.costs.back()) +
                              "; gradient J(20) " + fmt("%.3e", gf.costs.back()) +
                              (decreasing ? ", decreasing" : ", NOT decreasing")};
}

Outcome se3_reproduction() {
  auto cfg = load_config_file(ESYNC_FIXTURE_DIR "/se3_triangle.cfg");
  cfg.record_states = true;
  const auto rec = run(cfg);
  double spread = 0.0;
  const auto& last = rec.states.back();
  for (std::size_t i = 0; i < last.size(); ++i) {
    for (std::size_t j = i + 1; j < last.size(); ++j) {
      spread = std::max(spread, (last[i].topRightCorner<3, 1>() - last[j].topRightCorner<3, 1>()).norm());
    }
  }
  const bool ok = rec.costs.back() < 0.1 * rec.costs.front() && rec.dispersions.back() < 0.5 && spread < 0.5;
  return {ok, "J " + fmt("%.4f", rec.costs.front()) + " -> " + fmt("%.3e", rec.costs.back()) + ", dispersion " +
                  fmt("%.3e", rec.dispersions.back()) + ", translation spread " + fmt("%.3e", spread)};
}

Outcome frequency_trend() {
  int wins = 0;
  std::string detail;
  for (int seed : {1, 2, 3}) {
    double bound[2];
    int i = 0;
    for (double omega : {40.0, 160.0}) {
      const auto cfg = fixture_config("group = SO3\nagents = 3\nt_final = 200\namplitude = 0.25\ninitial_spread = 0.2\n"
                                      "seed = " + std::to_string(seed) + "\nomega = " + format_real(omega) + "\n");
      bound[i++] = ultimate_bound(run(cfg));
    }
    const bool ok = bound[1] <= bound[0] + 1e-3;
    wins += ok;
    detail += (detail.empty() ? "" : "; ") + std::string("seed ") + std::to_string(seed) + " " +
              fmt("%.3e", bound[0]) + " -> " + fmt("%.3e", bound[1]);
  }
  return {wins >= 2, std::to_string(wins) + "/3 non-increasing (" + detail + ")"};
}

Outcome determinism() {
  auto cfg = load_config_file(ESYNC_FIXTURE_DIR "/so3_triangle.cfg");
  cfg.t_final = 10.0;
  cfg.record_states = true;
  auto csv = [](const SimulationRecord& r) {
    std::ostringstream out;
    write_csv(r, out);
    return out.str();
  };
  const auto a = run(cfg);
  const auto b = run(cfg);
  const bool identical = csv(a) == csv(b);

  cfg.execution = Execution::parallel;
  const auto p = run(cfg);
  double worst = 0.0;
  bool same_shape = p.size() == a.size() && p.states.size() == a.states.size();
  for (std::size_t k = 0; same_shape && k < a.size(); ++k) {
    worst = std::max({worst, std::abs(p.times[k] - a.times[k]), std::abs(p.costs[k] - a.costs[k]),
                      std::abs(p.dispersions[k] - a.dispersions[k])});
    for (std::size_t j = 0; j < a.states[k].size(); ++j) {
      worst = std::max(worst, (p.states[k][j] - a.states[k][j]).cwiseAbs().maxCoeff());
    }
  }
  return {identical && same_shape && worst <= 1e-13,
          std::string(identical ? "byte-identical CSVs" : "CSVs DIFFER") + ", parallel max deviation " +
              fmt("%.2e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exponential-map oracles", exp_oracles},
      {"group closure over 1e5 steps", group_closure},
      {"cost invariance", invariance},
      {"gradient consistency", gradient_consistency},
      {"averaging order", averaging_order},
      {"frequency validator", frequency_validator},
      {"SO(3) reproduction", so3_reproduction},
      {"SE(3) reproduction", se3_reproduction},
      {"frequency trend of the ultimate bound", frequency_trend},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
