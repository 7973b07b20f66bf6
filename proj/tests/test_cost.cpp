#include <gtest/gtest.h>

#include <random>

#include "esync/cost.hpp"
#include "esync/experiment.hpp"
#include "oracles.hpp"

using namespace esync;

namespace {

template <MatrixGroup G>
Configuration<G> random_configuration(std::mt19937_64& rng, std::size_t m) {
  Configuration<G> cfg;
  for (std::size_t j = 0; j < m; ++j) cfg.push_back(random_element<G>(rng, std::numbers::pi, 3.0));
  return cfg;
}

double trace_form_cost(const NetworkConfig& net, const Configuration<SO3>& cfg) {
  double j = 0.0;
  for (const auto& [a, b] : net.edges()) j += 3.0 - (cfg[a].matrix().transpose() * cfg[b].matrix()).trace();
  return j;
}

}  // namespace

TEST(NetworkConfig, RejectsMalformedGraphs) {
  EXPECT_THROW(NetworkConfig(GroupTag::SO3, 1, {}), InvalidInput);
  EXPECT_THROW(NetworkConfig(GroupTag::SO3, 3, {{0, 0}, {0, 1}, {1, 2}}), InvalidInput);
  EXPECT_THROW(NetworkConfig(GroupTag::SO3, 3, {{0, 1}, {1, 0}, {1, 2}}), InvalidInput);
  EXPECT_THROW(NetworkConfig(GroupTag::SO3, 3, {{0, 1}}), InvalidInput);  // agent 2 isolated
  EXPECT_THROW(NetworkConfig(GroupTag::SO3, 2, {{0, 5}}), InvalidInput);
  EXPECT_NO_THROW(NetworkConfig(GroupTag::SO3, 4, {{0, 1}, {1, 2}, {2, 3}}));
  EXPECT_EQ(NetworkConfig::complete(GroupTag::SE3, 4).edges().size(), 6u);
}

TEST(CostSO3, SynchronizedIsZero) {
  std::mt19937_64 rng(1);
  const auto net = NetworkConfig::complete(GroupTag::SO3, 3);
  const auto g = random_element<SO3>(rng);
  EXPECT_EQ(cost_so3(net, {g, g, g}), 0.0);
}

TEST(CostSO3, HalfTurnAgent) {
  const auto net = NetworkConfig::complete(GroupTag::SO3, 3);
  const auto i = GroupElement<SO3>::identity();
  const auto flip = GroupElement<SO3>::from_matrix(Eigen::Vector3d(-1, -1, 1).asDiagonal().toDenseMatrix());
  EXPECT_DOUBLE_EQ(cost_so3(net, {i, i, flip}), 8.0);
}

TEST(CostSO3, TraceAndFrobeniusFormsAgree) {
  std::mt19937_64 rng(2);
  const auto net = NetworkConfig::complete(GroupTag::SO3, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cfg = random_configuration<SO3>(rng, 4);
    EXPECT_NEAR(cost_so3(net, cfg), trace_form_cost(net, cfg), 1e-12);
  }
}

TEST(CostSO3, ReferenceInitialConditionRegression) {
  // Independent evaluation: numpy, polar factors of the fixture matrices,
  // J = Σ (3 − tr(g_iᵀg_j)) over the complete graph.
  const auto cfg = load_config_file(ESYNC_FIXTURE_DIR "/so3_triangle.cfg");
  const auto x = initial_configuration<SO3>(cfg);
  EXPECT_NEAR(cost_so3(cfg.net, x), 7.8204915644494877, 1e-12);
}

TEST(CostSO3, TagMismatchIsInvalidInput) {
  const auto net = NetworkConfig::complete(GroupTag::SE3, 2);
  EXPECT_THROW(cost_so3(net, {GroupElement<SO3>{}, GroupElement<SO3>{}}), InvalidInput);
  const auto net3 = NetworkConfig::complete(GroupTag::SO3, 3);
  EXPECT_THROW(cost_so3(net3, {GroupElement<SO3>{}, GroupElement<SO3>{}}), InvalidInput);
}

TEST(CostSE3, SingleEdgeTranslation) {
  const NetworkConfig net(GroupTag::SE3, 2, {{0, 1}});
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 3) = 1.0;
  EXPECT_DOUBLE_EQ(cost_se3(net, {GroupElement<SE3>{}, GroupElement<SE3>::from_matrix(m)}), 0.5);
  EXPECT_EQ(cost_se3(net, {GroupElement<SE3>{}, GroupElement<SE3>{}}), 0.0);
}

TEST(CostSE3, SplitsIntoRotationAndTranslation) {
  std::mt19937_64 rng(3);
  const auto net = NetworkConfig::complete(GroupTag::SE3, 3);
  const auto rot_net = NetworkConfig::complete(GroupTag::SO3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cfg = random_configuration<SE3>(rng, 3);
    Configuration<SO3> rots;
    double trans = 0.0;
    for (const auto& g : cfg) rots.push_back(GroupElement<SO3>::unchecked(g.rotation()));
    for (const auto& [a, b] : net.edges()) trans += 0.5 * (cfg[a].translation() - cfg[b].translation()).squaredNorm();
    EXPECT_NEAR(cost_se3(net, cfg), cost_so3(rot_net, rots) + trans, 1e-12);
  }
}

TEST(CostSE3, ReferenceInitialConditionRegression) {
  const auto cfg = load_config_file(ESYNC_FIXTURE_DIR "/se3_triangle.cfg");
  const auto x = initial_configuration<SE3>(cfg);
  EXPECT_NEAR(cost_se3(cfg.net, x), 3.1588567653597748, 1e-12);
}

TEST(Cost, ZeroExactlyWhenSynchronizedOnConnectedGraph) {
  std::mt19937_64 rng(4);
  // A path graph: J = 0 forces every agent equal even without all-pairs edges.
  const NetworkConfig net(GroupTag::SO3, 4, {{0, 1}, {1, 2}, {2, 3}});
  for (int trial = 0; trial < 100; ++trial) {
    const auto cfg = random_configuration<SO3>(rng, 4);
    EXPECT_GT(cost_so3(net, cfg), 0.0);
    EXPECT_GT(dispersion<SO3>(cfg), 0.0);
    const Configuration<SO3> same(4, cfg[0]);
    EXPECT_EQ(cost_so3(net, same), 0.0);
    EXPECT_EQ(dispersion<SO3>(same), 0.0);
  }
}

TEST(CheckInvariance, IdentityGivesZero) {
  std::mt19937_64 rng(5);
  const auto net = NetworkConfig::complete(GroupTag::SO3, 3);
  EXPECT_EQ(check_invariance<SO3>(net, random_configuration<SO3>(rng, 3), GroupElement<SO3>{}), 0.0);
}

TEST(CheckInvariance, LeftTranslationLeavesCostUnchanged) {
  std::mt19937_64 rng(6);
  const auto so3 = NetworkConfig::complete(GroupTag::SO3, 3);
  const auto se3 = NetworkConfig::complete(GroupTag::SE3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_LE(check_invariance<SO3>(so3, random_configuration<SO3>(rng, 3), random_element<SO3>(rng)), 1e-12);
    EXPECT_LE(check_invariance<SE3>(se3, random_configuration<SE3>(rng, 3), random_element<SE3>(rng, 3.0, 10.0)),
              1e-12);
  }
}

TEST(Dispersion, MaxPairwiseDistance) {
  const auto i = GroupElement<SO3>::identity();
  const auto r = exp_so3(Eigen::Vector3d(0.4, 0, 0));
  const auto s = exp_so3(Eigen::Vector3d(-0.9, 0, 0));
  EXPECT_DOUBLE_EQ(dispersion<SO3>({i, r}), group_distance(i, r));
  const double expected = std::max({group_distance(i, r), group_distance(i, s), group_distance(r, s)});
  EXPECT_DOUBLE_EQ(dispersion<SO3>({i, r, s}), expected);
  EXPECT_DOUBLE_EQ(dispersion<SO3>({i, r, s}), group_distance(r, s));
}
