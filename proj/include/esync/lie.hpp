#pragma once

// Matrix Lie group primitives for SO(3) and SE(3).
//
// Algebra coordinates follow a fixed generator basis. For so(3):
//
//   E1 = [ 0 1 0; -1 0 0;  0 0 0]
//   E2 = [ 0 0 0;  0 0 1;  0 -1 0]
//   E3 = [ 0 0 1;  0 0 0; -1 0 0]
//
// so hat(v) = [0 v1 v3; -v1 0 v2; -v3 -v2 0]. For se(3) the first three
// coordinates use the same rotational generators and the last three are the
// translation column.

#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <cstdio>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "esync/errors.hpp"

namespace esync {

enum class GroupTag { SO3, SE3 };

inline std::string_view to_string(GroupTag tag) { return tag == GroupTag::SO3 ? "SO3" : "SE3"; }

struct SO3 {
  static constexpr GroupTag tag = GroupTag::SO3;
  static constexpr int kMatrixDim = 3;
  static constexpr int kAlgebraDim = 3;
  using Matrix = Eigen::Matrix3d;
};

struct SE3 {
  static constexpr GroupTag tag = GroupTag::SE3;
  static constexpr int kMatrixDim = 4;
  static constexpr int kAlgebraDim = 6;
  using Matrix = Eigen::Matrix4d;
};

template <class G>
concept MatrixGroup = std::same_as<G, SO3> || std::same_as<G, SE3>;

/// Coordinates in the generator basis: 3 for so(3), 6 for se(3).
template <MatrixGroup G>
using AlgebraVector = Eigen::Matrix<double, G::kAlgebraDim, 1>;

/// Builds an AlgebraVector from a runtime-sized coordinate list.
template <MatrixGroup G>
AlgebraVector<G> algebra_vector(std::span<const double> coords) {
  if (coords.size() != static_cast<std::size_t>(G::kAlgebraDim)) {
    throw InvalidInput("algebra vector for " + std::string(to_string(G::tag)) + " needs " +
                       std::to_string(G::kAlgebraDim) + " coordinates, got " +
                       std::to_string(coords.size()));
  }
  return Eigen::Map<const AlgebraVector<G>>(coords.data());
}

/// ‖RᵀR − I‖_F of the rotation block.
template <class Derived>
double orthogonality_error(const Eigen::MatrixBase<Derived>& m) {
  const Eigen::Matrix3d r = m.template topLeftCorner<3, 3>();
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
}

/// An element of SO(3) or SE(3). Immutable; every operation returns a new value.
template <MatrixGroup G>
class GroupElement {
 public:
  using Matrix = typename G::Matrix;

  static constexpr double kMembershipTol = 1e-8;

  GroupElement() : mat_(Matrix::Identity()) {}

  static GroupElement identity() { return GroupElement(); }

  /// Checked construction; throws InvalidInput when `m` is not on the group.
  static GroupElement from_matrix(const Matrix& m, double tol = kMembershipTol) {
    if (!is_member(m, tol)) {
      throw InvalidInput("matrix is not an element of " + std::string(to_string(G::tag)) +
                         " (orthogonality error " + std::to_string(orthogonality_error(m)) + ")");
    }
    return GroupElement(m);
  }

  /// No membership check. For results that land on the group by construction.
  static GroupElement unchecked(const Matrix& m) { return GroupElement(m); }

  static bool is_member(const Matrix& m, double tol = kMembershipTol) {
    if (!m.allFinite()) return false;
    if (orthogonality_error(m) > tol) return false;
    if (m.template topLeftCorner<3, 3>().determinant() <= 0.0) return false;
    if constexpr (std::same_as<G, SE3>) {
      if (m(3, 0) != 0.0 || m(3, 1) != 0.0 || m(3, 2) != 0.0 || m(3, 3) != 1.0) return false;
    }
    return true;
  }

  const Matrix& matrix() const { return mat_; }
  Eigen::Matrix3d rotation() const { return mat_.template topLeftCorner<3, 3>(); }

  Eigen::Vector3d translation() const
    requires std::same_as<G, SE3>
  {
    return mat_.template topRightCorner<3, 1>();
  }

  /// Distance of the rotation block from orthogonality, ‖RᵀR − I‖_F.
  double drift() const { return orthogonality_error(mat_); }

  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.mat_ == b.mat_; }

 private:
  explicit GroupElement(const Matrix& m) : mat_(m) {}

  Matrix mat_;
};

template <MatrixGroup G>
using Configuration = std::vector<GroupElement<G>>;

// ---------------------------------------------------------------------------
// hat / vee

inline Eigen::Matrix3d hat_so3(const Eigen::Vector3d& v) {
  Eigen::Matrix3d k;
  // clang-format off
  k <<  0.0,   v(0),  v(2),
       -v(0),  0.0,   v(1),
       -v(2), -v(1),  0.0;
  // clang-format on
  return k;
}

template <MatrixGroup G>
typename G::Matrix hat(const AlgebraVector<G>& v) {
  if constexpr (std::same_as<G, SO3>) {
    return hat_so3(v);
  } else {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m.topLeftCorner<3, 3>() = hat_so3(v.template head<3>());
    m.topRightCorner<3, 1>() = v.template tail<3>();
    return m;
  }
}

/// Inverse of hat. Throws InvalidInput when `m` is farther than `tol`
/// (entrywise) from the image of hat.
template <MatrixGroup G>
AlgebraVector<G> vee(const typename G::Matrix& m, double tol = 1e-10) {
  const Eigen::Matrix3d k = m.template topLeftCorner<3, 3>();
  if (!m.allFinite() || ((k + k.transpose()).cwiseAbs().maxCoeff() > 2.0 * tol)) {
    throw InvalidInput("matrix is not in the Lie algebra: rotation block is not skew-symmetric");
  }
  if constexpr (std::same_as<G, SE3>) {
    if (m.row(3).cwiseAbs().maxCoeff() > tol) {
      throw InvalidInput("matrix is not in se(3): last row must be zero");
    }
  }
  AlgebraVector<G> v;
  v(0) = k(0, 1);
  v(1) = k(1, 2);
  v(2) = k(0, 2);
  if constexpr (std::same_as<G, SE3>) {
    v.template tail<3>() = m.template topRightCorner<3, 1>();
  }
  return v;
}

// ---------------------------------------------------------------------------
// exponentials

namespace detail {

// Below this rotation angle the closed-form coefficients lose accuracy to
// cancellation and their Taylor expansions are used instead.
inline constexpr double kSmallAngle = 1e-4;

// sin(θ)/θ and (1 − cos θ)/θ².
inline std::pair<double, double> rodrigues_coefficients(double theta) {
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    return {1.0 - t2 / 6.0 + t2 * t2 / 120.0, 0.5 - t2 / 24.0 + t2 * t2 / 720.0};
  }
  const double half = std::sin(0.5 * theta) / theta;
  return {std::sin(theta) / theta, 2.0 * half * half};
}

// (θ − sin θ)/θ³ cancels badly for small θ; the series is used up to 0.1.
inline double translation_coefficient(double theta) {
  if (theta < 0.1) {
    const double t2 = theta * theta;
    double term = 1.0 / 6.0, sum = term;
    for (int k = 1; k <= 6; ++k) {
      term *= -t2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
      sum += term;
    }
    return sum;
  }
  return (theta - std::sin(theta)) / (theta * theta * theta);
}

}  // namespace detail

/// Rodrigues formula. The rotation angle is the Euclidean norm of `v`.
inline GroupElement<SO3> exp_so3(const Eigen::Vector3d& v) {
  const double theta = v.norm();
  const Eigen::Matrix3d k = hat_so3(v);
  const auto [c1, c2] = detail::rodrigues_coefficients(theta);
  return GroupElement<SO3>::unchecked(Eigen::Matrix3d::Identity() + c1 * k + c2 * k * k);
}

/// exp([S p; 0 0]) = [exp(S) A·p; 0 1] with
/// A = I + (1 − cos θ)/θ² S + (θ − sin θ)/θ³ S².
inline GroupElement<SE3> exp_se3(const AlgebraVector<SE3>& v) {
  const Eigen::Vector3d w = v.head<3>();
  const double theta = w.norm();
  const Eigen::Matrix3d s = hat_so3(w);
  const Eigen::Matrix3d s2 = s * s;
  const auto [c1, c2] = detail::rodrigues_coefficients(theta);
  const double c3 = detail::translation_coefficient(theta);
  const Eigen::Matrix3d a = Eigen::Matrix3d::Identity() + c2 * s + c3 * s2;

  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = Eigen::Matrix3d::Identity() + c1 * s + c2 * s2;
  m.topRightCorner<3, 1>() = a * v.tail<3>();
  return GroupElement<SE3>::unchecked(m);
}

template <MatrixGroup G>
GroupElement<G> exp(const AlgebraVector<G>& v) {
  if constexpr (std::same_as<G, SO3>) {
    return exp_so3(v);
  } else {
    return exp_se3(v);
  }
}

// ---------------------------------------------------------------------------
// group operations

template <MatrixGroup G>
GroupElement<G> multiply(const GroupElement<G>& a, const GroupElement<G>& b) {
  typename G::Matrix m = a.matrix() * b.matrix();
  if constexpr (std::same_as<G, SE3>) {
    m.row(3) << 0.0, 0.0, 0.0, 1.0;
  }
  return GroupElement<G>::unchecked(m);
}

template <MatrixGroup G>
GroupElement<G> operator*(const GroupElement<G>& a, const GroupElement<G>& b) {
  return multiply(a, b);
}

template <MatrixGroup G>
GroupElement<G> inverse(const GroupElement<G>& g) {
  if constexpr (std::same_as<G, SO3>) {
    return GroupElement<SO3>::unchecked(g.matrix().transpose());
  } else {
    const Eigen::Matrix3d rt = g.rotation().transpose();
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rt;
    m.topRightCorner<3, 1>() = -rt * g.translation();
    return GroupElement<SE3>::unchecked(m);
  }
}

/// Frobenius distance ‖a − b‖_F between the matrix representations.
template <MatrixGroup G>
double group_distance(const GroupElement<G>& a, const GroupElement<G>& b) {
  return (a.matrix() - b.matrix()).norm();
}

/// Nearest rotation (Frobenius sense, det +1) to a 3×3 matrix, via SVD.
inline Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

/// Replaces the rotation block with its nearest rotation. Translation and the
/// homogeneous row are kept. Throws IntegrityError when the block is farther
/// than `max_drift` (Frobenius) from that rotation.
template <MatrixGroup G>
GroupElement<G> reproject(const typename G::Matrix& m, double max_drift = 0.1) {
  if (!m.allFinite()) throw IntegrityError("cannot reproject a non-finite matrix");
  const Eigen::Matrix3d block = m.template topLeftCorner<3, 3>();
  const Eigen::Matrix3d r = nearest_rotation(block);
  const double distance = (block - r).norm();
  if (distance > max_drift) {
    throw IntegrityError("rotation block is " + std::to_string(distance) +
                         " from the nearest rotation (limit " + std::to_string(max_drift) + ")");
  }
  typename G::Matrix out = m;
  out.template topLeftCorner<3, 3>() = r;
  if constexpr (std::same_as<G, SE3>) {
    if (m(3, 0) != 0.0 || m(3, 1) != 0.0 || m(3, 2) != 0.0 || m(3, 3) != 1.0) {
      throw IntegrityError("SE3 matrix has a malformed last row");
    }
  }
  return GroupElement<G>::unchecked(out);
}

template <MatrixGroup G>
GroupElement<G> reproject(const GroupElement<G>& g, double max_drift = 0.1) {
  return reproject<G>(g.matrix(), max_drift);
}

/// Random element: rotation exp(v) with ‖v‖ uniform in [0, max_angle] along a
/// uniform direction; SE3 translation uniform in [−translation_scale, translation_scale]³.
template <MatrixGroup G, class Rng>
GroupElement<G> random_element(Rng& rng, double max_angle = std::numbers::pi,
                               double translation_scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::Vector3d axis(normal(rng), normal(rng), normal(rng));
  while (axis.norm() < 1e-12) axis = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
  axis.normalize();
  AlgebraVector<G> v = AlgebraVector<G>::Zero();
  v.template head<3>() = axis * (max_angle * unit(rng));
  if constexpr (std::same_as<G, SE3>) {
    std::uniform_real_distribution<double> box(-translation_scale, translation_scale);
    const Eigen::Vector3d t(box(rng), box(rng), box(rng));
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = exp_so3(v.template head<3>()).matrix();
    m.topRightCorner<3, 1>() = t;
    return GroupElement<SE3>::unchecked(m);
  } else {
    return exp_so3(v);
  }
}

// ---------------------------------------------------------------------------
// serialization: row-major, whitespace separated, 17 significant digits

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class Derived>
std::string format_matrix(const Eigen::MatrixBase<Derived>& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ' ';
      out += format_real(m(r, c));
    }
    out += '\n';
  }
  return out;
}

/// Parses `dim*dim` row-major numbers separated by whitespace.
inline Eigen::MatrixXd parse_matrix(std::string_view text, int dim) {
  std::istringstream in{std::string(text)};
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    char* end = nullptr;
    const double x = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      throw InvalidInput("not a number: '" + token + "'");
    }
    values.push_back(x);
  }
  if (values.size() != static_cast<std::size_t>(dim * dim)) {
    throw InvalidInput("expected " + std::to_string(dim * dim) + " matrix entries, got " +
                       std::to_string(values.size()));
  }
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = values[static_cast<std::size_t>(r * dim + c)];
  return m;
}

}  // namespace esync
