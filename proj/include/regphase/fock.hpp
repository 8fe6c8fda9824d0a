#pragma once

// Truncated Fock space {|0>, ..., |M-1>} and dense operator arithmetic on it.
//
// Every operator is an honest M x M matrix. Identities that hold exactly on
// the infinite space hold here only away from the top level; callers state
// the margin they need and compare on the interior block.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

#include "regphase/errors.hpp"

namespace regphase {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr Complex kI{0.0, 1.0};

class TruncatedSpace {
 public:
  static constexpr std::size_t kMinDim = 4;

  explicit TruncatedSpace(std::size_t dim) : dim_(dim) {
    if (dim < kMinDim) {
      throw DimensionError("TruncatedSpace: dim must be >= 4, got " + std::to_string(dim));
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(dim_); }

  friend bool operator==(const TruncatedSpace&, const TruncatedSpace&) = default;

 private:
  std::size_t dim_;
};

enum class OperatorRole { Ladder, Number, ExpPhase, PhaseOp, PovmElement, ProjectorFn, Generic };

class FockOperator {
 public:
  FockOperator(TruncatedSpace space, Matrix entries, OperatorRole role = OperatorRole::Generic)
      : space_(space), entries_(std::move(entries)), role_(role) {
    if (entries_.rows() != space_.size() || entries_.cols() != space_.size()) {
      throw DimensionError("FockOperator: matrix shape does not match space dimension");
    }
  }

  static FockOperator zero(TruncatedSpace space, OperatorRole role = OperatorRole::Generic) {
    return {space, Matrix::Zero(space.size(), space.size()), role};
  }
  static FockOperator identity(TruncatedSpace space) {
    return {space, Matrix::Identity(space.size(), space.size()), OperatorRole::Generic};
  }
  static FockOperator diagonal(TruncatedSpace space, const RealVector& diag,
                               OperatorRole role = OperatorRole::Generic) {
    return {space, diag.cast<Complex>().asDiagonal().toDenseMatrix(), role};
  }

  const TruncatedSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return entries_; }
  OperatorRole role() const noexcept { return role_; }
  Complex operator()(Eigen::Index r, Eigen::Index s) const { return entries_(r, s); }

  FockOperator adjoint() const { return {space_, entries_.adjoint(), role_}; }
  FockOperator with_role(OperatorRole role) const { return {space_, entries_, role}; }

  Vector apply(const Vector& v) const { return entries_ * v; }

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    check_same(a, b);
    return {a.space_, a.entries_ * b.entries_};
  }
  friend FockOperator operator+(const FockOperator& a, const FockOperator& b) {
    check_same(a, b);
    return {a.space_, a.entries_ + b.entries_};
  }
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b) {
    check_same(a, b);
    return {a.space_, a.entries_ - b.entries_};
  }
  friend FockOperator operator*(Complex c, const FockOperator& a) { return {a.space_, c * a.entries_}; }
  friend FockOperator operator*(const FockOperator& a, Complex c) { return c * a; }

 private:
  static void check_same(const FockOperator& a, const FockOperator& b) {
    if (!(a.space_ == b.space_)) throw DimensionError("FockOperator: mismatched spaces");
  }

  TruncatedSpace space_;
  Matrix entries_;
  OperatorRole role_;
};

inline FockOperator commutator(const FockOperator& a, const FockOperator& b) { return a * b - b * a; }

// Largest |a_rs - b_rs| over r, s < limit (limit = dim compares everything).
inline double max_abs_diff(const Matrix& a, const Matrix& b, Eigen::Index limit) {
  limit = std::min({limit, a.rows(), b.rows()});
  if (limit <= 0) return 0.0;
  return (a.topLeftCorner(limit, limit) - b.topLeftCorner(limit, limit)).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const FockOperator& a, const FockOperator& b, Eigen::Index limit) {
  return max_abs_diff(a.matrix(), b.matrix(), limit);
}

// max_ij |[A,B] - C|_ij / max(1, (|A||B| + |B||A|)_ij) on the top-left block:
// the defect measured against the size of the terms that cancel.
inline double commutator_defect(const FockOperator& a, const FockOperator& b, const FockOperator& c,
                                Eigen::Index limit) {
  limit = std::min(limit, a.matrix().rows());
  if (limit <= 0) return 0.0;
  const Eigen::MatrixXd aa = a.matrix().cwiseAbs();
  const Eigen::MatrixXd bb = b.matrix().cwiseAbs();
  const Eigen::MatrixXd scale = (aa * bb + bb * aa).cwiseMax(1.0);
  const Matrix d = a.matrix() * b.matrix() - b.matrix() * a.matrix() - c.matrix();
  return (d.cwiseAbs().topLeftCorner(limit, limit).array() / scale.topLeftCorner(limit, limit).array()).maxCoeff();
}

inline double hermiticity_defect(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

class FockState {
 public:
  static constexpr double kDropTolerance = 1e-15;

  // Normalizes on construction; a zero vector is rejected.
  FockState(TruncatedSpace space, Vector coeffs) : space_(space), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != space_.size()) {
      throw DimensionError("FockState: coefficient count does not match space dimension");
    }
    const double norm = coeffs_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("FockState: zero or non-finite vector");
    coeffs_ /= norm;
    support_cutoff_ = 0;
    for (Eigen::Index n = coeffs_.size() - 1; n >= 0; --n) {
      if (std::abs(coeffs_(n)) > kDropTolerance) {
        support_cutoff_ = static_cast<std::size_t>(n);
        break;
      }
    }
  }

  static FockState number(TruncatedSpace space, std::size_t n) {
    if (n >= space.dim()) throw DimensionError("FockState::number: level outside space");
    Vector v = Vector::Zero(space.size());
    v(static_cast<Eigen::Index>(n)) = 1.0;
    return {space, std::move(v)};
  }

  const TruncatedSpace& space() const noexcept { return space_; }
  const Vector& coeffs() const noexcept { return coeffs_; }
  Complex operator[](Eigen::Index n) const { return coeffs_(n); }
  std::size_t support_cutoff() const noexcept { return support_cutoff_; }

 private:
  TruncatedSpace space_;
  Vector coeffs_;
  std::size_t support_cutoff_ = 0;
};

// E = sum_n |n><n+1| and its adjoint.
inline std::pair<FockOperator, FockOperator> make_ladder(TruncatedSpace space) {
  Matrix e = Matrix::Zero(space.size(), space.size());
  for (Eigen::Index n = 0; n + 1 < space.size(); ++n) e(n, n + 1) = 1.0;
  FockOperator E{space, e, OperatorRole::Ladder};
  return {E, E.adjoint()};
}

inline FockOperator make_number(TruncatedSpace space) {
  return FockOperator::diagonal(space, RealVector::LinSpaced(space.size(), 0.0, double(space.size() - 1)),
                                OperatorRole::Number);
}

// A = E sqrt(N), A^+ = sqrt(N) E^+.
inline std::pair<FockOperator, FockOperator> make_amplitude(TruncatedSpace space) {
  Matrix a = Matrix::Zero(space.size(), space.size());
  for (Eigen::Index n = 0; n + 1 < space.size(); ++n) a(n, n + 1) = std::sqrt(double(n + 1));
  FockOperator A{space, a, OperatorRole::Ladder};
  return {A, A.adjoint()};
}

// |0><0| and its truncation mirror |M-1><M-1|.
inline FockOperator vacuum_projector(TruncatedSpace space) {
  Matrix p = Matrix::Zero(space.size(), space.size());
  p(0, 0) = 1.0;
  return {space, p};
}

inline FockOperator top_level_projector(TruncatedSpace space) {
  Matrix p = Matrix::Zero(space.size(), space.size());
  p(space.size() - 1, space.size() - 1) = 1.0;
  return {space, p};
}

enum class ShiftKind { E, Eplus };

// E^k |psi> moves c_{n+k} to level n; (E^+)^k |psi> moves c_n to level n+k.
// The result is a plain vector since E^k need not preserve the norm.
inline Vector apply_power_shift(ShiftKind kind, std::size_t k, const FockState& psi) {
  const Eigen::Index m = psi.space().size();
  const auto kk = static_cast<Eigen::Index>(k);
  Vector out = Vector::Zero(m);
  if (kind == ShiftKind::E) {
    if (kk < m) out.head(m - kk) = psi.coeffs().tail(m - kk);
    return out;
  }
  if (psi.support_cutoff() + k > psi.space().dim() - 1) {
    throw TruncationOverflow("apply_power_shift: (E^+)^" + std::to_string(k) + " spills past level " +
                             std::to_string(m - 1));
  }
  out.tail(m - kk) = psi.coeffs().head(m - kk);
  return out;
}

}  // namespace regphase
