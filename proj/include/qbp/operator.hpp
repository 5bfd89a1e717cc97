#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qbp/errors.hpp"

namespace qbp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// A lattice site: integer label plus local Hilbert-space dimension.
struct Site {
  int index = 0;
  int dim = 2;

  friend bool operator==(const Site& a, const Site& b) {
    return a.index == b.index && a.dim == b.dim;
  }
  friend bool operator<(const Site& a, const Site& b) { return a.index < b.index; }
};

/// Dense operator on an ordered tensor product of site spaces.
///
/// The support is kept in canonical (ascending index) order so that operator
/// equality is a plain matrix comparison. Hermitian/positive flags record
/// structure guaranteed by construction; flagged constructors verify it.
class MultiSiteOperator {
 public:
  MultiSiteOperator() = default;

  /// Unchecked construction; callers must pass support in ascending order.
  MultiSiteOperator(std::vector<Site> support, Matrix matrix, bool hermitian = false,
                    bool positive = false);

  /// Construction that verifies the hermitian flag against the matrix.
  static MultiSiteOperator hermitian(std::vector<Site> support, Matrix matrix);
  /// Construction that verifies positivity (includes hermiticity) spectrally.
  static MultiSiteOperator positive(std::vector<Site> support, Matrix matrix);

  static MultiSiteOperator identity(std::vector<Site> support);
  static MultiSiteOperator zero(std::vector<Site> support);

  const std::vector<Site>& support() const { return support_; }
  const Matrix& matrix() const { return mat_; }
  Matrix& matrix() { return mat_; }
  bool is_hermitian_flagged() const { return hermitian_; }
  bool is_positive_flagged() const { return positive_; }

  Eigen::Index dim() const { return mat_.rows(); }
  int n_sites() const { return static_cast<int>(support_.size()); }
  bool has_site(int index) const;
  int site_position(int index) const;  // position within support, SupportError if absent

  Complex trace() const { return mat_.trace(); }
  MultiSiteOperator adjoint() const;
  double frobenius_norm() const { return mat_.norm(); }

  /// Remove the trace part: A - (tr A / D) I.
  MultiSiteOperator traceless() const;

  MultiSiteOperator& operator+=(const MultiSiteOperator& rhs);
  MultiSiteOperator& operator-=(const MultiSiteOperator& rhs);
  MultiSiteOperator& operator*=(Complex scale);
  friend MultiSiteOperator operator+(MultiSiteOperator a, const MultiSiteOperator& b) {
    return a += b;
  }
  friend MultiSiteOperator operator-(MultiSiteOperator a, const MultiSiteOperator& b) {
    return a -= b;
  }
  friend MultiSiteOperator operator*(Complex s, MultiSiteOperator a) { return a *= s; }
  friend MultiSiteOperator operator*(MultiSiteOperator a, Complex s) { return a *= s; }

  /// Matrix product; supports must be identical.
  friend MultiSiteOperator operator*(const MultiSiteOperator& a, const MultiSiteOperator& b);

 private:
  std::vector<Site> support_;
  Matrix mat_;
  bool hermitian_ = false;
  bool positive_ = false;
};

/// Total dimension of a site list.
Eigen::Index product_dim(const std::vector<Site>& sites);

// Pauli matrices and the 2x2 identity, as 2x2 Matrix blocks.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix pauli_id();

/// op (x) identity on target \ op.support, legs permuted to target order.
/// Target must be in ascending order and contain op.support.
MultiSiteOperator embed(const MultiSiteOperator& op, const std::vector<Site>& target);

enum class TraceMode { Unnormalized, Normalized };

/// Partial trace over the sites listed in `traced` (by index).
/// Normalized mode divides by the traced dimension so identity maps to identity.
MultiSiteOperator partial_trace(const MultiSiteOperator& op, const std::vector<int>& traced,
                                TraceMode mode = TraceMode::Unnormalized);

/// Relabel support sites (same dims, same order); used to shift BP windows.
MultiSiteOperator relabel(const MultiSiteOperator& op, const std::vector<int>& new_indices);

/// Reverse the spatial order of the legs (site i <-> site n-1-i), then relabel
/// to the given ascending indices. Used to mirror chain messages.
MultiSiteOperator reverse_sites(const MultiSiteOperator& op, const std::vector<int>& new_indices);

}  // namespace qbp
