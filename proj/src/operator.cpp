#include "qbp/operator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <sstream>

namespace qbp {

namespace {

std::string support_string(const std::vector<Site>& sites) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < sites.size(); ++i) {
    if (i) os << ",";
    os << sites[i].index;
  }
  os << "]";
  return os.str();
}

void check_sorted_support(const std::vector<Site>& sites) {
  for (size_t i = 0; i + 1 < sites.size(); ++i) {
    if (!(sites[i].index < sites[i + 1].index))
      throw SupportError("support must be strictly ascending: " + support_string(sites));
  }
  for (const Site& s : sites) {
    if (s.dim < 2) throw DimensionError("site dimension must be >= 2");
  }
}

}  // namespace

Eigen::Index product_dim(const std::vector<Site>& sites) {
  Eigen::Index d = 1;
  for (const Site& s : sites) d *= s.dim;
  return d;
}

MultiSiteOperator::MultiSiteOperator(std::vector<Site> support, Matrix matrix, bool hermitian,
                                     bool positive)
    : support_(std::move(support)), mat_(std::move(matrix)), hermitian_(hermitian),
      positive_(positive) {
  check_sorted_support(support_);
  const Eigen::Index d = product_dim(support_);
  if (mat_.rows() != d || mat_.cols() != d)
    throw DimensionError("matrix dimension does not match product of site dims");
}

MultiSiteOperator MultiSiteOperator::hermitian(std::vector<Site> support, Matrix matrix) {
  const double scale = matrix.norm();
  const double dev = (matrix - matrix.adjoint()).norm();
  if (dev > 1e-12 * std::max(scale, 1.0))
    throw ContractError("operator flagged hermitian deviates from its adjoint");
  return MultiSiteOperator(std::move(support), std::move(matrix), true, false);
}

MultiSiteOperator MultiSiteOperator::positive(std::vector<Site> support, Matrix matrix) {
  const double scale = matrix.norm();
  const double dev = (matrix - matrix.adjoint()).norm();
  if (dev > 1e-12 * std::max(scale, 1.0))
    throw ContractError("operator flagged positive deviates from its adjoint");
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  const double op_scale = std::max(std::abs(es.eigenvalues().maxCoeff()),
                                   std::abs(es.eigenvalues().minCoeff()));
  if (min_eig < -1e-12 * std::max(op_scale, 1.0))
    throw ContractError("operator flagged positive has a negative eigenvalue");
  return MultiSiteOperator(std::move(support), std::move(matrix), true, true);
}

MultiSiteOperator MultiSiteOperator::identity(std::vector<Site> support) {
  const Eigen::Index d = product_dim(support);
  return MultiSiteOperator(std::move(support), Matrix::Identity(d, d), true, true);
}

MultiSiteOperator MultiSiteOperator::zero(std::vector<Site> support) {
  const Eigen::Index d = product_dim(support);
  return MultiSiteOperator(std::move(support), Matrix::Zero(d, d), true, false);
}

bool MultiSiteOperator::has_site(int index) const {
  return std::any_of(support_.begin(), support_.end(),
                     [index](const Site& s) { return s.index == index; });
}

int MultiSiteOperator::site_position(int index) const {
  for (size_t i = 0; i < support_.size(); ++i)
    if (support_[i].index == index) return static_cast<int>(i);
  throw SupportError("site " + std::to_string(index) + " not in support " +
                     support_string(support_));
}

MultiSiteOperator MultiSiteOperator::adjoint() const {
  return MultiSiteOperator(support_, mat_.adjoint(), hermitian_, positive_);
}

MultiSiteOperator MultiSiteOperator::traceless() const {
  Matrix m = mat_;
  const Complex shift = m.trace() / static_cast<double>(m.rows());
  m -= shift * Matrix::Identity(m.rows(), m.cols());
  return MultiSiteOperator(support_, std::move(m), hermitian_, false);
}

MultiSiteOperator& MultiSiteOperator::operator+=(const MultiSiteOperator& rhs) {
  if (support_ != rhs.support_) throw SupportError("operator sum requires identical supports");
  mat_ += rhs.mat_;
  hermitian_ = hermitian_ && rhs.hermitian_;
  positive_ = positive_ && rhs.positive_;
  return *this;
}

MultiSiteOperator& MultiSiteOperator::operator-=(const MultiSiteOperator& rhs) {
  if (support_ != rhs.support_) throw SupportError("operator difference requires identical supports");
  mat_ -= rhs.mat_;
  hermitian_ = hermitian_ && rhs.hermitian_;
  positive_ = false;
  return *this;
}

MultiSiteOperator& MultiSiteOperator::operator*=(Complex scale) {
  mat_ *= scale;
  hermitian_ = hermitian_ && scale.imag() == 0.0;
  positive_ = positive_ && scale.imag() == 0.0 && scale.real() >= 0.0;
  return *this;
}

MultiSiteOperator operator*(const MultiSiteOperator& a, const MultiSiteOperator& b) {
  if (a.support() != b.support()) throw SupportError("operator product requires identical supports");
  return MultiSiteOperator(a.support(), a.matrix() * b.matrix());
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix pauli_id() { return Matrix::Identity(2, 2); }

namespace {

// Mixed-radix digit strides for an ordered site list. Site 0 is the most
// significant digit, matching Kronecker-product convention A (x) B.
std::vector<Eigen::Index> strides_for(const std::vector<Site>& sites) {
  std::vector<Eigen::Index> strides(sites.size());
  Eigen::Index acc = 1;
  for (int i = static_cast<int>(sites.size()) - 1; i >= 0; --i) {
    strides[i] = acc;
    acc *= sites[i].dim;
  }
  return strides;
}

}  // namespace

MultiSiteOperator embed(const MultiSiteOperator& op, const std::vector<Site>& target) {
  check_sorted_support(target);
  // Positions of op's sites within the target, and the complement.
  std::vector<int> op_pos;
  op_pos.reserve(op.support().size());
  for (const Site& s : op.support()) {
    auto it = std::find(target.begin(), target.end(), s);
    if (it == target.end())
      throw SupportError("embed target missing site " + std::to_string(s.index));
    op_pos.push_back(static_cast<int>(it - target.begin()));
  }
  if (op.support() == target) return op;

  std::vector<int> id_pos;
  for (int i = 0; i < static_cast<int>(target.size()); ++i)
    if (std::find(op_pos.begin(), op_pos.end(), i) == op_pos.end()) id_pos.push_back(i);

  const auto t_strides = strides_for(target);
  const auto o_strides = strides_for(op.support());
  const Eigen::Index d_out = product_dim(target);

  // Enumerate (op row, op col, identity diagonal) triples and scatter.
  Eigen::Index d_op = op.dim();
  Eigen::Index d_id = 1;
  for (int p : id_pos) d_id *= target[p].dim;

  Matrix out = Matrix::Zero(d_out, d_out);
  const Matrix& m = op.matrix();

  // Precompute target offsets for each op-space index and identity index.
  std::vector<Eigen::Index> op_offset(d_op);
  for (Eigen::Index k = 0; k < d_op; ++k) {
    Eigen::Index rem = k, off = 0;
    for (size_t i = 0; i < op_pos.size(); ++i) {
      const Eigen::Index digit = rem / o_strides[i];
      rem %= o_strides[i];
      off += digit * t_strides[op_pos[i]];
    }
    op_offset[k] = off;
  }
  std::vector<Eigen::Index> id_offset(d_id);
  for (Eigen::Index k = 0; k < d_id; ++k) {
    Eigen::Index rem = k, off = 0;
    Eigen::Index radix = d_id;
    for (size_t i = 0; i < id_pos.size(); ++i) {
      radix /= target[id_pos[i]].dim;
      const Eigen::Index digit = rem / radix;
      rem %= radix;
      off += digit * t_strides[id_pos[i]];
    }
    id_offset[k] = off;
  }

  for (Eigen::Index r = 0; r < d_op; ++r)
    for (Eigen::Index c = 0; c < d_op; ++c) {
      const Complex v = m(r, c);
      if (v == Complex(0, 0)) continue;
      for (Eigen::Index k = 0; k < d_id; ++k)
        out(op_offset[r] + id_offset[k], op_offset[c] + id_offset[k]) = v;
    }

  return MultiSiteOperator(target, std::move(out), op.is_hermitian_flagged(),
                           op.is_positive_flagged());
}

MultiSiteOperator partial_trace(const MultiSiteOperator& op, const std::vector<int>& traced,
                                TraceMode mode) {
  std::vector<int> traced_pos;
  traced_pos.reserve(traced.size());
  for (int idx : traced) traced_pos.push_back(op.site_position(idx));
  std::sort(traced_pos.begin(), traced_pos.end());
  if (std::adjacent_find(traced_pos.begin(), traced_pos.end()) != traced_pos.end())
    throw SupportError("traced site listed twice");

  const auto& sup = op.support();
  std::vector<Site> kept;
  std::vector<int> kept_pos;
  for (int i = 0; i < static_cast<int>(sup.size()); ++i) {
    if (!std::binary_search(traced_pos.begin(), traced_pos.end(), i)) {
      kept.push_back(sup[i]);
      kept_pos.push_back(i);
    }
  }

  const auto strides = strides_for(sup);
  Eigen::Index d_keep = product_dim(kept);
  Eigen::Index d_tr = op.dim() / std::max<Eigen::Index>(d_keep, 1);

  std::vector<Eigen::Index> keep_offset(d_keep);
  {
    Eigen::Index radix = d_keep;
    for (Eigen::Index k = 0; k < d_keep; ++k) {
      Eigen::Index rem = k, off = 0;
      radix = d_keep;
      for (size_t i = 0; i < kept_pos.size(); ++i) {
        radix /= sup[kept_pos[i]].dim;
        off += (rem / radix) * strides[kept_pos[i]];
        rem %= radix;
      }
      keep_offset[k] = off;
    }
  }
  std::vector<Eigen::Index> tr_offset(d_tr);
  {
    for (Eigen::Index k = 0; k < d_tr; ++k) {
      Eigen::Index rem = k, off = 0;
      Eigen::Index radix = d_tr;
      for (size_t i = 0; i < traced_pos.size(); ++i) {
        radix /= sup[traced_pos[i]].dim;
        off += (rem / radix) * strides[traced_pos[i]];
        rem %= radix;
      }
      tr_offset[k] = off;
    }
  }

  const Matrix& m = op.matrix();
  Matrix out = Matrix::Zero(d_keep, d_keep);
  for (Eigen::Index r = 0; r < d_keep; ++r)
    for (Eigen::Index c = 0; c < d_keep; ++c) {
      Complex acc(0, 0);
      for (Eigen::Index t = 0; t < d_tr; ++t)
        acc += m(keep_offset[r] + tr_offset[t], keep_offset[c] + tr_offset[t]);
      out(r, c) = acc;
    }

  if (mode == TraceMode::Normalized && d_tr > 0) out /= static_cast<double>(d_tr);

  return MultiSiteOperator(std::move(kept), std::move(out), op.is_hermitian_flagged(),
                           op.is_positive_flagged());
}

MultiSiteOperator relabel(const MultiSiteOperator& op, const std::vector<int>& new_indices) {
  if (new_indices.size() != op.support().size())
    throw SupportError("relabel index count does not match support size");
  std::vector<Site> sup = op.support();
  for (size_t i = 0; i < sup.size(); ++i) sup[i].index = new_indices[i];
  return MultiSiteOperator(std::move(sup), op.matrix(), op.is_hermitian_flagged(),
                           op.is_positive_flagged());
}

MultiSiteOperator reverse_sites(const MultiSiteOperator& op, const std::vector<int>& new_indices) {
  const auto& sup = op.support();
  const int n = static_cast<int>(sup.size());
  if (static_cast<int>(new_indices.size()) != n)
    throw SupportError("reverse_sites index count does not match support size");

  std::vector<Site> rev_sites(n);
  for (int i = 0; i < n; ++i) {
    rev_sites[i] = sup[n - 1 - i];
    rev_sites[i].index = new_indices[i];
  }
  check_sorted_support(rev_sites);

  const auto strides = strides_for(sup);
  const auto out_strides = strides_for(rev_sites);
  const Eigen::Index d = op.dim();

  std::vector<Eigen::Index> perm(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::Index rem = k, out = 0;
    for (int i = 0; i < n; ++i) {
      const Eigen::Index digit = rem / strides[i];
      rem %= strides[i];
      out += digit * out_strides[n - 1 - i];
    }
    perm[k] = out;
  }

  const Matrix& m = op.matrix();
  Matrix outm(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) outm(perm[r], perm[c]) = m(r, c);

  return MultiSiteOperator(std::move(rev_sites), std::move(outm), op.is_hermitian_flagged(),
                           op.is_positive_flagged());
}

}  // namespace qbp
