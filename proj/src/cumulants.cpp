#include "qbp/cumulants.hpp"

#include <algorithm>

#include "qbp/algebra.hpp"

namespace qbp {

CumulantSeries cumulant_decompose(const MultiSiteOperator& v, std::vector<int> cut_order) {
  const double scale = v.matrix().norm();
  if ((v.matrix() - v.matrix().adjoint()).norm() > 1e-12 * std::max(scale, 1.0))
    throw ContractError("cumulant decomposition requires a Hermitian operator");

  const auto& sup = v.support();
  if (cut_order.empty()) {
    for (const Site& s : sup) cut_order.push_back(s.index);
  }
  if (cut_order.size() != sup.size())
    throw SupportError("cut_order must list every support site exactly once");
  for (int idx : cut_order) (void)v.site_position(idx);

  const int n = static_cast<int>(sup.size());
  CumulantSeries series;
  series.cumulants.reserve(n);
  series.norms.reserve(n);

  MultiSiteOperator remainder = v;
  for (int j = 1; j <= n; ++j) {
    std::vector<int> traced(cut_order.begin() + j, cut_order.end());
    MultiSiteOperator vj = traced.empty()
                               ? remainder
                               : partial_trace(remainder, traced, TraceMode::Normalized);
    series.norms.push_back(op_norm(vj));
    if (j < n) remainder -= embed(vj, sup);
    series.cumulants.push_back(std::move(vj));
  }
  return series;
}

MultiSiteOperator cumulant_sum(const CumulantSeries& series, const std::vector<Site>& support) {
  MultiSiteOperator acc = MultiSiteOperator::zero(support);
  for (const auto& c : series.cumulants) acc += embed(c, support);
  return acc;
}

}  // namespace qbp
