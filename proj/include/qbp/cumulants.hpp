#pragma once

#include "qbp/operator.hpp"

namespace qbp {

/// Decomposition V = sum_j V^j where V^j acts on the first j sites of a
/// cut-ordered window. norms[j-1] is the operator norm of V^j.
struct CumulantSeries {
  std::vector<MultiSiteOperator> cumulants;
  std::vector<double> norms;

  int order() const { return static_cast<int>(cumulants.size()); }
};

/// Cumulant decomposition of a Hermitian operator.
///
/// cut_order lists the support sites starting from the one nearest the traced
/// region; V^1 is the normalized partial trace onto cut_order[0], and
/// V^j the normalized partial trace onto the first j sites of what lower
/// cumulants leave behind. The embedded cumulants telescope back to V.
/// An empty cut_order means ascending site order.
CumulantSeries cumulant_decompose(const MultiSiteOperator& v,
                                  std::vector<int> cut_order = {});

/// Sum of cumulants embedded back on the full support (telescoping check).
MultiSiteOperator cumulant_sum(const CumulantSeries& series, const std::vector<Site>& support);

}  // namespace qbp
