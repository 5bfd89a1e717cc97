#include "qbp/chain_bp.hpp"

#include <algorithm>
#include <cmath>

#include "qbp/algebra.hpp"

namespace qbp {

Message Message::uniform(const std::vector<Site>& window) {
  const Eigen::Index d = product_dim(window);
  Message m;
  m.op = MultiSiteOperator(window, Matrix::Identity(d, d) / static_cast<double>(d), true, true);
  m.log_norm = std::log(static_cast<double>(d));
  return m;
}

Message Message::checked(MultiSiteOperator op, double log_norm) {
  if (std::abs(op.trace() - Complex(1, 0)) > 1e-10)
    throw NormalizationError("message operator must have unit trace");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw ContractError("message operator must be positive");
  Message m;
  m.op = std::move(op);
  m.log_norm = log_norm;
  return m;
}

int BpConfig::effective_max_iter() const {
  if (max_iter > 0) return max_iter;
  return std::max(500, static_cast<int>(std::ceil(20.0 * beta)));
}

void BpConfig::validate() const {
  if (l < 2) throw ConfigError("window size l must be at least 2");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
}

Message message_update(const Message& m_prev, const MultiSiteOperator& edge_term,
                       const BpConfig& config, SlideDirection direction) {
  config.validate();
  const auto& window = m_prev.window();

  // The edge must extend the window by exactly one new site.
  int shared = 0, fresh = 0;
  for (const Site& s : edge_term.support()) {
    if (m_prev.op.has_site(s.index)) ++shared;
    else ++fresh;
  }
  if (shared != 1 || fresh != 1)
    throw SupportError("edge term must connect the window to one new site");

  const std::vector<Site> joined = support_union(window, edge_term.support());
  MultiSiteOperator exponent = embed(herm_log(m_prev.op), joined);
  exponent += embed(Complex(-config.beta, 0.0) * edge_term, joined);

  double mu = 0.0;
  MultiSiteOperator grown = herm_exp_shifted(exponent, mu);

  const int excess = static_cast<int>(joined.size()) - config.l;
  MultiSiteOperator traced = grown;
  if (excess > 0) {
    std::vector<int> cut;
    if (direction == SlideDirection::Rightward) {
      for (int k = 0; k < excess; ++k) cut.push_back(joined[k].index);
    } else {
      for (int k = 0; k < excess; ++k) cut.push_back(joined[joined.size() - 1 - k].index);
    }
    traced = partial_trace(grown, cut, TraceMode::Unnormalized);
  }

  const double tr = traced.trace().real();
  if (!(tr > 0.0)) throw SingularityError("message lost positivity during update");
  traced *= Complex(1.0 / tr, 0.0);

  Message out;
  out.op = std::move(traced);
  out.log_norm = m_prev.log_norm + mu + std::log(tr);
  return out;
}

namespace {

std::vector<Site> window_sites(int first, int count, int dim) {
  std::vector<Site> w;
  for (int i = 0; i < count; ++i) w.push_back({first + i, dim});
  return w;
}

const Edge& single_template(const InteractionGraph& g) {
  if (g.geometry != Geometry::InfiniteChain || g.edges.size() != 1)
    throw ConfigError("expected an infinite chain with a single edge template");
  return g.edges.front();
}

}  // namespace

FixedPointResult fixed_point(const InteractionGraph& infinite_chain, const BpConfig& config,
                             const Message* warm_start) {
  config.validate();
  const Edge& tmpl = single_template(infinite_chain);
  const int dim = tmpl.term.support()[0].dim;
  if (tmpl.term.support()[1].dim != dim)
    throw ConfigError("translation invariance needs equal site dimensions");

  const std::vector<Site> window = window_sites(0, config.l, dim);
  Message m = warm_start ? *warm_start : Message::uniform(window);
  if (m.window() != window) throw SupportError("warm-start message has the wrong window");
  m.log_norm = 0.0;

  // Template edge positioned at the leading bond (l-1, l).
  const MultiSiteOperator lead_edge = relabel(tmpl.term, {config.l - 1, config.l});
  std::vector<int> canonical(config.l);
  for (int i = 0; i < config.l; ++i) canonical[i] = i;

  FixedPointResult out;
  const int cap = config.effective_max_iter();
  for (int it = 1; it <= cap; ++it) {
    Message next = message_update(m, lead_edge, config);
    next.op = relabel(next.op, canonical);
    next.log_norm = 0.0;
    const double dist = trace_distance(next.op, m.op);
    m = std::move(next);
    out.iterations = it;
    if (dist <= config.tol) {
      out.converged = true;
      break;
    }
  }
  out.message = std::move(m);
  return out;
}

MultiSiteOperator belief(const Message& m_left, const Message& m_right,
                         const std::vector<MultiSiteOperator>& window_terms, double beta) {
  // Windows must overlap so the union is one contiguous region.
  bool overlap = false;
  for (const Site& s : m_right.window()) overlap |= m_left.op.has_site(s.index);
  if (!overlap) throw SupportError("belief windows do not overlap");

  std::vector<Site> joined = support_union(m_left.window(), m_right.window());
  for (const auto& t : window_terms) joined = support_union(joined, t.support());

  MultiSiteOperator exponent = embed(herm_log(m_left.op), joined);
  exponent += embed(herm_log(m_right.op), joined);
  for (const auto& t : window_terms) exponent += embed(Complex(-beta, 0.0) * t, joined);

  double mu = 0.0;
  MultiSiteOperator b = herm_exp_shifted(exponent, mu);
  const double tr = b.trace().real();
  if (!(tr > 0.0)) throw SingularityError("belief lost positivity");
  b *= Complex(1.0 / tr, 0.0);
  return b;
}

std::map<std::string, double> chain_observables(const MultiSiteOperator& belief_op,
                                                const InteractionGraph& graph) {
  if (std::abs(belief_op.trace() - Complex(1, 0)) > 1e-10)
    throw NormalizationError("observables need a trace-1 belief");
  const auto& sup = belief_op.support();
  if (sup.size() < 2) throw SupportError("belief window too small for bond observables");
  const int mid = (static_cast<int>(sup.size()) - 1) / 2;
  const int a = sup[mid].index;
  const int b = sup[mid + 1].index;

  MultiSiteOperator term = graph.geometry == Geometry::InfiniteChain
                               ? relabel(single_template(graph).term, {a, b})
                               : graph.edge_between(a, b).term;

  auto expect = [&belief_op](const MultiSiteOperator& op) {
    return (belief_op.matrix() * embed(op, belief_op.support()).matrix()).trace().real();
  };

  std::map<std::string, double> obs;
  obs["energy"] = expect(term);
  obs["sigma_z"] = expect(MultiSiteOperator({{a, 2}}, pauli_z(), true));
  obs["sigma_x"] = expect(MultiSiteOperator({{a, 2}}, pauli_x(), true));
  Matrix zz(4, 4);
  zz.setZero();
  zz.diagonal() << 1, -1, -1, 1;
  obs["sigma_z_sigma_z"] = expect(MultiSiteOperator({{a, 2}, {b, 2}}, zz, true));
  return obs;
}

MultiSiteOperator effective_potential(const Message& m, const InteractionGraph& graph,
                                      const BpConfig& config) {
  if (std::abs(m.op.trace() - Complex(1, 0)) > 1e-10)
    throw NormalizationError("effective potential needs a normalized message");
  MultiSiteOperator h_eff = Complex(-1.0 / config.beta, 0.0) * herm_log(m.op);

  MultiSiteOperator bare = MultiSiteOperator::zero(m.window());
  const auto& sup = m.window();
  for (size_t i = 0; i + 1 < sup.size(); ++i) {
    const int a = sup[i].index, b = sup[i + 1].index;
    if (graph.geometry == Geometry::InfiniteChain) {
      bare += embed(relabel(single_template(graph).term, {a, b}), sup);
    } else {
      bare += embed(graph.edge_between(a, b).term, sup);
    }
  }
  return (h_eff - bare).traceless();
}

double error_estimate(const CumulantSeries& cs, double beta, const MultiSiteOperator& belief_op) {
  if (cs.order() < 2) throw ArityError("error estimate needs at least two cumulants");

  auto expectation_size = [&](int j) {  // 1-based cumulant index
    const MultiSiteOperator& v = cs.cumulants[j - 1];
    const double x =
        std::abs((belief_op.matrix() * embed(v, belief_op.support()).matrix()).trace().real());
    return x < 1e-300 ? cs.norms[j - 1] : x;
  };

  const int l = cs.order();
  const double x_l = expectation_size(l);
  const double x_lm1 = expectation_size(l - 1);
  if (x_l < 1e-300) return 0.0;
  if (x_lm1 < 1e-300) return std::numeric_limits<double>::infinity();
  return beta * x_l * (x_l / x_lm1);
}

BpResult run_infinite_chain(const InteractionGraph& graph, const BpConfig& config,
                            InfiniteChainWarmStart* warm, CumulantSeries* cs_out) {
  config.validate();
  const Edge& tmpl = single_template(graph);
  const int l = config.l;

  FixedPointResult right = fixed_point(
      graph, config, (warm && warm->rightward) ? &*warm->rightward : nullptr);

  // The leftward fixed point is the spatial mirror of the fixed point of the
  // reflected template.
  InteractionGraph mirrored = graph;
  mirrored.edges[0].term = reverse_sites(tmpl.term, {0, 1});
  FixedPointResult mirror = fixed_point(
      mirrored, config, (warm && warm->mirrored) ? &*warm->mirrored : nullptr);

  if (warm) {
    warm->rightward = right.message;
    warm->mirrored = mirror.message;
  }

  // Position the two windows offset by one site: [0..l-1] and [1..l].
  Message m_left = right.message;
  std::vector<int> shift(l);
  for (int i = 0; i < l; ++i) shift[i] = i + 1;
  Message m_right;
  m_right.op = reverse_sites(mirror.message.op, shift);
  m_right.log_norm = 0.0;

  // Both messages carry the bonds strictly inside their own windows, so the
  // bonds of the overlap region [1..l-1] are counted twice; remove them.
  std::vector<MultiSiteOperator> corrections;
  for (int j = 1; j + 1 <= l - 1; ++j)
    corrections.push_back(Complex(-1.0, 0.0) * relabel(tmpl.term, {j, j + 1}));

  BpResult out;
  out.belief = belief(m_left, m_right, corrections, config.beta);
  out.observables = chain_observables(out.belief, graph);
  out.converged = right.converged && mirror.converged;
  out.iterations = std::max(right.iterations, mirror.iterations);

  CumulantSeries cs = cumulant_decompose(effective_potential(m_left, graph, config));
  out.error_estimate = error_estimate(cs, config.beta, out.belief);
  if (cs_out) *cs_out = std::move(cs);
  return out;
}

FiniteChainRun run_finite_chain(const InteractionGraph& graph, const BpConfig& config) {
  config.validate();
  if (graph.geometry == Geometry::InfiniteChain)
    throw ConfigError("finite sweep needs a finite chain");
  const int n = static_cast<int>(graph.sites.size());
  if (n < 2) throw SizeError("chain too short");

  FiniteChainRun run;
  run.rightward.reserve(n - 1);
  {
    Message m = Message::uniform({graph.site(0)});
    for (int i = 0; i + 1 < n; ++i) {
      m = message_update(m, graph.edge_between(i, i + 1).term, config,
                         SlideDirection::Rightward);
      run.rightward.push_back(m);
    }
  }
  run.log_z = run.rightward.back().log_norm;

  run.leftward.assign(n, Message{});
  {
    Message m = Message::uniform({graph.site(n - 1)});
    run.leftward[n - 1] = m;  // nothing lies beyond the last site
    for (int j = n - 2; j >= 0; --j) {
      m = message_update(m, graph.edge_between(j, j + 1).term, config, SlideDirection::Leftward);
      run.leftward[j] = m;
    }
  }
  return run;
}

MultiSiteOperator finite_chain_belief(const FiniteChainRun& run, const InteractionGraph& graph,
                                      int bond, const BpConfig& config) {
  const int n = static_cast<int>(graph.sites.size());
  if (bond < 0 || bond + 1 >= n) throw SupportError("bond index out of range");

  // Rightward message whose window ends at e, keeping the bond centered.
  const int e = std::min(n - 1, bond + 1 + (config.l - 1) / 2);
  const Message& m_left = run.rightward[e - 1];
  const int w_start = m_left.window().front().index;
  const int s = w_start + 1;
  const Message& m_right = run.leftward[s];

  std::vector<MultiSiteOperator> corrections;
  for (int j = s; j <= e - 1; ++j)
    corrections.push_back(Complex(-1.0, 0.0) * graph.edge_between(j, j + 1).term);

  return belief(m_left, m_right, corrections, config.beta);
}

double finite_chain_energy(const FiniteChainRun& run, const InteractionGraph& graph,
                           const BpConfig& config) {
  double acc = 0.0;
  for (size_t b = 0; b + 1 < graph.sites.size(); ++b) {
    MultiSiteOperator bel = finite_chain_belief(run, graph, static_cast<int>(b), config);
    const auto& term = graph.edge_between(static_cast<int>(b), static_cast<int>(b) + 1).term;
    acc += (bel.matrix() * embed(term, bel.support()).matrix()).trace().real();
  }
  return acc;
}

}  // namespace qbp
