#pragma once

#include <map>
#include <optional>
#include <string>

#include "qbp/cumulants.hpp"
#include "qbp/models.hpp"
#include "qbp/operator.hpp"

namespace qbp {

/// BP message: positive trace-1 operator on a sliding window, with the
/// stripped normalization accumulated separately as a log. The operator value
/// the message stands for is op * exp(log_norm); keeping op normalized is what
/// lets sweeps run to beta ~ 20 without under- or overflow.
struct Message {
  MultiSiteOperator op;
  double log_norm = 0.0;

  const std::vector<Site>& window() const { return op.support(); }

  /// Maximally mixed starting message on the given sites.
  static Message uniform(const std::vector<Site>& window);
  /// Validating constructor for externally supplied messages.
  static Message checked(MultiSiteOperator op, double log_norm);
};

struct BpConfig {
  int l = 4;            // window size in sites
  double beta = 1.0;    // inverse temperature
  double tol = 1e-12;   // fixed-point tolerance in trace distance
  int max_iter = 0;     // 0 = max(500, ceil(20 * beta))

  int effective_max_iter() const;
  void validate() const;
};

enum class SlideDirection { Rightward, Leftward };

/// One message-passing step: odot-combine e^{-beta h} with the message,
/// then trace the window back down to l sites from the far end
/// (the leftmost site for a rightward sweep). While the union has at most
/// l sites nothing is traced, which is how finite-chain sweeps start up.
Message message_update(const Message& m_prev, const MultiSiteOperator& edge_term,
                       const BpConfig& config,
                       SlideDirection direction = SlideDirection::Rightward);

struct FixedPointResult {
  Message message;
  bool converged = false;
  int iterations = 0;
};

/// Iterate the translation-invariant update from the uniform (or warm-start)
/// message until the trace distance between successive messages drops below
/// tol. The result window is canonically labeled 0..l-1.
FixedPointResult fixed_point(const InteractionGraph& infinite_chain, const BpConfig& config,
                             const Message* warm_start = nullptr);

/// Two-sided belief b ~ m_left (.) e^{-beta sum(window_terms)} (.) m_right on
/// the union window, normalized to trace one. window_terms complete or correct
/// the bond coverage of the union; terms with negative sign remove bonds both
/// messages already carry.
MultiSiteOperator belief(const Message& m_left, const Message& m_right,
                         const std::vector<MultiSiteOperator>& window_terms, double beta);

/// Energy density, magnetizations and nearest-neighbor correlator read off at
/// the central bond of a belief window.
std::map<std::string, double> chain_observables(const MultiSiteOperator& belief_op,
                                                const InteractionGraph& graph);

/// Effective thermal potential of a message: the traceless part of
/// -(1/beta) Log m minus the bare bonds inside the window.
MultiSiteOperator effective_potential(const Message& m, const InteractionGraph& graph,
                                      const BpConfig& config);

/// Cumulant-ratio error estimate beta <V^l> (<V^l> / <V^{l-1}>), expectations
/// taken in the belief with operator-norm fallback on underflow. Returns 0
/// when the last cumulant expectation vanishes (commuting models) and +inf
/// when only the denominator underflows.
double error_estimate(const CumulantSeries& cs, double beta, const MultiSiteOperator& belief_op);

struct BpResult {
  MultiSiteOperator belief;
  std::map<std::string, double> observables;
  double error_estimate = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Warm-start state for temperature sweeps on infinite chains.
struct InfiniteChainWarmStart {
  std::optional<Message> rightward;
  std::optional<Message> mirrored;
};

/// Full BP pass on an infinite chain: both fixed points, the two-sided belief,
/// observables at the central bond, and the cumulant error estimate.
/// cs_out, when given, receives the effective-potential cumulant series.
BpResult run_infinite_chain(const InteractionGraph& graph, const BpConfig& config,
                            InfiniteChainWarmStart* warm = nullptr,
                            CumulantSeries* cs_out = nullptr);

/// Finite-chain sweep: all rightward and leftward messages plus log Z.
struct FiniteChainRun {
  double log_z = 0.0;
  std::vector<Message> rightward;  // rightward[i] covers a window ending at i+1
  std::vector<Message> leftward;   // leftward[j] covers a window starting at j
};

FiniteChainRun run_finite_chain(const InteractionGraph& graph, const BpConfig& config);

/// Two-sided belief around bond (i, i+1) of a finite chain, built from the
/// stored sweep messages with double-counted bonds removed.
MultiSiteOperator finite_chain_belief(const FiniteChainRun& run, const InteractionGraph& graph,
                                      int bond, const BpConfig& config);

/// Total energy sum_bonds Tr(b_bond h_bond) from per-bond beliefs.
double finite_chain_energy(const FiniteChainRun& run, const InteractionGraph& graph,
                           const BpConfig& config);

}  // namespace qbp
