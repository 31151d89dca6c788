#pragma once

#include <vector>

#include "gibbs1d/transform.hpp"

namespace gibbs1d {

/// The three vacuum-boundary conditionals behind the interval potential of the
/// transformed measure: endpoint marginals and the joint, all conditioned on
/// xi strictly inside [i,j] and the vacuum symbol (index 0) everywhere else in
/// the window [i-n, j+n], with an all-vacuum boundary beyond.
struct NuPair {
  double p_i = 0.0;   ///< nu(xi_i | interior, vacuum outside)
  double p_j = 0.0;   ///< nu(xi_j | interior, vacuum outside)
  double p_ij = 0.0;  ///< nu(xi_i, xi_j | interior, vacuum outside)
};

NuPair nu_conditional_pair(const Potential& pot, const Channel& ch, Interval support,
                           const SpinConfig& xi, int n, const TruncationSpec& trunc,
                           uint64_t cap = IndexSpace::kDefaultCap);

/// Interval potential of the transformed measure at one interval and one
/// target configuration, with a finite-window convergence diagnostic.
struct KozlovEstimate {
  Interval support{0, 0};
  SpinConfig xi;              ///< target symbols on the support
  int n = 0;                  ///< window radius used for `value`
  double value = 0.0;         ///< U(support, xi) at radius n
  double window_delta = 0.0;  ///< |U at n - U at ceil(n/2)|
};

/// U([i,j], xi) = log[ p_i * p_j / p_ij ] for diameter >= 1; the singleton
/// convention U({i}, xi_i) = -log nu(xi_i | all-vacuum) for diameter 0.
KozlovEstimate kozlov_U(const Potential& pot, const Channel& ch, Interval support,
                        const SpinConfig& xi, int n, const TruncationSpec& trunc,
                        uint64_t cap = IndexSpace::kDefaultCap);

/// One diameter of a decay scan: the sup of |U| over every target
/// configuration on [0, d], plus diagnostics at the maximizing configuration.
struct KozlovPoint {
  int diameter = 1;
  double sup_abs_u = 0.0;
  double u_at_argmax = 0.0;
  SpinConfig argmax_xi;
  double window_delta = 0.0;  ///< at the argmax configuration
};

struct KozlovScan {
  int n = 0;
  std::vector<KozlovPoint> points;
};

/// sup_xi |U([0,d], xi)| for d = 1..max_diameter, sharing the two window
/// tables per diameter across all configurations.
KozlovScan decay_scan(const Potential& pot, const Channel& ch, int max_diameter, int n,
                      const TruncationSpec& trunc, uint64_t cap = IndexSpace::kDefaultCap);

enum class DecayModel { exponential, power_law };

/// Least-squares decay fit of a scan: log sup vs d (exponential) or vs log d
/// (power law). `rate` is the decay rate lambda resp. the exponent p, both
/// positive for decaying data.
struct DecayFit {
  DecayModel model = DecayModel::exponential;
  double rate = 0.0;
  double log_c = 0.0;     ///< intercept
  double residual = 0.0;  ///< rms of log-scale residuals
  int points_used = 0;
  int d_min = 0;
  int d_max = 0;
};

/// Fit gate: diameters >= 2, sup > 1e-13, window_delta below 10% of sup.
/// Fewer than 4 surviving points is a fit-degenerate error.
DecayFit fit_decay(const KozlovScan& scan, DecayModel model);

/// phi(n): sup over probe target configurations on [i-n, i+n] and over pairs
/// of boundary tails of the change in nu(xi_i | rest of the window). The
/// probe set is the two constant and the two alternating extreme-symbol
/// configurations, so the result is a lower bound on the true sup.
struct ContinuityRate {
  std::vector<int> n;
  std::vector<double> phi;
};

ContinuityRate continuity_rate(const Potential& pot, const Channel& ch, int i,
                               const std::vector<int>& n_values,
                               const std::vector<SpinConfig>& tails, const TruncationSpec& trunc,
                               uint64_t cap = IndexSpace::kDefaultCap);

}  // namespace gibbs1d
