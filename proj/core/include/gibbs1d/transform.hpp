#pragma once

#include <variant>
#include <vector>

#include "gibbs1d/gibbs.hpp"

namespace gibbs1d {

/// Site-homogeneous stochastic kernel P(target | source), one row per source
/// symbol. Rows must sum to 1 within 1e-12.
class SiteKernel {
 public:
  SiteKernel(Alphabet source, Alphabet target, std::vector<std::vector<double>> rows);

  const Alphabet& source() const { return source_; }
  const Alphabet& target() const { return target_; }
  double prob(Sym target_sym, Sym source_sym) const {
    return rows_[static_cast<size_t>(source_sym)][static_cast<size_t>(target_sym)];
  }
  bool strictly_positive() const { return strictly_positive_; }
  /// sup over entries of -log P; finite only for strictly positive kernels.
  double log_bound() const;

 private:
  Alphabet source_, target_;
  std::vector<std::vector<double>> rows_;
  bool strictly_positive_ = false;
  double min_entry_ = 0.0;
};

/// Deterministic single-site map onto the target alphabet (surjective).
class DetMap {
 public:
  DetMap(Alphabet source, Alphabet target, std::vector<Sym> image);

  const Alphabet& source() const { return source_; }
  const Alphabet& target() const { return target_; }
  Sym apply(Sym source_sym) const { return image_[static_cast<size_t>(source_sym)]; }
  const std::vector<Sym>& preimages(Sym target_sym) const {
    return preimages_[static_cast<size_t>(target_sym)];
  }
  SiteKernel as_kernel() const;

 private:
  Alphabet source_, target_;
  std::vector<Sym> image_;
  std::vector<std::vector<Sym>> preimages_;
};

using Channel = std::variant<SiteKernel, DetMap>;

const Alphabet& channel_source(const Channel& ch);
const Alphabet& channel_target(const Channel& ch);
SiteKernel channel_as_kernel(const Channel& ch);

/// Exact law of the transformed configuration: apply the single-site channel
/// to every site of the finite-volume measure. This is the reference
/// ("brute-force") path every other representation is checked against.
ProbTable pushforward_exact(const FiniteGibbs& g, const Channel& ch);

/// All transformed single-site conditionals at the origin on [-n, n]: entry j
/// is nu(xi_0 | xi elsewhere) for the j-th target configuration (canonical
/// order). `supported[j]` is 0 where the conditioning event has no mass (the
/// value is NaN there).
struct ConditionalScan {
  Interval window{0, 0};
  int q_target = 2;
  std::vector<double> value;
  std::vector<uint8_t> supported;
};

ConditionalScan bruteforce_conditional_scan(const Potential& pot, const Channel& ch, int n,
                                            const SpinConfig& zeta, const TruncationSpec& trunc,
                                            uint64_t cap = IndexSpace::kDefaultCap);

/// nu(xi_0 | xi on [-n,n] minus origin) via the summed-out exact pushforward.
/// xi covers [-n,n] (larger windows are restricted; only [-n,n] is read).
double transformed_conditional_bruteforce(const Potential& pot, const Channel& ch, int n,
                                          const SpinConfig& xi, const SpinConfig& zeta,
                                          const TruncationSpec& trunc,
                                          uint64_t cap = IndexSpace::kDefaultCap);

/// Same conditional through the first-layer representation for strictly
/// positive kernels: absorb -log P(xi_i | .) into the singleton potential,
/// then return the reciprocal of the modified-measure expectation of
/// 1 / P(xi_0 | sigma_0).
double transformed_conditional_firstlayer_stochastic(const Potential& pot, const SiteKernel& k,
                                                     int n, const SpinConfig& xi,
                                                     const SpinConfig& zeta,
                                                     const TruncationSpec& trunc,
                                                     uint64_t cap = IndexSpace::kDefaultCap);

/// The potential with -log P(xi_i | .) added on the singletons of xi's window.
Potential modified_potential(const Potential& pot, const SiteKernel& k, const SpinConfig& xi);

/// Restricted first-layer measure on the volume minus the origin: weights
/// exp(-H) over the configurations compatible with the image constraint eta,
/// where H sums the origin-free interactions only.
struct ConstrainedFirstLayer {
  Interval volume{0, 0};                   ///< contains the origin
  std::vector<std::vector<Sym>> allowed;   ///< per volume site; origin slot is a placeholder
  std::vector<double> probs;               ///< over the product of allowed lists
  double log_n = 0.0;

  /// Decode a product-space index to one symbol per volume site (origin slot
  /// carries the placeholder).
  std::vector<Sym> decode(uint64_t index) const;
};

ConstrainedFirstLayer constrained_first_layer(const Potential& pot, const DetMap& map,
                                              Interval volume, const SpinConfig& zeta,
                                              const SpinConfig& eta, const TruncationSpec& trunc,
                                              uint64_t cap = IndexSpace::kDefaultCap);

/// psi = sum over origin symbols of exp(-h0) * [map(s0) = eta0],
/// phi = the same sum without the constraint; h0 sums the interactions
/// containing the origin. sigma supplies the volume sites away from the
/// origin; zeta supplies everything else.
struct PsiPhi {
  double psi = 0.0;
  double phi = 0.0;
};

PsiPhi psi_phi_zero(const Potential& pot, const DetMap& map, Interval volume,
                    const SpinConfig& sigma, const SpinConfig& zeta, Sym eta0,
                    const TruncationSpec& trunc);

/// nu(eta_0 | eta on [-n,n] minus origin) for deterministic channels:
/// ratio of the psi and phi expectations under the restricted first-layer
/// measure. Agrees with the brute-force path.
double transformed_conditional_firstlayer_deterministic(const Potential& pot, const DetMap& map,
                                                        int n, const SpinConfig& eta,
                                                        const SpinConfig& zeta,
                                                        const TruncationSpec& trunc,
                                                        uint64_t cap = IndexSpace::kDefaultCap);

/// Max defect of the two-step consistency identity of the eta-dependent
/// specification over nested volumes (both containing the origin).
double eta_consistency_check(const Potential& pot, const DetMap& map, Interval inner,
                             Interval outer, const SpinConfig& zeta, const SpinConfig& eta,
                             const TruncationSpec& trunc);

/// Cauchy-difference estimate of how local the origin sums psi/phi are:
/// sup over a probe family of |psi at radius k - psi at radius 2k| (and phi).
/// The probe family enumerates a core window and closes it with constant
/// symbols; the result is a documented lower bound on the true sup norm.
struct LocalApproxError {
  double psi_err = 0.0;
  double phi_err = 0.0;
};

LocalApproxError local_approximation_error(const Potential& pot, const DetMap& map, int k,
                                           const TruncationSpec& trunc);

}  // namespace gibbs1d
