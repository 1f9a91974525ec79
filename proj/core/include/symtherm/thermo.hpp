#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "symtherm/potential.hpp"
#include "symtherm/sft.hpp"

namespace symtherm {

/// Solver tolerances shared by the spectral routines.
struct ThermoTolerances {
  double eigen_rel = 1e-13;     // Collatz-Wielandt bracket width relative to lambda
  double beta_residual = 1e-11; // |P(-q phi - beta psi)| at return
  double alpha_match = 1e-9;    // |beta'(q) - alpha| at return
  double cycle_ratio = 1e-10;   // alpha-range search bracket
  double endpoint_q = 40.0;     // |q| used for endpoint spectrum limits
};

inline constexpr ThermoTolerances kDefaultTolerances{};

/// Sign convention used for the dimension spectrum: b(alpha) is the Legendre
/// transform min_q [beta(q) - q alpha], which is stationary at beta'(q) = alpha.
inline constexpr std::string_view kSpectrumSignConvention = "b(alpha)=min_q[beta(q)-q*alpha]";

/// Ruelle-Perron-Frobenius data of a locally constant potential, packaged as a
/// stationary Markov chain on (d-1)-blocks (d = max(depth, 2)). The chain
/// realizes the equilibrium state of the potential.
class GibbsChain {
 public:
  const Potential& potential() const noexcept { return potential_; }
  const Sft& sft() const noexcept { return potential_.sft(); }
  const HigherBlock& blocks() const noexcept { return blocks_; }
  int states() const noexcept { return blocks_.states(); }

  double lambda() const noexcept { return lambda_; }
  double pressure() const noexcept { return log_lambda_; }
  const std::vector<double>& right_vector() const noexcept { return h_; }
  const std::vector<double>& left_vector() const noexcept { return nu_; }
  const std::vector<double>& stationary() const noexcept { return pi_; }
  double transition(Symbol from, Symbol to) const {
    return q_[static_cast<std::size_t>(from) * static_cast<std::size_t>(states()) + static_cast<std::size_t>(to)];
  }
  /// max_i |(M h)_i - lambda h_i| / (lambda max h) and the same for nu.
  double eigen_residual() const noexcept { return residual_; }
  /// Final Collatz-Wielandt bracket width relative to lambda.
  double eigen_bracket() const noexcept { return bracket_; }

  /// mu([w]) for an admissible word of the original alphabet.
  double cylinder_measure(WordView word) const;
  /// mu([w a]) / mu([w]) for non-empty admissible w.
  double conditional(WordView context, Symbol next) const;

 private:
  friend GibbsChain gibbs_chain(const Potential& f, const ThermoTolerances& tol);
  GibbsChain(Potential potential, HigherBlock blocks) : potential_(std::move(potential)), blocks_(std::move(blocks)) {}

  Potential potential_;
  HigherBlock blocks_;
  double lambda_ = 0.0;
  double log_lambda_ = 0.0;
  double residual_ = 0.0;
  double bracket_ = 0.0;
  std::vector<double> h_, nu_, pi_, q_;
};

double pressure(const Potential& f, const ThermoTolerances& tol = kDefaultTolerances);
GibbsChain gibbs_chain(const Potential& f, const ThermoTolerances& tol = kDefaultTolerances);

/// max over 1 <= |w| <= max_length of max(mu[w] e^{-S_w f}, e^{S_w f} / mu[w]).
/// The potential must have zero pressure.
double gibbs_constant_bound(const GibbsChain& chain, int max_length, const Limits& limits = {});

/// Integral of g against the chain's stationary measure.
double integrate(const GibbsChain& chain, const Potential& g);

/// Unique root beta of P(-q phi - beta psi) = 0 (psi > 0).
double beta(double q, const Potential& phi, const Potential& psi, const ThermoTolerances& tol = kDefaultTolerances);

struct BetaPoint {
  double q = 0.0;
  double beta = 0.0;
  double beta_prime = 0.0;  // -int phi dmu_q / int psi dmu_q
};
BetaPoint beta_point(double q, const Potential& phi, const Potential& psi,
                     const ThermoTolerances& tol = kDefaultTolerances);
double beta_prime(double q, const Potential& phi, const Potential& psi,
                  const ThermoTolerances& tol = kDefaultTolerances);

/// Extreme Birkhoff ratios -S_n phi / S_n psi, attained on periodic orbits.
struct AlphaRange {
  double lower = 0.0;
  double upper = 0.0;
  Word lower_cycle;  // period word of an orbit attaining the bound
  Word upper_cycle;
};
AlphaRange alpha_range(const Potential& phi, const Potential& psi, const ThermoTolerances& tol = kDefaultTolerances);

/// Largest mean sum_e f(e) / |cycle| over cycles of the block graph.
double max_cycle_mean(const Potential& f, const ThermoTolerances& tol = kDefaultTolerances);

enum class SpectrumRegion { kInterior, kLowerEndpoint, kUpperEndpoint, kDegenerate };

struct SpectrumPoint {
  double alpha = 0.0;
  double q = 0.0;           // q_alpha, or the truncation +-endpoint_q at endpoints
  double beta = 0.0;        // beta(q)
  double beta_prime = 0.0;  // beta'(q)
  double value = 0.0;       // b(alpha) = beta(q) - q alpha
  double tolerance = 0.0;   // endpoint truncation estimate; 0 for interior points
  SpectrumRegion region = SpectrumRegion::kInterior;
};

/// Dimension of the level set of Birkhoff ratio alpha. Throws an
/// kEmptyLevelSet error when alpha lies outside [alpha-, alpha+].
SpectrumPoint spectrum_at(double alpha, const Potential& phi, const Potential& psi,
                          const ThermoTolerances& tol = kDefaultTolerances);
SpectrumPoint spectrum_at(double alpha, const Potential& phi, const Potential& psi, const AlphaRange& range,
                          const ThermoTolerances& tol = kDefaultTolerances);

/// alpha0 = -int phi dmu_0 / int psi dmu_0 with mu_0 the equilibrium state of -beta(0) psi.
double full_dim_alpha(const Potential& phi, const Potential& psi, const ThermoTolerances& tol = kDefaultTolerances);

/// Sub-action on the (d-1)-block vertices: phi(e) + f(head) - f(tail) <= 0 on
/// every edge, with equality along a maximizing cycle.
struct Subaction {
  int block_length = 1;
  std::vector<Word> vertices;
  std::vector<double> values;

  double max_abs() const;
  /// Largest phi(e) + f(head) - f(tail) over edges of the block graph.
  double max_residual(const Potential& phi) const;
  double at(WordView block) const;
};

/// Requires the maximal cycle mean of phi to be zero (within 1e-9).
Subaction subaction(const Potential& phi, const ThermoTolerances& tol = kDefaultTolerances);

/// Checks phi(e) + f(head) - f(tail) <= slack for a candidate vertex table.
bool is_subaction(const Potential& phi, const Subaction& f, double slack = 1e-9);

/// sup over n >= 1 and sequences of S_n phi. +infinity when a cycle has
/// positive mean.
double birkhoff_sup(const Potential& phi, const ThermoTolerances& tol = kDefaultTolerances);

/// Length-n orbit segment drawn from the chain; deterministic per seed.
Word sample_orbit(const GibbsChain& chain, int n, std::uint64_t seed);

}  // namespace symtherm
