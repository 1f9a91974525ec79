#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "symtherm/massdist.hpp"
#include "symtherm/potential.hpp"
#include "symtherm/sft.hpp"
#include "symtherm/thermo.hpp"
#include "symtherm/wordsets.hpp"

namespace symtherm {

struct AffineMap {
  double rate = 0.5;    // 0 < rate < 1
  double offset = 0.0;  // x -> rate * x + offset
};

struct Interval {
  double left = 0.0;
  double right = 1.0;
  double length() const { return right - left; }
};

/// Orientation-preserving affine contractions of [u, v], one per symbol,
/// with pairwise disjoint image interiors.
class AffineIfs {
 public:
  AffineIfs(const Sft& sft, Interval interval, std::vector<AffineMap> maps);

  const Sft& sft() const noexcept { return sft_; }
  const Interval& interval() const noexcept { return interval_; }
  const std::vector<AffineMap>& maps() const noexcept { return maps_; }
  /// Symbols from left to right by image position.
  const std::vector<Symbol>& order() const noexcept { return order_; }

  Interval cylinder_interval(WordView word) const;
  /// Composed map g_{w1} o ... o g_{wn} as (rate, offset).
  AffineMap compose(WordView word) const;

 private:
  Sft sft_;
  Interval interval_;
  std::vector<AffineMap> maps_;
  std::vector<Symbol> order_;
};

/// pi(prefix period^infinity), computed from the fixed point of the period map.
double coding_point(const AffineIfs& ifs, WordView prefix, WordView period);
/// Midpoint of I_w; within |I_w| / 2 of every coding point in [w].
double coding_point(const AffineIfs& ifs, WordView prefix);

/// psi(a) = -log r_a.
Potential geometric_potential(const AffineIfs& ifs);

/// Distribution function of the pushforward of the equilibrium state of phi
/// (shifted to pressure zero) under the coding map.
class CdfModel {
 public:
  CdfModel(AffineIfs ifs, const Potential& phi, const ThermoTolerances& tol = kDefaultTolerances);

  const AffineIfs& ifs() const noexcept { return ifs_; }
  const Potential& phi() const noexcept { return chain_.potential(); }
  const Potential& psi() const noexcept { return psi_; }
  const GibbsChain& chain() const noexcept { return chain_; }
  double pressure_shift() const noexcept { return shift_; }
  double gibbs_constant(int max_length = 12) const;

  /// mu([w a]) given mu([w]); w may be empty.
  double child_mass(WordView word, double word_mass, Symbol next) const;

 private:
  AffineIfs ifs_;
  double shift_ = 0.0;  // declared before chain_, which sets it
  GibbsChain chain_;
  Potential psi_;
};

/// C(x) within eps.
double cdf_eval(const CdfModel& m, double x, double eps);
/// mu pi^{-1}((min, max]) with relative accuracy rel_eps.
double interval_mass(const CdfModel& m, double x, double y, double rel_eps = 1e-9);
std::vector<std::pair<double, double>> cdf_curve(const CdfModel& m, int resolution, double eps);

struct ProbeRecord {
  double scale = 0.0;
  int side = 1;  // +1 right of x, -1 left of x
  double delta = 0.0;  // |C(y) - C(x)|
  double ratio = 0.0;  // delta / scale^alpha
};

struct HolderProbe {
  double x = 0.0;
  double alpha = 0.0;
  std::vector<ProbeRecord> records;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double exponent = 0.0;  // least-squares slope of log delta against log scale
  std::optional<int> window_constant;
};

/// Dyadic scales (v-u) 2^-1 ... 2^-depth on both sides of x.
HolderProbe holder_probe(const CdfModel& m, double x, double alpha, int depth, int min_depth = 1);

bool moderate_check(const CdfModel& m, double x, double alpha, double C, int depth_lo, int depth_hi);

struct Alpha0Report {
  double alpha0 = 0.0;
  double spectrum_value = 0.0;
  double beta0 = 0.0;
};
Alpha0Report alpha0(const CdfModel& m);

struct CertifiedPoint {
  double x = 0.0;
  double alpha = 0.0;
  double s = 0.0;
  Word prefix;
  std::vector<Word> F;
  Word separating;
  int l = 0;
  int window_constant = 0;  // l |F| + |Sigma|
  bool n_ok = false;
  MassCertificate mass;
  double max_abs_sum = 0.0;  // of phi + alpha psi along the prefix
};

CertifiedPoint certified_point(const CdfModel& m, double alpha, int l, int depth, std::uint64_t seed = 1,
                               const MassOptions& options = {});

}  // namespace symtherm
