#include <algorithm>
#include <cmath>
#include <limits>

#include "symtherm/error.hpp"
#include "symtherm/thermo.hpp"

namespace symtherm {

namespace {

void check_pair(const Potential& phi, const Potential& psi, const char* what) {
  if (!(phi.sft() == psi.sft())) fail(ErrorKind::kValidation, std::string(what) + ": potentials live on different shifts");
  if (!(psi.min_value() > 0.0)) fail(ErrorKind::kValidation, std::string(what) + ": psi must be strictly positive");
}

struct Root {
  double beta = 0.0;
  double psi_mean = 0.0;  // int psi dmu at the root
  double phi_mean = 0.0;
};

// P(-q phi - b psi) is strictly decreasing in b with slope -int psi dmu, so
// Newton steps from inside a sign bracket converge quickly; bisection keeps
// the iterate inside the bracket.
Root solve_beta(double q, const Potential& phi, const Potential& psi, const ThermoTolerances& tol) {
  const double p0 = pressure(combine(-q, phi, 0.0, psi), tol);
  const double lo0 = p0 / psi.max_value();
  const double hi0 = p0 / psi.min_value();
  double lo = std::min(lo0, hi0), hi = std::max(lo0, hi0);
  // Widen by a hair so both ends have the right sign after roundoff.
  const double pad = 1e-12 * (1.0 + std::abs(hi));
  lo -= pad;
  hi += pad;
  double b = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const GibbsChain c = gibbs_chain(combine(-q, phi, -b, psi), tol);
    const double p = c.pressure();
    const double ipsi = integrate(c, psi);
    if (std::abs(p) <= 0.01 * tol.beta_residual || hi - lo <= 1e-15 * (1.0 + std::abs(b))) {
      if (std::abs(p) > tol.beta_residual) break;
      return {b, ipsi, integrate(c, phi)};
    }
    if (p > 0.0) lo = b; else hi = b;
    double next = b + p / ipsi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == b) {
      if (std::abs(p) <= tol.beta_residual) return {b, ipsi, integrate(c, phi)};
      break;
    }
    b = next;
  }
  throw NumericalError("beta: root of the pressure equation not reached", lo, hi);
}

}  // namespace

double beta(double q, const Potential& phi, const Potential& psi, const ThermoTolerances& tol) {
  check_pair(phi, psi, "beta");
  return solve_beta(q, phi, psi, tol).beta;
}

BetaPoint beta_point(double q, const Potential& phi, const Potential& psi, const ThermoTolerances& tol) {
  check_pair(phi, psi, "beta");
  const Root r = solve_beta(q, phi, psi, tol);
  return {q, r.beta, -r.phi_mean / r.psi_mean};
}

double beta_prime(double q, const Potential& phi, const Potential& psi, const ThermoTolerances& tol) {
  return beta_point(q, phi, psi, tol).beta_prime;
}

double full_dim_alpha(const Potential& phi, const Potential& psi, const ThermoTolerances& tol) {
  return beta_prime(0.0, phi, psi, tol);
}

SpectrumPoint spectrum_at(double alpha, const Potential& phi, const Potential& psi, const ThermoTolerances& tol) {
  check_pair(phi, psi, "spectrum_at");
  return spectrum_at(alpha, phi, psi, alpha_range(phi, psi, tol), tol);
}

SpectrumPoint spectrum_at(double alpha, const Potential& phi, const Potential& psi, const AlphaRange& range,
                          const ThermoTolerances& tol) {
  check_pair(phi, psi, "spectrum_at");
  const double width = range.upper - range.lower;
  const double edge = 1e-10 * (1.0 + std::abs(range.lower) + std::abs(range.upper));
  if (!(alpha >= range.lower - edge && alpha <= range.upper + edge)) {
    fail(ErrorKind::kEmptyLevelSet, "spectrum_at: alpha = " + std::to_string(alpha) + " lies outside [" +
                                        std::to_string(range.lower) + ", " + std::to_string(range.upper) +
                                        "], the level set is empty");
  }
  SpectrumPoint out;
  out.alpha = alpha;
  if (width <= edge) {
    const BetaPoint bp = beta_point(0.0, phi, psi, tol);
    out.q = 0.0;
    out.beta = bp.beta;
    out.beta_prime = bp.beta_prime;
    out.value = bp.beta;
    out.region = SpectrumRegion::kDegenerate;
    return out;
  }

  const bool at_lower = std::abs(alpha - range.lower) <= edge;
  const bool at_upper = std::abs(alpha - range.upper) <= edge;
  if (at_lower || at_upper) {
    // beta' increases to alpha+ as q -> +inf and decreases to alpha- as q -> -inf.
    const double sign = at_upper ? 1.0 : -1.0;
    const double qf = sign * tol.endpoint_q;
    const BetaPoint far = beta_point(qf, phi, psi, tol);
    const BetaPoint mid = beta_point(0.5 * qf, phi, psi, tol);
    out.q = qf;
    out.beta = far.beta;
    out.beta_prime = far.beta_prime;
    out.value = far.beta - qf * alpha;
    out.tolerance = std::abs((mid.beta - 0.5 * qf * alpha) - out.value);
    out.region = at_upper ? SpectrumRegion::kUpperEndpoint : SpectrumRegion::kLowerEndpoint;
    return out;
  }

  // beta' is increasing; bracket alpha by doubling steps away from q = 0.
  auto g = [&](double q) { return beta_point(q, phi, psi, tol); };
  BetaPoint a = g(0.0);
  if (std::abs(a.beta_prime - alpha) <= tol.alpha_match) {
    out.q = 0.0;
    out.beta = a.beta;
    out.beta_prime = a.beta_prime;
    out.value = a.beta;
    return out;
  }
  const double dir = a.beta_prime < alpha ? 1.0 : -1.0;
  BetaPoint b = a;
  double step = 1.0;
  while (true) {
    b = g(dir * step);
    if ((b.beta_prime - alpha) * dir >= 0.0) break;
    a = b;
    step *= 2.0;
    if (step > 512.0) {
      throw NumericalError("spectrum_at: could not bracket q_alpha", std::min(a.q, dir * step),
                           std::max(a.q, dir * step));
    }
  }
  // Illinois false position with bisection safeguard on beta'(q) - alpha.
  BetaPoint lo = a.q < b.q ? a : b;
  BetaPoint hi = a.q < b.q ? b : a;
  double flo = lo.beta_prime - alpha, fhi = hi.beta_prime - alpha;
  int side = 0;
  BetaPoint best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  for (int it = 0; it < 300; ++it) {
    if (std::abs(best.beta_prime - alpha) <= tol.alpha_match) break;
    double q = (lo.q * fhi - hi.q * flo) / (fhi - flo);
    if (!(q > lo.q && q < hi.q) || it % 8 == 7) q = 0.5 * (lo.q + hi.q);
    const BetaPoint c = g(q);
    const double fc = c.beta_prime - alpha;
    if (std::abs(fc) < std::abs(best.beta_prime - alpha)) best = c;
    if (fc < 0.0) {
      lo = c;
      flo = fc;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = c;
      fhi = fc;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
    if (hi.q - lo.q <= 1e-15 * (1.0 + std::abs(q))) break;
  }
  if (!(std::abs(best.beta_prime - alpha) <= tol.alpha_match)) {
    throw NumericalError("spectrum_at: q_alpha not located to tolerance", lo.q, hi.q);
  }
  out.q = best.q;
  out.beta = best.beta;
  out.beta_prime = best.beta_prime;
  out.value = best.beta - best.q * alpha;
  return out;
}

}  // namespace symtherm
