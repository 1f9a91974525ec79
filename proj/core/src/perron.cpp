#include "perron.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "symtherm/error.hpp"

namespace symtherm::detail {

namespace {

struct Eig {
  double lower = 0.0;
  double upper = 0.0;
  Eigen::VectorXd vec;
};

// Collatz-Wielandt bracket min_i (Ax)_i/x_i <= rho <= max_i (Ax)_i/x_i.
bool bracket(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, double& lo, double& hi) {
  const Eigen::VectorXd y = a * x;
  lo = std::numeric_limits<double>::infinity();
  hi = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) return false;
    const double r = y[i] / x[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return true;
}

Eig leading(const Eigen::MatrixXd& a, double tol) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  double lo = 0.0, hi = 0.0;
  bracket(a, x, lo, hi);
  double best_lo = lo, best_hi = hi;
  Eigen::VectorXd best = x;
  auto keep = [&](const Eigen::VectorXd& v, double l, double h) {
    if (h - l < best_hi - best_lo) {
      best_lo = l;
      best_hi = h;
      best = v;
    }
  };
  auto done = [&] { return best_hi - best_lo <= tol * best_hi; };

  // A few plain power steps to get a positive vector and a usable bracket.
  for (int it = 0; it < 60 && !done(); ++it) {
    x = a * x;
    x /= x.maxCoeff();
    if (bracket(a, x, lo, hi)) keep(x, lo, hi);
  }

  // Shifted inverse iteration. For sigma above the spectral radius the
  // resolvent of a nonnegative irreducible matrix is positive, so iterates
  // stay in the positive cone.
  for (int restart = 0; restart < 6 && !done(); ++restart) {
    const double sigma = best_hi * (1.0 + std::max(1e-9, (best_hi - best_lo) / best_hi * 1e-3));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sigma * Eigen::MatrixXd::Identity(n, n) - a);
    x = best;
    for (int it = 0; it < 40 && !done(); ++it) {
      Eigen::VectorXd y = lu.solve(x);
      const double m = y.maxCoeff();
      if (!(m > 0.0) || !std::isfinite(m)) break;
      y /= m;
      for (Eigen::Index i = 0; i < n; ++i) y[i] = std::abs(y[i]);
      x = y;
      if (bracket(a, x, lo, hi)) keep(x, lo, hi);
    }
  }

  // Fallback: long power iteration.
  x = best;
  for (int it = 0; it < 20000 && !done(); ++it) {
    x = a * x;
    x /= x.maxCoeff();
    if (bracket(a, x, lo, hi)) keep(x, lo, hi);
  }
  return {best_lo, best_hi, best};
}

}  // namespace

PerronData perron(const BlockGraph& g, const std::vector<double>& log_weights, double rel_tol, bool need_vectors) {
  const int n = g.vertices();
  double shift = -std::numeric_limits<double>::infinity();
  for (double w : log_weights) shift = std::max(shift, w);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < g.edges(); ++e) {
    m(g.tail[static_cast<std::size_t>(e)], g.head[static_cast<std::size_t>(e)]) +=
        std::exp(log_weights[static_cast<std::size_t>(e)] - shift);
  }

  // Roundoff floor of the bracket for this matrix size.
  const double floor_tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1, n);
  const double tol = std::max(rel_tol, 0.0);
  Eig r = leading(m, tol);
  const double width = (r.upper - r.lower) / r.upper;
  if (!(width <= tol) && !(width <= floor_tol)) {
    throw NumericalError("Perron eigenvalue did not converge", std::log(r.lower) + shift,
                         std::log(r.upper) + shift);
  }
  PerronData out;
  out.shift = shift;
  out.scaled_lambda = 0.5 * (r.lower + r.upper);
  out.log_lambda = std::log(out.scaled_lambda) + shift;
  out.bracket = width;
  out.right.assign(r.vec.data(), r.vec.data() + n);
  if (!need_vectors) return out;

  Eig l = leading(m.transpose(), tol);
  const double lwidth = (l.upper - l.lower) / l.upper;
  if (!(lwidth <= tol) && !(lwidth <= floor_tol)) {
    throw NumericalError("left Perron vector did not converge", std::log(l.lower) + shift,
                         std::log(l.upper) + shift);
  }
  out.bracket = std::max(width, lwidth);
  out.left.assign(l.vec.data(), l.vec.data() + n);

  const double lam = out.scaled_lambda;
  const Eigen::VectorXd mh = m * r.vec;
  const Eigen::VectorXd nm = m.transpose() * l.vec;
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    res = std::max(res, std::abs(mh[i] - lam * r.vec[i]) / (lam * r.vec.maxCoeff()));
    res = std::max(res, std::abs(nm[i] - lam * l.vec[i]) / (lam * l.vec.maxCoeff()));
  }
  out.residual = res;
  return out;
}

}  // namespace symtherm::detail
