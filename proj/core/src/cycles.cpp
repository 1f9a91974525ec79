#include <algorithm>
#include <cmath>
#include <limits>

#include "block_graph.hpp"
#include "symtherm/error.hpp"
#include "symtherm/thermo.hpp"

namespace symtherm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bellman-Ford on longest paths from a virtual source joined to every vertex.
// Returns the edges of a cycle of weight > eps, or nothing.
std::vector<int> positive_cycle(const detail::BlockGraph& g, const std::vector<double>& w, double eps) {
  const int n = g.vertices();
  std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
  std::vector<int> pred(static_cast<std::size_t>(n), -1);
  int last = -1;
  for (int pass = 0; pass < n; ++pass) {
    last = -1;
    for (int e = 0; e < g.edges(); ++e) {
      const auto u = static_cast<std::size_t>(g.tail[static_cast<std::size_t>(e)]);
      const auto v = static_cast<std::size_t>(g.head[static_cast<std::size_t>(e)]);
      const double cand = dist[u] + w[static_cast<std::size_t>(e)];
      if (cand > dist[v] + eps) {
        dist[v] = cand;
        pred[v] = e;
        last = static_cast<int>(v);
      }
    }
    if (last < 0) return {};
  }
  int x = last;
  for (int i = 0; i < n; ++i) {
    const int e = pred[static_cast<std::size_t>(x)];
    if (e < 0) return {};
    x = g.tail[static_cast<std::size_t>(e)];
  }
  std::vector<int> loop;
  int y = x;
  do {
    const int e = pred[static_cast<std::size_t>(y)];
    if (e < 0 || loop.size() > static_cast<std::size_t>(n)) return {};
    loop.push_back(e);
    y = g.tail[static_cast<std::size_t>(e)];
  } while (y != x);
  std::reverse(loop.begin(), loop.end());
  double total = 0.0;
  for (int e : loop) total += w[static_cast<std::size_t>(e)];
  if (!(total > 0.0)) return {};
  return loop;
}

struct RatioCycle {
  double ratio = 0.0;
  std::vector<int> edges;
};

// Max over cycles of sum(a)/sum(b), b > 0. Each detected positive cycle
// raises r to its exact ratio, so r only takes cycle-ratio values.
RatioCycle max_ratio_cycle(const detail::BlockGraph& g, const std::vector<double>& a, const std::vector<double>& b,
                           double tol) {
  double r = kInf;
  double amax = 0.0, bmax = 0.0;
  for (std::size_t e = 0; e < a.size(); ++e) {
    r = std::min(r, a[e] / b[e]);
    amax = std::max(amax, std::abs(a[e]));
    bmax = std::max(bmax, std::abs(b[e]));
  }
  r -= 1.0;
  RatioCycle best{r, {}};
  std::vector<double> w(a.size());
  for (int it = 0; it < 100000; ++it) {
    for (std::size_t e = 0; e < a.size(); ++e) w[e] = a[e] - r * b[e];
    const double eps = tol * 1e-3 * (amax + std::abs(r) * bmax + 1e-300);
    auto loop = positive_cycle(g, w, eps);
    if (loop.empty()) break;
    double sa = 0.0, sb = 0.0;
    for (int e : loop) {
      sa += a[static_cast<std::size_t>(e)];
      sb += b[static_cast<std::size_t>(e)];
    }
    const double rho = sa / sb;
    if (!(rho > r)) break;
    r = rho;
    best = {r, std::move(loop)};
  }
  if (best.edges.empty()) throw NumericalError("cycle ratio search found no cycle", r, r);
  return best;
}

std::vector<int> loop_vertices(const detail::BlockGraph& g, const std::vector<int>& edges) {
  std::vector<int> v;
  for (int e : edges) v.push_back(g.tail[static_cast<std::size_t>(e)]);
  return v;
}

void require_positive_psi(const Potential& psi, const char* what) {
  if (!(psi.min_value() > 0.0)) fail(ErrorKind::kValidation, std::string(what) + ": psi must be strictly positive");
}

// Longest-walk table over walks with at least one edge; -inf when unreachable.
std::vector<double> longest_paths(const detail::BlockGraph& g, const std::vector<double>& w) {
  const auto n = static_cast<std::size_t>(g.vertices());
  std::vector<double> d(n * n, -kInf);
  for (int e = 0; e < g.edges(); ++e) {
    const auto u = static_cast<std::size_t>(g.tail[static_cast<std::size_t>(e)]);
    const auto v = static_cast<std::size_t>(g.head[static_cast<std::size_t>(e)]);
    d[u * n + v] = std::max(d[u * n + v], w[static_cast<std::size_t>(e)]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d[i * n + k];
      if (dik == -kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double c = dik + d[k * n + j];
        if (c > d[i * n + j]) d[i * n + j] = c;
      }
    }
  }
  return d;
}

}  // namespace

AlphaRange alpha_range(const Potential& phi, const Potential& psi, const ThermoTolerances& tol) {
  require_positive_psi(psi, "alpha_range");
  if (!(phi.sft() == psi.sft())) fail(ErrorKind::kValidation, "alpha_range: potentials live on different shifts");
  const detail::BlockGraph g(phi.sft(), detail::common_depth(phi, psi));
  auto a = g.weights(phi);
  const auto b = g.weights(psi);
  const RatioCycle lo = max_ratio_cycle(g, a, b, tol.cycle_ratio);
  for (double& x : a) x = -x;
  const RatioCycle hi = max_ratio_cycle(g, a, b, tol.cycle_ratio);
  AlphaRange out;
  out.lower = -lo.ratio;
  out.upper = hi.ratio;
  out.lower_cycle = g.cycle_word(loop_vertices(g, lo.edges));
  out.upper_cycle = g.cycle_word(loop_vertices(g, hi.edges));
  return out;
}

double max_cycle_mean(const Potential& f, const ThermoTolerances& tol) {
  const detail::BlockGraph g(f.sft(), detail::common_depth(f));
  const std::vector<double> ones(static_cast<std::size_t>(g.edges()), 1.0);
  return max_ratio_cycle(g, g.weights(f), ones, tol.cycle_ratio).ratio;
}

double Subaction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Subaction::at(WordView block) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (std::equal(block.begin(), block.end(), vertices[i].begin(), vertices[i].end())) return values[i];
  }
  fail(ErrorKind::kValidation, "subaction: unknown block");
}

double Subaction::max_residual(const Potential& phi) const {
  if (phi.depth() > block_length + 1) fail(ErrorKind::kValidation, "subaction: potential deeper than the table");
  const detail::BlockGraph g(phi.sft(), block_length + 1);
  if (static_cast<std::size_t>(g.vertices()) != values.size()) {
    fail(ErrorKind::kValidation, "subaction: table does not match the block graph");
  }
  const auto w = g.weights(phi);
  double r = -kInf;
  for (int e = 0; e < g.edges(); ++e) {
    const auto u = static_cast<std::size_t>(g.tail[static_cast<std::size_t>(e)]);
    const auto v = static_cast<std::size_t>(g.head[static_cast<std::size_t>(e)]);
    r = std::max(r, w[static_cast<std::size_t>(e)] + values[v] - values[u]);
  }
  return r;
}

bool is_subaction(const Potential& phi, const Subaction& f, double slack) { return f.max_residual(phi) <= slack; }

Subaction subaction(const Potential& phi, const ThermoTolerances& tol) {
  const double mean = max_cycle_mean(phi, tol);
  if (std::abs(mean) > 1e-9) {
    fail(ErrorKind::kPrecondition, "subaction: maximal cycle mean of the potential is " + std::to_string(mean) +
                                       ", a sub-action needs it to be zero");
  }
  const detail::BlockGraph g(phi.sft(), detail::common_depth(phi));
  const auto w = g.weights(phi);
  const auto n = static_cast<std::size_t>(g.vertices());
  const auto d = longest_paths(g, w);
  double scale = 1.0;
  for (double x : w) scale = std::max(scale, std::abs(x));
  const double crit_tol = 1e-9 * scale * static_cast<double>(n);

  // Kleene-star columns at critical vertices are max-plus eigenvectors for
  // eigenvalue 0; their maximum is one as well.
  std::vector<std::size_t> critical;
  for (std::size_t c = 0; c < n; ++c)
    if (d[c * n + c] >= -crit_tol) critical.push_back(c);
  Subaction out;
  out.block_length = g.blocks.block_length();
  out.values.assign(n, -kInf);
  for (std::size_t v = 0; v < n; ++v) {
    out.vertices.push_back(g.blocks.block(static_cast<Symbol>(v)));
    for (std::size_t c : critical) {
      const double star = v == c ? std::max(0.0, d[v * n + c]) : d[v * n + c];
      out.values[v] = std::max(out.values[v], star);
    }
  }
  return out;
}

double birkhoff_sup(const Potential& phi, const ThermoTolerances& tol) {
  if (max_cycle_mean(phi, tol) > 1e-9) return kInf;
  const detail::BlockGraph g(phi.sft(), detail::common_depth(phi));
  const auto d = longest_paths(g, g.weights(phi));
  return *std::max_element(d.begin(), d.end());
}

}  // namespace symtherm
