#include <algorithm>
#include <cmath>
#include <random>

#include "block_graph.hpp"
#include "perron.hpp"
#include "symtherm/error.hpp"
#include "symtherm/thermo.hpp"

namespace symtherm {

double pressure(const Potential& f, const ThermoTolerances& tol) {
  const detail::BlockGraph g(f.sft(), detail::common_depth(f));
  return detail::perron(g, g.weights(f), tol.eigen_rel, false).log_lambda;
}

GibbsChain gibbs_chain(const Potential& f, const ThermoTolerances& tol) {
  const detail::BlockGraph g(f.sft(), detail::common_depth(f));
  const auto w = g.weights(f);
  const auto pd = detail::perron(g, w, tol.eigen_rel, true);

  GibbsChain c(f, g.blocks);
  const int n = g.vertices();
  c.lambda_ = std::exp(pd.log_lambda);
  c.log_lambda_ = pd.log_lambda;
  c.residual_ = pd.residual;
  c.bracket_ = pd.bracket;
  c.h_ = pd.right;
  c.nu_ = pd.left;
  double dot = 0.0;
  for (int i = 0; i < n; ++i) dot += c.nu_[static_cast<std::size_t>(i)] * c.h_[static_cast<std::size_t>(i)];
  for (double& v : c.nu_) v /= dot;
  c.pi_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    c.pi_[static_cast<std::size_t>(i)] = c.nu_[static_cast<std::size_t>(i)] * c.h_[static_cast<std::size_t>(i)];
  }
  c.q_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int e = 0; e < g.edges(); ++e) {
    const auto u = static_cast<std::size_t>(g.tail[static_cast<std::size_t>(e)]);
    const auto v = static_cast<std::size_t>(g.head[static_cast<std::size_t>(e)]);
    c.q_[u * static_cast<std::size_t>(n) + v] +=
        std::exp(w[static_cast<std::size_t>(e)] - pd.shift) * c.h_[v] / (pd.scaled_lambda * c.h_[u]);
  }
  return c;
}

double GibbsChain::cylinder_measure(WordView word) const {
  if (word.empty()) fail(ErrorKind::kValidation, "cylinder_measure: empty word");
  check_symbols(word, sft());
  if (!is_admissible(word, sft())) fail(ErrorKind::kValidation, "cylinder_measure: word is not admissible");
  const auto len = static_cast<std::size_t>(blocks_.block_length());
  if (word.size() < len) {
    double s = 0.0;
    for (int st = 0; st < states(); ++st) {
      const Word& b = blocks_.block(st);
      if (std::equal(word.begin(), word.end(), b.begin())) s += pi_[static_cast<std::size_t>(st)];
    }
    return s;
  }
  const Word enc = blocks_.encode(word);
  double m = pi_[static_cast<std::size_t>(enc.front())];
  for (std::size_t i = 1; i < enc.size(); ++i) m *= transition(enc[i - 1], enc[i]);
  return m;
}

double GibbsChain::conditional(WordView context, Symbol next) const {
  if (context.empty()) fail(ErrorKind::kValidation, "conditional: empty context");
  Word w(context.begin(), context.end());
  w.push_back(next);
  check_symbols(w, sft());
  if (!is_admissible(w, sft())) return 0.0;
  const auto len = static_cast<std::size_t>(blocks_.block_length());
  if (context.size() >= len) {
    const Symbol u = *blocks_.state_of(context.last(len));
    return transition(u, blocks_.next_state(u, next));
  }
  return cylinder_measure(w) / cylinder_measure(context);
}

double gibbs_constant_bound(const GibbsChain& chain, int max_length, const Limits& limits) {
  if (std::abs(chain.pressure()) > 1e-9) {
    fail(ErrorKind::kValidation, "gibbs_constant_bound: potential is not normalized (pressure " +
                                     std::to_string(chain.pressure()) + ")");
  }
  if (max_length < 1) fail(ErrorKind::kValidation, "gibbs_constant_bound: length must be at least 1");
  double c = 1.0;
  std::size_t seen = 0;
  for (int n = 1; n <= max_length; ++n) {
    visit_words(chain.sft(), n, [&](WordView w) {
      if (++seen > limits.max_words) fail(ErrorKind::kCapacity, "gibbs_constant_bound: too many words");
      const double lm = std::log(chain.cylinder_measure(w));
      const double s = word_sum_bounds(chain.potential(), w).sup;
      c = std::max(c, std::exp(std::abs(lm - s)));
      return true;
    });
  }
  return c;
}

double integrate(const GibbsChain& chain, const Potential& g) {
  if (!(g.sft() == chain.sft())) fail(ErrorKind::kValidation, "integrate: potential lives on a different shift");
  const HigherBlock& b = chain.blocks();
  double s = 0.0;
  if (g.depth() <= b.depth()) {
    for (Symbol u = 0; u < chain.states(); ++u) {
      const double pu = chain.stationary()[static_cast<std::size_t>(u)];
      for (Symbol v : b.spec().successors(u)) s += pu * chain.transition(u, v) * g.at(b.edge_word(u, v));
    }
    return s;
  }
  visit_words(chain.sft(), g.depth(), [&](WordView w) {
    s += chain.cylinder_measure(w) * g(w);
    return true;
  });
  return s;
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Symbol draw(std::mt19937_64& rng, const std::vector<Symbol>& options, const std::vector<double>& weights) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < options.size(); ++i) {
    acc += weights[i];
    if (u < acc) return options[i];
  }
  return options.back();
}

}  // namespace

Word sample_orbit(const GibbsChain& chain, int n, std::uint64_t seed) {
  if (n < 1) fail(ErrorKind::kValidation, "sample_orbit: n must be at least 1");
  std::mt19937_64 rng(seed);
  const HigherBlock& b = chain.blocks();
  std::vector<Symbol> all(static_cast<std::size_t>(chain.states()));
  for (Symbol s = 0; s < chain.states(); ++s) all[static_cast<std::size_t>(s)] = s;
  Symbol st = draw(rng, all, chain.stationary());
  Word out = b.block(st);
  std::vector<double> row;
  while (static_cast<int>(out.size()) < n) {
    const auto& succ = b.spec().successors(st);
    row.clear();
    for (Symbol v : succ) row.push_back(chain.transition(st, v));
    st = draw(rng, succ, row);
    out.push_back(b.block(st).back());
  }
  out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace symtherm
