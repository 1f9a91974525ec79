#include "symtherm/wordsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "block_graph.hpp"
#include "symtherm/error.hpp"
#include "symtherm/thermo.hpp"

namespace symtherm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double slack(double K) { return 1e-12 * (1.0 + std::abs(K)); }

bool by_length_then_lex(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// Path tables over the block graph. up/lo hold the extreme weight of the d-1
// free edges hanging off a state; min_sup[r]/max_inf[r] extend them by r
// fixed edges.
struct PathTables {
  const detail::BlockGraph& g;
  std::vector<double> w;
  std::vector<double> up, lo;
  std::vector<std::vector<double>> min_sup, max_inf;

  PathTables(const detail::BlockGraph& graph, const Potential& phi) : g(graph), w(graph.weights(phi)) {
    const auto n = static_cast<std::size_t>(g.vertices());
    up.assign(n, 0.0);
    lo.assign(n, 0.0);
    for (int step = 0; step < g.depth() - 1; ++step) {
      std::vector<double> nu(n, -kInf), nl(n, kInf);
      for (int e = 0; e < g.edges(); ++e) {
        const auto u = static_cast<std::size_t>(g.tail[static_cast<std::size_t>(e)]);
        const auto v = static_cast<std::size_t>(g.head[static_cast<std::size_t>(e)]);
        nu[u] = std::max(nu[u], w[static_cast<std::size_t>(e)] + up[v]);
        nl[u] = std::min(nl[u], w[static_cast<std::size_t>(e)] + lo[v]);
      }
      up = std::move(nu);
      lo = std::move(nl);
    }
    min_sup.push_back(up);
    max_inf.push_back(lo);
  }

  void grow(std::size_t r) {
    const auto n = static_cast<std::size_t>(g.vertices());
    while (min_sup.size() <= r) {
      const auto& ps = min_sup.back();
      const auto& pi = max_inf.back();
      std::vector<double> ns(n, kInf), ni(n, -kInf);
      for (int e = 0; e < g.edges(); ++e) {
        const auto u = static_cast<std::size_t>(g.tail[static_cast<std::size_t>(e)]);
        const auto v = static_cast<std::size_t>(g.head[static_cast<std::size_t>(e)]);
        ns[u] = std::min(ns[u], w[static_cast<std::size_t>(e)] + ps[v]);
        ni[u] = std::max(ni[u], w[static_cast<std::size_t>(e)] + pi[v]);
      }
      min_sup.push_back(std::move(ns));
      max_inf.push_back(std::move(ni));
    }
  }

  // Word of r fixed edges realizing min_sup[r] (or max_inf[r]).
  ExtremalWord reconstruct(std::size_t r, bool maximize_inf) {
    grow(r);
    const auto& top = maximize_inf ? max_inf[r] : min_sup[r];
    std::size_t best = 0;
    for (std::size_t v = 1; v < top.size(); ++v) {
      if (maximize_inf ? top[v] > top[best] : top[v] < top[best]) best = v;
    }
    Word states{static_cast<Symbol>(best)};
    int cur = static_cast<int>(best);
    for (std::size_t k = r; k > 0; --k) {
      const auto& next = maximize_inf ? max_inf[k - 1] : min_sup[k - 1];
      int pick = -1;
      double val = maximize_inf ? -kInf : kInf;
      for (int e : g.out[static_cast<std::size_t>(cur)]) {
        const double c = w[static_cast<std::size_t>(e)] + next[static_cast<std::size_t>(g.head[static_cast<std::size_t>(e)])];
        if (maximize_inf ? c > val : c < val) {
          val = c;
          pick = g.head[static_cast<std::size_t>(e)];
        }
      }
      states.push_back(pick);
      cur = pick;
    }
    return {g.blocks.decode(states), top[best]};
  }
};

ExtremalWord brute_extremal(const Potential& phi, int n, bool maximize_inf) {
  ExtremalWord best{{}, maximize_inf ? -kInf : kInf};
  visit_words(phi.sft(), n, [&](WordView w) {
    const auto b = word_sum_bounds(phi, w);
    const double v = maximize_inf ? b.inf : b.sup;
    if (maximize_inf ? v > best.value : v < best.value) best = {Word(w.begin(), w.end()), v};
    return true;
  });
  return best;
}

// Shortest word whose cylinder sup is below -threshold (or inf above it).
ExtremalWord first_beyond(const Potential& phi, double threshold, bool maximize_inf) {
  const detail::BlockGraph g(phi.sft(), detail::common_depth(phi));
  const int block = g.depth() - 1;
  for (int n = 1; n < block; ++n) {
    auto e = brute_extremal(phi, n, maximize_inf);
    if (maximize_inf ? e.value > threshold : e.value < -threshold) return e;
  }
  PathTables t(g, phi);
  for (std::size_t r = 0; r < 200000; ++r) {
    t.grow(r);
    const auto& top = maximize_inf ? t.max_inf[r] : t.min_sup[r];
    const double v = maximize_inf ? *std::max_element(top.begin(), top.end()) : *std::min_element(top.begin(), top.end());
    if (maximize_inf ? v > threshold : v < -threshold) return t.reconstruct(r, maximize_inf);
  }
  fail(ErrorKind::kInfeasible, "no admissible segment reaches the required Birkhoff sum");
}

}  // namespace

bool in_window_family(const WordSumBounds& b, double K) { return b.sup <= K + slack(K) && b.inf >= -K - slack(K); }

bool in_window_family(const Potential& phi, WordView word, double K) {
  return in_window_family(word_sum_bounds(phi, word), K);
}

void visit_window_family(const Potential& phi, double K, int m,
                         const std::function<bool(WordView, const WordSumBounds&)>& visit) {
  if (!(K > 0.0)) fail(ErrorKind::kValidation, "window family bound K must be positive");
  if (m < 1) fail(ErrorKind::kValidation, "window family length must be at least 1");
  const detail::BlockGraph g(phi.sft(), detail::common_depth(phi));
  const int block = g.depth() - 1;
  if (m < block) {
    visit_words(phi.sft(), m, [&](WordView w) {
      const auto b = word_sum_bounds(phi, w);
      return in_window_family(b, K) ? visit(w, b) : true;
    });
    return;
  }
  PathTables t(g, phi);
  t.grow(static_cast<std::size_t>(m - block));
  const double eps = slack(K);
  const Sft& sft = phi.sft();
  const auto n = static_cast<std::size_t>(sft.size());
  // Edge out of a state indexed by the appended base symbol.
  std::vector<int> edge_by_symbol(static_cast<std::size_t>(g.vertices()) * n, -1);
  for (int e = 0; e < g.edges(); ++e) {
    const Symbol c = g.blocks.block(g.head[static_cast<std::size_t>(e)]).back();
    edge_by_symbol[static_cast<std::size_t>(g.tail[static_cast<std::size_t>(e)]) * n + static_cast<std::size_t>(c)] = e;
  }

  Word word;
  bool stop = false;
  auto descend = [&](auto&& self, int state, double fixed) -> void {
    const int len = static_cast<int>(word.size());
    const auto r = static_cast<std::size_t>(m - len);
    if (fixed + t.min_sup[r][static_cast<std::size_t>(state)] > K + eps) return;
    if (fixed + t.max_inf[r][static_cast<std::size_t>(state)] < -K - eps) return;
    if (len == m) {
      const WordSumBounds b{fixed + t.up[static_cast<std::size_t>(state)], fixed + t.lo[static_cast<std::size_t>(state)]};
      if (in_window_family(b, K) && !visit(word, b)) stop = true;
      return;
    }
    for (Symbol c : sft.successors(word.back())) {
      if (stop) return;
      const int e = edge_by_symbol[static_cast<std::size_t>(state) * n + static_cast<std::size_t>(c)];
      word.push_back(c);
      self(self, g.head[static_cast<std::size_t>(e)], fixed + t.w[static_cast<std::size_t>(e)]);
      word.pop_back();
    }
  };
  visit_words(sft, block, [&](WordView start) {
    word.assign(start.begin(), start.end());
    descend(descend, *g.blocks.state_of(start), 0.0);
    return !stop;
  });
}

WindowFamily enumerate_W(const Potential& phi, double K, int m, const Limits& limits) {
  WindowFamily out{K, m, {}};
  visit_window_family(phi, K, m, [&](WordView w, const WordSumBounds&) {
    if (out.words.size() >= limits.max_words) {
      fail(ErrorKind::kCapacity, "enumerate_W: more than " + std::to_string(limits.max_words) + " words");
    }
    out.words.emplace_back(w.begin(), w.end());
    return true;
  });
  return out;
}

ExtremalWord extremal_word(const Potential& phi, int n, bool maximize_inf) {
  if (n < 1) fail(ErrorKind::kValidation, "extremal_word: length must be at least 1");
  const detail::BlockGraph g(phi.sft(), detail::common_depth(phi));
  const int block = g.depth() - 1;
  if (n < block) return brute_extremal(phi, n, maximize_inf);
  PathTables t(g, phi);
  return t.reconstruct(static_cast<std::size_t>(n - block), maximize_inf);
}

std::size_t PostfixSet::norm() const {
  std::size_t m = 0;
  for (const auto& w : words) m = std::max(m, w.size());
  return m;
}

PostfixSet build_postfix_set(const Potential& phi, double K_prime, double K) {
  const Sft& sft = phi.sft();
  if (!is_mixing(sft)) fail(ErrorKind::kUnsupportedSpec, "build_postfix_set: shift is not topologically mixing");
  // alpha- < 0 < alpha+ for psi = 1 means cycles of both signs.
  const double top = max_cycle_mean(phi);
  const double bottom = -max_cycle_mean(combine(-1.0, phi, 0.0, phi));
  if (!(top > 1e-12 && bottom < -1e-12)) {
    fail(ErrorKind::kInfeasible, "build_postfix_set: needs alpha- < 0 < alpha+ (cycle means range over [" +
                                     std::to_string(bottom) + ", " + std::to_string(top) + "])");
  }
  const InfixSet r = connecting_words(sft);
  const double v = distortion_constant(phi);
  const double norm_phi = sup_norm(phi);
  const double floor_K = 2.0 * v + static_cast<double>(r.norm()) * norm_phi;
  if (!(K > floor_K)) {
    fail(ErrorKind::kInfeasible, "build_postfix_set: K = " + std::to_string(K) + " must exceed 2V + |R||phi| = " +
                                     std::to_string(floor_K));
  }
  if (!(K_prime > 0.0)) fail(ErrorKind::kInfeasible, "build_postfix_set: K' must be positive");

  PostfixSet out;
  out.K_prime = K_prime;
  out.K = K;
  out.threshold = K_prime + floor_K;
  out.minus_segment = first_beyond(phi, out.threshold, false).word;
  out.plus_segment = first_beyond(phi, out.threshold, true).word;

  std::vector<Word> t0{Word{}};
  for (const Word* seg : {&out.minus_segment, &out.plus_segment}) {
    for (std::size_t k = 1; k <= seg->size(); ++k) t0.emplace_back(seg->begin(), seg->begin() + static_cast<long>(k));
  }
  std::set<Word> seen;
  for (const Word& rho : r.distinct()) {
    for (const Word& tau : t0) {
      Word w = concat({rho, tau});
      if (is_admissible(w, sft) && seen.insert(w).second) out.words.push_back(std::move(w));
    }
  }
  std::sort(out.words.begin(), out.words.end(), by_length_then_lex);
  return out;
}

std::optional<Word> find_postfix(const PostfixSet& t, const Potential& phi, WordView omega) {
  const Sft& sft = phi.sft();
  Word buf(omega.begin(), omega.end());
  for (const Word& tau : t.words) {
    if (!omega.empty() && !tau.empty() && !sft.allowed(omega.back(), tau.front())) continue;
    buf.resize(omega.size());
    buf.insert(buf.end(), tau.begin(), tau.end());
    if (buf.empty()) continue;
    if (in_window_family(phi, buf, t.K)) return tau;
  }
  return std::nullopt;
}

PostfixReport verify_postfix(const PostfixSet& t, const Potential& phi, int max_length) {
  PostfixReport rep;
  rep.max_length = max_length;
  for (int len = 1; len <= max_length; ++len) {
    std::size_t count = 0;
    visit_window_family(phi, t.K_prime, len, [&](WordView w, const WordSumBounds&) {
      ++count;
      if (!find_postfix(t, phi, w)) {
        rep.passed = false;
        if (!rep.witness) rep.witness = Word(w.begin(), w.end());
      }
      return true;
    });
    rep.per_length.push_back(count);
    rep.checked += count;
  }
  return rep;
}

bool check_X_membership(WordView prefix, const std::vector<Word>& F, int k) {
  std::size_t longest = 0;
  for (const auto& f : F) longest = std::max(longest, f.size());
  if (k < 0 || static_cast<std::size_t>(k) < longest) {
    fail(ErrorKind::kValidation, "check_X_membership: window length " + std::to_string(k) +
                                     " is shorter than a word of F");
  }
  const std::size_t n = prefix.size();
  const auto kk = static_cast<std::size_t>(k);
  if (n < kk) return true;
  for (const auto& f : F) {
    if (f.empty()) continue;
    // next[i] = first occurrence start >= i.
    std::vector<std::size_t> next(n + 1, n + 1);
    for (std::size_t i = n + 1; i-- > 0;) {
      if (i < n) next[i] = next[i + 1];
      if (i + f.size() <= n && std::equal(f.begin(), f.end(), prefix.begin() + static_cast<long>(i))) next[i] = i;
    }
    for (std::size_t i = 0; i + kk <= n; ++i) {
      if (next[i] > i + kk - f.size()) return false;
    }
  }
  return true;
}

bool check_N_membership(WordView prefix, const std::vector<Word>& F, int l, const Sft& sft) {
  if (l < 1) fail(ErrorKind::kValidation, "check_N_membership: l must be at least 1");
  for (const auto& f : F) {
    if (f.empty()) fail(ErrorKind::kValidation, "check_N_membership: F contains the empty word");
    check_symbols(f, sft);
    if (!is_cyclically_admissible(f, sft)) {
      fail(ErrorKind::kValidation, "check_N_membership: '" + sft.format(f) + "' is not cyclically admissible");
    }
  }
  for (const auto& f : F) {
    Word pattern;
    for (int i = 0; i < l; ++i) pattern.insert(pattern.end(), f.begin(), f.end());
    if (std::search(prefix.begin(), prefix.end(), pattern.begin(), pattern.end()) != prefix.end()) return false;
  }
  return true;
}

std::size_t BoundaryWords::norm() const {
  std::size_t m = 0;
  for (const auto& w : F) m = std::max(m, w.size());
  return m;
}

namespace {

std::vector<Word> functional_cycles(const std::vector<Symbol>& next) {
  const auto n = next.size();
  std::vector<Word> out;
  std::vector<int> color(n, 0);  // 0 unseen, 1 on current walk, 2 done
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<Symbol> walk;
    auto x = static_cast<Symbol>(s);
    while (color[static_cast<std::size_t>(x)] == 0) {
      color[static_cast<std::size_t>(x)] = 1;
      walk.push_back(x);
      x = next[static_cast<std::size_t>(x)];
    }
    if (color[static_cast<std::size_t>(x)] == 1) {
      const auto start = std::find(walk.begin(), walk.end(), x);
      const Word cycle(start, walk.end());
      for (std::size_t r = 0; r < cycle.size(); ++r) {
        Word rot;
        for (std::size_t i = 0; i < cycle.size(); ++i) rot.push_back(cycle[(r + i) % cycle.size()]);
        out.push_back(std::move(rot));
      }
    }
    for (Symbol y : walk) color[static_cast<std::size_t>(y)] = 2;
  }
  std::sort(out.begin(), out.end(), by_length_then_lex);
  return out;
}

}  // namespace

BoundaryWords build_boundary_words(const std::vector<Symbol>& order, const Sft& sft) {
  const int n = sft.size();
  if (static_cast<int>(order.size()) != n) fail(ErrorKind::kValidation, "boundary words: order must list every symbol");
  std::vector<int> rank(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Symbol a = order[i];
    if (a < 0 || a >= n || rank[static_cast<std::size_t>(a)] >= 0) {
      fail(ErrorKind::kValidation, "boundary words: order is not a permutation of the alphabet");
    }
    rank[static_cast<std::size_t>(a)] = static_cast<int>(i);
  }
  BoundaryWords out;
  for (Symbol a = 0; a < n; ++a) {
    const auto& succ = sft.successors(a);
    auto by_rank = [&](Symbol x, Symbol y) { return rank[static_cast<std::size_t>(x)] < rank[static_cast<std::size_t>(y)]; };
    out.left_successor.push_back(*std::min_element(succ.begin(), succ.end(), by_rank));
    out.right_successor.push_back(*std::max_element(succ.begin(), succ.end(), by_rank));
  }
  out.y_minus = functional_cycles(out.left_successor);
  out.y_plus = functional_cycles(out.right_successor);
  std::set<Word> all(out.y_minus.begin(), out.y_minus.end());
  all.insert(out.y_plus.begin(), out.y_plus.end());
  out.F.assign(all.begin(), all.end());
  std::sort(out.F.begin(), out.F.end(), by_length_then_lex);
  return out;
}

Word separating_word(const std::vector<Word>& F, const Sft& sft, int max_length) {
  for (const auto& f : F) {
    if (f.empty()) fail(ErrorKind::kValidation, "separating_word: F contains the empty word");
    check_symbols(f, sft);
    if (!is_cyclically_admissible(f, sft)) {
      fail(ErrorKind::kValidation, "separating_word: '" + sft.format(f) + "' is not cyclically admissible");
    }
  }
  for (int n = 1; n <= max_length; ++n) {
    std::set<Word> blocked;
    for (const auto& f : F) {
      for (std::size_t r = 0; r < f.size(); ++r) {
        Word p;
        for (int i = 0; i < n; ++i) p.push_back(f[(r + static_cast<std::size_t>(i)) % f.size()]);
        blocked.insert(std::move(p));
      }
    }
    std::optional<Word> found;
    visit_words(sft, n, [&](WordView w) {
      Word x(w.begin(), w.end());
      if (blocked.count(x)) return true;
      found = std::move(x);
      return false;
    });
    if (found) return *found;
  }
  fail(ErrorKind::kInfeasible, "separating_word: no separating word up to length " + std::to_string(max_length));
}

Word counterexample_word(const Potential& phi, const Potential& psi) {
  const AlphaRange range = alpha_range(phi, psi);
  const double tol = 1e-9;
  Potential f = phi;
  if (std::abs(range.lower) <= tol && range.upper > tol) {
    // as is
  } else if (std::abs(range.upper) <= tol && range.lower < -tol) {
    f = combine(-1.0, phi, 0.0, phi);
  } else {
    fail(ErrorKind::kInfeasible, "counterexample_word: needs alpha- = 0 < alpha+ (or alpha- < alpha+ = 0); got [" +
                                     std::to_string(range.lower) + ", " + std::to_string(range.upper) + "]");
  }
  const double c_minus = birkhoff_sup(f);
  const InfixSet r = connecting_words(f.sft());
  for (int n = 1; n <= 4096; ++n) {
    const Word u = extremal_word(f, n, false).word;
    const Word w = concat({u, r(u.back(), u.front())});
    if (!is_cyclically_admissible(w, f.sft())) continue;
    if (word_sum_bounds(f, w).sup < -c_minus - 1.0) return w;
  }
  fail(ErrorKind::kInfeasible, "counterexample_word: no word found up to length 4096");
}

}  // namespace symtherm
