#include "symtherm/massdist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "symtherm/error.hpp"
#include "symtherm/thermo.hpp"

namespace symtherm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Running log(sum exp(x)).
struct LogSum {
  double top = -kInf;
  double acc = 0.0;
  void add(double x) {
    if (x == -kInf) return;
    if (x <= top) {
      acc += std::exp(x - top);
    } else {
      acc = acc * std::exp(top - x) + 1.0;
      top = x;
    }
  }
  double value() const { return top == -kInf ? -kInf : top + std::log(acc); }
};

double inner_sum(const Potential& f, WordView w) {
  const auto d = static_cast<std::size_t>(f.depth());
  double s = 0.0;
  for (std::size_t k = 0; k + d <= w.size(); ++k) s += f.at(w.subspan(k));
  return s;
}

// Bounds of the terms whose window starts in the last d-1 symbols.
WordSumBounds overhang(const Potential& f, WordView w) {
  const auto d = static_cast<std::size_t>(f.depth());
  if (d == 1 || w.empty()) return {0.0, 0.0};
  return word_sum_bounds(f, w.last(std::min(w.size(), d - 1)));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Word join_with_connectors(const std::vector<Word>& F, const Sft& sft) {
  const InfixSet r = connecting_words(sft);
  Word w;
  for (const auto& f : F) {
    if (f.empty()) continue;
    if (!w.empty()) {
      const Word& rho = r(w.back(), f.front());
      w.insert(w.end(), rho.begin(), rho.end());
    }
    w.insert(w.end(), f.begin(), f.end());
  }
  return w;
}

double base_series(const Potential& phi, const Potential& psi, double s, double K, int m) {
  LogSum ls;
  visit_window_family(phi, K, m, [&](WordView w, const WordSumBounds&) {
    ls.add(-s * word_sum_bounds(psi, w).sup);
    return true;
  });
  return ls.value() / s;
}

int choose_m(const Potential& phi, const Potential& psi, double s, double K, std::size_t t_norm,
             std::size_t tilde_length, std::size_t r_norm, int max_m) {
  if (!(s > 0.0)) fail(ErrorKind::kValidation, "choose_m: s must be positive");
  const double c0 = static_cast<double>(2 * r_norm + t_norm + tilde_length) * sup_norm(psi);
  for (int m = 1; m <= max_m; ++m) {
    if (base_series(phi, psi, s, K, m) > c0) return m;
  }
  fail(ErrorKind::kInfeasible, "choose_m: no base length up to " + std::to_string(max_m) +
                                   " clears C0 = " + std::to_string(c0) + " (s too close to the dimension?)");
}

MassDistribution build_mass_distribution(const Potential& phi, const Potential& psi, double s,
                                         const std::vector<Word>& F, const MassOptions& options) {
  const Sft& sft = phi.sft();
  if (!(sft == psi.sft())) fail(ErrorKind::kValidation, "mass distribution: potentials live on different shifts");
  if (!(psi.min_value() > 0.0)) fail(ErrorKind::kValidation, "mass distribution: psi must be strictly positive");
  if (!(s > 0.0)) fail(ErrorKind::kValidation, "mass distribution: s must be positive");
  if (F.empty()) fail(ErrorKind::kValidation, "mass distribution: F must contain at least one word");
  for (const auto& f : F) {
    check_symbols(f, sft);
    if (f.empty() || !is_admissible(f, sft)) {
      fail(ErrorKind::kValidation, "mass distribution: F must contain non-empty admissible words");
    }
  }
  const AlphaRange range = alpha_range(phi, psi);
  if (!(range.lower < -1e-12 && range.upper > 1e-12)) {
    fail(ErrorKind::kInfeasible, "mass distribution: needs alpha- < 0 < alpha+, got [" + std::to_string(range.lower) +
                                     ", " + std::to_string(range.upper) + "]");
  }
  if (options.check_dimension) {
    const double b0 = spectrum_at(0.0, phi, psi, range).value;
    if (!(s < b0 - options.s_margin)) {
      fail(ErrorKind::kInfeasible, "mass distribution: s = " + std::to_string(s) +
                                       " is not below the level-set dimension " + std::to_string(b0) +
                                       " by the required margin");
    }
  }

  MassDistribution d(phi, psi);
  d.s_ = s;
  d.r_ = connecting_words(sft);
  const double floor_K = 2.0 * distortion_constant(phi) + static_cast<double>(d.r_.norm()) * sup_norm(phi);
  d.K_ = options.K.value_or(floor_K + 1.0);
  if (!(d.K_ > floor_K)) {
    fail(ErrorKind::kInfeasible, "mass distribution: K = " + std::to_string(d.K_) + " must exceed 2V + |R||phi| = " +
                                     std::to_string(floor_K));
  }
  d.F_ = F;
  std::sort(d.F_.begin(), d.F_.end());
  d.tilde_ = join_with_connectors(d.F_, sft);
  d.K_prime_ = d.K_ + static_cast<double>(2 * d.r_.norm() + d.tilde_.size()) * sup_norm(phi);
  d.t_ = build_postfix_set(phi, d.K_prime_, d.K_);
  d.m_ = choose_m(phi, psi, s, d.K_, d.t_.norm(), d.tilde_.size(), d.r_.norm(), options.max_m);
  d.a1_ = enumerate_W(phi, d.K_, d.m_, options.limits).words;

  LogSum z;
  std::vector<double> lw;
  for (const auto& w : d.a1_) {
    lw.push_back(-s * word_sum_bounds(psi, w).sup);
    z.add(lw.back());
  }
  for (double x : lw) d.a1_log_mass_.push_back(x - z.value());
  return d;
}

double MassDistribution::sum_bound() const {
  return K_prime_ + static_cast<double>(t_.norm()) * sup_norm(phi_);
}

int MassDistribution::window_length() const {
  return static_cast<int>(2 * (static_cast<std::size_t>(m_) + r_.norm() + tilde_.size()) + t_.norm());
}

Word MassDistribution::tail_of(WordView word) const {
  const auto lt = static_cast<std::size_t>(std::max({1, phi_.depth() - 1, psi_.depth() - 1}));
  return Word(word.end() - static_cast<long>(std::min(lt, word.size())), word.end());
}

double MassDistribution::over_psi(WordView word) const { return overhang(psi_, word).sup; }

std::vector<MassDistribution::Extension> MassDistribution::extensions(WordView tail, double inner_phi) const {
  const Sft& sft = phi_.sft();
  const auto dphi = static_cast<std::size_t>(phi_.depth());
  const auto dpsi = static_cast<std::size_t>(psi_.depth());
  const WordView tphi = tail.last(std::min(tail.size(), dphi - 1));
  const WordView tpsi = tail.last(std::min(tail.size(), dpsi - 1));
  std::vector<Extension> out;
  out.reserve(a1_.size());
  Word base, full;
  for (const Word& w1 : a1_) {
    const Word& rho = r_(tail.back(), w1.front());
    const Word& rho2 = r_(w1.back(), tilde_.front());
    base = concat({rho, w1, rho2, tilde_});
    bool found = false;
    for (const Word& tau : t_.words) {
      if (!tau.empty() && !sft.allowed(base.back(), tau.front())) continue;
      Extension e;
      e.x = concat({base, tau});
      full = concat({tphi, e.x});
      e.d_phi = inner_sum(phi_, full);
      const WordSumBounds ov = overhang(phi_, full);
      if (!in_window_family(WordSumBounds{inner_phi + e.d_phi + ov.sup, inner_phi + e.d_phi + ov.inf}, K_)) continue;
      full = concat({tpsi, e.x});
      e.d_psi = inner_sum(psi_, full);
      e.over_psi = overhang(psi_, full).sup;
      out.push_back(std::move(e));
      found = true;
      break;
    }
    if (!found) {
      fail(ErrorKind::kInfeasible, "mass distribution: no postfix returns an extension to W_K (tail '" +
                                       sft.format(tail) + "', base word '" + sft.format(w1) + "')");
    }
  }
  return out;
}

std::vector<MassNode> MassDistribution::roots() const {
  std::vector<MassNode> out;
  for (std::size_t i = 0; i < a1_.size(); ++i) {
    out.push_back({a1_[i], 1, a1_log_mass_[i], inner_sum(phi_, a1_[i]), inner_sum(psi_, a1_[i])});
  }
  return out;
}

std::vector<MassNode> MassDistribution::children(const MassNode& node) const {
  const Word tail = tail_of(node.word);
  const auto ext = extensions(tail, node.inner_phi);
  LogSum z;
  std::vector<double> lw;
  for (const auto& e : ext) {
    lw.push_back(-s_ * (e.d_psi + e.over_psi));
    z.add(lw.back());
  }
  std::vector<MassNode> out;
  out.reserve(ext.size());
  for (std::size_t i = 0; i < ext.size(); ++i) {
    MassNode c;
    c.word = concat({node.word, ext[i].x});
    c.level = node.level + 1;
    c.log_mass = node.log_mass + lw[i] - z.value();
    c.inner_phi = node.inner_phi + ext[i].d_phi;
    c.inner_psi = node.inner_psi + ext[i].d_psi;
    out.push_back(std::move(c));
  }
  return out;
}

std::optional<MassNode> MassDistribution::locate(WordView word) const {
  auto search = [&](auto&& self, const MassNode& node) -> std::optional<MassNode> {
    if (node.word.size() == word.size()) return node;
    for (const auto& c : children(node)) {
      if (c.word.size() <= word.size() && std::equal(c.word.begin(), c.word.end(), word.begin())) {
        if (auto hit = self(self, c)) return hit;
      }
    }
    return std::nullopt;
  };
  for (const auto& r : roots()) {
    if (r.word.size() <= word.size() && std::equal(r.word.begin(), r.word.end(), word.begin())) {
      if (auto hit = search(search, r)) return hit;
    }
  }
  return std::nullopt;
}

double MassDistribution::log_mass(WordView word) const {
  auto node = locate(word);
  if (!node) fail(ErrorKind::kValidation, "mass: word is not in the generation tree");
  return node->log_mass;
}

double MassDistribution::mass(WordView word) const { return std::exp(log_mass(word)); }

MassNode MassDistribution::sample(int k, std::uint64_t seed) const {
  if (k < 1) fail(ErrorKind::kValidation, "sample: depth must be at least 1");
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<MassNode>& nodes, double parent_log) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (const auto& n : nodes) {
      acc += std::exp(n.log_mass - parent_log);
      if (u < acc) return n;
    }
    return nodes.back();
  };
  MassNode node = pick(roots(), 0.0);
  for (int level = 2; level <= k; ++level) node = pick(children(node), node.log_mass);
  return node;
}

MassCertificate MassDistribution::certify(WordView word) const {
  MassCertificate c;
  const auto node = locate(word);
  c.in_tree = node.has_value();
  c.level = node ? node->level : 0;
  const auto d = static_cast<std::size_t>(phi_.depth());
  double sum = 0.0;
  for (std::size_t k = 0; k + d <= word.size(); ++k) {
    sum += phi_.at(word.subspan(k));
    c.max_abs_sum = std::max(c.max_abs_sum, std::abs(sum));
  }
  c.sum_bound = sum_bound();
  c.sum_ok = c.max_abs_sum <= c.sum_bound + 1e-9;
  c.window_length = window_length();
  c.window_ok = check_X_membership(word, {tilde_}, c.window_length);
  c.in_window_family = in_window_family(phi_, word, K_);
  c.log_mass = node ? node->log_mass : -kInf;
  c.log_diameter = std::log(cylinder_diam_psi(psi_, word));
  c.local_dimension = c.log_mass / c.log_diameter;
  return c;
}

std::vector<double> MassDistribution::max_log_ratio_profile(int levels, std::size_t max_classes) const {
  // Children of a word depend only on its tail and its inner phi sum, and the
  // ratio mu e^{s S psi} of every child equals r - s*over_psi(tail) - log Z~
  // for the parent's ratio r, so words sharing a key can be merged.
  using Key = std::pair<Word, std::uint64_t>;
  std::map<Key, double> classes;
  LogSum z1;
  for (const auto& w : a1_) z1.add(-s_ * word_sum_bounds(psi_, w).sup);
  for (const auto& w : a1_) {
    const Key k{tail_of(w), std::bit_cast<std::uint64_t>(inner_sum(phi_, w))};
    classes.emplace(k, -z1.value());
  }
  std::vector<double> profile{-z1.value()};
  for (int level = 2; level <= levels; ++level) {
    std::map<Key, double> next;
    for (const auto& [key, r] : classes) {
      const double inner = std::bit_cast<double>(key.second);
      const auto ext = extensions(key.first, inner);
      LogSum z;
      for (const auto& e : ext) z.add(-s_ * (e.d_psi + e.over_psi));
      const double child_r = r - s_ * over_psi(key.first) - z.value();
      for (const auto& e : ext) {
        const Key ck{tail_of(concat({key.first, e.x})), std::bit_cast<std::uint64_t>(inner + e.d_phi)};
        auto [it, fresh] = next.emplace(ck, child_r);
        if (!fresh) it->second = std::max(it->second, child_r);
      }
      if (next.size() > max_classes) fail(ErrorKind::kCapacity, "max_log_ratio_profile: too many word classes");
    }
    double best = -kInf;
    for (const auto& [key, r] : next) best = std::max(best, r);
    profile.push_back(best);
    classes = std::move(next);
  }
  return profile;
}

}  // namespace symtherm
