#include "symtherm/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "symtherm/error.hpp"

namespace symtherm {

AffineIfs::AffineIfs(const Sft& sft, Interval interval, std::vector<AffineMap> maps)
    : sft_(sft), interval_(interval), maps_(std::move(maps)) {
  if (!(interval_.left < interval_.right)) fail(ErrorKind::kValidation, "ifs: interval must satisfy u < v");
  if (static_cast<int>(maps_.size()) != sft_.size()) fail(ErrorKind::kValidation, "ifs: one map per symbol is required");
  const double len = interval_.length();
  const double tol = 1e-12 * (len + std::abs(interval_.left) + std::abs(interval_.right));
  std::vector<Interval> images;
  for (Symbol a = 0; a < sft_.size(); ++a) {
    const AffineMap& g = maps_[static_cast<std::size_t>(a)];
    if (!(g.rate > 0.0 && g.rate < 1.0)) {
      fail(ErrorKind::kValidation, "ifs: map '" + sft_.name(a) + "' must have rate in (0, 1)");
    }
    const Interval img{g.rate * interval_.left + g.offset, g.rate * interval_.right + g.offset};
    if (img.left < interval_.left - tol || img.right > interval_.right + tol) {
      fail(ErrorKind::kValidation, "ifs: image of map '" + sft_.name(a) + "' leaves the interval");
    }
    images.push_back(img);
  }
  order_.resize(maps_.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::sort(order_.begin(), order_.end(), [&](Symbol a, Symbol b) {
    return images[static_cast<std::size_t>(a)].left < images[static_cast<std::size_t>(b)].left;
  });
  for (std::size_t i = 1; i < order_.size(); ++i) {
    if (images[static_cast<std::size_t>(order_[i])].left < images[static_cast<std::size_t>(order_[i - 1])].right - tol) {
      fail(ErrorKind::kValidation, "ifs: images of '" + sft_.name(order_[i - 1]) + "' and '" + sft_.name(order_[i]) +
                                       "' overlap (open set condition)");
    }
  }
}

AffineMap AffineIfs::compose(WordView word) const {
  check_symbols(word, sft_);
  AffineMap g{1.0, 0.0};
  for (Symbol a : word) {
    const AffineMap& h = maps_[static_cast<std::size_t>(a)];
    g = {g.rate * h.rate, g.rate * h.offset + g.offset};
  }
  return g;
}

Interval AffineIfs::cylinder_interval(WordView word) const {
  check_symbols(word, sft_);
  if (!is_admissible(word, sft_)) fail(ErrorKind::kValidation, "cylinder_interval: word is not admissible");
  const AffineMap g = compose(word);
  return {g.rate * interval_.left + g.offset, g.rate * interval_.right + g.offset};
}

double coding_point(const AffineIfs& ifs, WordView prefix, WordView period) {
  if (period.empty()) fail(ErrorKind::kValidation, "coding_point: period must be non-empty");
  const Word probe = concat({prefix, period, period});
  check_symbols(probe, ifs.sft());
  if (!is_admissible(probe, ifs.sft())) fail(ErrorKind::kValidation, "coding_point: sequence is not admissible");
  const AffineMap p = ifs.compose(prefix);
  const AffineMap w = ifs.compose(period);
  const double fixed = w.offset / (1.0 - w.rate);
  return p.rate * fixed + p.offset;
}

double coding_point(const AffineIfs& ifs, WordView prefix) {
  const Interval j = ifs.cylinder_interval(prefix);
  return 0.5 * (j.left + j.right);
}

Potential geometric_potential(const AffineIfs& ifs) {
  std::vector<double> v;
  for (const auto& g : ifs.maps()) v.push_back(-std::log(g.rate));
  return Potential::symbolwise(ifs.sft(), std::move(v));
}

namespace {

Potential normalized(const Potential& phi, double& shift, const ThermoTolerances& tol) {
  shift = pressure(phi, tol);
  return combine(1.0, phi, -shift, Potential::constant(phi.sft(), 1.0));
}

}  // namespace

CdfModel::CdfModel(AffineIfs ifs, const Potential& phi, const ThermoTolerances& tol)
    : ifs_(std::move(ifs)),
      chain_(gibbs_chain(normalized(phi, shift_, tol), tol)),
      psi_(geometric_potential(ifs_)) {
  if (!(phi.sft() == ifs_.sft())) fail(ErrorKind::kValidation, "cdf model: potential and ifs use different shifts");
  if (std::abs(chain_.pressure()) > 1e-9) {
    fail(ErrorKind::kNumerical, "cdf model: normalized potential has pressure " + std::to_string(chain_.pressure()));
  }
}

double CdfModel::gibbs_constant(int max_length) const { return gibbs_constant_bound(chain_, max_length); }

double CdfModel::child_mass(WordView word, double word_mass, Symbol next) const {
  if (word.empty()) {
    const Symbol w[1] = {next};
    return chain_.cylinder_measure(w);
  }
  return word_mass * chain_.conditional(word, next);
}

double cdf_eval(const CdfModel& m, double x, double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::kValidation, "cdf_eval: eps must be positive");
  const AffineIfs& ifs = m.ifs();
  const Interval root = ifs.interval();
  if (x < root.left) return 0.0;
  if (x >= root.right) return 1.0;
  const Sft& sft = ifs.sft();
  // x is pulled back through the maps, so cylinder boundaries met exactly stay exact at depth
  Word w;
  double y = x, mass = 1.0, acc = 0.0;
  for (int level = 0; level < 100000; ++level) {
    if (mass < eps) return acc + mass * std::clamp((y - root.left) / root.length(), 0.0, 1.0);
    bool descend = false;
    Symbol next = 0;
    double next_mass = 0.0;
    for (Symbol a : ifs.order()) {
      if (!w.empty() && !sft.allowed(w.back(), a)) continue;
      const AffineMap& h = ifs.maps()[static_cast<std::size_t>(a)];
      const double ma = m.child_mass(w, mass, a);
      if (h.rate * root.right + h.offset <= y) {
        acc += ma;
      } else if (h.rate * root.left + h.offset <= y && !descend) {
        descend = true;
        next = a;
        next_mass = ma;
      }
    }
    if (!descend) return acc;
    const AffineMap& h = ifs.maps()[static_cast<std::size_t>(next)];
    y = (y - h.offset) / h.rate;
    w.push_back(next);
    mass = next_mass;
  }
  return acc;
}

namespace {

struct Between {
  const CdfModel& m;
  double lo, hi, eps;
  int budget = 0;

  double run(Word& w, const AffineMap& g, double mass) {
    const Interval root = m.ifs().interval();
    const Interval j{g.rate * root.left + g.offset, g.rate * root.right + g.offset};
    if (j.right <= lo || j.left >= hi) return 0.0;
    if (j.left >= lo && j.right <= hi) return mass;
    if (mass < eps || ++budget > 2000000) {
      const double overlap = std::min(j.right, hi) - std::max(j.left, lo);
      return mass * std::clamp(overlap / j.length(), 0.0, 1.0);
    }
    const Sft& sft = m.ifs().sft();
    double s = 0.0;
    for (Symbol a : m.ifs().order()) {
      if (!w.empty() && !sft.allowed(w.back(), a)) continue;
      const AffineMap& h = m.ifs().maps()[static_cast<std::size_t>(a)];
      const double ma = m.child_mass(w, mass, a);
      w.push_back(a);
      s += run(w, AffineMap{g.rate * h.rate, g.rate * h.offset + g.offset}, ma);
      w.pop_back();
    }
    return s;
  }
};

}  // namespace

double interval_mass(const CdfModel& m, double x, double y, double rel_eps) {
  if (!(rel_eps > 0.0)) fail(ErrorKind::kValidation, "interval_mass: eps must be positive");
  const Interval root = m.ifs().interval();
  const double lo = std::max(std::min(x, y), root.left);
  const double hi = std::min(std::max(x, y), root.right);
  if (!(hi > lo)) return 0.0;

  // Mass of the deepest cylinder holding the whole interval sets the scale.
  const Sft& sft = m.ifs().sft();
  Word w;
  AffineMap g{1.0, 0.0};
  double mass = 1.0;
  for (int level = 0; level < 4000; ++level) {
    bool inside = false;
    for (Symbol a : m.ifs().order()) {
      if (!w.empty() && !sft.allowed(w.back(), a)) continue;
      const AffineMap& h = m.ifs().maps()[static_cast<std::size_t>(a)];
      const AffineMap ga{g.rate * h.rate, g.rate * h.offset + g.offset};
      const double l = ga.rate * root.left + ga.offset, r = ga.rate * root.right + ga.offset;
      if (l <= lo && hi <= r) {
        mass = m.child_mass(w, mass, a);
        w.push_back(a);
        g = ga;
        inside = true;
        break;
      }
    }
    if (!inside) break;
  }
  Between b{m, lo, hi, rel_eps * mass * 1e-3};
  double r = b.run(w, g, mass);
  if (r > 0.0 && rel_eps * r < b.eps) {
    Between fine{m, lo, hi, rel_eps * r * 0.25};
    r = fine.run(w, g, mass);
  }
  return r;
}

std::vector<std::pair<double, double>> cdf_curve(const CdfModel& m, int resolution, double eps) {
  if (resolution < 2) fail(ErrorKind::kValidation, "cdf_curve: resolution must be at least 2");
  const Interval root = m.ifs().interval();
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i <= resolution; ++i) {
    const double x = i == resolution ? root.right : root.left + root.length() * i / resolution;
    out.emplace_back(x, cdf_eval(m, x, eps));
  }
  return out;
}

HolderProbe holder_probe(const CdfModel& m, double x, double alpha, int depth, int min_depth) {
  const Interval root = m.ifs().interval();
  if (x < root.left || x > root.right) fail(ErrorKind::kValidation, "holder_probe: x lies outside the interval");
  if (depth < 1 || depth > 60) fail(ErrorKind::kValidation, "holder_probe: depth must lie in 1..60");
  if (min_depth < 1 || min_depth > depth) fail(ErrorKind::kValidation, "holder_probe: bad depth range");
  HolderProbe p;
  p.x = x;
  p.alpha = alpha;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int k = min_depth; k <= depth; ++k) {
    const double h = std::ldexp(root.length(), -k);
    for (int side : {-1, 1}) {
      const double y = x + side * h;
      if (y < root.left || y > root.right) continue;
      ProbeRecord r;
      r.scale = h;
      r.side = side;
      r.delta = interval_mass(m, x, y);
      r.ratio = r.delta / std::pow(h, alpha);
      p.records.push_back(r);
      if (r.delta > 0.0) {
        const double lx = std::log(h), ly = std::log(r.delta);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
      }
    }
  }
  if (!p.records.empty()) {
    auto [lo, hi] = std::minmax_element(p.records.begin(), p.records.end(),
                                        [](const ProbeRecord& a, const ProbeRecord& b) { return a.ratio < b.ratio; });
    p.min_ratio = lo->ratio;
    p.max_ratio = hi->ratio;
  }
  if (count >= 2) {
    const double den = count * sxx - sx * sx;
    p.exponent = den != 0.0 ? (count * sxy - sx * sy) / den : 0.0;
  }
  return p;
}

bool moderate_check(const CdfModel& m, double x, double alpha, double C, int depth_lo, int depth_hi) {
  if (!(C >= 1.0)) fail(ErrorKind::kValidation, "moderate_check: C must be at least 1");
  const HolderProbe p = holder_probe(m, x, alpha, depth_hi, depth_lo);
  if (p.records.empty()) return false;
  for (const auto& r : p.records) {
    if (!(r.ratio >= 1.0 / C && r.ratio <= C)) return false;
  }
  return true;
}

Alpha0Report alpha0(const CdfModel& m) {
  Alpha0Report r;
  const BetaPoint b0 = beta_point(0.0, m.phi(), m.psi());
  r.alpha0 = b0.beta_prime;
  r.beta0 = b0.beta;
  r.spectrum_value = spectrum_at(r.alpha0, m.phi(), m.psi()).value;
  return r;
}

CertifiedPoint certified_point(const CdfModel& m, double alpha, int l, int depth, std::uint64_t seed,
                               const MassOptions& options) {
  if (l < 1) fail(ErrorKind::kValidation, "certified_point: l must be at least 1");
  const Potential& phi = m.phi();
  const Potential& psi = m.psi();
  const AlphaRange range = alpha_range(phi, psi);
  const double edge = 1e-9 * (1.0 + std::abs(range.lower) + std::abs(range.upper));
  if (!(alpha > range.lower + edge && alpha < range.upper - edge)) {
    fail(ErrorKind::kInfeasible, "certified_point: alpha must lie strictly inside (" + std::to_string(range.lower) +
                                     ", " + std::to_string(range.upper) + ")");
  }
  CertifiedPoint out;
  out.alpha = alpha;
  out.l = l;
  out.s = 0.5 * spectrum_at(alpha, phi, psi, range).value;
  const BoundaryWords bw = build_boundary_words(m.ifs().order(), m.ifs().sft());
  out.F = bw.F;
  out.separating = separating_word(bw.F, m.ifs().sft());
  const Potential shifted = combine(1.0, phi, alpha, psi);
  const MassDistribution md = build_mass_distribution(shifted, psi, out.s, {out.separating}, options);
  const MassNode node = md.sample(depth, seed);
  out.prefix = node.word;
  out.x = coding_point(m.ifs(), node.word);
  out.mass = md.certify(node.word);
  out.max_abs_sum = out.mass.max_abs_sum;
  out.n_ok = check_N_membership(node.word, bw.F, l, m.ifs().sft());
  out.window_constant = l * static_cast<int>(bw.norm()) + m.ifs().sft().size();
  return out;
}

}  // namespace symtherm
