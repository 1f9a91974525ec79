#include "symtherm/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symtherm/error.hpp"

namespace symtherm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_admissible(WordView w, const Sft& sft, const char* what) {
  if (!is_admissible(w, sft)) fail(ErrorKind::kValidation, std::string(what) + ": word is not admissible");
}

}  // namespace

Potential::Potential(const Sft& sft, int depth) : sft_(sft), depth_(depth) {
  if (depth < 1) fail(ErrorKind::kValidation, "potential depth must be at least 1");
  double size = 1.0;
  for (int i = 0; i < depth; ++i) size *= sft.size();
  if (size > 1e8) fail(ErrorKind::kCapacity, "potential table too large");
  values_.assign(static_cast<std::size_t>(size), kNaN);
}

std::size_t Potential::code(WordView w) const {
  std::size_t c = 0;
  for (Symbol s : w) c = c * static_cast<std::size_t>(sft_.size()) + static_cast<std::size_t>(s);
  return c;
}

void Potential::check_finite() const {
  visit_words(sft_, depth_, [&](WordView w) {
    if (!std::isfinite(values_[code(w)])) {
      fail(ErrorKind::kValidation, "potential value at '" + sft_.format(w) + "' is missing or not finite");
    }
    return true;
  });
}

Potential Potential::from_table(const Sft& sft, int depth, const std::map<Word, double>& table) {
  Potential p(sft, depth);
  for (const auto& [w, v] : table) {
    check_symbols(w, sft);
    if (static_cast<int>(w.size()) != depth) {
      fail(ErrorKind::kValidation, "potential key '" + sft.format(w) + "' does not have length " +
                                       std::to_string(depth));
    }
    if (!is_admissible(w, sft)) {
      fail(ErrorKind::kValidation, "potential key '" + sft.format(w) + "' is not an admissible word");
    }
    p.values_[p.code(w)] = v;
  }
  p.check_finite();
  return p;
}

Potential Potential::symbolwise(const Sft& sft, std::vector<double> values) {
  if (static_cast<int>(values.size()) != sft.size()) {
    fail(ErrorKind::kValidation, "symbolwise potential needs one value per symbol");
  }
  Potential p(sft, 1);
  p.values_ = std::move(values);
  p.check_finite();
  return p;
}

Potential Potential::constant(const Sft& sft, double c) {
  return symbolwise(sft, std::vector<double>(static_cast<std::size_t>(sft.size()), c));
}

double Potential::operator()(WordView dword) const {
  if (static_cast<int>(dword.size()) != depth_) {
    fail(ErrorKind::kValidation, "potential evaluated on a word of the wrong length");
  }
  check_symbols(dword, sft_);
  const double v = values_[code(dword)];
  if (std::isnan(v)) fail(ErrorKind::kValidation, "potential evaluated on an inadmissible word");
  return v;
}

Potential Potential::lifted(int depth) const {
  if (depth < depth_) fail(ErrorKind::kValidation, "cannot lift a potential to a smaller depth");
  if (depth == depth_) return *this;
  return tabulate(sft_, depth, [this](WordView w) { return at(w); });
}

double Potential::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_)
    if (!std::isnan(v)) m = std::min(m, v);
  return m;
}

double Potential::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_)
    if (!std::isnan(v)) m = std::max(m, v);
  return m;
}

std::vector<std::pair<Word, double>> Potential::entries() const {
  std::vector<std::pair<Word, double>> out;
  visit_words(sft_, depth_, [&](WordView w) {
    out.emplace_back(Word(w.begin(), w.end()), values_[code(w)]);
    return true;
  });
  return out;
}

double birkhoff_sum(const Potential& f, WordView prefix, int n) {
  if (n < 0) fail(ErrorKind::kValidation, "birkhoff_sum: n must be non-negative");
  if (n == 0) return 0.0;
  const auto need = static_cast<std::size_t>(n + f.depth() - 1);
  if (prefix.size() < need) {
    fail(ErrorKind::kInsufficientContext, "birkhoff_sum: prefix of length " + std::to_string(prefix.size()) +
                                              " cannot determine S_" + std::to_string(n) + " (needs " +
                                              std::to_string(need) + ")");
  }
  require_admissible(prefix, f.sft(), "birkhoff_sum");
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += f.at(prefix.subspan(static_cast<std::size_t>(k)));
  return sum;
}

WordSumBounds word_sum_bounds(const Potential& f, WordView word) {
  if (word.empty()) fail(ErrorKind::kValidation, "word_sum_bounds: empty word");
  require_admissible(word, f.sft(), "word_sum_bounds");
  const int n = static_cast<int>(word.size());
  const int d = f.depth();
  double fixed = 0.0;
  for (int k = 0; k + d <= n; ++k) fixed += f.at(word.subspan(static_cast<std::size_t>(k)));
  if (d == 1) return {fixed, fixed};

  // Terms k >= n-d+1 reach past the word: maximize/minimize over every
  // admissible continuation of length d-1.
  const int t0 = std::max(0, n - d + 1);
  Word buffer(word.begin() + t0, word.end());
  const int terms = n - t0;
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  const Sft& sft = f.sft();
  auto descend = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      double s = 0.0;
      for (int k = 0; k < terms; ++k) s += f.at(WordView(buffer).subspan(static_cast<std::size_t>(k)));
      hi = std::max(hi, s);
      lo = std::min(lo, s);
      return;
    }
    for (Symbol c : sft.successors(buffer.back())) {
      buffer.push_back(c);
      self(self, remaining - 1);
      buffer.pop_back();
    }
  };
  descend(descend, d - 1);
  return {fixed + hi, fixed + lo};
}

double distortion_constant(const Potential& f) {
  // Beyond length d-1 the variation only depends on the last d-1 symbols, so
  // words of length 1..d-1 exhaust the supremum.
  double v = 0.0;
  for (int n = 1; n < f.depth(); ++n) {
    visit_words(f.sft(), n, [&](WordView w) {
      const auto b = word_sum_bounds(f, w);
      v = std::max(v, b.sup - b.inf);
      return true;
    });
  }
  return v;
}

double sup_norm(const Potential& f) { return std::max(std::abs(f.min_value()), std::abs(f.max_value())); }

Potential combine(double a, const Potential& f, double b, const Potential& g) {
  if (!(f.sft() == g.sft())) fail(ErrorKind::kValidation, "combine: potentials live on different shifts");
  const int depth = std::max(f.depth(), g.depth());
  return Potential::tabulate(f.sft(), depth, [&](WordView w) { return a * f.at(w) + b * g.at(w); });
}

namespace {

void require_positive(const Potential& psi, const char* what) {
  if (!(psi.min_value() > 0.0)) fail(ErrorKind::kValidation, std::string(what) + ": psi must be strictly positive");
}

}  // namespace

double d_psi(const Potential& psi, WordView first, WordView second) {
  require_positive(psi, "d_psi");
  require_admissible(first, psi.sft(), "d_psi");
  require_admissible(second, psi.sft(), "d_psi");
  std::size_t c = 0;
  while (c < first.size() && c < second.size() && first[c] == second[c]) ++c;
  if (c == first.size() || c == second.size()) {
    fail(ErrorKind::kIndeterminate, "d_psi: prefixes do not separate the points");
  }
  if (c == 0) return 1.0;
  return std::exp(-word_sum_bounds(psi, first.first(c)).sup);
}

double cylinder_diam_psi(const Potential& psi, WordView word) {
  require_positive(psi, "cylinder_diam_psi");
  require_admissible(word, psi.sft(), "cylinder_diam_psi");
  const Sft& sft = psi.sft();
  if (word.empty()) return sft.size() >= 2 ? 1.0 : 0.0;
  Word w(word.begin(), word.end());
  int forced = 0;
  while (sft.successors(w.back()).size() == 1) {
    // A forced loop visiting every symbol means the cylinder is a single point.
    if (++forced > sft.size()) return 0.0;
    w.push_back(sft.successors(w.back()).front());
  }
  return std::exp(-word_sum_bounds(psi, w).sup);
}

}  // namespace symtherm
