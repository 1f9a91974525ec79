#pragma once

#include <map>
#include <utility>
#include <vector>

#include "symtherm/sft.hpp"

namespace symtherm {

/// Locally constant function on the shift space: its value at a sequence
/// depends only on the first `depth` symbols. Values are stored for exactly
/// the admissible depth-words.
class Potential {
 public:
  static Potential from_table(const Sft& sft, int depth, const std::map<Word, double>& table);
  static Potential symbolwise(const Sft& sft, std::vector<double> values);
  static Potential constant(const Sft& sft, double c);
  /// Fills the table by evaluating fn on every admissible depth-word.
  template <class Fn>
  static Potential tabulate(const Sft& sft, int depth, Fn&& fn) {
    Potential p(sft, depth);
    visit_words(sft, depth, [&](WordView w) {
      p.values_[p.code(w)] = fn(w);
      return true;
    });
    p.check_finite();
    return p;
  }

  const Sft& sft() const noexcept { return sft_; }
  int depth() const noexcept { return depth_; }

  /// Value on an admissible word of exactly `depth` symbols.
  double operator()(WordView dword) const;
  /// Value at a window whose first `depth` symbols decide it.
  double at(WordView window) const { return (*this)(window.first(static_cast<std::size_t>(depth_))); }

  /// Same function expressed on longer words.
  Potential lifted(int depth) const;

  double min_value() const;
  double max_value() const;
  std::vector<std::pair<Word, double>> entries() const;

 private:
  Potential(const Sft& sft, int depth);
  std::size_t code(WordView w) const;
  void check_finite() const;

  Sft sft_;
  int depth_;
  std::vector<double> values_;  // NaN on inadmissible codes
};

struct WordSumBounds {
  double sup = 0.0;
  double inf = 0.0;
};

/// S_n f at any sequence extending prefix; |prefix| >= n + depth - 1.
double birkhoff_sum(const Potential& f, WordView prefix, int n);

/// Exact sup and inf of S_{|w|} f over the cylinder [w].
WordSumBounds word_sum_bounds(const Potential& f, WordView word);

/// Sup of |S_n f(x) - S_n f(y)| over n and pairs sharing their first n symbols.
double distortion_constant(const Potential& f);

double sup_norm(const Potential& f);

/// a*f + b*g on the common depth.
Potential combine(double a, const Potential& f, double b, const Potential& g);

/// Distance exp(-S_c psi) where c is the longest common initial block.
double d_psi(const Potential& psi, WordView first, WordView second);

/// d_psi diameter of the cylinder [w].
double cylinder_diam_psi(const Potential& psi, WordView word);

}  // namespace symtherm
