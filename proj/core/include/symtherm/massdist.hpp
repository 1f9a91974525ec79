#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symtherm/potential.hpp"
#include "symtherm/sft.hpp"
#include "symtherm/wordsets.hpp"

namespace symtherm {

struct MassOptions {
  std::optional<double> K;   // default 2V + |R||phi| + 1
  int max_m = 20;            // search cap for the base length
  double s_margin = 1e-3;    // s must stay this far below the spectrum at 0
  bool check_dimension = true;
  Limits limits{};
};

/// Least m <= max_m with (1/s) log sum_{W^m_K} exp(-s S psi) > C0 where
/// C0 = (2|R| + |T| + |w~|) |psi|.
int choose_m(const Potential& phi, const Potential& psi, double s, double K, std::size_t t_norm,
             std::size_t tilde_length, std::size_t r_norm, int max_m = 20);

/// Left-hand side of the base-length inequality at length m.
double base_series(const Potential& phi, const Potential& psi, double s, double K, int m);

/// A node of the generation tree with the running sums needed to extend it.
struct MassNode {
  Word word;
  int level = 1;
  double log_mass = 0.0;
  double inner_phi = 0.0;  // S phi over windows lying inside the word
  double inner_psi = 0.0;
};

struct MassCertificate {
  bool in_tree = false;
  int level = 0;
  double max_abs_sum = 0.0;  // max_n |S_n phi| over the prefixes of the word
  double sum_bound = 0.0;    // K' + |T| |phi|
  bool sum_ok = false;
  int window_length = 0;     // 2(m + |R| + |w~|) + |T|
  bool window_ok = false;
  bool in_window_family = false;
  double log_mass = 0.0;
  double log_diameter = 0.0;
  double local_dimension = 0.0;
};

/// Inductive word families A_k and the cylinder weights mu_s built on them.
class MassDistribution {
 public:
  const Potential& phi() const noexcept { return phi_; }
  const Potential& psi() const noexcept { return psi_; }
  double s() const noexcept { return s_; }
  double K() const noexcept { return K_; }
  double K_prime() const noexcept { return K_prime_; }
  int m() const noexcept { return m_; }
  const Word& tilde() const noexcept { return tilde_; }
  const std::vector<Word>& F() const noexcept { return F_; }
  const PostfixSet& postfix() const noexcept { return t_; }
  const InfixSet& infix() const noexcept { return r_; }
  const std::vector<Word>& base_words() const noexcept { return a1_; }
  double sum_bound() const;
  int window_length() const;

  /// Members of A_1 with their masses.
  std::vector<MassNode> roots() const;
  /// A_{k+1}(node) in A_1 order.
  std::vector<MassNode> children(const MassNode& node) const;
  /// log mu_s([w]) for a word of the tree; validation error otherwise.
  double log_mass(WordView word) const;
  double mass(WordView word) const;
  std::optional<MassNode> locate(WordView word) const;

  /// Depth-k branch drawn proportionally to mass.
  MassNode sample(int k, std::uint64_t seed) const;
  MassCertificate certify(WordView word) const;

  /// max over A_k of log(mu_s([w]) exp(s S_w psi)) for k = 1..levels.
  std::vector<double> max_log_ratio_profile(int levels, std::size_t max_classes = 1'000'000) const;

 private:
  friend MassDistribution build_mass_distribution(const Potential&, const Potential&, double, const std::vector<Word>&,
                                                  const MassOptions&);
  MassDistribution(Potential phi, Potential psi) : phi_(std::move(phi)), psi_(std::move(psi)) {}

  struct Extension {
    Word x;           // appended block rho w' rho' w~ tau
    double d_phi = 0.0;
    double d_psi = 0.0;
    double over_psi = 0.0;  // sup of the psi overhang at the new end
  };
  std::vector<Extension> extensions(WordView tail, double inner_phi) const;
  Word tail_of(WordView word) const;
  double over_psi(WordView word) const;

  Potential phi_, psi_;
  double s_ = 0.0, K_ = 0.0, K_prime_ = 0.0;
  int m_ = 1;
  Word tilde_;
  std::vector<Word> F_;
  PostfixSet t_;
  InfixSet r_;
  std::vector<Word> a1_;
  std::vector<double> a1_log_mass_;
};

MassDistribution build_mass_distribution(const Potential& phi, const Potential& psi, double s,
                                         const std::vector<Word>& F, const MassOptions& options = {});

/// Joins the words of F (in the given order) with connecting words.
Word join_with_connectors(const std::vector<Word>& F, const Sft& sft);

}  // namespace symtherm
