#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "symtherm/potential.hpp"
#include "symtherm/sft.hpp"

namespace symtherm {

/// Words of one length whose cylinder supremum of |S phi| is at most K.
struct WindowFamily {
  double K = 0.0;
  int m = 0;
  std::vector<Word> words;
};

/// Membership test sup_{[w]} |S_{|w|} phi| <= K (with a 1e-12 relative slack).
bool in_window_family(const WordSumBounds& b, double K);
bool in_window_family(const Potential& phi, WordView word, double K);

/// Streams the admissible m-words in W^m_K in lexicographic order.
void visit_window_family(const Potential& phi, double K, int m,
                         const std::function<bool(WordView, const WordSumBounds&)>& visit);
WindowFamily enumerate_W(const Potential& phi, double K, int m, const Limits& limits = {});

/// Word of length n minimizing the cylinder sup of S_n phi (or maximizing the
/// cylinder inf when maximize_inf is set), with that extremal value.
struct ExtremalWord {
  Word word;
  double value = 0.0;
};
ExtremalWord extremal_word(const Potential& phi, int n, bool maximize_inf);

/// Finite family T such that every omega in W_{K'} has a tau in T with
/// omega tau in W_K (verified up to a length by verify_postfix).
struct PostfixSet {
  double K_prime = 0.0;
  double K = 0.0;
  double threshold = 0.0;  // both extremal segments clear +-threshold
  Word minus_segment;
  Word plus_segment;
  std::vector<Word> words;  // ordered by length, then lexicographically

  std::size_t norm() const;
};

PostfixSet build_postfix_set(const Potential& phi, double K_prime, double K);

/// First tau in T order with omega tau admissible and in W_K.
std::optional<Word> find_postfix(const PostfixSet& t, const Potential& phi, WordView omega);

struct PostfixReport {
  bool passed = true;
  int max_length = 0;
  std::size_t checked = 0;          // members of W_{K'} examined
  std::vector<std::size_t> per_length;
  std::optional<Word> witness;      // first omega without a postfix
};

PostfixReport verify_postfix(const PostfixSet& t, const Potential& phi, int max_length = 14);

/// Every length-k window of the prefix contains every word of F.
bool check_X_membership(WordView prefix, const std::vector<Word>& F, int k);

/// No omega^l with omega in F occurs in the prefix.
bool check_N_membership(WordView prefix, const std::vector<Word>& F, int l, const Sft& sft);

struct BoundaryWords {
  std::vector<Symbol> left_successor;   // a-: leftmost allowed successor
  std::vector<Symbol> right_successor;  // a+: rightmost allowed successor
  std::vector<Word> y_minus;
  std::vector<Word> y_plus;
  std::vector<Word> F;  // union, ordered by length then lexicographically

  std::size_t norm() const;
};

/// order lists the symbols from left to right.
BoundaryWords build_boundary_words(const std::vector<Symbol>& order, const Sft& sft);

/// Shortest (then lexicographically least) admissible word that is not a
/// prefix of any shift of omega^infinity for omega in F.
Word separating_word(const std::vector<Word>& F, const Sft& sft, int max_length = 64);

/// Cyclically admissible word whose cylinder sup of S phi is below -C_- - 1,
/// C_- = birkhoff_sup(phi). Needs alpha- = 0 < alpha+ (or the mirrored case,
/// handled on -phi).
Word counterexample_word(const Potential& phi, const Potential& psi);

}  // namespace symtherm
