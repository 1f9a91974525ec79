#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symtherm {

/// Dense symbol index into an alphabet. Names are only kept for I/O.
using Symbol = int;
using Word = std::vector<Symbol>;
using WordView = std::span<const Symbol>;

/// Guards against exponential blowups in word enumeration.
struct Limits {
  std::size_t max_words = 10'000'000;
};

/// One-sided subshift of finite type: an alphabet together with a 0/1
/// incidence table in which every row has at least one allowed successor.
class Sft {
 public:
  Sft(std::vector<std::string> alphabet, const std::vector<std::vector<int>>& incidence);

  /// Full shift on n symbols named "0", "1", ...
  static Sft full(int n);

  int size() const noexcept { return static_cast<int>(names_.size()); }
  bool allowed(Symbol a, Symbol b) const noexcept {
    return incidence_[static_cast<std::size_t>(a) * names_.size() + static_cast<std::size_t>(b)] != 0;
  }
  const std::vector<Symbol>& successors(Symbol a) const { return successors_[static_cast<std::size_t>(a)]; }
  const std::vector<std::string>& alphabet() const noexcept { return names_; }
  const std::string& name(Symbol a) const { return names_.at(static_cast<std::size_t>(a)); }
  std::optional<Symbol> find(std::string_view name) const;

  /// Parses a word. When every symbol name is a single character the text is
  /// read character by character; otherwise names are separated by commas or
  /// whitespace. Admissibility is not checked.
  Word parse_word(std::string_view text) const;
  std::string format(WordView word) const;

  bool operator==(const Sft& other) const {
    return names_ == other.names_ && incidence_ == other.incidence_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::uint8_t> incidence_;
  std::vector<std::vector<Symbol>> successors_;
  bool single_char_names_ = true;
};

/// Shortest connecting word for every ordered pair of symbols.
class InfixSet {
 public:
  InfixSet() = default;
  InfixSet(int alphabet_size, std::vector<Word> words);

  const Word& operator()(Symbol a, Symbol b) const {
    return words_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b)];
  }
  /// Maximum stored length.
  std::size_t norm() const noexcept { return norm_; }
  /// Distinct stored words ordered by length, then lexicographically.
  std::vector<Word> distinct() const;

 private:
  int n_ = 0;
  std::vector<Word> words_;
  std::size_t norm_ = 0;
};

void check_symbols(WordView word, const Sft& sft);

bool is_admissible(WordView word, const Sft& sft);
bool is_cyclically_admissible(WordView word, const Sft& sft);
bool is_mixing(const Sft& sft);

/// For every (a, b) the lexicographically least among the shortest words rho
/// with a rho b admissible.
InfixSet connecting_words(const Sft& sft);

/// Least m >= 2 such that every pair (a, b) is joined by an admissible word of
/// length m starting with a and ending with b.
int mixing_window(const Sft& sft);

/// Calls visit for every admissible word of length n in lexicographic order.
/// Returning false from visit stops the enumeration early.
void visit_words(const Sft& sft, int n, const std::function<bool(WordView)>& visit);
std::vector<Word> enumerate_words(const Sft& sft, int n, const Limits& limits = {});

Word word_power(WordView word, int l, const Sft& sft);
Word concat(std::initializer_list<WordView> parts);

/// Recoding of a shift into its (d-1)-block presentation, where each new
/// symbol is an admissible (d-1)-word and edges are overlaps.
class HigherBlock {
 public:
  HigherBlock(const Sft& base, int depth, const Limits& limits = {});

  const Sft& base() const noexcept { return base_; }
  const Sft& spec() const noexcept { return spec_; }
  int depth() const noexcept { return depth_; }
  int block_length() const noexcept { return depth_ - 1; }
  int states() const noexcept { return static_cast<int>(blocks_.size()); }
  const Word& block(Symbol state) const { return blocks_.at(static_cast<std::size_t>(state)); }
  std::optional<Symbol> state_of(WordView block) const;
  Symbol next_state(Symbol state, Symbol appended) const;

  /// Word of length n >= d-1 to its sliding-window block word (length n-d+2).
  Word encode(WordView word) const;
  /// Inverse of encode.
  Word decode(WordView blocks) const;
  /// The admissible d-word spelled by the edge u -> v.
  Word edge_word(Symbol u, Symbol v) const;

 private:
  Sft base_;
  Sft spec_;
  int depth_;
  std::vector<Word> blocks_;
  std::vector<Symbol> index_;  // block code -> state, -1 when inadmissible
};

HigherBlock higher_block_recode(const Sft& sft, int depth, const Limits& limits = {});

}  // namespace symtherm
