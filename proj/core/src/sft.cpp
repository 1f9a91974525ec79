#include "symtherm/sft.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

#include "symtherm/error.hpp"

namespace symtherm {

Sft::Sft(std::vector<std::string> alphabet, const std::vector<std::vector<int>>& incidence)
    : names_(std::move(alphabet)) {
  const std::size_t n = names_.size();
  if (n == 0) fail(ErrorKind::kValidation, "alphabet must contain at least one symbol");
  std::set<std::string> seen;
  for (const auto& name : names_) {
    if (name.empty()) fail(ErrorKind::kValidation, "symbol names must be non-empty");
    if (!seen.insert(name).second) fail(ErrorKind::kValidation, "duplicate symbol name '" + name + "'");
    if (name.size() != 1) single_char_names_ = false;
  }
  if (incidence.size() != n) fail(ErrorKind::kValidation, "incidence table must have one row per symbol");
  incidence_.assign(n * n, 0);
  successors_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (incidence[a].size() != n) {
      fail(ErrorKind::kValidation, "incidence row " + std::to_string(a) + " has the wrong length");
    }
    for (std::size_t b = 0; b < n; ++b) {
      const int v = incidence[a][b];
      if (v != 0 && v != 1) fail(ErrorKind::kValidation, "incidence entries must be 0 or 1");
      incidence_[a * n + b] = static_cast<std::uint8_t>(v);
      if (v) successors_[a].push_back(static_cast<Symbol>(b));
    }
    if (successors_[a].empty()) {
      fail(ErrorKind::kValidation,
           "incidence row of symbol '" + names_[a] + "' has no allowed successor");
    }
  }
}

Sft Sft::full(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return Sft(std::move(names), std::vector<std::vector<int>>(static_cast<std::size_t>(n),
                                                            std::vector<int>(static_cast<std::size_t>(n), 1)));
}

std::optional<Symbol> Sft::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<Symbol>(i);
  }
  return std::nullopt;
}

Word Sft::parse_word(std::string_view text) const {
  Word word;
  auto lookup = [&](std::string_view token) {
    auto s = find(token);
    if (!s) fail(ErrorKind::kValidation, "unknown symbol '" + std::string(token) + "'");
    word.push_back(*s);
  };
  const bool has_separator = text.find_first_of(", \t") != std::string_view::npos;
  if (single_char_names_ && !has_separator) {
    for (char c : text) lookup(std::string_view(&c, 1));
    return word;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find_first_of(", \t", pos), text.size());
    if (end > pos) lookup(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return word;
}

std::string Sft::format(WordView word) const {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!single_char_names_ && i > 0) out += ',';
    out += name(word[i]);
  }
  return out;
}

InfixSet::InfixSet(int alphabet_size, std::vector<Word> words) : n_(alphabet_size), words_(std::move(words)) {
  for (const auto& w : words_) norm_ = std::max(norm_, w.size());
}

std::vector<Word> InfixSet::distinct() const {
  std::vector<Word> out = words_;
  std::sort(out.begin(), out.end(), [](const Word& x, const Word& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_symbols(WordView word, const Sft& sft) {
  for (Symbol s : word) {
    if (s < 0 || s >= sft.size()) {
      fail(ErrorKind::kValidation, "symbol index " + std::to_string(s) + " out of range");
    }
  }
}

bool is_admissible(WordView word, const Sft& sft) {
  check_symbols(word, sft);
  for (std::size_t i = 1; i < word.size(); ++i) {
    if (!sft.allowed(word[i - 1], word[i])) return false;
  }
  return true;
}

bool is_cyclically_admissible(WordView word, const Sft& sft) {
  if (word.empty()) fail(ErrorKind::kValidation, "cyclic admissibility is defined for non-empty words only");
  return is_admissible(word, sft) && sft.allowed(word.back(), word.front());
}

namespace {

using BoolMatrix = std::vector<std::uint8_t>;

BoolMatrix bool_product(const BoolMatrix& x, const BoolMatrix& y, std::size_t n) {
  BoolMatrix z(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (x[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (y[k * n + j]) z[i * n + j] = 1;
  return z;
}

BoolMatrix incidence_matrix(const Sft& sft) {
  const auto n = static_cast<std::size_t>(sft.size());
  BoolMatrix a(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (Symbol j : sft.successors(static_cast<Symbol>(i))) a[i * n + static_cast<std::size_t>(j)] = 1;
  return a;
}

bool all_positive(const BoolMatrix& m) {
  return std::all_of(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; });
}

// Least k >= 1 with A^k strictly positive, if any k up to the Wielandt bound.
std::optional<int> primitivity_exponent(const Sft& sft) {
  const auto n = static_cast<std::size_t>(sft.size());
  const int bound = static_cast<int>((n - 1) * (n - 1) + 1);
  const BoolMatrix a = incidence_matrix(sft);
  BoolMatrix power = a;
  for (int k = 1; k <= bound; ++k) {
    if (all_positive(power)) return k;
    power = bool_product(power, a, n);
  }
  return std::nullopt;
}

void require_mixing(const Sft& sft, const char* what) {
  if (!is_mixing(sft)) {
    fail(ErrorKind::kUnsupportedSpec, std::string(what) + " requires a topologically mixing shift");
  }
}

}  // namespace

bool is_mixing(const Sft& sft) { return primitivity_exponent(sft).has_value(); }

InfixSet connecting_words(const Sft& sft) {
  require_mixing(sft, "connecting_words");
  const int n = sft.size();
  constexpr int kInf = std::numeric_limits<int>::max();
  // dist[x][b]: least number of edges (>= 0) from x to b.
  std::vector<std::vector<int>> dist(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), kInf));
  for (Symbol b = 0; b < n; ++b) {
    // Reverse BFS from b.
    std::deque<Symbol> queue{b};
    dist[static_cast<std::size_t>(b)][static_cast<std::size_t>(b)] = 0;
    while (!queue.empty()) {
      const Symbol y = queue.front();
      queue.pop_front();
      for (Symbol x = 0; x < n; ++x) {
        auto& d = dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(b)];
        if (sft.allowed(x, y) && d == kInf) {
          d = dist[static_cast<std::size_t>(y)][static_cast<std::size_t>(b)] + 1;
          queue.push_back(x);
        }
      }
    }
  }
  std::vector<Word> words;
  words.reserve(static_cast<std::size_t>(n * n));
  for (Symbol a = 0; a < n; ++a) {
    for (Symbol b = 0; b < n; ++b) {
      // |rho| = min over successors c of a of dist(c, b). Walking greedily
      // through the smallest successor that stays on a shortest route gives
      // the lexicographically least shortest rho.
      int best = kInf;
      for (Symbol c : sft.successors(a)) best = std::min(best, dist[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)]);
      Word rho;
      Symbol cur = a;
      for (int remaining = best; remaining > 0; --remaining) {
        for (Symbol c : sft.successors(cur)) {
          if (dist[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)] == remaining) {
            rho.push_back(c);
            cur = c;
            break;
          }
        }
      }
      words.push_back(std::move(rho));
    }
  }
  return InfixSet(n, std::move(words));
}

int mixing_window(const Sft& sft) {
  auto k = primitivity_exponent(sft);
  if (!k) fail(ErrorKind::kUnsupportedSpec, "mixing_window requires a topologically mixing shift");
  return std::max(2, *k + 1);
}

void visit_words(const Sft& sft, int n, const std::function<bool(WordView)>& visit) {
  if (n < 0) fail(ErrorKind::kValidation, "word length must be non-negative");
  Word word;
  if (n == 0) {
    visit(word);
    return;
  }
  word.reserve(static_cast<std::size_t>(n));
  bool stop = false;
  std::function<void()> extend = [&]() {
    if (stop) return;
    if (static_cast<int>(word.size()) == n) {
      if (!visit(word)) stop = true;
      return;
    }
    if (word.empty()) {
      for (Symbol a = 0; a < sft.size() && !stop; ++a) {
        word.push_back(a);
        extend();
        word.pop_back();
      }
    } else {
      for (Symbol b : sft.successors(word.back())) {
        if (stop) break;
        word.push_back(b);
        extend();
        word.pop_back();
      }
    }
  };
  extend();
}

std::vector<Word> enumerate_words(const Sft& sft, int n, const Limits& limits) {
  std::vector<Word> out;
  visit_words(sft, n, [&](WordView w) {
    if (out.size() >= limits.max_words) {
      fail(ErrorKind::kCapacity, "enumerate_words: more than " + std::to_string(limits.max_words) +
                                     " admissible words of length " + std::to_string(n));
    }
    out.emplace_back(w.begin(), w.end());
    return true;
  });
  return out;
}

Word word_power(WordView word, int l, const Sft& sft) {
  if (l < 0) fail(ErrorKind::kValidation, "word power exponent must be non-negative");
  check_symbols(word, sft);
  if (l == 0 || word.empty()) return {};
  if (!is_admissible(word, sft)) fail(ErrorKind::kValidation, "word_power: word is not admissible");
  if (l >= 2 && !is_cyclically_admissible(word, sft)) {
    fail(ErrorKind::kValidation, "word_power: repetition of a word that is not cyclically admissible");
  }
  Word out;
  out.reserve(word.size() * static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) out.insert(out.end(), word.begin(), word.end());
  return out;
}

Word concat(std::initializer_list<WordView> parts) {
  Word out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

namespace {

std::size_t block_code(WordView block, int n) {
  std::size_t code = 0;
  for (Symbol s : block) code = code * static_cast<std::size_t>(n) + static_cast<std::size_t>(s);
  return code;
}

}  // namespace

HigherBlock::HigherBlock(const Sft& base, int depth, const Limits& limits)
    : base_(base), spec_(base), depth_(depth) {
  if (depth < 2) fail(ErrorKind::kValidation, "higher block recoding needs depth >= 2");
  require_mixing(base, "higher_block_recode");
  const int len = depth - 1;
  const int n = base.size();
  double table = 1.0;
  for (int i = 0; i < len; ++i) table *= n;
  if (table > static_cast<double>(limits.max_words)) {
    fail(ErrorKind::kCapacity, "higher_block_recode: block table too large");
  }
  index_.assign(static_cast<std::size_t>(table), -1);
  visit_words(base, len, [&](WordView w) {
    if (blocks_.size() >= limits.max_words) {
      fail(ErrorKind::kCapacity, "higher_block_recode: too many admissible blocks");
    }
    index_[block_code(w, n)] = static_cast<Symbol>(blocks_.size());
    blocks_.emplace_back(w.begin(), w.end());
    return true;
  });
  if (len == 1) return;  // identity recoding

  std::vector<std::string> names;
  names.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    std::string name;
    bool single = true;
    for (const auto& s : base.alphabet()) single = single && s.size() == 1;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!single && i > 0) name += '|';
      name += base.name(b[i]);
    }
    names.push_back(std::move(name));
  }
  std::vector<std::vector<int>> inc(blocks_.size(), std::vector<int>(blocks_.size(), 0));
  for (std::size_t u = 0; u < blocks_.size(); ++u) {
    const Word& bu = blocks_[u];
    for (Symbol c : base.successors(bu.back())) {
      Word next(bu.begin() + 1, bu.end());
      next.push_back(c);
      inc[u][static_cast<std::size_t>(index_[block_code(next, n)])] = 1;
    }
  }
  spec_ = Sft(std::move(names), inc);
}

std::optional<Symbol> HigherBlock::state_of(WordView block) const {
  if (static_cast<int>(block.size()) != block_length()) return std::nullopt;
  for (Symbol s : block)
    if (s < 0 || s >= base_.size()) return std::nullopt;
  const Symbol st = index_[block_code(block, base_.size())];
  if (st < 0) return std::nullopt;
  return st;
}

Symbol HigherBlock::next_state(Symbol state, Symbol appended) const {
  const Word& b = block(state);
  Word next(b.begin() + 1, b.end());
  next.push_back(appended);
  auto st = state_of(next);
  if (!st || !base_.allowed(b.back(), appended)) {
    fail(ErrorKind::kValidation, "next_state: inadmissible transition");
  }
  return *st;
}

Word HigherBlock::encode(WordView word) const {
  const int len = block_length();
  if (static_cast<int>(word.size()) < len) {
    fail(ErrorKind::kInsufficientContext, "encode: word shorter than the block length");
  }
  if (!is_admissible(word, base_)) fail(ErrorKind::kValidation, "encode: word is not admissible");
  Word out;
  out.reserve(word.size() - static_cast<std::size_t>(len) + 1);
  for (std::size_t i = 0; i + static_cast<std::size_t>(len) <= word.size(); ++i) {
    out.push_back(*state_of(word.subspan(i, static_cast<std::size_t>(len))));
  }
  return out;
}

Word HigherBlock::decode(WordView blocks) const {
  if (blocks.empty()) return {};
  if (!is_admissible(blocks, spec_)) fail(ErrorKind::kValidation, "decode: block word is not admissible");
  Word out = block(blocks.front());
  for (std::size_t i = 1; i < blocks.size(); ++i) out.push_back(block(blocks[i]).back());
  return out;
}

Word HigherBlock::edge_word(Symbol u, Symbol v) const {
  Word w = block(u);
  w.push_back(block(v).back());
  return w;
}

HigherBlock higher_block_recode(const Sft& sft, int depth, const Limits& limits) {
  return HigherBlock(sft, depth, limits);
}

}  // namespace symtherm
