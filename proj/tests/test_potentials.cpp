#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace symtherm;
using doctest::Approx;

namespace {
Word w(const Sft& s, const char* t) { return s.parse_word(t); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kValidation;
}

Potential gold_f() {
  const Sft g = oracle::gold();
  return Potential::from_table(g, 2, {{w(g, "00"), 1.0}, {w(g, "01"), 2.0}, {w(g, "10"), -1.0}});
}

// max |S_n f(x) - S_n f(y)| over pairs sharing n symbols, n <= max_n
double distortion_brute(const Potential& f, int max_n) {
  const Sft& s = f.sft();
  const int ext = f.depth() - 1;
  double best = 0;
  for (int n = 1; n <= max_n; ++n) {
    for (const auto& x : oracle::brute_words(s, n + ext)) {
      for (const auto& y : oracle::brute_words(s, n + ext)) {
        if (!std::equal(x.begin(), x.begin() + n, y.begin())) continue;
        best = std::max(best, std::abs(birkhoff_sum(f, x, n) - birkhoff_sum(f, y, n)));
      }
    }
  }
  return best;
}
}  // namespace

TEST_CASE("birkhoff sums") {
  const Sft f2 = Sft::full(2);
  const Potential phi = oracle::bin14_phi(f2);
  CHECK(birkhoff_sum(phi, w(f2, "01"), 2) == Approx(std::log(3.0 / 16.0)).epsilon(1e-14));
  CHECK(birkhoff_sum(phi, w(f2, "01"), 0) == 0.0);
  const Potential g = gold_f();
  CHECK(birkhoff_sum(g, w(g.sft(), "010"), 2) == 1.0);
  CHECK(kind_of([&] { birkhoff_sum(g, w(g.sft(), "01"), 2); }) == ErrorKind::kInsufficientContext);
}

TEST_CASE("word sum bounds") {
  const Sft f2 = Sft::full(2);
  const auto b = word_sum_bounds(oracle::bin14_phi(f2), w(f2, "01"));
  CHECK(b.sup == Approx(std::log(3.0 / 16.0)));
  CHECK(b.inf == Approx(std::log(3.0 / 16.0)));
  const Potential g = gold_f();
  const auto b0 = word_sum_bounds(g, w(g.sft(), "0"));
  CHECK(b0.sup == 2.0);
  CHECK(b0.inf == 1.0);
  const auto b10 = word_sum_bounds(g, w(g.sft(), "10"));
  CHECK(b10.sup == 1.0);
  CHECK(b10.inf == 0.0);
}

TEST_CASE("distortion constant") {
  const Sft f2 = Sft::full(2);
  CHECK(distortion_constant(oracle::bin14_phi(f2)) == 0.0);
  CHECK(distortion_constant(gold_f()) == Approx(1.0));
  CHECK(distortion_brute(gold_f(), 7) == Approx(1.0));
  CHECK(distortion_constant(Potential::constant(oracle::gold(), 3.0)) == 0.0);
}

TEST_CASE("norm and combine") {
  const Sft f2 = Sft::full(2);
  const Potential phi = oracle::bin14_phi(f2), psi = oracle::log2_psi(f2);
  CHECK(sup_norm(phi) == Approx(std::log(4.0)));
  const Potential c = combine(1, phi, 2, psi);
  CHECK(c(Word{0}) == Approx(0.0).epsilon(1e-15));
  const Potential z = combine(0, phi, 0, psi);
  for (const auto& [word, v] : z.entries()) CHECK(v == 0.0);
  CHECK(kind_of([&] { combine(1, phi, 1, gold_f()); }) == ErrorKind::kValidation);
  // depth alignment
  const Potential m = combine(1, gold_f(), 1, Potential::constant(oracle::gold(), 1.0));
  CHECK(m.depth() == 2);
  CHECK(m(w(oracle::gold(), "10")) == 0.0);
}

TEST_CASE("potential table validation") {
  const Sft g = oracle::gold();
  CHECK(kind_of([&] { Potential::from_table(g, 2, {{w(g, "00"), 1.0}}); }) == ErrorKind::kValidation);
  CHECK(kind_of([&] {
          Potential::from_table(g, 2, {{w(g, "00"), 1.0}, {w(g, "01"), 1.0}, {w(g, "10"), 1.0}, {w(g, "11"), 1.0}});
        }) == ErrorKind::kValidation);
  CHECK(kind_of([&] { Potential::symbolwise(g, {1.0, NAN}); }) == ErrorKind::kValidation);
}

TEST_CASE("d_psi") {
  const Sft f2 = Sft::full(2);
  const Potential psi = oracle::log2_psi(f2);
  CHECK(d_psi(psi, w(f2, "0111"), w(f2, "0100")) == Approx(0.25));
  CHECK(d_psi(Potential::constant(f2, 1.0), w(f2, "0111"), w(f2, "0100")) == Approx(std::exp(-2.0)));
  CHECK(d_psi(psi, w(f2, "0111"), w(f2, "1100")) == 1.0);
  CHECK(kind_of([&] { d_psi(psi, w(f2, "0101"), w(f2, "0101")); }) == ErrorKind::kIndeterminate);
}

TEST_CASE("cylinder diameter") {
  const Sft f2 = Sft::full(2);
  CHECK(cylinder_diam_psi(oracle::log2_psi(f2), w(f2, "01")) == Approx(0.25));
  const Sft g = oracle::gold();
  CHECK(cylinder_diam_psi(Potential::constant(g, 1.0), w(g, "1")) == Approx(std::exp(-2.0)));
  CHECK(cylinder_diam_psi(oracle::log2_psi(f2), Word{}) == 1.0);
}

TEST_CASE("word sum bounds agree with brute force and sandwich every extension") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 12; ++t) {
    const Sft s = oracle::random_mixing_sft(rng, 2 + t % 2);
    const int depth = 1 + t % 3;
    const Potential f = oracle::random_potential(rng, s, depth, -1.0, 1.0);
    const double V = distortion_constant(f);
    CHECK(V == Approx(distortion_brute(f, 4)).epsilon(1e-12));
    for (int n = 1; n <= (s.size() == 2 ? 8 : 6); ++n) {
      for (const auto& x : enumerate_words(s, n)) {
        const auto b = word_sum_bounds(f, x);
        const auto [sup, inf] = oracle::cylinder_sum_range(f, x);
        CHECK(b.sup == Approx(sup).epsilon(1e-12));
        CHECK(b.inf == Approx(inf).epsilon(1e-12));
        CHECK(b.inf <= b.sup);
        CHECK(b.sup - b.inf <= V + 1e-12);
      }
    }
  }
}

TEST_CASE("cocycle properties") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 8; ++t) {
    const Sft s = oracle::random_mixing_sft(rng, 3);
    const Potential f = oracle::random_potential(rng, s, 2, -2.0, 2.0);
    const double V = distortion_constant(f);
    const auto ws = enumerate_words(s, 3);
    for (const auto& a : ws) {
      for (const auto& b : ws) {
        if (!s.allowed(a.back(), b.front())) continue;
        const Word ab = concat({a, b});
        CHECK(word_sum_bounds(f, ab).sup <= word_sum_bounds(f, a).sup + word_sum_bounds(f, b).sup + V + 1e-12);
        // exact additivity of Birkhoff sums: 3 + 2 on a 6-symbol prefix
        const double whole = birkhoff_sum(f, ab, 5);
        const double split = birkhoff_sum(f, ab, 3) + birkhoff_sum(f, WordView(ab).subspan(3), 2);
        CHECK(whole == Approx(split).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("d_psi metric properties") {
  std::mt19937_64 rng(13);
  const Sft s = Sft::full(3);
  const Potential psi = oracle::random_potential(rng, s, 1, 0.2, 2.0);
  const auto ws = enumerate_words(s, 5);
  for (std::size_t i = 0; i < ws.size(); i += 7) {
    for (std::size_t j = i + 1; j < ws.size(); j += 5) {
      const double d = d_psi(psi, ws[i], ws[j]);
      CHECK(d == d_psi(psi, ws[j], ws[i]));
      std::size_t c = 0;
      while (ws[i][c] == ws[j][c]) ++c;
      const double log_d1 = -static_cast<double>(c);
      CHECK(psi.max_value() * log_d1 <= std::log(d) + 1e-12);
      CHECK(std::log(d) <= psi.min_value() * log_d1 + 1e-12);
    }
  }
  // longer common block, strictly smaller distance
  CHECK(d_psi(psi, Word{0, 1, 2, 0}, Word{0, 1, 2, 1}) < d_psi(psi, Word{0, 1, 0, 0}, Word{0, 1, 2, 1}));
}
