#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "twistlab/characters.hpp"
#include "twistlab/error.hpp"

using namespace twistlab;

namespace {

Poly random_poly(std::mt19937_64& rng, std::uint32_t p, int deg, bool monic) {
  std::vector<std::uint32_t> c(static_cast<std::size_t>(deg) + 1);
  for (auto& x : c) x = static_cast<std::uint32_t>(rng() % p);
  if (monic) c.back() = 1;
  else if (c.back() == 0) c.back() = 1;
  return Poly(std::move(c));
}

}  // namespace

TEST_CASE("quadratic symbol examples") {
  PolyRing R(5);
  CHECK(quad_eval(R, Poly{0, 1}, Poly{2, 1}) == -1);
  CHECK(quad_eval(R, Poly{2, 1}, R.mul(Poly{2, 1}, Poly{3})) == 0);
  CHECK(quad_eval(R, Poly{1}, Poly{3}) == 1);
}

TEST_CASE("fast quadratic symbol agrees with exponentiation oracle") {
  for (std::uint32_t p : {5u, 7u, 11u}) {
    PolyRing R(p);
    std::mt19937_64 rng(17 + p);
    int checked = 0;
    while (checked < 1000) {
      Poly D = random_poly(rng, p, 1 + static_cast<int>(rng() % 5), true);
      if (!R.is_squarefree(D)) continue;
      Poly f = random_poly(rng, p, static_cast<int>(rng() % 8), false);
      CHECK(quad_eval(R, D, f) == quad_eval_slow(R, D, f));
      ++checked;
    }
  }
}

TEST_CASE("reciprocity on prime pairs") {
  for (std::uint32_t p : {5u, 7u}) {
    PolyRing R(p);
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b) {
        const auto& PA = iter_primes(R, a);
        const auto& PB = iter_primes(R, b);
        for (std::size_t i = 0; i < PA.size(); i += 3)
          for (std::size_t j = 0; j < PB.size(); j += 5) {
            if (PA[i] == PB[j]) continue;
            const int expect = ((a * b * (p - 1) / 2) % 2) ? -1 : 1;
            CHECK(quad_eval_slow(R, PA[i], PB[j]) * quad_eval_slow(R, PB[j], PA[i]) == expect);
          }
      }
  }
}

TEST_CASE("complete multiplicativity") {
  PolyRing R(7);
  std::mt19937_64 rng(5);
  EllChar chi{3, {{Poly{0, 1}, 1}, {Poly{1, 0, 1}, 2}}};
  for (int i = 0; i < 200; ++i) {
    Poly f = random_poly(rng, 7, static_cast<int>(rng() % 5), false);
    Poly g = random_poly(rng, 7, static_cast<int>(rng() % 5), false);
    Poly D = Poly{3, 0, 2, 1};
    if (!R.is_squarefree(D)) continue;
    CHECK(quad_eval(R, D, R.mul(f, g)) == quad_eval(R, D, f) * quad_eval(R, D, g));
    auto a = ell_eval(R, chi, f), b = ell_eval(R, chi, g), ab = ell_eval(R, chi, R.mul(f, g));
    if (a && b) {
      REQUIRE(ab.has_value());
      CHECK(*ab == (*a + *b) % 3);
    } else {
      CHECK_FALSE(ab.has_value());
    }
  }
}

TEST_CASE("order-3 residue symbol") {
  PolyRing R(7);
  EllChar chi{3, {{Poly{0, 1}, 1}}};
  CHECK(ell_eval(R, chi, Poly{1}).value() == 0);
  CHECK_FALSE(ell_eval(R, chi, Poly{0, 5}).has_value());
  // 3^{(7-1)/3} = 2 = zeta^1 with zeta = 3^2 = 2.
  CHECK(ell_eval(R, chi, Poly{3, 1}).value() == 1);
  CHECK(parity(R, chi) == Parity::Odd);
  PolyRing R5(5);
  CHECK_THROWS_AS(ell_eval(R5, EllChar{3, {{Poly{0, 1}, 1}}}, Poly{2}), Error);
}

TEST_CASE("residue symbol through the residue field") {
  PolyRing R(7);
  for (int d = 1; d <= 2; ++d) {
    for (const Poly& Q : iter_primes(R, d)) {
      const ResidueMap rm = residue_map(R, Q);
      for (std::uint64_t i = 0; i < 60; ++i) {
        const Poly f = R.monic_from_index(3, i * 5 + 1);
        CHECK(rm.field().residue_symbol_index(rm(f), 3) == residue_symbol(R, Q, f, 3));
      }
    }
  }
}

TEST_CASE("parity of quadratic characters") {
  PolyRing R(5);
  CHECK(parity(R, QuadChar{Poly{1, 0, 1}}) == Parity::Even);   // (t^2 + 1), q = 1 mod 4
  CHECK(parity(R, QuadChar{Poly{0, 1}}) == Parity::Odd);
  PolyRing R7(7);
  CHECK(parity(R7, QuadChar{Poly{6, 0, 1}}) == Parity::Even);
}

TEST_CASE("e_q") {
  PolyRing R(5);
  const double tp = 2 * std::numbers::pi;
  CHECK(std::abs(e_q(R, Poly{1}, Poly{0, 1}) - std::polar(1.0, tp / 5)) < 1e-12);
  CHECK(std::abs(e_q(R, Poly{1}, Poly{0, 0, 1}) - cd{1, 0}) < 1e-12);
  CHECK(std::abs(e_q(R, Poly{2, 1}, Poly{0, 1}) - std::polar(1.0, 2 * tp / 5)) < 1e-12);
  CHECK_THROWS_AS(e_q(R, Poly{1}, Poly{}), Error);
  // Against the closed form via A mod F.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    Poly F = random_poly(rng, 5, 1 + static_cast<int>(rng() % 4), false);
    Poly A = random_poly(rng, 5, static_cast<int>(rng() % 8), false);
    Poly r = R.rem(A, F);
    std::uint32_t expect = 0;
    if (r.degree() == F.degree() - 1)
      expect = static_cast<std::uint32_t>(std::uint64_t{r.lead()} * R.inv(F.lead()) % 5);
    CHECK(laurent_inverse_t(R, A, F) == expect);
  }
}

TEST_CASE("L-polynomials of characters obey the Riemann hypothesis") {
  PolyRing R(5);
  for (int n = 1; n <= 4; ++n) {
    for (const Poly& D : collect_family(R, n, Poly{1})) {
      auto L = char_L_poly(R, QuadChar{D});
      const bool even = n % 2 == 0;
      CHECK(L.parity == (even ? Parity::Even : Parity::Odd));
      CHECK(L.M == (even ? n - 2 : n - 1));
      CHECK(L.max_root_deviation < 1e-9);
    }
  }
  CHECK(char_L_poly(R, QuadChar{Poly{0, 1}}).coeffs.size() == 1);
  CHECK_THROWS_AS(char_L_poly(R, QuadChar{Poly{1}}), Error);
}

TEST_CASE("Gauss sums and duality") {
  PolyRing R(5);
  auto g = gauss_sum(R, QuadChar{Poly{0, 1}});
  CHECK(std::abs(std::abs(g.G) - std::sqrt(5.0)) < 1e-12);
  for (int n = 1; n <= 3; ++n)
    for (const Poly& D : collect_family(R, n, Poly{1})) {
      Character chi = QuadChar{D};
      auto gd = gauss_sum(R, chi);
      auto L = char_L_poly(R, chi);
      CHECK(std::abs(std::abs(gd.G) - std::pow(5.0, n / 2.0)) < 1e-9);
      CHECK(std::abs(gd.omega - cd{1, 0}) < 1e-9);
      CHECK(std::abs(gd.omega_roots - gd.omega) < 1e-9);
      for (int j = 0; j <= n; ++j) CHECK(duality_residual(R, chi, j, L, gd) < 1e-8);
    }
  PolyRing R7(7);
  for (int n = 1; n <= 2; ++n)
    for (const EllChar& chi : enumerate_ell_chars(R7, 3, n, Poly{1})) {
      auto gd = gauss_sum(R7, chi);
      auto L = char_L_poly(R7, chi);
      CHECK(L.max_root_deviation < 1e-9);
      CHECK(std::abs(std::abs(gd.omega) - 1) < 1e-9);
      CHECK(std::abs(gd.omega_roots - gd.omega) < 1e-9);
      for (int j = 0; j < n; ++j) CHECK(duality_residual(R7, chi, j, L, gd) < 1e-8);
    }
}

TEST_CASE("order-3 character census") {
  PolyRing R7(7);
  // Degree 1: 7 primes, 2 characters each.
  CHECK(enumerate_ell_chars(R7, 3, 1, Poly{1}).size() == 14);
  // Degree 2: 21 irreducible quadratics x 2 plus 21 products of linears x 4.
  CHECK(enumerate_ell_chars(R7, 3, 2, Poly{1}).size() == 126);
}
