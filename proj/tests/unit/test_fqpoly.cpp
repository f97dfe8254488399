#include "doctest.h"
#include "twistlab/error.hpp"
#include "twistlab/fqpoly.hpp"

using namespace twistlab;

TEST_CASE("basic ring arithmetic") {
  PolyRing R(5);
  Poly a = R.parse("1,2,3");
  Poly b = R.parse("4,1");
  Poly prod = R.mul(a, b);
  auto dr = R.divrem(prod, b);
  CHECK(dr.quotient == a);
  CHECK(dr.remainder.is_zero());
  CHECK(PolyRing::format(a) == "1,2,3");
  CHECK(PolyRing::format(Poly{}) == "0");
  CHECK(R.parse("-1,0,6") == Poly{4, 0, 1});
  CHECK_THROWS_AS(R.parse("1,x"), Error);
  CHECK(Poly{}.degree() == -1);
  CHECK_THROWS_AS(R.gcd(Poly{}, Poly{}), Error);
  CHECK_THROWS_AS(R.divrem(a, Poly{}), Error);
}

TEST_CASE("gcd and squarefree") {
  PolyRing R(5);
  Poly x = R.parse("1,1");
  Poly y = R.parse("2,1");
  Poly f = R.mul(R.mul(x, x), y);
  CHECK_FALSE(R.is_squarefree(f));
  CHECK(R.is_squarefree(R.mul(x, y)));
  CHECK(R.gcd(f, R.mul(y, R.parse("3,1"))) == y);
  CHECK(R.is_squarefree(R.parse("3")));
  CHECK_THROWS_AS(R.is_squarefree(Poly{}), Error);
  // t^5 - t is squarefree, t^5 is not.
  CHECK(R.is_squarefree(R.parse("0,4,0,0,0,1")));
  CHECK_FALSE(R.is_squarefree(R.parse("0,0,0,0,0,1")));
  CHECK_FALSE(R.is_squarefree(R.parse("1,0,0,0,0,1")));
}

TEST_CASE("prime counts match the necklace formula") {
  PolyRing R(5);
  for (int d = 1; d <= 6; ++d) {
    const auto& P = iter_primes(R, d);
    CHECK(P.size() == PrimeIndex::necklace_count(5, d));
    for (std::size_t i = 0; i < P.size(); i += 37) CHECK(R.is_irreducible(P[i]));
    for (std::size_t i = 1; i < P.size(); ++i) CHECK(poly_less(P[i - 1], P[i]));
  }
  CHECK(iter_primes(R, 2).front() == Poly{2, 0, 1});
  CHECK(PrimeIndex::necklace_count(5, 9) == 217000);
}

TEST_CASE("factorisation") {
  PolyRing R(5);
  Poly d = R.parse("3,0,0,1");  // t^3 + 3 = (t + 2)(t^2 + 3t + 4)
  auto fac = R.factor(d);
  REQUIRE(fac.size() == 2);
  CHECK(fac[0].first == Poly{2, 1});
  CHECK(fac[1].first == Poly{4, 3, 1});
  Poly g = R.mul(R.pow(Poly{1, 1}, 3), Poly{2, 0, 1});
  auto f2 = R.factor(R.scale(g, 3));
  REQUIRE(f2.size() == 2);
  CHECK(f2[0].second == 3);
  CHECK(f2[1].first == Poly{2, 0, 1});
}

TEST_CASE("family stream") {
  PolyRing R(5);
  Poly M = R.parse("3,0,0,1");
  // Monic squarefree of degree 2 coprime to M.
  auto fam = collect_family(R, 2, M);
  std::size_t brute = 0;
  for (std::uint64_t i = 0; i < 25; ++i) {
    Poly D = R.monic_from_index(2, i);
    if (R.is_squarefree(D) && R.coprime(D, M)) ++brute;
  }
  CHECK(fam.size() == brute);
  CHECK(fam.size() == 15);
  CHECK_THROWS_AS(collect_family(R, 2, M, Poly{2, 1}), Error);
  auto cls = collect_family(R, 3, M, Poly{1});
  for (const auto& D : cls) CHECK(R.rem(D, M) == Poly{1});
}

TEST_CASE("residue map") {
  PolyRing R(5);
  Poly P = R.parse("2,0,1");
  ResidueMap rm = residue_map(R, P);
  CHECK(rm((P)) == 0);
  CHECK(rm(Poly{3}) == 3);
  const auto& F = rm.field();
  Poly a = R.parse("1,4,2"), b = R.parse("3,1");
  CHECK(rm(R.mul(a, b)) == F.mul(rm(a), rm(b)));
  CHECK(rm(R.add(a, b)) == F.add(rm(a), rm(b)));
}
