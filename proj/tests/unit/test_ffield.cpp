#include "doctest.h"
#include "twistlab/error.hpp"
#include "twistlab/ffield.hpp"

using namespace twistlab;

TEST_CASE("prime field characters") {
  FieldTable f5(FieldSpec(5), 1);
  CHECK(f5.quad_char(4) == 1);
  CHECK(f5.quad_char(1) == 1);
  CHECK(f5.quad_char(2) == -1);
  CHECK(f5.quad_char(3) == -1);
  CHECK(f5.quad_char(0) == 0);
  CHECK(f5.generator() == 2);

  FieldTable f7(FieldSpec(7), 1);
  // 3 is the least primitive root mod 7; 2 = 3^2.
  CHECK(f7.ell_char(2, 3).value() == 2);
  CHECK_FALSE(f7.ell_char(0, 3).has_value());
  CHECK_THROWS_AS(f7.ell_char(2, 4), Error);
}

TEST_CASE("characteristic validation") {
  CHECK_THROWS_AS(FieldSpec(9), Error);
  CHECK_THROWS_AS(FieldSpec(3), Error);
  try {
    FieldSpec s(15);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPrime);
  }
}

TEST_CASE("least irreducible polynomials") {
  CHECK(least_irreducible(5, 2) == std::vector<std::uint32_t>{2, 0, 1});
  CHECK(least_irreducible(7, 2) == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(least_primitive_root(5) == 2);
  CHECK(least_primitive_root(7) == 3);
}

TEST_CASE("log tables agree with direct arithmetic") {
  for (int d : {2, 3, 4}) {
    FieldTable tab(FieldSpec(5), d);
    FieldTable dir(FieldSpec(5), d, 0);
    REQUIRE(tab.has_log_tables());
    REQUIRE_FALSE(dir.has_log_tables());
    const Elem Q = tab.size();
    for (Elem x = 0; x < Q; x += 3) {
      for (Elem y = 1; y < Q; y += 7) {
        CHECK(tab.mul(x, y) == dir.mul(x, y));
        CHECK(tab.add(x, y) == dir.add(x, y));
        CHECK(tab.sub(x, y) == dir.sub(x, y));
      }
      CHECK(tab.quad_char(x) == dir.quad_char(x));
      if (x) {
        CHECK(tab.mul(x, tab.inv(x)) == 1);
        CHECK(dir.mul(x, dir.inv(x)) == 1);
        CHECK(tab.exp(tab.log(x)) == x);
      }
    }
  }
}

TEST_CASE("frobenius fixes the prime field") {
  FieldTable f(FieldSpec(5), 3);
  for (Elem x = 0; x < 5; ++x) CHECK(f.frobenius(x) == x);
  Elem x = 17;
  Elem y = x;
  for (int i = 0; i < 3; ++i) y = f.frobenius(y);
  CHECK(y == x);
}

TEST_CASE("residue symbol index") {
  FieldTable f7(FieldSpec(7), 1);
  // g_1 = 3, zeta = 2 and 3^{(7-1)/3} = 2
  CHECK(f7.residue_symbol_index(3, 3).value() == 1);
  CHECK(f7.residue_symbol_index(2, 3).value() == 2);
  CHECK(f7.residue_symbol_index(6, 3).value() == 0);
  CHECK(!f7.residue_symbol_index(0, 3));
  FieldTable f5(FieldSpec(5), 1);
  CHECK(f5.residue_symbol_index(2, 2).value() == 1);
  CHECK(f5.residue_symbol_index(4, 2).value() == 0);
}

TEST_CASE("budget") {
  CHECK_THROWS_AS(FieldTable(FieldSpec(5), 20), Error);
}
