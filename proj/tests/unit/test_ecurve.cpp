#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "twistlab/ecurve.hpp"
#include "twistlab/error.hpp"

using namespace twistlab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("reference curve over F_5") {
  PolyRing R(5);
  CurveData E = build_curve(R, Poly{0, 1}, Poly{1});
  CHECK(E.Delta == Poly{3, 0, 0, 1});
  CHECK(E.c4 == Poly{0, 2});
  CHECK(E.finite_conductor == Poly{3, 0, 0, 1});
  CHECK(E.mult_part == Poly{3, 0, 0, 1});
  CHECK(E.f_inf == 2);
  CHECK(E.infinity_k == 1);
  CHECK(E.deg_N_E == 5);
  CHECK(E.twist_degree(1) == 3);
  REQUIRE(E.bad_primes.size() == 2);
  for (const auto& bp : E.bad_primes) CHECK(bp.exponent == 1);
  CHECK(reduction_type(R, E, Poly{0, 1}) == Reduction::Good);
  CHECK(reduction_type(R, E, Poly{2, 1}) != Reduction::Good);
  CHECK(reduction_type(R, E, Poly{2, 1}) != Reduction::Additive);
}

TEST_CASE("standing hypotheses are enforced") {
  PolyRing R(5);
  CHECK(code_of([&] { build_curve(R, Poly{}, Poly{0, 1}); }) == ErrorCode::ZeroJInvariant);
  // A = -3c^2, B = 2c^3 with c = t + 1
  Poly c{1, 1};
  Poly A = R.scale(R.mul(c, c), R.mod(-3));
  Poly B = R.scale(R.pow(c, 3), 2);
  CHECK(code_of([&] { build_curve(R, A, B); }) == ErrorCode::SingularCurve);
  // y^2 = x^3 + t^4 x + t^6 is not minimal at t.
  CHECK(code_of([&] { build_curve(R, Poly{0, 0, 0, 0, 1}, Poly{1, 0, 0, 0, 0, 0, 1}); }) !=
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] {
          build_curve(R, R.mul(Poly{0, 0, 0, 0, 1}, Poly{1}), R.mul(Poly{0, 0, 0, 0, 0, 0, 1}, Poly{2}));
        }) == ErrorCode::NonMinimalModel);
  // Constant coefficients: good at infinity, no multiplicative prime.
  CHECK(code_of([&] { build_curve(R, Poly{1}, Poly{1}); }) == ErrorCode::NoMultiplicativePrime);
  // y^2 = x^3 + x + t has multiplicative primes and multiplicative reduction
  // at infinity (k = 1: v(A'') = 4, v(B'') = 5, v(Delta'') = 10 > 0, v(c4'') > 0)
  // so it is additive; A = t^4 + 1, B = t^6 + t gives k = 1 with v(A'') = 0.
  CHECK(code_of([&] { build_curve(R, Poly{1, 0, 0, 0, 1}, Poly{0, 1, 0, 0, 0, 0, 1}); }) ==
        ErrorCode::NotAdditiveAtInfinity);
}

TEST_CASE("a_P at degree one by hand") {
  PolyRing R(5);
  CurveData E = build_curve(R, Poly{0, 1}, Poly{1});
  auto F1 = FieldRegistry::instance().get(5, 1);
  // y^2 = x^3 + 1 over F_5 has 6 points.
  CHECK(fiber_point_count(*F1, 0, 1) == 6);
  CHECK(a_p(R, E, Poly{0, 1}, *F1) == 0);
  auto F2 = FieldRegistry::instance().get(5, 2);
  CHECK_THROWS_AS(a_p(R, E, Poly{0, 1}, *F2), Error);
}

TEST_CASE("fiber traces: Hasse, extension relation, singular fibers") {
  for (std::uint32_t p : {5u, 7u}) {
    auto F1 = FieldRegistry::instance().get(p, 1);
    auto F2 = FieldRegistry::instance().get(p, 2);
    auto F3 = FieldRegistry::instance().get(p, 3);
    for (Elem a = 0; a < p; ++a)
      for (Elem b = 0; b < p; ++b) {
        const std::int64_t t1 = fiber_trace(*F1, a, b, 1 << 20, 1);
        const Reduction ty = fiber_type(*F1, a, b);
        // Singular fibers: trace equals q + 1 - #points (node/cusp included).
        CHECK(t1 == static_cast<std::int64_t>(p) + 1 - fiber_point_count(*F1, a, b));
        if (ty != Reduction::Good) continue;
        CHECK(std::abs(t1) * std::abs(t1) <= 4 * static_cast<std::int64_t>(p));
        const std::int64_t q = p;
        const std::int64_t e2 = t1 * t1 - 2 * q;
        const std::int64_t e3 = t1 * t1 * t1 - 3 * q * t1;
        CHECK(fiber_trace(*F2, a, b, 1 << 20, 1) == e2);
        CHECK(fiber_trace(*F3, a, b, 1 << 20, 1) == e3);
      }
  }
}

TEST_CASE("BSGS agrees with brute force") {
  for (int d : {4, 5, 6}) {
    auto F = FieldRegistry::instance().get(5, d);
    std::uint64_t s = 12345;
    int checked = 0;
    while (checked < 60) {
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      const Elem a = (s >> 20) % F->size(), b = (s >> 3) % F->size();
      if (fiber_type(*F, a, b) != Reduction::Good) continue;
      CHECK(fiber_trace_bsgs(*F, a, b, s) == -fiber_char_sum(*F, a, b));
      ++checked;
    }
  }
  auto F7 = FieldRegistry::instance().get(5, 7);
  for (Elem a : {Elem{3}, Elem{777}, Elem{40000}}) {
    const Elem b = (a * 7 + 11) % F7->size();
    if (fiber_type(*F7, a, b) != Reduction::Good) continue;
    CHECK(fiber_trace_bsgs(*F7, a, b, 9) == -fiber_char_sum(*F7, a, b));
  }
}

TEST_CASE("a_P table") {
  PolyRing R(5);
  CurveData E = build_curve(R, Poly{0, 1}, Poly{1});
  ApTable t = build_ap_table(R, E, 4);
  CHECK(t.primes(1).size() == 5);
  CHECK(t.primes(1)[0].P == Poly{0, 1});
  CHECK(t.primes(4).size() == 150);
  for (int d = 1; d <= 4; ++d) {
    auto F = FieldRegistry::instance().get(5, d);
    for (const auto& e : t.primes(d)) {
      CHECK(e.a == a_p(R, E, e.P, *F));
      if (e.type == Reduction::Good) {
        CHECK(static_cast<double>(e.a * e.a) <= 4 * std::pow(5.0, d));
      } else {
        CHECK(std::abs(e.a) == 1);
      }
    }
  }
  CHECK(t.lookup(Poly{2, 1}).has_value());
  CHECK_FALSE(t.lookup(Poly{2, 0, 0, 0, 0, 1}).has_value());
  CHECK_THROWS_AS(t.primes(5), Error);
  CHECK_THROWS_AS(build_ap_table(R, E, 10), Error);

  const auto dir = std::filesystem::temp_directory_path() / "twistlab_aptable_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "e0.txt").string();
  t.save(path);
  ApTable u = ApTable::load(path, R);
  CHECK(u == t);
  CHECK(u.serialize() == t.serialize());
  u.attach_roots(R);
  for (int d = 1; d <= 4; ++d)
    for (std::size_t i = 0; i < u.primes(d).size(); ++i)
      CHECK(u.primes(d)[i].root == t.primes(d)[i].root);

  std::string text = t.serialize();
  text[text.size() - 3] = text[text.size() - 3] == '1' ? '2' : '1';
  CHECK(code_of([&] { ApTable::parse(text, R); }) == ErrorCode::CacheCorrupt);
  CHECK(code_of([&] { ApTable::parse("p=5\n", R); }) == ErrorCode::CacheCorrupt);
  std::filesystem::remove_all(dir);
}
