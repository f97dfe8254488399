#include <cmath>
#include <numbers>

#include "doctest.h"
#include "twistlab/error.hpp"
#include "twistlab/famstats.hpp"

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

struct E0 {
  PolyRing R{5};
  CurveData E = build_curve(R, Poly{0, 1}, Poly{1});
};

}  // namespace

TEST_CASE("Fejer test function") {
  TestFunction f(0.75);
  CHECK(f.phi_hat(0) == doctest::Approx(1 / 0.75));
  CHECK(f.phi(0) == 1.0);
  CHECK(f.phi_hat(0.75) == 0.0);
  CHECK(f.phi_hat(2.0) == 0.0);
  CHECK(f.phi_hat(0.3) == f.phi_hat(-0.3));
  CHECK(f.phi(1.7) == doctest::Approx(f.phi(-1.7)));
  // phi_hat is the Fourier transform of phi: check phi_hat(0) = integral of phi
  double integral = 0;
  const double h = 1e-3;
  for (double x = -400; x < 400; x += h) integral += f.phi(x + h / 2) * h;
  CHECK(integral == doctest::Approx(f.phi_hat(0)).epsilon(2e-3));
  CHECK(code_of([] { TestFunction(0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("random matrix references") {
  TestFunction f(0.75);
  CHECK(rmt_reference(9, f, Symmetry::Unitary) == doctest::Approx(1 / 0.75));
  for (int M : {5, 9, 21, 101, 1001}) {
    const double ref = rmt_reference(M, f, Symmetry::Orthogonal);
    CHECK(std::fabs(ref - (1 / 0.75 + 0.5)) <= 1.0 / (M * 0.75));
  }
  TestFunction tiny(0.1);
  CHECK(rmt_reference(9, tiny, Symmetry::Orthogonal) == tiny.phi_hat(0));
}

TEST_CASE("family statistics at small N") {
  E0 e;
  FiberTraceCache cache(e.R, e.E);
  for (int N = 2; N <= 3; ++N) {
    FamilyData fam = compute_family(e.R, e.E, cache, N, std::nullopt, 1);
    CHECK(fam.M == 2 * N + 1);
    CHECK(trace_average(fam, 0) == cd(fam.M, 0));
    // exact power-sum route vs the numerical angles
    for (int n = 1; n <= fam.M; ++n) {
      cd direct = 0;
      for (const auto& t : fam.twists)
        for (double th : t.s.angles) direct += std::polar(1.0, n * th);
      direct /= static_cast<double>(fam.twists.size());
      CHECK(std::abs(trace_average(fam, n) - direct) < 1e-9);
      CHECK(trace_average(fam, -n) == std::conj(trace_average(fam, n)));
    }
    TestFunction f(0.75);
    DensityResult d = one_level_density(fam, f);
    CHECK(std::fabs(d.empirical.imag()) <= 1e-9);
    CHECK(std::fabs(d.empirical.real() - one_level_density_direct(fam, f)) < 1e-6);
    CHECK(d.reference == rmt_reference(fam.M, f, Symmetry::Orthogonal));
    // integral nu M exercises the constant-cosine tail
    TestFunction g(1.0);
    CHECK(std::fabs(one_level_density(fam, g).empirical.real() -
                    one_level_density_direct(fam, g)) < 1e-6);
    TestFunction tiny(0.5 / fam.M);
    DensityResult z = one_level_density(fam, tiny);
    CHECK(z.empirical.real() == tiny.phi_hat(0));
    CHECK(z.reference == tiny.phi_hat(0));
    CHECK(code_of([&] { one_level_density(fam, TestFunction(1.5)); }) ==
          ErrorCode::SupportTooWide);
    CHECK_NOTHROW(one_level_density(fam, TestFunction(1.5), true));

    RankReport r = rank_report(e.R, e.E, fam);
    CHECK(r.plus + r.minus == static_cast<int>(fam.twists.size()));
    CHECK(r.parity_violations == 0);
    CHECK(r.sign_constant);
    int total = 0;
    for (const auto& [rank, count] : r.histogram) total += count;
    CHECK(total == static_cast<int>(fam.twists.size()));
  }
}

TEST_CASE("family results do not depend on the worker count") {
  E0 e;
  FiberTraceCache cache(e.R, e.E);
  FamilyData a = compute_family(e.R, e.E, cache, 3, std::nullopt, 1);
  FamilyData b = compute_family(e.R, e.E, cache, 3, std::nullopt, 3);
  REQUIRE(a.twists.size() == b.twists.size());
  for (std::size_t i = 0; i < a.twists.size(); ++i) {
    CHECK(a.twists[i].D == b.twists[i].D);
    CHECK(a.twists[i].L.coeffs == b.twists[i].L.coeffs);
  }
  const auto ja = to_json(e.E, family_report(e.R, e.E, a, 4, TestFunction(0.75))).dump();
  const auto jb = to_json(e.E, family_report(e.R, e.E, b, 4, TestFunction(0.75))).dump();
  CHECK(ja == jb);
  CHECK(ja.find("\"schema\":1") != std::string::npos);
}

TEST_CASE("class sizes") {
  E0 e;
  const auto classes = invertible_classes(e.R, e.E.finite_conductor);
  CHECK(classes.size() == 96);  // (5 - 1)(25 - 1)
  for (int N = 2; N <= 3; ++N) {
    const auto rows = size_table(e.R, e.E, N);
    std::uint64_t sum = 0;
    for (const auto& r : rows) sum += r.enumerated;
    CHECK(sum == collect_family(e.R, N, e.E.finite_conductor).size());
    const SizeResult one = size_check(e.R, e.E, N, rows[5].cls);
    CHECK(one.enumerated == rows[5].enumerated);
  }
  // all classes together recover the squarefree count coprime to N_E
  const double total = size_main_term(e.R, e.E, 4) * 96;
  CHECK(total == doctest::Approx(625 * 0.8 / (1.2 * 1.04)));
  CHECK(code_of([&] { size_check(e.R, e.E, 2, Poly{2, 1}); }) == ErrorCode::NonCoprimeClass);
  const auto csv = sizes_csv(size_table(e.R, e.E, 2));
  CHECK(csv.rfind("class,enumerated,main_term,relative_deviation\n", 0) == 0);
}

TEST_CASE("character square sums") {
  E0 e;
  const Poly C{1, 1};
  CHECK(char_square_check(e.R, e.E, 3, C, Poly{2, 1}).residual == 0);  // P | N_E
  CHECK(char_square_check(e.R, e.E, 2, C, Poly{1, 0, 0, 1}).residual == 0);
  std::uint64_t multiples = 0;
  for (const Poly& D : collect_family(e.R, 3, e.E.finite_conductor, C))
    if (D.coeff(0) == 0) ++multiples;
  const auto r = char_square_check(e.R, e.E, 3, C, Poly{0, 1});
  CHECK(r.residual == multiples);
  CHECK(r.bound == 2.0 * 25);
}

TEST_CASE("prime-sum diagnostic") {
  E0 e;
  FiberTraceCache cache(e.R, e.E);
  const ApTable table = build_ap_table(e.R, e.E, 3);
  for (int n = 1; n <= 3; ++n) {
    // oracle: a_P from the table, chi_D(P) from the Jacobi symbol
    long double S = 0;
    for (const Poly& D : collect_family(e.R, 2, e.E.finite_conductor))
      for (const ApEntry& en : table.primes(n)) S += en.a * quad_eval(e.R, D, en.P);
    const double expect = static_cast<double>(S / std::pow(5.0L, n + 2));
    const double v = hypothesis_m_diag(e.R, e.E, cache, 2, n);
    CHECK(v == doctest::Approx(expect));
    CHECK(std::fabs(v) <= 2);
    CHECK(v == hypothesis_m_diag(e.R, e.E, cache, 2, n));
  }
}

TEST_CASE("order-3 family") {
  PolyRing R(7);
  CurveData E = build_curve(R, Poly{0, 1}, Poly{1});
  const ApTable table = build_ap_table(R, E, 3);
  EllReport r = ell_density(R, E, table, 1, 3, TestFunction(0.4));
  CHECK(r.M == 3);
  CHECK(r.family_size == enumerate_ell_chars(R, 3, 1, E.finite_conductor).size());
  CHECK(r.max_trace_imag < 1e-9);
  CHECK(r.max_rh_deviation < 1e-6);
  CHECK(r.density.reference == doctest::Approx(1 / 0.4));
  CHECK(code_of([&] { ell_density(R, E, table, 1, 3, TestFunction(0.6)); }) ==
        ErrorCode::SupportTooWide);
  CHECK(code_of([&] { ell_density(R, E, table, 1, 4, TestFunction(0.4)); }) ==
        ErrorCode::OrderNotDividing);
}
