#ifndef TWISTLAB_FAMSTATS_HPP
#define TWISTLAB_FAMSTATS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistlab/lfunction.hpp"

namespace twistlab {

// Fejer pair: phi(x) = (sin(pi nu x)/(pi nu x))^2, phi_hat(y) = (1/nu)(1 - |y|/nu)_+.
struct TestFunction {
  double nu;

  explicit TestFunction(double support);
  double phi(double x) const;
  double phi_hat(double y) const;
};

enum class Symmetry { Orthogonal, Unitary };

struct TwistResult {
  Poly D;
  LPolynomial L;
  SpectralData s;
  std::vector<__int128> p;  // exact power sums of the inverse roots, n = 0..M
};

struct FamilyData {
  int N = 0;
  int M = 0;
  std::uint32_t q = 5;
  std::optional<Poly> cls;
  std::vector<TwistResult> twists;  // lexicographic in D
};

// L-polynomials of every D in H_N^* (or H_{N,C}) by the fiber method.
// workers = 0 uses every core; the result does not depend on it.
FamilyData compute_family(const PolyRing& ring, const CurveData& curve,
                          FiberTraceCache& cache, int N,
                          const std::optional<Poly>& cls = std::nullopt,
                          unsigned workers = 0);

// <tr Theta^n> over the family; n = 0 gives M, n < 0 the conjugate.
cd trace_average(const FamilyData& fam, int n);

double rmt_reference(int M, const TestFunction& phi, Symmetry sym);

struct DensityResult {
  cd empirical;
  double reference = 0;
  double deviation = 0;
};

DensityResult one_level_density(const FamilyData& fam, const TestFunction& phi,
                                bool allow_wide = false);
// Same average from the angles: Z_phi = sum_j sum_k phi(M(theta_j / 2pi - k)),
// summed for |k| <= K with the remaining tail from the trigamma function.
double one_level_density_direct(const FamilyData& fam, const TestFunction& phi,
                                int K = 2000);

struct RankReport {
  std::map<int, int> histogram;
  double average = 0;
  double frac_rank0 = 0;
  double frac_rank1 = 0;
  int plus = 0;
  int minus = 0;
  int parity_violations = 0;
  bool sign_constant = true;  // eps_D chi_{M_E}(D) constant on the slice
  int sign_constant_value = 0;
};

RankReport rank_report(const PolyRing& ring, const CurveData& curve, const FamilyData& fam);

struct SizeResult {
  Poly cls;
  std::uint64_t enumerated = 0;
  double main_term = 0;
  double relative_deviation = 0;
};

// Main term q^N (1 - 1/q) prod_{Q | N_E} (1 + q^{-deg Q})^{-1} / |(F_q[t]/N_E)^*|.
double size_main_term(const PolyRing& ring, const CurveData& curve, int N);
SizeResult size_check(const PolyRing& ring, const CurveData& curve, int N, const Poly& C);
// Every invertible class modulo the finite conductor, in canonical order.
std::vector<Poly> invertible_classes(const PolyRing& ring, const Poly& modulus);
std::vector<SizeResult> size_table(const PolyRing& ring, const CurveData& curve, int N);

struct CharSquareResult {
  std::uint64_t residual = 0;
  double bound = 0;  // 2 q^{N - deg P}
};

CharSquareResult char_square_check(const PolyRing& ring, const CurveData& curve, int N,
                                   const Poly& C, const Poly& P);

// S(N, n) / q^{n+N}; throws if the trivial bound N is exceeded.
double hypothesis_m_diag(const PolyRing& ring, const CurveData& curve,
                         FiberTraceCache& cache, int N, int n);

struct EllReport {
  int N = 0;
  unsigned ell = 3;
  int M = 0;
  std::size_t family_size = 0;
  std::vector<cd> traces;  // n = 1..n_max
  DensityResult density;
  double max_rh_deviation = 0;
  double max_trace_imag = 0;
};

EllReport ell_density(const PolyRing& ring, const CurveData& curve, const ApTable& table,
                      int N, unsigned ell, const TestFunction& phi, int n_max = 4,
                      unsigned workers = 0);

struct FamilyReport {
  int N = 0;
  std::optional<Poly> cls;
  std::size_t family_size = 0;
  int M = 0;
  std::vector<cd> traces;  // n = 1..n_max
  std::optional<TestFunction> phi;
  DensityResult density;
  double density_direct = 0;
  RankReport ranks;
  double max_rh_deviation = 0;
};

FamilyReport family_report(const PolyRing& ring, const CurveData& curve,
                           const FamilyData& fam, int n_max,
                           const std::optional<TestFunction>& phi);

nlohmann::ordered_json to_json(const CurveData& curve, const FamilyReport& r);
nlohmann::ordered_json to_json(const CurveData& curve, const EllReport& r);
std::string traces_csv(const FamilyReport& r);
std::string ranks_csv(const FamilyReport& r);
std::string sizes_csv(const std::vector<SizeResult>& rows);

}  // namespace twistlab

#endif  // TWISTLAB_FAMSTATS_HPP
