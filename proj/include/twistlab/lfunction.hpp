#ifndef TWISTLAB_LFUNCTION_HPP
#define TWISTLAB_LFUNCTION_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "twistlab/characters.hpp"
#include "twistlab/ecurve.hpp"

namespace twistlab {

// L(E (x) chi, u) = sum_k c_k u^k. Quadratic twists carry exact integer
// coefficients in `coeffs`; order-ell twists carry complex ones in `ccoeffs`.
struct LPolynomial {
  std::vector<std::int64_t> coeffs;
  std::vector<cd> ccoeffs;
  int M = 0;
  std::uint32_t q = 5;
  int eps = 0;  // sign of the functional equation (quadratic case)

  bool is_complex() const { return !ccoeffs.empty() && coeffs.empty(); }
};

struct SpectralData {
  std::vector<double> angles;  // theta_j in [0, 2pi), ascending
  int rank = 0;                // multiplicity of u = 1/q
  int eps = 0;                 // c_M / q^M (quadratic case)
  cd det = 1;                  // prod e^{i theta_j}
  double max_rh_deviation = 0;  // max | |root| q - 1 |
};

// chi(P) for a quadratic twist, by reciprocity from the residue field of P:
// (P/D) = (-1)^{deg P deg D (q-1)/2} quad_char(D(root of P)).
int quad_twist_char(const PolyRing& ring, const Poly& D, const ApEntry& e);

LPolynomial euler_L(const PolyRing& ring, const CurveData& curve, const ApTable& table,
                    const Poly& D, int M);

// Fiber data for T_n: one entry per Frobenius orbit of F_{q^n} whose fiber
// trace is nonzero.
struct FiberRep {
  Elem rep;
  std::uint32_t weight;  // orbit size
  std::int32_t trace;    // q^{n'} + 1 - #E_{t0}, n' = n, singular fibers included
};

// Per-(curve, n) cache of fiber traces. Summing over t0 in F_{q^n} needs the
// inner sum T_n(t0) = sum_x quad_char(x^3 + A(t0) x + B(t0)); computing it once
// per curve turns each twist's cost from O(q^{2n}) into O(q^n / n), since both
// T_n(t0) and chi(D(t0)) are constant on Frobenius orbits and only orbit
// representatives are visited (weighted by orbit size).
class FiberTraceCache {
 public:
  FiberTraceCache(const PolyRing& ring, const CurveData& curve,
                  std::uint64_t field_budget = std::uint64_t{1} << 22,
                  std::uint64_t brute_limit = 15625);

  const std::vector<FiberRep>& get(int n);
  const FieldTable& field(int n);
  std::uint64_t field_budget() const { return budget_; }

 private:
  PolyRing ring_;
  CurveData curve_;
  std::uint64_t budget_;
  std::uint64_t brute_limit_;
  std::mutex mu_;
  std::map<int, std::unique_ptr<std::vector<FiberRep>>> cache_;
};

// S_1..S_{n_max} (index 0 unused) with S_n = sum_{t0 in F_{q^n}} s(t0), signed
// so that S_n = sum_{d|n} sum_{deg P = n/d} (n/d)(alpha_P^d + conj^d) chi_D(P)^d.
std::vector<std::int64_t> fiber_power_sums(const PolyRing& ring, const CurveData& curve,
                                           FiberTraceCache& cache, const Poly& D,
                                           int n_max);

// sum_{deg P = n} a_P chi_D(P), from the orbits of exact size n.
std::int64_t prime_sum_degree(const PolyRing& ring, const CurveData& curve,
                              FiberTraceCache& cache, const Poly& D, int n);

int newton_terms(int M);  // ceil(M/2) + 1
LPolynomial newton_assemble(const std::vector<std::int64_t>& S, int M, std::uint32_t q);

// Quadratic twist by both routes' shared entry point: fiber sums + Newton.
LPolynomial twist_L(const PolyRing& ring, const CurveData& curve, FiberTraceCache& cache,
                    const Poly& D);

// Exact power sums p_n = sum_j gamma_j^n of the inverse roots, n = 0..n_max.
std::vector<__int128> power_sums(const LPolynomial& L, int n_max);

SpectralData spectral(const LPolynomial& L);

class SignCalibration {
 public:
  void calibrate(const PolyRing& ring, const CurveData& curve, const Poly& D, int eps_D);
  bool has(int N) const { return table_.count(N) != 0; }
  int constant(int N) const;

 private:
  std::map<int, int> table_;
};

// alpha * eps * chi_{M_E}(D) with the constant taken from the calibration.
int eps_formula(const PolyRing& ring, const CurveData& curve, const Poly& D,
                const SignCalibration& calib);

LPolynomial ell_L(const PolyRing& ring, const CurveData& curve, const ApTable& table,
                  const EllChar& chi, int M);

std::string dump_line(const Poly& D, const LPolynomial& L, const SpectralData& s);

}  // namespace twistlab

#endif  // TWISTLAB_LFUNCTION_HPP
