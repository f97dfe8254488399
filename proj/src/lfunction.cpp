#include "twistlab/lfunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twistlab/error.hpp"
#include "twistlab/roots.hpp"

namespace twistlab {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// (-1)^{deg D (q-1)/2}: the reciprocity factor per unit of deg P.
int reciprocity_sign(std::uint32_t q, const Poly& D) {
  return ((q - 1) / 2 % 2 == 1 && D.degree() % 2 == 1) ? -1 : 1;
}

void require_coprime(const PolyRing& ring, const CurveData& curve, const Poly& F) {
  if (!ring.coprime(F, curve.finite_conductor))
    fail(ErrorCode::NonCoprimeConductor,
         "twist conductor " + PolyRing::format(F) + " shares a factor with N_E");
}

// Multiplies the series c (truncated at c.size()-1) by the inverse of a local
// factor 1 - x u^d + y u^{2d}.
template <class T>
void apply_local(std::vector<T>& c, int d, T x, T y) {
  const int n = static_cast<int>(c.size());
  for (int k = d; k < n; ++k) {
    c[static_cast<std::size_t>(k)] += x * c[static_cast<std::size_t>(k - d)];
    if (k >= 2 * d) c[static_cast<std::size_t>(k)] -= y * c[static_cast<std::size_t>(k - 2 * d)];
  }
}

std::string i128_str(__int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) {
    s += static_cast<char>('0' + static_cast<int>(u % 10));
    u /= 10;
  }
  if (neg) s += '-';
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace

int quad_twist_char(const PolyRing& ring, const Poly& D, const ApEntry& e) {
  const int d = e.P.degree();
  const auto F = FieldRegistry::instance().get(ring.p(), d);
  const int v = F->quad_char(ring.eval(D, *F, e.root));
  return (d % 2 == 1) ? v * reciprocity_sign(ring.p(), D) : v;
}

LPolynomial euler_L(const PolyRing& ring, const CurveData& curve, const ApTable& table,
                    const Poly& D, int M) {
  require_coprime(ring, curve, D);
  if (M > table.max_degree)
    fail(ErrorCode::InsufficientApTable,
         "Euler product to degree " + std::to_string(M) + " needs a_P up to degree " +
             std::to_string(M) + ", table has " + std::to_string(table.max_degree));
  const std::uint32_t q = ring.p();
  const int sign = reciprocity_sign(q, D);
  // Truncating at the table's top degree keeps coefficients up to there exact,
  // so the ones past M can be checked to vanish.
  const int T = std::max(M, table.max_degree);
  std::vector<long double> c(static_cast<std::size_t>(T) + 1, 0.0L);
  c[0] = 1.0L;
  for (int d = 1; d <= T; ++d) {
    const auto F = FieldRegistry::instance().get(q, d);
    const long double qd = static_cast<long double>(ipow(q, d));
    const int sd = (d % 2 == 1) ? sign : 1;
    for (const ApEntry& e : table.primes(d)) {
      const int chi = sd * F->quad_char(ring.eval(D, *F, e.root));
      if (chi == 0) continue;
      const long double x = static_cast<long double>(chi * e.a);
      if (e.type == Reduction::Good) apply_local(c, d, x, qd);
      else apply_local(c, d, x, 0.0L);
    }
  }
  LPolynomial L;
  L.M = M;
  L.q = q;
  L.coeffs.resize(static_cast<std::size_t>(M) + 1);
  for (int k = 0; k <= T; ++k) {
    const long double v = c[static_cast<std::size_t>(k)];
    const long double r = std::round(v);
    if (std::fabs(v - r) > 1e-6L)
      fail(ErrorCode::IntegerDriftExceeded,
           "Euler coefficient " + std::to_string(k) + " drifted from an integer");
    if (k <= M) {
      L.coeffs[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(r);
    } else if (r != 0) {
      fail(ErrorCode::DegreeMismatch, "Euler product has nonzero coefficient " +
                                          std::to_string(k) + " beyond degree " +
                                          std::to_string(M));
    }
  }
  if (M >= 1 && (L.coeffs[static_cast<std::size_t>(M)] == ipow(q, M) ||
                 L.coeffs[static_cast<std::size_t>(M)] == -ipow(q, M)))
    L.eps = L.coeffs[static_cast<std::size_t>(M)] > 0 ? 1 : -1;
  else if (M == 0)
    L.eps = 1;
  return L;
}

FiberTraceCache::FiberTraceCache(const PolyRing& ring, const CurveData& curve,
                                 std::uint64_t field_budget, std::uint64_t brute_limit)
    : ring_(ring), curve_(curve), budget_(field_budget), brute_limit_(brute_limit) {}

const FieldTable& FiberTraceCache::field(int n) {
  if (n < 1 || pow_u64(ring_.p(), static_cast<unsigned>(n)) > budget_)
    fail(ErrorCode::FieldBudgetExceeded,
         "fiber sums over F_{" + std::to_string(ring_.p()) + "^" + std::to_string(n) +
             "} exceed the field budget " + std::to_string(budget_));
  return *FieldRegistry::instance().get(ring_.p(), n);
}

const std::vector<FiberRep>& FiberTraceCache::get(int n) {
  const FieldTable& F = field(n);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(n);
  if (it != cache_.end()) return *it->second;
  auto out = std::make_unique<std::vector<FiberRep>>();
  for (const OrbitRep& o : frobenius_orbits(F)) {
    const Elem a = ring_.eval(curve_.A, F, o.rep), b = ring_.eval(curve_.B, F, o.rep);
    const std::uint64_t seed =
        (std::uint64_t{ring_.p()} << 48) ^ (std::uint64_t(n) << 40) ^ o.rep;
    const std::int64_t tr = fiber_trace(F, a, b, brute_limit_, seed);
    if (tr != 0)
      out->push_back({o.rep, static_cast<std::uint32_t>(o.size), static_cast<std::int32_t>(tr)});
  }
  return *cache_.emplace(n, std::move(out)).first->second;
}

std::vector<std::int64_t> fiber_power_sums(const PolyRing& ring, const CurveData& curve,
                                           FiberTraceCache& cache, const Poly& D,
                                           int n_max) {
  require_coprime(ring, curve, D);
  const int sign = reciprocity_sign(ring.p(), D);
  std::vector<std::int64_t> S(static_cast<std::size_t>(std::max(n_max, 0)) + 1, 0);
  for (int n = 1; n <= n_max; ++n) {
    const FieldTable& F = cache.field(n);
    std::int64_t sum = 0;
    for (const FiberRep& r : cache.get(n))
      sum += std::int64_t{r.weight} * r.trace * F.quad_char(ring.eval(D, F, r.rep));
    S[static_cast<std::size_t>(n)] = (n % 2 == 1) ? sign * sum : sum;
  }
  return S;
}

std::int64_t prime_sum_degree(const PolyRing& ring, const CurveData& curve,
                              FiberTraceCache& cache, const Poly& D, int n) {
  require_coprime(ring, curve, D);
  const FieldTable& F = cache.field(n);
  std::int64_t sum = 0;
  for (const FiberRep& r : cache.get(n))
    if (static_cast<int>(r.weight) == n)
      sum += std::int64_t{r.trace} * F.quad_char(ring.eval(D, F, r.rep));
  return (n % 2 == 1) ? reciprocity_sign(ring.p(), D) * sum : sum;
}

int newton_terms(int M) { return (M + 1) / 2 + 1; }

LPolynomial newton_assemble(const std::vector<std::int64_t>& S, int M, std::uint32_t q) {
  LPolynomial L;
  L.M = M;
  L.q = q;
  if (M == 0) {
    L.coeffs = {1};
    L.eps = 1;
    return L;
  }
  const int k = static_cast<int>(S.size()) - 1;
  if (k < newton_terms(M))
    fail(ErrorCode::InvalidArgument, "Newton assembly of degree " + std::to_string(M) +
                                         " needs " + std::to_string(newton_terms(M)) +
                                         " power sums, got " + std::to_string(k));
  // k c_k = sum_{i=1}^k S_i c_{k-i}, since p_i = -S_i.
  std::vector<__int128> c(static_cast<std::size_t>(std::max(k, M)) + 1, 0);
  c[0] = 1;
  for (int j = 1; j <= k; ++j) {
    __int128 acc = 0;
    for (int i = 1; i <= j; ++i)
      acc += static_cast<__int128>(S[static_cast<std::size_t>(i)]) * c[static_cast<std::size_t>(j - i)];
    if (acc % j != 0)
      fail(ErrorCode::NonIntegralNewton,
           "Newton identity " + std::to_string(j) + " is not integral: " + i128_str(acc) +
               " / " + std::to_string(j));
    c[static_cast<std::size_t>(j)] = acc / j;
  }
  for (int j = M + 1; j <= k; ++j)
    if (c[static_cast<std::size_t>(j)] != 0)
      fail(ErrorCode::DegreeMismatch, "coefficient " + std::to_string(j) +
                                          " beyond degree " + std::to_string(M) +
                                          " is nonzero");
  auto qp = [q](int e) { return static_cast<__int128>(ipow(q, e)); };
  // c_{M-j} = eps q^{M-2j} c_j on the overlap M-k <= j <= M/2.
  bool fits[2] = {true, true};
  bool informative = false;
  for (int j = std::max(0, M - k); 2 * j <= M; ++j) {
    const __int128 lhs = c[static_cast<std::size_t>(M - j)];
    const __int128 rhs = qp(M - 2 * j) * c[static_cast<std::size_t>(j)];
    if (lhs != 0 || rhs != 0) informative = true;
    if (lhs != rhs) fits[0] = false;
    if (lhs != -rhs) fits[1] = false;
  }
  if (!fits[0] && !fits[1])
    fail(ErrorCode::InconsistentSign, "no sign fits the functional equation overlap");
  if (!informative || (fits[0] && fits[1]))
    fail(ErrorCode::AmbiguousSign, "overlap coefficients vanish; sign undetermined");
  const int eps = fits[0] ? 1 : -1;
  for (int j = k + 1; j <= M; ++j)
    c[static_cast<std::size_t>(j)] = eps * qp(2 * j - M) * c[static_cast<std::size_t>(M - j)];
  L.eps = eps;
  L.coeffs.resize(static_cast<std::size_t>(M) + 1);
  for (int j = 0; j <= M; ++j) L.coeffs[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(c[static_cast<std::size_t>(j)]);
  return L;
}

LPolynomial twist_L(const PolyRing& ring, const CurveData& curve, FiberTraceCache& cache,
                    const Poly& D) {
  const int M = curve.twist_degree(D.degree());
  if (M < 0) fail(ErrorCode::DegreeMismatch, "negative L-function degree");
  try {
    return newton_assemble(fiber_power_sums(ring, curve, cache, D, newton_terms(M)), M,
                           ring.p());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AmbiguousSign) throw;
  }
  // Every overlap coefficient vanished; the full set of power sums pins eps
  // through c_M = eps q^M.
  return newton_assemble(fiber_power_sums(ring, curve, cache, D, M), M, ring.p());
}

std::vector<__int128> power_sums(const LPolynomial& L, int n_max) {
  // p_n = -n c_n - sum_{i=1}^{n-1} p_i c_{n-i}
  std::vector<__int128> p(static_cast<std::size_t>(n_max) + 1, 0);
  p[0] = L.M;
  auto c = [&](int i) -> __int128 {
    return i <= L.M ? static_cast<__int128>(L.coeffs[static_cast<std::size_t>(i)]) : 0;
  };
  for (int n = 1; n <= n_max; ++n) {
    __int128 v = -static_cast<__int128>(n) * c(n);
    for (int i = 1; i < n; ++i) v -= p[static_cast<std::size_t>(i)] * c(n - i);
    p[static_cast<std::size_t>(n)] = v;
  }
  return p;
}

SpectralData spectral(const LPolynomial& L) {
  constexpr double two_pi = 2 * std::numbers::pi;
  SpectralData s;
  const long double q = L.q;
  std::vector<cld> rest;
  int pi_count = 0;
  if (!L.is_complex()) {
    std::vector<__int128> c(L.coeffs.begin(), L.coeffs.end());
    // Exact division by (1 - s q u), s = +1 for the rank, s = -1 for theta = pi.
    auto divide = [&](int sgn) {
      const int n = static_cast<int>(c.size()) - 1;
      if (n < 1) return false;
      std::vector<__int128> b(static_cast<std::size_t>(n));
      b[0] = c[0];
      for (int k = 1; k < n; ++k)
        b[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)] + sgn * static_cast<__int128>(L.q) * b[static_cast<std::size_t>(k - 1)];
      if (c[static_cast<std::size_t>(n)] + sgn * static_cast<__int128>(L.q) * b[static_cast<std::size_t>(n - 1)] != 0)
        return false;
      c = std::move(b);
      return true;
    };
    while (divide(1)) ++s.rank;
    while (divide(-1)) ++pi_count;
    long double scale = 1;
    for (const __int128 v : c) {
      rest.emplace_back(static_cast<long double>(v) / scale, 0.0L);
      scale *= q;
    }
    const std::int64_t top = L.coeffs.back();
    const std::int64_t qM = ipow(L.q, L.M);
    s.eps = top == qM ? 1 : (top == -qM ? -1 : 0);
  } else {
    long double scale = 1;
    for (const cd& v : L.ccoeffs) {
      rest.emplace_back(cld(v.real(), v.imag()) / scale);
      scale *= q;
    }
  }
  for (int i = 0; i < s.rank; ++i) s.angles.push_back(0.0);
  for (int i = 0; i < pi_count; ++i) s.angles.push_back(std::numbers::pi);
  if (rest.size() > 1) {
    // Roots v = q u lie on the unit circle; u = 1/(q e^{i theta}).
    for (const cld& v : poly_roots(rest)) {
      s.max_rh_deviation =
          std::max(s.max_rh_deviation, static_cast<double>(std::fabs(std::abs(v) - 1.0L)));
      double th = -static_cast<double>(std::arg(v));
      if (th < 0) th += two_pi;
      if (th >= two_pi) th -= two_pi;
      s.angles.push_back(th);
    }
  }
  std::sort(s.angles.begin(), s.angles.end());
  if (L.is_complex()) {
    // No exact division available; count angles numerically at zero.
    for (double th : s.angles)
      if (std::min(th, two_pi - th) < 1e-6) ++s.rank;
  }
  s.det = 1;
  for (double th : s.angles) s.det *= std::polar(1.0, th);
  return s;
}

void SignCalibration::calibrate(const PolyRing& ring, const CurveData& curve,
                                const Poly& D, int eps_D) {
  table_[D.degree()] = eps_D * quad_eval(ring, curve.mult_part, D);
}

int SignCalibration::constant(int N) const {
  auto it = table_.find(N);
  if (it == table_.end())
    fail(ErrorCode::CalibrationMissing,
         "no sign calibration for degree " + std::to_string(N));
  return it->second;
}

int eps_formula(const PolyRing& ring, const CurveData& curve, const Poly& D,
                const SignCalibration& calib) {
  return calib.constant(D.degree()) * quad_eval(ring, curve.mult_part, D);
}

LPolynomial ell_L(const PolyRing& ring, const CurveData& curve, const ApTable& table,
                  const EllChar& chi, int M) {
  const std::uint32_t q = ring.p();
  if (chi.ell < 2 || (q - 1) % chi.ell != 0)
    fail(ErrorCode::OrderNotDividing,
         "order " + std::to_string(chi.ell) + " does not divide q - 1");
  require_coprime(ring, curve, chi.conductor(ring));
  if (M > table.max_degree)
    fail(ErrorCode::InsufficientApTable,
         "order-ell L-function of degree " + std::to_string(M) +
             " needs a_P up to that degree, table has " + std::to_string(table.max_degree));
  std::vector<ResidueMap> maps;
  for (const auto& [Q, i] : chi.primes) maps.push_back(residue_map(ring, Q));
  std::vector<std::complex<long double>> zeta(chi.ell);
  for (unsigned j = 0; j < chi.ell; ++j)
    zeta[j] = std::polar(1.0L, 2.0L * std::numbers::pi_v<long double> * j / chi.ell);
  using cl = std::complex<long double>;
  std::vector<cl> S(static_cast<std::size_t>(M) + 1, 0.0L);
  for (int e = 1; e <= M; ++e) {
    const long double qe = static_cast<long double>(ipow(q, e));
    for (const ApEntry& en : table.primes(e)) {
      unsigned idx = 0;
      bool zero = false;
      for (std::size_t m = 0; m < maps.size(); ++m) {
        const auto r = maps[m].field().residue_symbol_index(maps[m](en.P), chi.ell);
        if (!r) {
          zero = true;
          break;
        }
        idx = (idx + *r * chi.primes[m].second) % chi.ell;
      }
      if (zero) continue;
      // s_d = alpha^d + conj(alpha)^d for good P, a_P^d for bad P.
      long double s_prev = 2.0L, s_cur = static_cast<long double>(en.a);
      long double bad_pow = 1.0L;
      for (int d = 1; e * d <= M; ++d) {
        long double sd;
        if (en.type == Reduction::Good) {
          if (d == 1) sd = s_cur;
          else {
            const long double nxt = static_cast<long double>(en.a) * s_cur - qe * s_prev;
            s_prev = s_cur;
            s_cur = nxt;
            sd = s_cur;
          }
        } else {
          bad_pow *= static_cast<long double>(en.a);
          sd = bad_pow;
        }
        S[static_cast<std::size_t>(e * d)] += static_cast<long double>(e) * sd * zeta[(idx * d) % chi.ell];
      }
    }
  }
  std::vector<cl> c(static_cast<std::size_t>(M) + 1, 0.0L);
  c[0] = 1;
  for (int j = 1; j <= M; ++j) {
    cl acc = 0;
    for (int i = 1; i <= j; ++i) acc += S[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j - i)];
    c[static_cast<std::size_t>(j)] = acc / static_cast<long double>(j);
  }
  LPolynomial L;
  L.M = M;
  L.q = q;
  for (const cl& v : c) L.ccoeffs.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  return L;
}

std::string dump_line(const Poly& D, const LPolynomial& L, const SpectralData& s) {
  std::ostringstream os;
  os << PolyRing::format(D) << " ; ";
  for (std::size_t i = 0; i < L.coeffs.size(); ++i) os << (i ? "," : "") << L.coeffs[i];
  os << " ; " << s.rank << " ; " << L.eps;
  return os.str();
}

}  // namespace twistlab
