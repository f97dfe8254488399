#include "twistlab/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twistlab/error.hpp"
#include "twistlab/roots.hpp"

namespace twistlab {

namespace {

int legendre(std::uint32_t c, std::uint32_t p) {
  std::uint64_t r = 1, b = c % p;
  std::uint32_t e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : (r == 0 ? 0 : -1);
}

std::vector<unsigned> units_mod(unsigned ell) {
  std::vector<unsigned> out;
  for (unsigned i = 1; i < ell; ++i) {
    unsigned a = i, b = ell;
    while (b) {
      const unsigned t = a % b;
      a = b;
      b = t;
    }
    if (a == 1) out.push_back(i);
  }
  return out;
}

// All polynomials of degree < n (not only monic), by base-p index.
Poly poly_from_index(const PolyRing& ring, int n, std::uint64_t idx) {
  std::vector<std::uint32_t> c(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(idx % ring.p());
    idx /= ring.p();
  }
  return Poly(std::move(c));
}

}  // namespace

Poly EllChar::conductor(const PolyRing& ring) const {
  Poly F{1};
  for (const auto& [Q, i] : primes) F = ring.mul(F, Q);
  return F;
}

int quad_eval(const PolyRing& ring, const Poly& D, const Poly& f) {
  if (D.is_zero()) fail(ErrorCode::ZeroInput, "quadratic symbol modulo zero");
  const std::uint32_t p = ring.p();
  const bool flip = ((p - 1) / 2) % 2 == 1;
  Poly b = ring.monic(D);
  Poly a = ring.rem(f, b);
  int sign = 1;
  while (true) {
    if (b.degree() == 0) return sign;
    if (a.is_zero()) return 0;
    const std::uint32_t c = a.lead();
    if (c != 1) {
      if (b.degree() % 2 == 1) sign *= legendre(c, p);
      a = ring.monic(a);
    }
    if (a.degree() == 0) return sign;
    if (flip && (a.degree() % 2 == 1) && (b.degree() % 2 == 1)) sign = -sign;
    Poly r = ring.rem(b, a);
    b = std::move(a);
    a = std::move(r);
  }
}

int quad_eval_slow(const PolyRing& ring, const Poly& D, const Poly& f) {
  int out = 1;
  for (const auto& [P, e] : ring.factor(D)) {
    const std::uint64_t Q = pow_u64(ring.p(), static_cast<unsigned>(P.degree()));
    const Poly r = ring.powmod(f, (Q - 1) / 2, P);
    if (r.is_zero()) return 0;
    const int s = r.is_one() ? 1 : -1;
    if (e % 2 == 1) out *= s;
  }
  return out;
}

std::optional<unsigned> residue_symbol(const PolyRing& ring, const Poly& Q,
                                       const Poly& f, unsigned ell) {
  const std::uint32_t p = ring.p();
  if (ell == 0 || (p - 1) % ell != 0)
    fail(ErrorCode::OrderNotDividing,
         "order " + std::to_string(ell) + " does not divide q - 1 = " +
             std::to_string(p - 1));
  const std::uint64_t size = pow_u64(p, static_cast<unsigned>(Q.degree()));
  const Poly r = ring.powmod(f, (size - 1) / ell, Q);
  if (r.is_zero()) return std::nullopt;
  if (r.degree() != 0)
    fail(ErrorCode::InvalidArgument, "residue symbol modulo a non-prime");
  const std::uint32_t g1 = least_primitive_root(p);
  std::uint64_t zeta = 1;
  for (std::uint32_t k = 0; k < (p - 1) / ell; ++k) zeta = zeta * g1 % p;
  std::uint64_t acc = 1;
  for (unsigned j = 0; j < ell; ++j) {
    if (acc == r.c[0]) return j;
    acc = acc * zeta % p;
  }
  fail(ErrorCode::InvalidArgument, "residue symbol modulo a non-prime");
}

std::optional<unsigned> ell_eval(const PolyRing& ring, const EllChar& chi,
                                 const Poly& f) {
  unsigned k = 0;
  for (const auto& [Q, i] : chi.primes) {
    const auto j = residue_symbol(ring, Q, f, chi.ell);
    if (!j) return std::nullopt;
    k = (k + i * *j) % chi.ell;
  }
  return k;
}

unsigned char_order(const Character& chi) {
  if (std::holds_alternative<QuadChar>(chi)) return 2;
  return std::get<EllChar>(chi).ell;
}

Poly char_conductor(const PolyRing& ring, const Character& chi) {
  if (const auto* q = std::get_if<QuadChar>(&chi)) return q->D;
  return std::get<EllChar>(chi).conductor(ring);
}

std::optional<unsigned> char_index(const PolyRing& ring, const Character& chi,
                                   const Poly& f) {
  if (const auto* q = std::get_if<QuadChar>(&chi)) {
    const int v = quad_eval(ring, q->D, f);
    if (v == 0) return std::nullopt;
    return v == 1 ? 0u : 1u;
  }
  return ell_eval(ring, std::get<EllChar>(chi), f);
}

cd root_of_unity(unsigned k, unsigned ell) {
  if (ell == 2) return k % 2 ? cd{-1, 0} : cd{1, 0};
  return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k % ell) / ell);
}

cd char_value(const PolyRing& ring, const Character& chi, const Poly& f) {
  const auto k = char_index(ring, chi, f);
  if (!k) return 0;
  return root_of_unity(*k, char_order(chi));
}

Parity parity(const PolyRing& ring, const Character& chi) {
  for (std::uint32_t a = 1; a < ring.p(); ++a) {
    const auto k = char_index(ring, chi, Poly{a});
    if (!k || *k != 0) return Parity::Odd;
  }
  return Parity::Even;
}

std::vector<EllChar> enumerate_ell_chars(const PolyRing& ring, unsigned ell,
                                         int degree, const Poly& modulus) {
  if (ell < 2 || (ring.p() - 1) % ell != 0)
    fail(ErrorCode::OrderNotDividing,
         "order " + std::to_string(ell) + " does not divide q - 1");
  const auto units = units_mod(ell);
  std::vector<EllChar> out;
  FamilyStream stream(ring, degree, modulus);
  while (auto F = stream.next()) {
    const auto fac = ring.factor(*F);
    const std::size_t r = fac.size();
    std::vector<std::size_t> pick(r, 0);
    while (true) {
      EllChar chi;
      chi.ell = ell;
      for (std::size_t k = 0; k < r; ++k) chi.primes.emplace_back(fac[k].first, units[pick[k]]);
      out.push_back(std::move(chi));
      std::size_t k = r;
      while (k > 0) {
        --k;
        if (++pick[k] < units.size()) break;
        pick[k] = 0;
        if (k == 0) {
          k = r + 1;
          break;
        }
      }
      if (k == r + 1 || r == 0) break;
    }
  }
  return out;
}

DirichletLPoly char_L_poly(const PolyRing& ring, const Character& chi) {
  const Poly F = char_conductor(ring, chi);
  const int n = F.degree();
  if (n < 1) fail(ErrorCode::TrivialConductor, "character of conductor 1");
  const unsigned ell = char_order(chi);
  auto coeff = [&](int h) {
    std::vector<long long> counts(ell, 0);
    const std::uint64_t count = ring.monic_count(h);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto k = char_index(ring, chi, ring.monic_from_index(h, i));
      if (k) ++counts[*k];
    }
    cd s = 0;
    for (unsigned k = 0; k < ell; ++k)
      s += static_cast<double>(counts[k]) * root_of_unity(k, ell);
    return s;
  };
  DirichletLPoly L;
  L.parity = parity(ring, chi);
  L.degree = n - 1;
  for (int h = 0; h < n; ++h) L.coeffs.push_back(coeff(h));
  const double q = ring.p();
  if (std::abs(coeff(n)) > 1e-6)
    fail(ErrorCode::InvalidArgument, "L-series coefficient at deg F does not vanish");
  if (std::abs(L.coeffs.back()) < 0.5)
    fail(ErrorCode::InvalidArgument, "character is not primitive (L degree drop)");

  std::vector<cld> poly(L.coeffs.begin(), L.coeffs.end());
  if (L.parity == Parity::Even) {
    cld rem;
    // L(u) = (1 - u) A(u): deflate at u = 1, then absorb the sign of -(u - 1).
    poly = deflate(poly, cld{1}, &rem);
    if (std::abs(rem) > 1e-6L * std::pow(static_cast<long double>(q), n))
      fail(ErrorCode::InvalidArgument, "even character without a zero at u = 1");
    for (auto& x : poly) x = -x;
    L.lambda = 1;
    L.M = n - 2;
  } else {
    L.M = n - 1;
  }
  if (L.M > 0) {
    for (const cld& r : poly_roots(poly)) {
      L.roots.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
      L.max_root_deviation = std::max(
          L.max_root_deviation,
          static_cast<double>(std::abs(std::abs(r) * std::sqrt(static_cast<long double>(q)) - 1)));
      long double th = -std::arg(r);
      if (th < 0) th += 2 * std::numbers::pi_v<long double>;
      L.angles.push_back(static_cast<double>(th));
    }
    std::sort(L.angles.begin(), L.angles.end());
  }
  return L;
}

std::uint32_t laurent_inverse_t(const PolyRing& ring, const Poly& A, const Poly& F) {
  if (F.is_zero()) fail(ErrorCode::ZeroDenominator, "e_q with zero denominator");
  if (A.is_zero()) return 0;
  const int n = F.degree();
  const int kmax = A.degree() - n + 1;
  if (kmax < 0) return 0;
  const std::uint32_t p = ring.p();
  const std::uint64_t linv = ring.inv(F.lead());
  // 1/F = F_n^{-1} t^{-n} sum_k s_k t^{-k}
  std::vector<std::uint64_t> s(static_cast<std::size_t>(kmax) + 1, 0);
  s[0] = 1;
  for (int k = 1; k <= kmax; ++k) {
    std::uint64_t acc = 0;
    for (int i = 1; i <= std::min(k, n); ++i) {
      const std::uint64_t g = F.coeff(n - i) * linv % p;
      acc = (acc + g * s[static_cast<std::size_t>(k - i)]) % p;
    }
    s[static_cast<std::size_t>(k)] = (p - acc) % p;
  }
  std::uint64_t a1 = 0;
  for (int j = std::max(0, n - 1); j <= A.degree(); ++j)
    a1 = (a1 + std::uint64_t{A.coeff(j)} * s[static_cast<std::size_t>(j - n + 1)]) % p;
  return static_cast<std::uint32_t>(a1 * linv % p);
}

cd e_q(const PolyRing& ring, const Poly& A, const Poly& F) {
  const std::uint32_t a1 = laurent_inverse_t(ring, A, F);
  return std::polar(1.0, 2 * std::numbers::pi * a1 / ring.p());
}

GaussData gauss_sum(const PolyRing& ring, const Character& chi, int max_degree) {
  const Poly F = char_conductor(ring, chi);
  const int n = F.degree();
  if (n < 1) fail(ErrorCode::TrivialConductor, "character of conductor 1");
  if (n > max_degree)
    fail(ErrorCode::BudgetExceeded, "Gauss sum over q^" + std::to_string(n) +
                                        " representatives exceeds budget");
  const double q = ring.p();
  GaussData g;
  g.G = 0;
  const std::uint64_t count = pow_u64(ring.p(), static_cast<unsigned>(n));
  for (std::uint64_t idx = 1; idx < count; ++idx) {
    const Poly A = poly_from_index(ring, n, idx);
    g.G += char_value(ring, chi, A) * e_q(ring, A, F);
  }
  g.tau = 0;
  for (std::uint32_t a = 1; a < ring.p(); ++a)
    g.tau += char_value(ring, chi, Poly{a}) *
             std::polar(1.0, 2 * std::numbers::pi * a / ring.p());
  g.parity = parity(ring, chi);
  if (g.parity == Parity::Odd)
    g.omega = g.G / (g.tau * std::pow(q, (n - 1) / 2.0));
  else
    g.omega = g.G * std::pow(q, -n / 2.0);
  const DirichletLPoly L = char_L_poly(ring, chi);
  g.omega_roots = 1;
  for (double th : L.angles) g.omega_roots *= -std::polar(1.0, th);
  g.sigma.assign(static_cast<std::size_t>(n), 0.0);
  if (g.parity == Parity::Odd) {
    g.sigma[0] = std::sqrt(q);
  } else {
    g.sigma[0] = -1;
    for (int k = 1; k < n; ++k) g.sigma[static_cast<std::size_t>(k)] = q - 1;
  }
  return g;
}

double duality_residual(const PolyRing& ring, const Character& chi, int j,
                        const DirichletLPoly& L, const GaussData& g) {
  const int n = char_conductor(ring, chi).degree();
  const double q = ring.p();
  auto c = [&](int h) -> cd {
    return h >= 0 && h < n ? L.coeffs[static_cast<std::size_t>(h)] : cd{0};
  };
  cd rhs = 0;
  for (int k = 0; k <= n - 1 - j; ++k)
    rhs += g.sigma[static_cast<std::size_t>(k)] * std::conj(c(n - 1 - j - k));
  rhs *= g.omega * std::pow(q, j - n / 2.0);
  return std::abs(c(j) - rhs);
}

double duality_residual(const PolyRing& ring, const Character& chi, int j) {
  return duality_residual(ring, chi, j, char_L_poly(ring, chi), gauss_sum(ring, chi));
}

}  // namespace twistlab
