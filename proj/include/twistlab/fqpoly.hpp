#ifndef TWISTLAB_FQPOLY_HPP
#define TWISTLAB_FQPOLY_HPP

#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twistlab/ffield.hpp"

namespace twistlab {

// Dense polynomial over F_p with ascending coefficients and no trailing zeros.
// The zero polynomial has no coefficients and degree -1 (standing in for -inf).
struct Poly {
  std::vector<std::uint32_t> c;

  Poly() = default;
  Poly(std::initializer_list<std::uint32_t> coeffs) : c(coeffs) { trim(); }
  explicit Poly(std::vector<std::uint32_t> coeffs) : c(std::move(coeffs)) {
    trim();
  }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  std::uint32_t lead() const { return c.empty() ? 0 : c.back(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  std::uint32_t coeff(int i) const {
    return i >= 0 && i < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(i)] : 0;
  }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
  friend bool operator!=(const Poly& a, const Poly& b) { return a.c != b.c; }
};

// Canonical order: by degree, then coefficients compared from t^deg downward.
// On monic polynomials of a fixed degree this is the enumeration order of
// PolyRing::monic_from_index.
bool poly_less(const Poly& a, const Poly& b);

struct PolyLess {
  bool operator()(const Poly& a, const Poly& b) const { return poly_less(a, b); }
};

struct DivRem {
  Poly quotient;
  Poly remainder;
};

// Arithmetic context for F_p[t]. Cheap to copy.
class PolyRing {
 public:
  explicit PolyRing(std::uint32_t p);

  std::uint32_t p() const { return p_; }
  std::uint32_t inv(std::uint32_t a) const { return inv_[a % p_]; }
  std::uint32_t mod(std::int64_t v) const {
    const std::int64_t p = p_;
    return static_cast<std::uint32_t>(((v % p) + p) % p);
  }

  Poly constant(std::int64_t v) const { return Poly{mod(v)}; }
  Poly t() const { return Poly{0, 1}; }
  // Reduces coefficients mod p and trims.
  Poly normalize(std::vector<std::int64_t> coeffs) const;

  Poly add(const Poly& a, const Poly& b) const;
  Poly sub(const Poly& a, const Poly& b) const;
  Poly neg(const Poly& a) const;
  Poly mul(const Poly& a, const Poly& b) const;
  Poly scale(const Poly& a, std::uint32_t s) const;
  Poly monic(const Poly& a) const;
  Poly pow(const Poly& a, unsigned e) const;
  Poly derivative(const Poly& a) const;

  DivRem divrem(const Poly& a, const Poly& b) const;
  Poly rem(const Poly& a, const Poly& b) const;
  Poly gcd(const Poly& a, const Poly& b) const;
  Poly powmod(const Poly& base, std::uint64_t e, const Poly& m) const;

  bool is_squarefree(const Poly& f) const;
  bool is_irreducible(const Poly& f) const;
  bool coprime(const Poly& a, const Poly& b) const { return gcd(a, b).is_one(); }
  // P^k | f (the zero polynomial is divisible by everything).
  bool divides_power(const Poly& P, const Poly& f, unsigned k) const {
    return f.is_zero() || rem(f, pow(P, k)).is_zero();
  }

  std::uint32_t eval(const Poly& f, std::uint32_t x) const;
  Elem eval(const Poly& f, const FieldTable& field, Elem x) const;

  // Monic polynomial t^deg + sum_{i<deg} c_i t^i with index = sum c_i p^i.
  Poly monic_from_index(int deg, std::uint64_t index) const;
  std::uint64_t monic_index(const Poly& f) const;
  std::uint64_t monic_count(int deg) const;

  // Prime factorisation by trial division over the enumerated primes of degree
  // at most deg(f)/2. Returns (monic prime, exponent) pairs in canonical order;
  // the leading coefficient is dropped.
  std::vector<std::pair<Poly, int>> factor(const Poly& f) const;

  Poly parse(std::string_view text) const;
  static std::string format(const Poly& f);

 private:
  std::uint32_t p_;
  std::vector<std::uint32_t> inv_;
};

// Monic irreducibles of a fixed degree, built by a multiplicative sieve over
// the monic index space and cached per (p, degree).
class PrimeIndex {
 public:
  static const std::vector<Poly>& primes(const PolyRing& ring, int degree);
  // (1/d) sum_{e | d} mu(e) q^{d/e}
  static std::uint64_t necklace_count(std::uint32_t q, int degree);

 private:
  static std::mutex mu_;
  static std::map<std::pair<std::uint32_t, int>, std::unique_ptr<std::vector<Poly>>>
      cache_;
};

const std::vector<Poly>& iter_primes(const PolyRing& ring, int degree);

// Lexicographic stream over H_{N,C} (or H_N^* with no class): monic squarefree
// D of degree N coprime to the modulus, optionally with D = C mod modulus.
// The monic index range [begin, end) lets workers split the stream.
class FamilyStream {
 public:
  FamilyStream(const PolyRing& ring, int degree, Poly modulus,
               std::optional<Poly> cls = std::nullopt, std::uint64_t begin = 0,
               std::uint64_t end = UINT64_MAX);

  std::optional<Poly> next();
  std::uint64_t index_space() const { return count_; }

 private:
  PolyRing ring_;
  int degree_;
  Poly modulus_;
  std::optional<Poly> cls_;
  std::uint64_t pos_;
  std::uint64_t end_;
  std::uint64_t count_;
};

std::vector<Poly> collect_family(const PolyRing& ring, int degree,
                                 const Poly& modulus,
                                 const std::optional<Poly>& cls = std::nullopt);

// Residue map F_q[t] -> F_q[t]/(P) = F_{q^d}, sending t to the least root of P
// in the table's element order.
class ResidueMap {
 public:
  ResidueMap(const PolyRing& ring, const Poly& prime,
             std::shared_ptr<const FieldTable> field);
  ResidueMap(const PolyRing& ring, const Poly& prime,
             std::shared_ptr<const FieldTable> field, Elem root);

  Elem operator()(const Poly& f) const { return ring_.eval(f, *field_, root_); }
  Elem root() const { return root_; }
  const FieldTable& field() const { return *field_; }
  const Poly& prime() const { return prime_; }

 private:
  PolyRing ring_;
  Poly prime_;
  std::shared_ptr<const FieldTable> field_;
  Elem root_ = 0;
};

ResidueMap residue_map(const PolyRing& ring, const Poly& prime);

}  // namespace twistlab

#endif  // TWISTLAB_FQPOLY_HPP
