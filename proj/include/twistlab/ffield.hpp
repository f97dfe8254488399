#ifndef TWISTLAB_FFIELD_HPP
#define TWISTLAB_FFIELD_HPP

#include <cstdint>
#include <memory>
#include <mutex>
#include <map>
#include <optional>
#include <vector>

namespace twistlab {

// Elements of F_{p^d} are encoded by their coordinate vector on the power
// basis 1, θ, ..., θ^{d-1} (θ a root of the modulus), read as a base-p
// integer: x = c_0 + c_1 p + ... + c_{d-1} p^{d-1}. This integer order is the
// "element order" used wherever a least element is chosen.
using Elem = std::uint64_t;

bool is_prime_u64(std::uint64_t n);
std::vector<std::uint64_t> prime_factors_u64(std::uint64_t n);
std::uint64_t pow_u64(std::uint64_t base, unsigned exp);

struct FieldSpec {
  std::uint32_t p;

  // Throws NotPrime / InvalidArgument unless p is a prime >= 5.
  explicit FieldSpec(std::uint32_t prime);
};

class FieldTable {
 public:
  static constexpr std::uint64_t kLogTableLimit = std::uint64_t{1} << 22;
  static constexpr std::uint64_t kDirectLimit = std::uint64_t{1} << 40;
  static constexpr std::uint32_t kZechZero = 0xffffffffu;

  FieldTable(FieldSpec spec, int degree,
             std::uint64_t log_table_limit = kLogTableLimit);

  std::uint32_t p() const { return p_; }
  int degree() const { return d_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t mult_order() const { return size_ - 1; }
  // Ascending coefficients, monic, length degree + 1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  bool has_log_tables() const { return !log_.empty(); }
  Elem generator() const { return gen_; }

  Elem from_int(std::int64_t v) const;
  bool in_prime_field(Elem x) const { return x < p_; }

  Elem add(Elem x, Elem y) const {
    if (x == 0) return y;
    if (y == 0) return x;
    if (!log_.empty() && d_ > 1) {
      const std::uint32_t ord = static_cast<std::uint32_t>(size_ - 1);
      const std::uint32_t lx = log_[x], ly = log_[y];
      const std::uint32_t z = zech_[ly >= lx ? ly - lx : ly + ord - lx];
      if (z == kZechZero) return 0;
      const std::uint32_t s = lx + z;
      return exp_[s >= ord ? s - ord : s];
    }
    return add_slow(x, y);
  }
  Elem sub(Elem x, Elem y) const { return add(x, neg(y)); }
  Elem neg(Elem x) const {
    if (x == 0) return 0;
    if (d_ == 1) return p_ - x;
    if (!log_.empty()) {
      const std::uint64_t ord = size_ - 1;
      std::uint64_t k = log_[x] + ord / 2;
      return exp_[k >= ord ? k - ord : k];
    }
    return neg_slow(x);
  }
  Elem mul(Elem x, Elem y) const {
    if (x == 0 || y == 0) return 0;
    if (d_ == 1) return x * y % p_;
    if (!log_.empty()) {
      const std::uint32_t ord = static_cast<std::uint32_t>(size_ - 1);
      const std::uint32_t s = log_[x] + log_[y];
      return exp_[s >= ord ? s - ord : s];
    }
    return mul_direct(x, y);
  }
  Elem inv(Elem x) const {
    if (x != 0 && d_ > 1 && !log_.empty()) {
      const std::uint32_t l = log_[x];
      return exp_[l == 0 ? 0 : (size_ - 1) - l];
    }
    return inv_slow(x);
  }
  Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }
  Elem pow(Elem x, std::uint64_t e) const;
  Elem frobenius(Elem x) const { return pow(x, p_); }

  // Legendre-type symbol: 0 for zero, +1 for nonzero squares, -1 otherwise.
  int quad_char(Elem x) const {
    if (x == 0) return 0;
    if (!log_.empty()) return (log_[x] & 1u) ? -1 : 1;
    return quad_char_slow(x);
  }

  // Index i with x^{(Q-1)/ell} = g^{i(Q-1)/ell} for the table generator g;
  // nullopt for x = 0. Throws OrderNotDividing if ell does not divide Q - 1.
  std::optional<unsigned> ell_char(Elem x, unsigned ell) const;

  // Index j with x^{(Q-1)/ell} = ζ^j, where ζ = g_1^{(p-1)/ell} for the least
  // primitive root g_1 of the prime field. This is the normalisation shared by
  // every extension of the same prime field; requires ell | p - 1.
  std::optional<unsigned> residue_symbol_index(Elem x, unsigned ell) const;

  // Log-domain access (log tables only).
  std::uint32_t log(Elem x) const { return log_[x]; }
  Elem exp(std::uint64_t k) const { return exp_[k % (size_ - 1)]; }
  // log(1 + g^k), or kZechZero when 1 + g^k = 0.
  std::uint32_t zech(std::uint32_t k) const { return zech_[k]; }

  std::vector<std::uint32_t> digits(Elem x) const;
  Elem from_digits(const std::vector<std::uint32_t>& digits) const;

 private:
  Elem add_slow(Elem x, Elem y) const;
  Elem neg_slow(Elem x) const;
  Elem inv_slow(Elem x) const;
  int quad_char_slow(Elem x) const;
  Elem mul_direct(Elem x, Elem y) const;
  Elem pow_direct(Elem x, std::uint64_t e) const;
  void find_generator();
  void build_tables();

  std::uint32_t p_;
  int d_;
  std::uint64_t size_;
  std::vector<std::uint32_t> modulus_;
  Elem gen_ = 0;
  std::vector<std::uint64_t> order_factors_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> zech_;
  std::vector<std::uint32_t> inv_p_;
};

struct OrbitRep {
  Elem rep;   // least element of its Frobenius orbit
  int size;   // orbit size = degree of rep over F_p
};

// Frobenius orbits of F, each listed once by its least element, in increasing
// order of that element. With exact_degree > 0 only orbits of that size.
std::vector<OrbitRep> frobenius_orbits(const FieldTable& F, int exact_degree = 0);

// Minimal polynomial over F_p of x (ascending coefficients, monic).
std::vector<std::uint32_t> min_poly(const FieldTable& F, Elem x);

// Lexicographically least monic irreducible of degree d over F_p, comparing
// coefficients from t^{d-1} down to t^0.
std::vector<std::uint32_t> least_irreducible(std::uint32_t p, int degree);

std::uint32_t least_primitive_root(std::uint32_t p);

// Process-wide cache of field tables keyed by (p, d); tables are immutable
// once published.
class FieldRegistry {
 public:
  static FieldRegistry& instance();
  std::shared_ptr<const FieldTable> get(std::uint32_t p, int degree);

 private:
  std::mutex mu_;
  std::map<std::pair<std::uint32_t, int>, std::shared_ptr<const FieldTable>>
      tables_;
};

}  // namespace twistlab

#endif  // TWISTLAB_FFIELD_HPP
