#include "twistlab/ffield.hpp"

#include <algorithm>
#include <string>

#include "twistlab/error.hpp"

namespace twistlab {

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors_u64(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t pow_u64(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

FieldSpec::FieldSpec(std::uint32_t prime) : p(prime) {
  if (!is_prime_u64(prime))
    fail(ErrorCode::NotPrime, "field characteristic " + std::to_string(prime) +
                                  " is not prime");
  if (prime < 5)
    fail(ErrorCode::InvalidArgument,
         "characteristic 2 and 3 are not supported (p=" +
             std::to_string(prime) + ")");
}

namespace {

using Coeffs = std::vector<std::uint32_t>;

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p;
  std::uint32_t e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod m, m monic.
Coeffs reduce(Coeffs a, const Coeffs& m, std::uint32_t p) {
  const std::size_t dm = m.size() - 1;
  trim(a);
  while (a.size() > dm) {
    const std::uint64_t c = a.back();
    const std::size_t s = a.size() - 1 - dm;
    if (c != 0)
      for (std::size_t i = 0; i < dm; ++i)
        a[s + i] = static_cast<std::uint32_t>((a[s + i] + (p - c) * m[i]) % p);
    a.pop_back();
    trim(a);
  }
  return a;
}

Coeffs mulmod(const Coeffs& a, const Coeffs& b, const Coeffs& m,
              std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>(
          (r[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  return reduce(std::move(r), m, p);
}

Coeffs powmod(Coeffs base, std::uint64_t e, const Coeffs& m, std::uint32_t p) {
  Coeffs r{1};
  base = reduce(std::move(base), m, p);
  while (e) {
    if (e & 1) r = mulmod(r, base, m, p);
    base = mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

Coeffs gcd_poly(Coeffs a, Coeffs b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    const std::uint32_t li = inv_mod(b.back(), p);
    Coeffs bm(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      bm[i] = static_cast<std::uint32_t>(std::uint64_t{b[i]} * li % p);
    a = reduce(std::move(a), bm, p);
    std::swap(a, b);
  }
  return a;
}

// t^{p^k} mod f for the Rabin criterion.
bool rabin_irreducible(const Coeffs& f, std::uint32_t p) {
  const int d = static_cast<int>(f.size()) - 1;
  if (d == 1) return true;
  auto frob_power = [&](int k) {
    Coeffs x{0, 1};
    for (int i = 0; i < k; ++i) x = powmod(x, p, f, p);
    return x;
  };
  Coeffs xq = frob_power(d);
  Coeffs t = reduce(Coeffs{0, 1}, f, p);
  if (xq != t) return false;
  for (std::uint64_t r : prime_factors_u64(static_cast<std::uint64_t>(d))) {
    Coeffs h = frob_power(d / static_cast<int>(r));
    // h - t
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    Coeffs g = gcd_poly(f, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace

std::vector<std::uint32_t> least_irreducible(std::uint32_t p, int degree) {
  if (degree < 1) fail(ErrorCode::InvalidArgument, "degree must be >= 1");
  const std::uint64_t count = pow_u64(p, static_cast<unsigned>(degree));
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Coeffs f(static_cast<std::size_t>(degree) + 1, 0);
    std::uint64_t v = idx;
    for (int i = 0; i < degree; ++i) {
      f[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    f[static_cast<std::size_t>(degree)] = 1;
    if (degree > 1 && f[0] == 0) continue;
    if (rabin_irreducible(f, p)) return f;
  }
  fail(ErrorCode::NoIrreducibleFound,
       "no irreducible polynomial found (unreachable for prime p)");
}

std::uint32_t least_primitive_root(std::uint32_t p) {
  const auto factors = prime_factors_u64(p - 1);
  for (std::uint32_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto r : factors) {
      std::uint64_t acc = 1, b = g;
      std::uint64_t e = (p - 1) / r;
      while (e) {
        if (e & 1) acc = acc * b % p;
        b = b * b % p;
        e >>= 1;
      }
      if (acc == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;  // p = 2
}

FieldTable::FieldTable(FieldSpec spec, int degree,
                       std::uint64_t log_table_limit)
    : p_(spec.p), d_(degree) {
  if (degree < 1) fail(ErrorCode::InvalidArgument, "extension degree must be >= 1");
  long double approx = 1;
  for (int i = 0; i < degree; ++i) approx *= p_;
  if (approx > static_cast<long double>(kDirectLimit))
    fail(ErrorCode::BudgetExceeded,
         "field of size " + std::to_string(p_) + "^" + std::to_string(degree) +
             " exceeds the direct-arithmetic limit");
  size_ = pow_u64(p_, static_cast<unsigned>(degree));
  inv_p_.assign(p_, 0);
  for (std::uint32_t a = 1; a < p_; ++a) inv_p_[a] = inv_mod(a, p_);
  if (degree == 1)
    modulus_ = {0, 1};
  else
    modulus_ = least_irreducible(p_, degree);
  order_factors_ = prime_factors_u64(size_ - 1);
  find_generator();
  if (size_ <= log_table_limit) build_tables();
}

Elem FieldTable::from_int(std::int64_t v) const {
  const std::int64_t p = p_;
  return static_cast<Elem>(((v % p) + p) % p);
}

std::vector<std::uint32_t> FieldTable::digits(Elem x) const {
  std::vector<std::uint32_t> out(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(x % p_);
    x /= p_;
  }
  return out;
}

Elem FieldTable::from_digits(const std::vector<std::uint32_t>& dg) const {
  Elem x = 0;
  for (std::size_t i = dg.size(); i-- > 0;) x = x * p_ + (dg[i] % p_);
  return x;
}

Elem FieldTable::neg_slow(Elem x) const {
  Elem out = 0, scale = 1;
  for (int i = 0; i < d_; ++i) {
    const std::uint32_t c = static_cast<std::uint32_t>(x % p_);
    x /= p_;
    out += scale * ((p_ - c) % p_);
    scale *= p_;
  }
  return out;
}

Elem FieldTable::add_slow(Elem x, Elem y) const {
  if (d_ == 1) {
    const Elem s = x + y;
    return s >= p_ ? s - p_ : s;
  }
  Elem out = 0, scale = 1;
  for (int i = 0; i < d_; ++i) {
    const std::uint64_t c = (x % p_ + y % p_) % p_;
    x /= p_;
    y /= p_;
    out += scale * c;
    scale *= p_;
  }
  return out;
}

Elem FieldTable::mul_direct(Elem x, Elem y) const {
  if (d_ == 1) return x * y % p_;
  Coeffs a = digits(x), b = digits(y);
  trim(a);
  trim(b);
  Coeffs r = mulmod(a, b, modulus_, p_);
  r.resize(static_cast<std::size_t>(d_), 0);
  return from_digits(r);
}

Elem FieldTable::pow_direct(Elem x, std::uint64_t e) const {
  Elem r = 1;
  while (e) {
    if (e & 1) r = mul_direct(r, x);
    x = mul_direct(x, x);
    e >>= 1;
  }
  return r;
}

Elem FieldTable::inv_slow(Elem x) const {
  if (x == 0) fail(ErrorCode::DivisionByZero, "inverse of zero field element");
  if (d_ == 1) return inv_p_[x];
  return pow_direct(x, size_ - 2);
}

Elem FieldTable::pow(Elem x, std::uint64_t e) const {
  if (x == 0) return e == 0 ? 1 : 0;
  if (has_log_tables()) {
    const std::uint64_t ord = size_ - 1;
    const unsigned __int128 k =
        static_cast<unsigned __int128>(log_[x]) * (e % ord);
    return exp_[static_cast<std::uint64_t>(k % ord)];
  }
  return pow_direct(x, e);
}

int FieldTable::quad_char_slow(Elem x) const {
  return pow_direct(x, (size_ - 1) / 2) == 1 ? 1 : -1;
}

std::optional<unsigned> FieldTable::ell_char(Elem x, unsigned ell) const {
  if (ell == 0 || (size_ - 1) % ell != 0)
    fail(ErrorCode::OrderNotDividing,
         "order " + std::to_string(ell) + " does not divide " +
             std::to_string(size_ - 1));
  if (x == 0) return std::nullopt;
  if (has_log_tables()) return static_cast<unsigned>(log_[x] % ell);
  const std::uint64_t e = (size_ - 1) / ell;
  const Elem w = pow_direct(x, e);
  const Elem zeta = pow_direct(gen_, e);
  Elem acc = 1;
  for (unsigned i = 0; i < ell; ++i) {
    if (acc == w) return i;
    acc = mul_direct(acc, zeta);
  }
  fail(ErrorCode::OrderNotDividing, "power residue not found");
}

std::optional<unsigned> FieldTable::residue_symbol_index(Elem x,
                                                         unsigned ell) const {
  if (ell == 0 || (p_ - 1) % ell != 0)
    fail(ErrorCode::OrderNotDividing,
         "order " + std::to_string(ell) + " does not divide p - 1 = " +
             std::to_string(p_ - 1));
  if (x == 0) return std::nullopt;
  // x^{(Q-1)/ell} lies in the prime field; take its log base zeta there.
  const Elem w = pow(x, (size_ - 1) / ell);
  if (w >= p_) fail(ErrorCode::InvalidArgument, "power residue left the prime field");
  std::uint64_t z = 1;
  const std::uint32_t g1 = least_primitive_root(p_);
  for (std::uint32_t k = 0; k < (p_ - 1) / ell; ++k) z = z * g1 % p_;
  std::uint64_t zj = 1;
  for (unsigned j = 0; j < ell; ++j, zj = zj * z % p_)
    if (zj == w) return j;
  fail(ErrorCode::InvalidArgument, "power residue is not an ell-th root of unity");
}

void FieldTable::find_generator() {
  if (size_ == 2) {
    gen_ = 1;
    return;
  }
  for (Elem g = 2; g < size_; ++g) {
    bool ok = true;
    for (auto r : order_factors_) {
      if (pow_direct(g, (size_ - 1) / r) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen_ = g;
      return;
    }
  }
  fail(ErrorCode::InvalidArgument, "no primitive element (unreachable)");
}

void FieldTable::build_tables() {
  const std::uint64_t ord = size_ - 1;
  log_.assign(size_, 0);
  exp_.assign(ord, 0);
  zech_.assign(ord, kZechZero);
  // Multiplication by g as a linear map on coordinate vectors.
  const Coeffs gd = [&] {
    Coeffs c = digits(gen_);
    trim(c);
    return c;
  }();
  std::vector<std::uint32_t> cur(static_cast<std::size_t>(d_), 0);
  cur[0] = 1;
  std::vector<std::uint64_t> tmp(static_cast<std::size_t>(2 * d_), 0);
  for (std::uint64_t k = 0; k < ord; ++k) {
    const Elem e = from_digits(cur);
    exp_[k] = static_cast<std::uint32_t>(e);
    log_[e] = static_cast<std::uint32_t>(k);
    std::fill(tmp.begin(), tmp.end(), 0);
    for (std::size_t i = 0; i < cur.size(); ++i)
      if (cur[i])
        for (std::size_t j = 0; j < gd.size(); ++j)
          tmp[i + j] += std::uint64_t{cur[i]} * gd[j];
    for (std::size_t i = tmp.size(); i-- > static_cast<std::size_t>(d_);) {
      const std::uint64_t c = tmp[i] % p_;
      if (c == 0) continue;
      const std::size_t s = i - static_cast<std::size_t>(d_);
      for (std::size_t j = 0; j < static_cast<std::size_t>(d_); ++j)
        tmp[s + j] += (p_ - c) * modulus_[j];
      tmp[i] = 0;
    }
    for (std::size_t i = 0; i < cur.size(); ++i)
      cur[i] = static_cast<std::uint32_t>(tmp[i] % p_);
  }
  if (from_digits(cur) != 1)
    fail(ErrorCode::InvalidArgument, "generator order check failed");
  for (std::uint64_t k = 0; k < ord; ++k) {
    const Elem e = exp_[k];
    const Elem digit0 = e % p_;
    const Elem e1 = e - digit0 + (digit0 + 1) % p_;
    zech_[k] = e1 == 0 ? kZechZero : log_[e1];
  }
}

std::vector<OrbitRep> frobenius_orbits(const FieldTable& F, int exact_degree) {
  const std::uint64_t Q = F.size();
  std::vector<char> seen(Q, 0);
  std::vector<OrbitRep> out;
  for (Elem x = 0; x < Q; ++x) {
    if (seen[x]) continue;
    int size = 0;
    Elem y = x;
    do {
      seen[y] = 1;
      ++size;
      y = F.frobenius(y);
    } while (y != x);
    if (exact_degree == 0 || size == exact_degree) out.push_back({x, size});
  }
  return out;
}

std::vector<std::uint32_t> min_poly(const FieldTable& F, Elem x) {
  // prod over the orbit of (t - x^{p^i}); coefficients computed in F.
  std::vector<Elem> c{1};
  Elem y = x;
  do {
    std::vector<Elem> next(c.size() + 1, 0);
    const Elem ny = F.neg(y);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] = F.add(next[i + 1], c[i]);
      next[i] = F.add(next[i], F.mul(c[i], ny));
    }
    c = std::move(next);
    y = F.frobenius(y);
  } while (y != x);
  std::vector<std::uint32_t> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!F.in_prime_field(c[i]))
      fail(ErrorCode::InvalidArgument, "minimal polynomial left the prime field");
    out[i] = static_cast<std::uint32_t>(c[i]);
  }
  return out;
}

FieldRegistry& FieldRegistry::instance() {
  static FieldRegistry registry;
  return registry;
}

std::shared_ptr<const FieldTable> FieldRegistry::get(std::uint32_t p,
                                                     int degree) {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(p, degree);
  auto it = tables_.find(key);
  if (it != tables_.end()) return it->second;
  auto table = std::make_shared<const FieldTable>(FieldSpec(p), degree);
  tables_.emplace(key, table);
  return table;
}

}  // namespace twistlab
