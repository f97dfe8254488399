#include "twistlab/fqpoly.hpp"

#include <algorithm>
#include <charconv>

#include "twistlab/error.hpp"

namespace twistlab {

bool poly_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.c.size(); i-- > 0;)
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  return false;
}

PolyRing::PolyRing(std::uint32_t p) : p_(p), inv_(p, 0) {
  FieldSpec spec(p);
  (void)spec;
  for (std::uint32_t a = 1; a < p; ++a) {
    std::uint64_t r = 1, b = a;
    std::uint32_t e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    inv_[a] = static_cast<std::uint32_t>(r);
  }
}

Poly PolyRing::normalize(std::vector<std::int64_t> coeffs) const {
  std::vector<std::uint32_t> c(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = mod(coeffs[i]);
  return Poly(std::move(c));
}

Poly PolyRing::add(const Poly& a, const Poly& b) const {
  std::vector<std::uint32_t> c(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::uint32_t s = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    c[i] = s >= p_ ? s - p_ : s;
  }
  return Poly(std::move(c));
}

Poly PolyRing::neg(const Poly& a) const {
  std::vector<std::uint32_t> c(a.c.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.c[i] ? p_ - a.c[i] : 0;
  return Poly(std::move(c));
}

Poly PolyRing::sub(const Poly& a, const Poly& b) const { return add(a, neg(b)); }

Poly PolyRing::mul(const Poly& a, const Poly& b) const {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<std::uint64_t> acc(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (!a.c[i]) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j)
      acc[i + j] += std::uint64_t{a.c[i]} * b.c[j];
  }
  std::vector<std::uint32_t> c(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i)
    c[i] = static_cast<std::uint32_t>(acc[i] % p_);
  return Poly(std::move(c));
}

Poly PolyRing::scale(const Poly& a, std::uint32_t s) const {
  s %= p_;
  std::vector<std::uint32_t> c(a.c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = static_cast<std::uint32_t>(std::uint64_t{a.c[i]} * s % p_);
  return Poly(std::move(c));
}

Poly PolyRing::monic(const Poly& a) const {
  if (a.is_zero()) return a;
  return scale(a, inv(a.lead()));
}

Poly PolyRing::pow(const Poly& a, unsigned e) const {
  Poly r{1};
  Poly b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

Poly PolyRing::derivative(const Poly& a) const {
  if (a.c.size() <= 1) return {};
  std::vector<std::uint32_t> c(a.c.size() - 1);
  for (std::size_t i = 1; i < a.c.size(); ++i)
    c[i - 1] = static_cast<std::uint32_t>(std::uint64_t{a.c[i]} * (i % p_) % p_);
  return Poly(std::move(c));
}

DivRem PolyRing::divrem(const Poly& a, const Poly& b) const {
  if (b.is_zero()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly{}, a};
  std::vector<std::uint32_t> r = a.c;
  const std::size_t db = static_cast<std::size_t>(b.degree());
  std::vector<std::uint32_t> q(r.size() - db, 0);
  const std::uint64_t li = inv(b.lead());
  for (std::size_t i = r.size(); i-- > db;) {
    const std::uint32_t c = static_cast<std::uint32_t>(r[i] * li % p_);
    q[i - db] = c;
    if (c == 0) continue;
    const std::uint64_t nc = p_ - c;
    for (std::size_t j = 0; j <= db; ++j)
      r[i - db + j] = static_cast<std::uint32_t>((r[i - db + j] + nc * b.c[j]) % p_);
  }
  r.resize(db);
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly PolyRing::rem(const Poly& a, const Poly& b) const {
  return divrem(a, b).remainder;
}

Poly PolyRing::gcd(const Poly& a, const Poly& b) const {
  if (a.is_zero() && b.is_zero())
    fail(ErrorCode::BothZero, "gcd of two zero polynomials");
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

Poly PolyRing::powmod(const Poly& base, std::uint64_t e, const Poly& m) const {
  Poly r = rem(Poly{1}, m);
  Poly b = rem(base, m);
  while (e) {
    if (e & 1) r = rem(mul(r, b), m);
    b = rem(mul(b, b), m);
    e >>= 1;
  }
  return r;
}

bool PolyRing::is_squarefree(const Poly& f) const {
  if (f.is_zero()) fail(ErrorCode::ZeroInput, "squarefree test of zero");
  if (f.degree() <= 0) return true;
  const Poly d = derivative(f);
  if (d.is_zero()) {
    // f = g(t^p) = (g^{1/p}(t))^p over F_p, a p-th power of positive degree.
    return false;
  }
  return gcd(f, d).is_one();
}

bool PolyRing::is_irreducible(const Poly& f) const {
  if (f.degree() < 1)
    fail(ErrorCode::ConstantInput, "irreducibility test of a constant");
  const int d = f.degree();
  if (d == 1) return true;
  const Poly m = monic(f);
  auto frob = [&](int k) {
    Poly x = t();
    for (int i = 0; i < k; ++i) x = powmod(x, p_, m);
    return x;
  };
  if (frob(d) != rem(t(), m)) return false;
  for (std::uint64_t r : prime_factors_u64(static_cast<std::uint64_t>(d))) {
    const Poly h = sub(frob(d / static_cast<int>(r)), t());
    if (!gcd(m, h).is_one()) return false;
  }
  return true;
}

std::uint32_t PolyRing::eval(const Poly& f, std::uint32_t x) const {
  std::uint64_t acc = 0;
  for (std::size_t i = f.c.size(); i-- > 0;) acc = (acc * x + f.c[i]) % p_;
  return static_cast<std::uint32_t>(acc);
}

Elem PolyRing::eval(const Poly& f, const FieldTable& field, Elem x) const {
  Elem acc = 0;
  for (std::size_t i = f.c.size(); i-- > 0;)
    acc = field.add(field.mul(acc, x), f.c[i]);
  return acc;
}

Poly PolyRing::monic_from_index(int deg, std::uint64_t index) const {
  std::vector<std::uint32_t> c(static_cast<std::size_t>(deg) + 1, 0);
  for (int i = 0; i < deg; ++i) {
    c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(index % p_);
    index /= p_;
  }
  c[static_cast<std::size_t>(deg)] = 1;
  return Poly(std::move(c));
}

std::uint64_t PolyRing::monic_index(const Poly& f) const {
  std::uint64_t idx = 0;
  for (int i = f.degree() - 1; i >= 0; --i) idx = idx * p_ + f.coeff(i);
  return idx;
}

std::uint64_t PolyRing::monic_count(int deg) const {
  return pow_u64(p_, static_cast<unsigned>(deg));
}

std::vector<std::pair<Poly, int>> PolyRing::factor(const Poly& f) const {
  if (f.is_zero()) fail(ErrorCode::ZeroInput, "factorisation of zero");
  std::vector<std::pair<Poly, int>> out;
  Poly rest = monic(f);
  for (int e = 1; 2 * e <= rest.degree(); ++e) {
    for (const Poly& P : iter_primes(*this, e)) {
      if (2 * e > rest.degree()) break;
      int mult = 0;
      while (true) {
        DivRem dr = divrem(rest, P);
        if (!dr.remainder.is_zero()) break;
        rest = std::move(dr.quotient);
        ++mult;
      }
      if (mult) out.emplace_back(P, mult);
    }
  }
  if (rest.degree() >= 1) {
    bool merged = false;
    for (auto& [P, m] : out)
      if (P == rest) {
        ++m;
        merged = true;
      }
    if (!merged) out.emplace_back(rest, 1);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return out;
}

Poly PolyRing::parse(std::string_view text) const {
  std::vector<std::int64_t> coeffs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      fail(ErrorCode::ParseError,
           "bad polynomial coefficient '" + std::string(tok) + "' in '" +
               std::string(text) + "'");
    coeffs.push_back(v);
    pos = comma + 1;
  }
  return normalize(std::move(coeffs));
}

std::string PolyRing::format(const Poly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(f.c[i]);
  }
  return out;
}

std::mutex PrimeIndex::mu_;
std::map<std::pair<std::uint32_t, int>, std::unique_ptr<std::vector<Poly>>>
    PrimeIndex::cache_;

std::uint64_t PrimeIndex::necklace_count(std::uint32_t q, int degree) {
  auto mobius = [](std::uint64_t n) {
    int sign = 1;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
      if (n % f == 0) {
        n /= f;
        if (n % f == 0) return 0;
        sign = -sign;
      }
    }
    if (n > 1) sign = -sign;
    return sign;
  };
  std::int64_t total = 0;
  for (int e = 1; e <= degree; ++e)
    if (degree % e == 0)
      total += mobius(static_cast<std::uint64_t>(e)) *
               static_cast<std::int64_t>(pow_u64(q, static_cast<unsigned>(degree / e)));
  return static_cast<std::uint64_t>(total / degree);
}

const std::vector<Poly>& PrimeIndex::primes(const PolyRing& ring, int degree) {
  if (degree < 1) fail(ErrorCode::InvalidArgument, "prime degree must be >= 1");
  const auto key = std::make_pair(ring.p(), degree);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  // Lower degrees first, outside the lock (recursive).
  std::vector<const std::vector<Poly>*> lower;
  for (int e = 1; 2 * e <= degree; ++e) lower.push_back(&primes(ring, e));

  const std::uint32_t p = ring.p();
  const std::uint64_t count = ring.monic_count(degree);
  std::vector<char> reducible(count, 0);
  std::vector<std::uint64_t> pw(static_cast<std::size_t>(degree) + 1, 1);
  for (int i = 1; i <= degree; ++i) pw[static_cast<std::size_t>(i)] = pw[static_cast<std::size_t>(i) - 1] * p;
  std::vector<std::uint64_t> prod(static_cast<std::size_t>(degree) + 1);
  for (int e = 1; 2 * e <= degree; ++e) {
    const int rest = degree - e;
    const std::uint64_t rest_count = ring.monic_count(rest);
    for (const Poly& P : *lower[static_cast<std::size_t>(e) - 1]) {
      for (std::uint64_t j = 0; j < rest_count; ++j) {
        const Poly Q = ring.monic_from_index(rest, j);
        std::fill(prod.begin(), prod.end(), 0);
        for (int a = 0; a <= e; ++a)
          for (int b = 0; b <= rest; ++b)
            prod[static_cast<std::size_t>(a + b)] += std::uint64_t{P.c[static_cast<std::size_t>(a)]} * Q.c[static_cast<std::size_t>(b)];
        std::uint64_t idx = 0;
        for (int i = 0; i < degree; ++i) idx += (prod[static_cast<std::size_t>(i)] % p) * pw[static_cast<std::size_t>(i)];
        reducible[idx] = 1;
      }
    }
  }
  auto out = std::make_unique<std::vector<Poly>>();
  for (std::uint64_t idx = 0; idx < count; ++idx)
    if (!reducible[idx]) out->push_back(ring.monic_from_index(degree, idx));

  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.emplace(key, std::move(out));
  return *it->second;
}

const std::vector<Poly>& iter_primes(const PolyRing& ring, int degree) {
  return PrimeIndex::primes(ring, degree);
}

FamilyStream::FamilyStream(const PolyRing& ring, int degree, Poly modulus,
                           std::optional<Poly> cls, std::uint64_t begin,
                           std::uint64_t end)
    : ring_(ring),
      degree_(degree),
      modulus_(std::move(modulus)),
      cls_(std::move(cls)),
      pos_(begin),
      count_(ring.monic_count(degree)) {
  if (degree < 1) fail(ErrorCode::InvalidArgument, "family degree must be >= 1");
  if (modulus_.is_zero()) fail(ErrorCode::InvalidArgument, "zero modulus");
  modulus_ = ring_.monic(modulus_);
  if (cls_) {
    if (!ring_.coprime(*cls_, modulus_))
      fail(ErrorCode::NonCoprimeClass,
           "class " + PolyRing::format(*cls_) + " is not coprime to modulus " +
               PolyRing::format(modulus_));
    cls_ = ring_.rem(*cls_, modulus_);
  }
  end_ = std::min(end, count_);
}

std::optional<Poly> FamilyStream::next() {
  while (pos_ < end_) {
    Poly D = ring_.monic_from_index(degree_, pos_++);
    if (!ring_.is_squarefree(D)) continue;
    if (!modulus_.is_one() && !ring_.coprime(D, modulus_)) continue;
    if (cls_ && ring_.rem(D, modulus_) != *cls_) continue;
    return D;
  }
  return std::nullopt;
}

std::vector<Poly> collect_family(const PolyRing& ring, int degree,
                                 const Poly& modulus,
                                 const std::optional<Poly>& cls) {
  FamilyStream stream(ring, degree, modulus, cls);
  std::vector<Poly> out;
  while (auto D = stream.next()) out.push_back(std::move(*D));
  return out;
}

ResidueMap::ResidueMap(const PolyRing& ring, const Poly& prime,
                       std::shared_ptr<const FieldTable> field)
    : ring_(ring), prime_(ring.monic(prime)), field_(std::move(field)) {
  if (field_->degree() != prime_.degree())
    fail(ErrorCode::DegreeMismatch,
         "residue field degree " + std::to_string(field_->degree()) +
             " does not match prime degree " + std::to_string(prime_.degree()));
  for (Elem x = 0; x < field_->size(); ++x) {
    if (ring_.eval(prime_, *field_, x) == 0) {
      root_ = x;
      return;
    }
  }
  fail(ErrorCode::InvalidArgument,
       "polynomial " + PolyRing::format(prime_) + " has no root in its residue field");
}

ResidueMap::ResidueMap(const PolyRing& ring, const Poly& prime,
                       std::shared_ptr<const FieldTable> field, Elem root)
    : ring_(ring), prime_(ring.monic(prime)), field_(std::move(field)), root_(root) {
  if (field_->degree() != prime_.degree())
    fail(ErrorCode::DegreeMismatch, "residue field degree mismatch");
}

ResidueMap residue_map(const PolyRing& ring, const Poly& prime) {
  return ResidueMap(ring, prime,
                    FieldRegistry::instance().get(ring.p(), prime.degree()));
}

}  // namespace twistlab
