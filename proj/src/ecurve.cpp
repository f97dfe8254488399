#include "twistlab/ecurve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "twistlab/characters.hpp"
#include "twistlab/error.hpp"

namespace twistlab {

std::string_view to_string(Reduction r) {
  switch (r) {
    case Reduction::Good: return "good";
    case Reduction::MultSplit: return "split";
    case Reduction::MultNonsplit: return "nonsplit";
    case Reduction::Additive: return "additive";
  }
  return "?";
}

namespace {

bool divides(const PolyRing& ring, const Poly& P, const Poly& f) {
  return ring.rem(f, P).is_zero();
}

int valuation_at_zero(const Poly& f) {
  for (std::size_t i = 0; i < f.c.size(); ++i)
    if (f.c[i]) return static_cast<int>(i);
  return 1 << 20;
}

// s^{shift} * s^{deg f} f(1/s)
Poly reverse_shift(const Poly& f, int shift) {
  if (f.is_zero()) return {};
  std::vector<std::uint32_t> c(static_cast<std::size_t>(shift), 0);
  for (std::size_t i = f.c.size(); i-- > 0;) c.push_back(f.c[i]);
  return Poly(std::move(c));
}

Poly discriminant(const PolyRing& ring, const Poly& A, const Poly& B) {
  const Poly inner = ring.add(ring.scale(ring.pow(A, 3), ring.mod(4)),
                              ring.scale(ring.mul(B, B), ring.mod(27)));
  return ring.scale(inner, ring.mod(-16));
}

std::uint64_t isqrt(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Affine points with a flag for the point at infinity.
struct Pt {
  Elem x = 0, y = 0;
  bool inf = true;
};

class Curve {
 public:
  Curve(const FieldTable& F, Elem a, Elem b) : F_(F), a_(a), b_(b) {
    two_inv_ = F.inv(F.from_int(2));
    three_ = F.from_int(3);
  }

  Pt neg(const Pt& P) const { return P.inf ? P : Pt{P.x, F_.neg(P.y), false}; }

  Pt add(const Pt& P, const Pt& R) const {
    if (P.inf) return R;
    if (R.inf) return P;
    Elem lambda;
    if (P.x == R.x) {
      if (P.y != R.y || P.y == 0) return Pt{};
      // (3x^2 + a) / 2y
      const Elem num = F_.add(F_.mul(three_, F_.mul(P.x, P.x)), a_);
      lambda = F_.mul(num, F_.mul(two_inv_, F_.inv(P.y)));
    } else {
      lambda = F_.mul(F_.sub(R.y, P.y), F_.inv(F_.sub(R.x, P.x)));
    }
    const Elem x3 = F_.sub(F_.sub(F_.mul(lambda, lambda), P.x), R.x);
    const Elem y3 = F_.sub(F_.mul(lambda, F_.sub(P.x, x3)), P.y);
    return Pt{x3, y3, false};
  }

  Pt mul(Pt P, std::uint64_t k) const {
    Pt acc;
    while (k) {
      if (k & 1) acc = add(acc, P);
      P = add(P, P);
      k >>= 1;
    }
    return acc;
  }

  Elem rhs(Elem x) const {
    return F_.add(F_.mul(x, F_.add(F_.mul(x, x), a_)), b_);
  }

 private:
  const FieldTable& F_;
  Elem a_, b_;
  Elem two_inv_, three_;
};

Elem sqrt_elem(const FieldTable& F, Elem v) {
  if (v == 0) return 0;
  return F.exp(F.log(v) / 2);
}

struct BsgsResult {
  std::vector<std::uint64_t> hits;  // every n in [lo, hi] with [n]P = O
  std::uint64_t small_order = 0;    // exact order when it is at most m
};

// Baby steps jP (j <= m) keyed by x; giant windows [n - m, n + m] sweep the
// whole interval so every multiple of the order in [lo, hi] is found.
BsgsResult bsgs_sweep(const Curve& E, const Pt& P, std::uint64_t lo, std::uint64_t hi) {
  BsgsResult res;
  const std::uint64_t m = isqrt(hi - lo) + 1;
  struct Baby {
    Elem x, y;
    std::uint64_t j;
    bool operator<(const Baby& o) const { return x < o.x; }
  };
  std::vector<Baby> baby;
  baby.reserve(m);
  Pt cur = P;
  for (std::uint64_t j = 1; j <= m; ++j) {
    if (cur.inf) {
      res.small_order = j;
      return res;
    }
    baby.push_back({cur.x, cur.y, j});
    cur = E.add(cur, P);
  }
  std::sort(baby.begin(), baby.end());
  const Pt step = E.mul(P, 2 * m + 1);
  std::uint64_t n = lo + m;
  Pt G = E.mul(P, n);
  auto record = [&](std::uint64_t v) {
    if (v >= lo && v <= hi &&
        std::find(res.hits.begin(), res.hits.end(), v) == res.hits.end())
      res.hits.push_back(v);
  };
  while (n <= hi + m) {
    if (G.inf) {
      record(n);
    } else {
      auto it = std::lower_bound(baby.begin(), baby.end(), Baby{G.x, 0, 0});
      for (; it != baby.end() && it->x == G.x; ++it) {
        if (G.y == it->y) record(n - it->j);
        if (G.y == E.neg(Pt{it->x, it->y, false}).y) record(n + it->j);
      }
    }
    G = E.add(G, step);
    n += 2 * m + 1;
  }
  std::sort(res.hits.begin(), res.hits.end());
  return res;
}

}  // namespace

CurveData build_curve(const PolyRing& ring, const Poly& A0, const Poly& B0) {
  CurveData cd;
  cd.p = ring.p();
  cd.A = ring.normalize(std::vector<std::int64_t>(A0.c.begin(), A0.c.end()));
  cd.B = ring.normalize(std::vector<std::int64_t>(B0.c.begin(), B0.c.end()));
  cd.Delta = discriminant(ring, cd.A, cd.B);
  if (cd.Delta.is_zero()) fail(ErrorCode::SingularCurve, "discriminant vanishes identically");
  if (cd.A.is_zero()) fail(ErrorCode::ZeroJInvariant, "A = 0 gives j-invariant 0");
  cd.c4 = ring.scale(cd.A, ring.mod(-48));

  cd.finite_conductor = Poly{1};
  cd.mult_part = Poly{1};
  for (const auto& [P, e] : ring.factor(cd.Delta)) {
    (void)e;
    if (ring.divides_power(P, cd.A, 4) && ring.divides_power(P, cd.B, 6))
      fail(ErrorCode::NonMinimalModel,
           "model is not minimal at " + PolyRing::format(P));
    BadPrime bp{P, Reduction::Additive, 2};
    if (!divides(ring, P, cd.c4)) {
      bp.type = reduction_type(ring, cd, P);
      bp.exponent = 1;
      cd.mult_part = ring.mul(cd.mult_part, P);
    }
    cd.finite_conductor = ring.mul(cd.finite_conductor, ring.pow(P, static_cast<unsigned>(bp.exponent)));
    cd.bad_primes.push_back(std::move(bp));
  }
  if (cd.mult_part.is_one())
    fail(ErrorCode::NoMultiplicativePrime, "curve has no prime of multiplicative reduction");

  // Model at infinity: t = 1/s, (x, y) -> (x s^{-2k}, y s^{-3k}).
  const int da = cd.A.degree();
  const int db = cd.B.is_zero() ? -1 : cd.B.degree();
  int k = 0;
  while (4 * k < da || 6 * k < db) ++k;
  cd.infinity_k = k;
  const Poly Ainf = reverse_shift(cd.A, 4 * k - da);
  const Poly Binf = cd.B.is_zero() ? Poly{} : reverse_shift(cd.B, 6 * k - db);
  const int vD = valuation_at_zero(discriminant(ring, Ainf, Binf));
  const int vc4 = valuation_at_zero(Ainf);
  if (vD == 0) {
    cd.at_infinity = Reduction::Good;
    cd.f_inf = 0;
  } else if (vc4 == 0) {
    cd.at_infinity = Reduction::MultNonsplit;
    cd.f_inf = 1;
  } else {
    cd.at_infinity = Reduction::Additive;
    cd.f_inf = 2;
  }
  if (cd.f_inf != 2)
    fail(ErrorCode::NotAdditiveAtInfinity,
         "reduction at infinity is " + std::string(to_string(cd.at_infinity)));
  cd.deg_N_E = cd.finite_conductor.degree() + cd.f_inf;
  return cd;
}

Reduction fiber_type(const FieldTable& F, Elem a, Elem b) {
  const Elem a3 = F.mul(a, F.mul(a, a));
  const Elem disc = F.add(F.mul(F.from_int(4), a3), F.mul(F.from_int(27), F.mul(b, b)));
  if (disc != 0) return Reduction::Good;
  if (a == 0) return Reduction::Additive;
  // Double root alpha = -3b/(2a), simple root beta = 3b/a; the node's tangents
  // are rational iff alpha - beta is a square.
  const Elem inv_a = F.inv(a);
  const Elem alpha = F.neg(F.mul(F.mul(F.from_int(3), b), F.mul(inv_a, F.inv(F.from_int(2)))));
  const Elem beta = F.mul(F.mul(F.from_int(3), b), inv_a);
  return F.quad_char(F.sub(alpha, beta)) == 1 ? Reduction::MultSplit
                                               : Reduction::MultNonsplit;
}

Reduction reduction_type(const PolyRing& ring, const CurveData& curve, const Poly& P) {
  if (!divides(ring, P, curve.Delta)) return Reduction::Good;
  if (divides(ring, P, curve.c4)) return Reduction::Additive;
  // alpha - beta = -9B/(2A) differs from -18AB by the square (2A)^2 mod P.
  const Poly w = ring.scale(ring.mul(curve.A, curve.B), ring.mod(-18));
  return quad_eval(ring, P, w) == 1 ? Reduction::MultSplit : Reduction::MultNonsplit;
}

std::int64_t fiber_char_sum(const FieldTable& F, Elem a, Elem b) {
  std::int64_t s = 0;
  const Elem Q = F.size();
  for (Elem x = 0; x < Q; ++x)
    s += F.quad_char(F.add(F.mul(x, F.add(F.mul(x, x), a)), b));
  return s;
}

std::int64_t fiber_point_count(const FieldTable& F, Elem a, Elem b) {
  const Elem Q = F.size();
  std::vector<std::uint8_t> roots(Q, 0);
  for (Elem y = 0; y < Q; ++y) ++roots[F.mul(y, y)];
  std::int64_t n = 1;
  for (Elem x = 0; x < Q; ++x) n += roots[F.add(F.mul(x, F.add(F.mul(x, x), a)), b)];
  return n;
}

std::int64_t fiber_trace_bsgs(const FieldTable& F, Elem a, Elem b, std::uint64_t seed) {
  if (!F.has_log_tables())
    fail(ErrorCode::BudgetExceeded, "BSGS point counting needs log tables");
  const std::uint64_t Q = F.size();
  const std::uint64_t s = isqrt(4 * Q);
  const std::uint64_t lo = Q + 1 - s, hi = Q + 1 + s;
  Elem d = 2;
  while (F.quad_char(d) != -1) ++d;
  const Elem d2 = F.mul(d, d);
  const Curve E(F, a, b);
  const Curve Et(F, F.mul(a, d2), F.mul(b, F.mul(d2, d)));
  std::mt19937_64 rng(seed);
  std::uint64_t L = 1, Lt = 1;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const bool twist = attempt % 2 == 1;
    Pt P;
    while (P.inf) {
      const Elem x = rng() % Q;
      const Elem v = E.rhs(x);
      const int chi = F.quad_char(v);
      if (!twist && chi >= 0) P = Pt{x, sqrt_elem(F, v), false};
      if (twist && chi <= 0) {
        // d y^2 = x^3 + a x + b  <->  (d x, d^2 y) on Et.
        const Elem y = v == 0 ? 0 : sqrt_elem(F, F.mul(v, F.inv(d)));
        P = Pt{F.mul(d, x), F.mul(d2, y), false};
      }
    }
    const Curve& C = twist ? Et : E;
    const BsgsResult r = bsgs_sweep(C, P, lo, hi);
    std::uint64_t ord = r.small_order;
    if (!ord) {
      if (r.hits.empty())
        fail(ErrorCode::PointCountFailure, "no multiple of the point order in the Hasse interval");
      if (r.hits.size() == 1) {
        const std::uint64_t n = twist ? 2 * Q + 2 - r.hits[0] : r.hits[0];
        return static_cast<std::int64_t>(Q + 1) - static_cast<std::int64_t>(n);
      }
      ord = r.hits[1] - r.hits[0];
    }
    if (twist) Lt = std::lcm(Lt, ord);
    else L = std::lcm(L, ord);
    std::uint64_t found = 0, count = 0;
    for (std::uint64_t n = (lo + L - 1) / L * L; n <= hi; n += L) {
      const std::uint64_t nt = 2 * Q + 2 - n;
      if (nt % Lt == 0) {
        found = n;
        if (++count > 1) break;
      }
    }
    if (count == 1) return static_cast<std::int64_t>(Q + 1) - static_cast<std::int64_t>(found);
  }
  fail(ErrorCode::PointCountFailure, "BSGS could not isolate the group order");
}

std::int64_t fiber_trace(const FieldTable& F, Elem a, Elem b,
                         std::uint64_t brute_limit, std::uint64_t seed) {
  switch (fiber_type(F, a, b)) {
    case Reduction::Additive: return 0;
    case Reduction::MultSplit: return 1;
    case Reduction::MultNonsplit: return -1;
    case Reduction::Good: break;
  }
  if (F.size() <= brute_limit || !F.has_log_tables()) return -fiber_char_sum(F, a, b);
  return fiber_trace_bsgs(F, a, b, seed);
}

std::int64_t a_p(const PolyRing& ring, const CurveData& curve, const Poly& P,
                 const FieldTable& F) {
  if (F.degree() != P.degree())
    fail(ErrorCode::DegreeMismatch, "field degree does not match deg P");
  const std::shared_ptr<const FieldTable> alias(std::shared_ptr<const FieldTable>{}, &F);
  const ResidueMap rm(ring, P, alias);
  const Elem a = rm(curve.A), b = rm(curve.B);
  switch (fiber_type(F, a, b)) {
    case Reduction::Additive: return 0;
    case Reduction::MultSplit: return 1;
    case Reduction::MultNonsplit: return -1;
    case Reduction::Good: break;
  }
  const std::int64_t Q = static_cast<std::int64_t>(F.size());
  std::int64_t chi_sum = 0, affine = 0;
  for (Elem x = 0; x < F.size(); ++x) {
    const int c = F.quad_char(F.add(F.mul(x, F.add(F.mul(x, x), a)), b));
    chi_sum += c;
    affine += 1 + c;
  }
  const std::int64_t from_count = Q + 1 - (1 + affine);
  if (from_count != -chi_sum)
    fail(ErrorCode::PointCountFailure, "point count and character sum disagree");
  return from_count;
}

const std::vector<ApEntry>& ApTable::primes(int d) const {
  if (d < 1 || d > max_degree)
    fail(ErrorCode::InsufficientApTable,
         "a_P table covers degrees <= " + std::to_string(max_degree) +
             ", degree " + std::to_string(d) + " requested");
  return by_degree[static_cast<std::size_t>(d)];
}

std::optional<std::int64_t> ApTable::lookup(const Poly& P) const {
  const int d = P.degree();
  if (d < 1 || d > max_degree) return std::nullopt;
  const auto& v = by_degree[static_cast<std::size_t>(d)];
  auto it = std::lower_bound(v.begin(), v.end(), P,
                             [](const ApEntry& e, const Poly& x) { return poly_less(e.P, x); });
  if (it == v.end() || it->P != P) return std::nullopt;
  return it->a;
}

std::size_t ApTable::size() const {
  std::size_t n = 0;
  for (const auto& v : by_degree) n += v.size();
  return n;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string ApTable::body() const {
  std::string out;
  for (int d = 1; d <= max_degree; ++d)
    for (const auto& e : by_degree[static_cast<std::size_t>(d)]) {
      out += PolyRing::format(e.P);
      out += ' ';
      out += std::to_string(e.a);
      out += '\n';
    }
  return out;
}

std::string ApTable::serialize() const {
  const std::string b = body();
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(b)));
  std::string out;
  out += "p=" + std::to_string(p) + "\n";
  out += "A=" + PolyRing::format(A) + "\n";
  out += "B=" + PolyRing::format(B) + "\n";
  out += "maxdeg=" + std::to_string(max_degree) + "\n";
  out += std::string("checksum=") + hex + "\n";
  return out + b;
}

ApTable ApTable::parse(const std::string& text, const PolyRing& ring) {
  auto corrupt = [](const std::string& why) -> void {
    fail(ErrorCode::CacheCorrupt, "a_P cache: " + why);
  };
  ApTable t;
  std::size_t pos = 0;
  auto next_line = [&](std::string& line) {
    if (pos >= text.size()) return false;
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) corrupt("missing final newline");
    line = text.substr(pos, nl - pos);
    pos = nl + 1;
    return true;
  };
  const char* keys[] = {"p=", "A=", "B=", "maxdeg=", "checksum="};
  std::string vals[5];
  for (int i = 0; i < 5; ++i) {
    std::string line;
    if (!next_line(line) || line.rfind(keys[i], 0) != 0)
      corrupt(std::string("expected header ") + keys[i]);
    vals[i] = line.substr(std::string(keys[i]).size());
  }
  const std::string b = text.substr(pos);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(b)));
  if (vals[4] != hex) corrupt("checksum mismatch");
  try {
    t.p = static_cast<std::uint32_t>(std::stoul(vals[0]));
    if (t.p != ring.p()) corrupt("characteristic mismatch");
    t.A = ring.parse(vals[1]);
    t.B = ring.parse(vals[2]);
    t.max_degree = std::stoi(vals[3]);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    corrupt("malformed header");
  }
  if (t.max_degree < 0 || t.max_degree > 64) corrupt("bad maxdeg");
  t.by_degree.assign(static_cast<std::size_t>(t.max_degree) + 1, {});
  std::string line;
  while (next_line(line)) {
    const std::size_t sp = line.find(' ');
    if (sp == std::string::npos) corrupt("malformed entry");
    ApEntry e;
    try {
      e.P = ring.parse(line.substr(0, sp));
      e.a = std::stoll(line.substr(sp + 1));
    } catch (const std::exception&) {
      corrupt("malformed entry '" + line + "'");
    }
    const int d = e.P.degree();
    if (d < 1 || d > t.max_degree) corrupt("entry degree out of range");
    t.by_degree[static_cast<std::size_t>(d)].push_back(std::move(e));
  }
  return t;
}

void ApTable::save(const std::string& path) const {
  const std::filesystem::path fp(path);
  if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + tmp);
    out << serialize();
  }
  std::filesystem::rename(tmp, path);
}

ApTable ApTable::load(const std::string& path, const PolyRing& ring) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::CacheCorrupt, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), ring);
}

void ApTable::attach_roots(const PolyRing& ring) {
  for (int d = 1; d <= max_degree; ++d) {
    auto& v = by_degree[static_cast<std::size_t>(d)];
    if (v.empty()) continue;
    const auto F = FieldRegistry::instance().get(ring.p(), d);
    std::vector<std::pair<Poly, Elem>> roots;
    for (const OrbitRep& r : frobenius_orbits(*F, d))
      roots.emplace_back(Poly(min_poly(*F, r.rep)), r.rep);
    std::sort(roots.begin(), roots.end(),
              [](const auto& x, const auto& y) { return poly_less(x.first, y.first); });
    if (roots.size() != v.size())
      fail(ErrorCode::CacheCorrupt, "a_P cache has the wrong prime count at degree " +
                                        std::to_string(d));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (roots[i].first != v[i].P)
        fail(ErrorCode::CacheCorrupt, "a_P cache primes out of order at degree " +
                                          std::to_string(d));
      v[i].root = roots[i].second;
    }
  }
}

bool ApTable::matches(const CurveData& curve) const {
  return p == curve.p && A == curve.A && B == curve.B;
}

bool operator==(const ApTable& x, const ApTable& y) {
  if (x.p != y.p || x.A != y.A || x.B != y.B || x.max_degree != y.max_degree) return false;
  for (int d = 1; d <= x.max_degree; ++d) {
    const auto& u = x.by_degree[static_cast<std::size_t>(d)];
    const auto& v = y.by_degree[static_cast<std::size_t>(d)];
    if (u.size() != v.size()) return false;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i].P != v[i].P || u[i].a != v[i].a) return false;
  }
  return true;
}

ApTable build_ap_table(const PolyRing& ring, const CurveData& curve, int max_degree,
                       const ApTableOptions& opts) {
  if (max_degree < 0) fail(ErrorCode::InvalidArgument, "negative max degree");
  if (max_degree > 0 && pow_u64(ring.p(), static_cast<unsigned>(max_degree)) > opts.field_budget)
    fail(ErrorCode::BudgetExceeded,
         "a_P table to degree " + std::to_string(max_degree) + " needs a field of size " +
             std::to_string(ring.p()) + "^" + std::to_string(max_degree) +
             " beyond the budget " + std::to_string(opts.field_budget));
  ApTable t;
  t.p = ring.p();
  t.A = curve.A;
  t.B = curve.B;
  t.max_degree = max_degree;
  t.by_degree.assign(static_cast<std::size_t>(max_degree) + 1, {});
  const unsigned threads =
      opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  for (int d = 1; d <= max_degree; ++d) {
    const auto F = FieldRegistry::instance().get(ring.p(), d);
    const auto reps = frobenius_orbits(*F, d);
    std::vector<ApEntry> entries(reps.size());
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Elem r = reps[i].rep;
        ApEntry& e = entries[i];
        e.P = Poly(min_poly(*F, r));
        e.root = r;
        const Elem a = ring.eval(curve.A, *F, r), b = ring.eval(curve.B, *F, r);
        e.type = fiber_type(*F, a, b);
        const std::uint64_t seed = (std::uint64_t{ring.p()} << 48) ^ (std::uint64_t(d) << 40) ^ r;
        e.a = fiber_trace(*F, a, b, opts.brute_limit, seed);
      }
    };
    if (threads <= 1 || reps.size() < 64) {
      work(0, reps.size());
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (reps.size() + threads - 1) / threads;
      for (unsigned k = 0; k < threads; ++k) {
        const std::size_t b = std::min(reps.size(), k * chunk);
        const std::size_t e = std::min(reps.size(), b + chunk);
        pool.emplace_back(work, b, e);
      }
      for (auto& th : pool) th.join();
    }
    std::sort(entries.begin(), entries.end(),
              [](const ApEntry& x, const ApEntry& y) { return poly_less(x.P, y.P); });
    t.by_degree[static_cast<std::size_t>(d)] = std::move(entries);
  }
  return t;
}

ApTable load_or_build_ap_table(const PolyRing& ring, const CurveData& curve,
                               int max_degree, const std::string& path,
                               const ApTableOptions& opts) {
  if (!path.empty() && std::filesystem::exists(path)) {
    ApTable t = ApTable::load(path, ring);
    if (t.matches(curve) && t.max_degree >= max_degree) {
      t.attach_roots(ring);
      for (auto& v : t.by_degree)
        for (auto& e : v) e.type = Reduction::Good;
      for (const auto& bp : curve.bad_primes) {
        const int d = bp.P.degree();
        if (d > t.max_degree) continue;
        for (auto& e : t.by_degree[static_cast<std::size_t>(d)])
          if (e.P == bp.P) e.type = bp.type;
      }
      return t;
    }
  }
  ApTable t = build_ap_table(ring, curve, max_degree, opts);
  if (!path.empty()) t.save(path);
  return t;
}

}  // namespace twistlab
