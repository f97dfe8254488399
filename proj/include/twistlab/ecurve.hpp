#ifndef TWISTLAB_ECURVE_HPP
#define TWISTLAB_ECURVE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twistlab/fqpoly.hpp"

namespace twistlab {

enum class Reduction { Good, MultSplit, MultNonsplit, Additive };

std::string_view to_string(Reduction r);

struct BadPrime {
  Poly P;
  Reduction type;
  int exponent;  // conductor exponent: 1 multiplicative, 2 additive
};

// E: y^2 = x^3 + A x + B over F_p(t).
struct CurveData {
  std::uint32_t p = 5;
  Poly A, B;
  Poly Delta;  // -16(4A^3 + 27B^2)
  Poly c4;     // -48A
  Poly finite_conductor;
  Poly mult_part;  // M_E
  std::vector<BadPrime> bad_primes;  // canonical order
  Reduction at_infinity = Reduction::Additive;
  int infinity_k = 0;  // rescaling exponent of the s = 1/t model
  int f_inf = 2;
  int deg_N_E = 0;

  // Degree of L(E (x) chi, u) for a primitive twist of conductor degree deg_F.
  int twist_degree(int deg_F) const { return 2 * deg_F + deg_N_E - 4; }
};

CurveData build_curve(const PolyRing& ring, const Poly& A, const Poly& B);

Reduction reduction_type(const PolyRing& ring, const CurveData& curve, const Poly& P);

// Fiber-level primitives over a residue field, for y^2 = x^3 + a x + b.
Reduction fiber_type(const FieldTable& F, Elem a, Elem b);
// sum_x quad_char(x^3 + a x + b)
std::int64_t fiber_char_sum(const FieldTable& F, Elem a, Elem b);
// Projective point count, singular point included, by listing y for each x.
std::int64_t fiber_point_count(const FieldTable& F, Elem a, Elem b);
// Trace Q + 1 - #E(F) of a nonsingular fiber by baby-step giant-step on
// random points of the curve and of its quadratic twist. Requires log tables.
std::int64_t fiber_trace_bsgs(const FieldTable& F, Elem a, Elem b, std::uint64_t seed);
// Trace of any fiber: singular fibers by reduction type, good fibers by brute
// force up to brute_limit elements and BSGS above.
std::int64_t fiber_trace(const FieldTable& F, Elem a, Elem b,
                         std::uint64_t brute_limit, std::uint64_t seed);

// a_P = q^{deg P} + 1 - #E(F_P); F must have degree deg P.
std::int64_t a_p(const PolyRing& ring, const CurveData& curve, const Poly& P,
                 const FieldTable& F);

struct ApEntry {
  Poly P;
  Elem root = 0;  // least root of P in the degree-deg P field table
  std::int64_t a = 0;
  Reduction type = Reduction::Good;
};

struct ApTableOptions {
  std::uint64_t field_budget = std::uint64_t{1} << 22;
  std::uint64_t brute_limit = 15625;
  unsigned threads = 0;  // 0: hardware concurrency
};

class ApTable {
 public:
  std::uint32_t p = 5;
  Poly A, B;
  int max_degree = 0;
  std::vector<std::vector<ApEntry>> by_degree;  // index = degree, [0] unused

  const std::vector<ApEntry>& primes(int d) const;
  std::optional<std::int64_t> lookup(const Poly& P) const;
  std::size_t size() const;

  std::string body() const;
  std::string serialize() const;
  static ApTable parse(const std::string& text, const PolyRing& ring);
  void save(const std::string& path) const;
  static ApTable load(const std::string& path, const PolyRing& ring);

  // Recomputes the roots of loaded entries from Frobenius orbits.
  void attach_roots(const PolyRing& ring);
  bool matches(const CurveData& curve) const;

  friend bool operator==(const ApTable& x, const ApTable& y);
};

ApTable build_ap_table(const PolyRing& ring, const CurveData& curve, int max_degree,
                       const ApTableOptions& opts = {});

// Loads `path` when it exists and matches the curve with enough degrees,
// otherwise builds and writes it. An empty path disables caching.
ApTable load_or_build_ap_table(const PolyRing& ring, const CurveData& curve,
                               int max_degree, const std::string& path,
                               const ApTableOptions& opts = {});

std::uint64_t fnv1a64(const std::string& s);

}  // namespace twistlab

#endif  // TWISTLAB_ECURVE_HPP
