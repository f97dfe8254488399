#ifndef TWISTLAB_CHARACTERS_HPP
#define TWISTLAB_CHARACTERS_HPP

#include <complex>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "twistlab/fqpoly.hpp"

namespace twistlab {

using cd = std::complex<double>;

// Quadratic character f -> (f/D) of conductor D (monic squarefree).
struct QuadChar {
  Poly D;
};

// Order-ell character: product over conductor primes Q of the ell-th power
// residue symbol (f/Q)_ell raised to i_Q in (Z/ell)^*. Requires ell | q - 1.
struct EllChar {
  unsigned ell = 3;
  std::vector<std::pair<Poly, unsigned>> primes;  // (Q, i_Q), canonical order

  Poly conductor(const PolyRing& ring) const;
};

using Character = std::variant<QuadChar, EllChar>;

// Jacobi symbol (f/D) by Euclidean descent with quadratic reciprocity.
int quad_eval(const PolyRing& ring, const Poly& D, const Poly& f);
// Same symbol via f^{(q^d - 1)/2} mod P over the factorisation of D.
int quad_eval_slow(const PolyRing& ring, const Poly& D, const Poly& f);

// Index k with chi(f) = e^{2 pi i k / ell}; nullopt when chi(f) = 0.
std::optional<unsigned> ell_eval(const PolyRing& ring, const EllChar& chi,
                                 const Poly& f);

// Index of the ell-th residue symbol (f/Q)_ell for a single prime Q.
std::optional<unsigned> residue_symbol(const PolyRing& ring, const Poly& Q,
                                       const Poly& f, unsigned ell);

unsigned char_order(const Character& chi);
Poly char_conductor(const PolyRing& ring, const Character& chi);
std::optional<unsigned> char_index(const PolyRing& ring, const Character& chi,
                                   const Poly& f);
cd char_value(const PolyRing& ring, const Character& chi, const Poly& f);
cd root_of_unity(unsigned k, unsigned ell);

enum class Parity { Even, Odd };
Parity parity(const PolyRing& ring, const Character& chi);

// Every order-ell character with conductor of degree `degree` coprime to
// `modulus`, counting each exponent vector separately.
std::vector<EllChar> enumerate_ell_chars(const PolyRing& ring, unsigned ell,
                                         int degree, const Poly& modulus);

struct DirichletLPoly {
  std::vector<cd> coeffs;    // c_h = sum_{deg D = h} chi(D), h = 0..deg F - 1
  int degree = 0;            // deg F - 1
  int M = 0;                 // number of unitary roots
  int lambda = 0;            // order of the forced zero at u = 1
  Parity parity = Parity::Odd;
  std::vector<cd> roots;     // roots other than u = 1
  std::vector<double> angles;  // theta_j in [0, 2pi), sorted
  double max_root_deviation = 0;  // max | |root| sqrt(q) - 1 |
};

DirichletLPoly char_L_poly(const PolyRing& ring, const Character& chi);

// e_q(A/F) = exp(2 pi i a_1 / p), a_1 the 1/t Laurent coefficient at infinity.
cd e_q(const PolyRing& ring, const Poly& A, const Poly& F);
std::uint32_t laurent_inverse_t(const PolyRing& ring, const Poly& A, const Poly& F);

struct GaussData {
  cd G;
  cd tau;
  cd omega;        // from the Gauss-sum formula
  cd omega_roots;  // prod_j (-e^{i theta_j})
  std::vector<double> sigma;  // sigma_chi(k), k = 0..deg F - 1
  Parity parity = Parity::Odd;
};

GaussData gauss_sum(const PolyRing& ring, const Character& chi, int max_degree = 6);

// |sum_{B in M_j} chi(B) - RHS of the duality identity|.
double duality_residual(const PolyRing& ring, const Character& chi, int j,
                        const DirichletLPoly& L, const GaussData& g);
double duality_residual(const PolyRing& ring, const Character& chi, int j);

}  // namespace twistlab

#endif  // TWISTLAB_CHARACTERS_HPP
