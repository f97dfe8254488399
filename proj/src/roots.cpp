#include "twistlab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <numbers>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {

void eval_with_derivative(const std::vector<cld>& c, cld z, cld& p, cld& dp) {
  p = 0;
  dp = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
  }
}

}  // namespace

std::vector<cld> deflate(const std::vector<cld>& coeffs, cld r, cld* rem) {
  const std::size_t n = coeffs.size();
  if (n < 2) {
    if (rem) *rem = n ? coeffs[0] : cld{0};
    return {};
  }
  std::vector<cld> q(n - 1);
  cld acc = coeffs[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    q[i] = acc;
    acc = coeffs[i] + acc * r;
  }
  if (rem) *rem = acc;
  return q;
}

std::vector<cld> poly_roots(const std::vector<cld>& coeffs) {
  std::vector<cld> c = coeffs;
  while (!c.empty() && c.back() == cld{0}) c.pop_back();
  if (c.empty()) fail(ErrorCode::InvalidArgument, "roots of the zero polynomial");
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return {};
  const cld lead = c.back();
  for (auto& x : c) x /= lead;

  // Initial guesses on a circle whose radius is the geometric mean of the
  // roots' moduli, rotated off the real axis.
  const long double radius =
      std::pow(std::max(std::abs(c[0]), 1e-300L), 1.0L / n);
  std::vector<cld> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const long double ang = 2 * std::numbers::pi_v<long double> * k / n + 0.4L;
    z[static_cast<std::size_t>(k)] = std::polar(radius, ang);
  }

  const long double tol = 64 * std::numeric_limits<long double>::epsilon();
  bool converged = false;
  for (int iter = 0; iter < 2000 && !converged; ++iter) {
    converged = true;
    for (int k = 0; k < n; ++k) {
      cld& zk = z[static_cast<std::size_t>(k)];
      cld p, dp;
      eval_with_derivative(c, zk, p, dp);
      if (p == cld{0}) continue;
      const cld ratio = p / dp;
      cld s = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0L / (zk - z[static_cast<std::size_t>(j)]);
      const cld w = ratio / (1.0L - ratio * s);
      zk -= w;
      if (std::abs(w) > tol * std::max(1.0L, std::abs(zk))) converged = false;
    }
  }
  if (!converged) {
    // Accept slow (clustered-root) convergence only if residuals are tiny.
    for (const cld& zk : z) {
      cld p, dp;
      eval_with_derivative(c, zk, p, dp);
      long double scale = 0;
      for (std::size_t i = c.size(); i-- > 0;) scale = scale * std::abs(zk) + std::abs(c[i]);
      if (std::abs(p) > 1e-15L * scale)
        fail(ErrorCode::RootFinderNonConvergence,
             "Aberth iteration did not converge for degree " + std::to_string(n));
    }
  }
  for (cld& zk : z) {
    for (int i = 0; i < 3; ++i) {
      cld p, dp;
      eval_with_derivative(c, zk, p, dp);
      if (dp == cld{0}) break;
      const cld step = p / dp;
      if (std::abs(step) > 1e-6L * std::max(1.0L, std::abs(zk))) break;
      zk -= step;
    }
  }
  return z;
}

}  // namespace twistlab
