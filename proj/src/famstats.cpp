#include "twistlab/famstats.hpp"

#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <thread>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {

constexpr double kPi = std::numbers::pi;

unsigned resolve_workers(unsigned w) {
  return w ? w : std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) on `workers` threads, striding so that uneven
// per-item costs spread out; results land by index, so order is fixed.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn) {
  workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errs(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0 ? 0.0 : v);
  return buf;
}

double eta(int n) { return n % 2 == 0 ? 1.0 : 0.0; }

// Fourier reassembly phi_hat(0) + (1/M) sum_{0<|n|<nu M} phi_hat(n/M) t_n with
// t_{-n} = conj(t_n).
template <class TraceFn>
cd fourier_density(int M, const TestFunction& phi, TraceFn trace) {
  cd z = phi.phi_hat(0);
  if (M == 0) return z;
  for (int n = 1; n < phi.nu * M; ++n) {
    const cd t = trace(n);
    z += phi.phi_hat(static_cast<double>(n) / M) / M * (t + std::conj(t));
  }
  return z;
}

}  // namespace

TestFunction::TestFunction(double support) : nu(support) {
  if (!(support > 0) || !std::isfinite(support))
    fail(ErrorCode::InvalidArgument, "support parameter nu must be positive");
}

double TestFunction::phi(double x) const {
  const double a = kPi * nu * x;
  if (std::fabs(a) < 1e-12) return 1.0;
  const double s = std::sin(a) / a;
  return s * s;
}

double TestFunction::phi_hat(double y) const {
  const double v = 1.0 - std::fabs(y) / nu;
  return v > 0 ? v / nu : 0.0;
}

FamilyData compute_family(const PolyRing& ring, const CurveData& curve,
                          FiberTraceCache& cache, int N, const std::optional<Poly>& cls,
                          unsigned workers) {
  FamilyData fam;
  fam.N = N;
  fam.M = curve.twist_degree(N);
  fam.q = ring.p();
  fam.cls = cls;
  const auto Ds = collect_family(ring, N, curve.finite_conductor, cls);
  for (int n = 1; n <= newton_terms(fam.M); ++n) cache.get(n);
  fam.twists.resize(Ds.size());
  parallel_for(Ds.size(), workers, [&](std::size_t i) {
    TwistResult& r = fam.twists[i];
    r.D = Ds[i];
    r.L = twist_L(ring, curve, cache, Ds[i]);
    if (r.L.M != fam.M)
      fail(ErrorCode::DegreeMismatch, "twist " + PolyRing::format(Ds[i]) + " has degree " +
                                          std::to_string(r.L.M));
    r.s = spectral(r.L);
    r.p = power_sums(r.L, 2 * fam.M);
  });
  return fam;
}

cd trace_average(const FamilyData& fam, int n) {
  if (n == 0) return static_cast<double>(fam.M);
  if (n < 0) return std::conj(trace_average(fam, -n));
  if (fam.twists.empty()) return 0.0;
  if (static_cast<std::size_t>(n) >= fam.twists.front().p.size())
    fail(ErrorCode::InvalidArgument, "trace moment " + std::to_string(n) + " not computed");
  __int128 total = 0;
  for (const auto& t : fam.twists) total += t.p[static_cast<std::size_t>(n)];
  const long double denom =
      static_cast<long double>(fam.twists.size()) * std::pow(static_cast<long double>(fam.q), n);
  return static_cast<double>(static_cast<long double>(total) / denom);
}

double rmt_reference(int M, const TestFunction& phi, Symmetry sym) {
  if (sym == Symmetry::Unitary || M == 0) return phi.phi_hat(0);
  return fourier_density(M, phi, [](int n) { return cd(eta(n), 0); }).real();
}

DensityResult one_level_density(const FamilyData& fam, const TestFunction& phi,
                                bool allow_wide) {
  if (phi.nu > 1 && !allow_wide)
    fail(ErrorCode::SupportTooWide, "test function support nu = " + num(phi.nu) + " exceeds 1");
  DensityResult r;
  r.empirical = fourier_density(fam.M, phi, [&](int n) { return trace_average(fam, n); });
  r.reference = rmt_reference(fam.M, phi, Symmetry::Orthogonal);
  r.deviation = std::abs(r.empirical - r.reference);
  return r;
}

double one_level_density_direct(const FamilyData& fam, const TestFunction& phi, int K) {
  if (fam.twists.empty() || fam.M == 0) return phi.phi_hat(0);
  const double M = fam.M;
  const double b = phi.nu * M;
  const double c = 1.0 / (2.0 * (kPi * b) * (kPi * b));
  const bool integral = std::fabs(b - std::round(b)) < 1e-12;
  long double total = 0;
  for (const auto& t : fam.twists) {
    for (double th : t.s.angles) {
      double x = th / (2 * kPi);
      if (x > 0.5) x -= 1.0;
      long double z = 0;
      for (int k = -K; k <= K; ++k) z += phi.phi(M * (x - k));
      // sin^2 = (1 - cos)/2; the cosine averages out over k unless nu M is an
      // integer, when it is the constant cos(2 pi nu M x).
      const double mean = integral ? 1.0 - std::cos(2 * kPi * b * x) : 1.0;
      z += c * mean *
           (boost::math::trigamma(K + 1 - x) + boost::math::trigamma(K + 1 + x));
      total += z;
    }
  }
  return static_cast<double>(total / static_cast<long double>(fam.twists.size()));
}

RankReport rank_report(const PolyRing& ring, const CurveData& curve, const FamilyData& fam) {
  RankReport r;
  long long rank_sum = 0;
  bool first = true;
  for (const auto& t : fam.twists) {
    ++r.histogram[t.s.rank];
    rank_sum += t.s.rank;
    if (t.L.eps == 1) ++r.plus;
    else ++r.minus;
    if ((t.s.rank % 2 == 0) != (t.L.eps == 1) || t.s.eps != t.L.eps) ++r.parity_violations;
    const int v = t.L.eps * quad_eval(ring, curve.mult_part, t.D);
    if (first) r.sign_constant_value = v;
    else if (v != r.sign_constant_value) r.sign_constant = false;
    first = false;
  }
  const double n = static_cast<double>(fam.twists.size());
  if (n > 0) {
    r.average = static_cast<double>(rank_sum) / n;
    r.frac_rank0 = r.histogram.count(0) ? r.histogram[0] / n : 0.0;
    r.frac_rank1 = r.histogram.count(1) ? r.histogram[1] / n : 0.0;
  }
  return r;
}

double size_main_term(const PolyRing& ring, const CurveData& curve, int N) {
  const double q = ring.p();
  double phi = 1, euler = 1;
  for (const auto& [Q, e] : ring.factor(curve.finite_conductor)) {
    const double qd = std::pow(q, Q.degree());
    phi *= (qd - 1) * std::pow(qd, e - 1);
    euler /= 1 + 1 / qd;
  }
  return std::pow(q, N) * (1 - 1 / q) * euler / phi;
}

std::vector<Poly> invertible_classes(const PolyRing& ring, const Poly& modulus) {
  const int d = modulus.degree();
  const std::uint64_t count = pow_u64(ring.p(), static_cast<unsigned>(d));
  std::vector<Poly> out;
  for (std::uint64_t i = 1; i < count; ++i) {
    std::vector<std::uint32_t> c(static_cast<std::size_t>(d));
    std::uint64_t v = i;
    for (int k = 0; k < d; ++k, v /= ring.p()) c[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(v % ring.p());
    Poly f(std::move(c));
    if (ring.coprime(f, modulus)) out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), poly_less);
  return out;
}

SizeResult size_check(const PolyRing& ring, const CurveData& curve, int N, const Poly& C) {
  SizeResult r;
  r.cls = ring.rem(C, curve.finite_conductor);
  r.enumerated = collect_family(ring, N, curve.finite_conductor, r.cls).size();
  r.main_term = size_main_term(ring, curve, N);
  r.relative_deviation = std::fabs(static_cast<double>(r.enumerated) - r.main_term) / r.main_term;
  return r;
}

std::vector<SizeResult> size_table(const PolyRing& ring, const CurveData& curve, int N) {
  const auto classes = invertible_classes(ring, curve.finite_conductor);
  std::map<Poly, std::size_t, PolyLess> index;
  for (std::size_t i = 0; i < classes.size(); ++i) index[classes[i]] = i;
  std::vector<SizeResult> rows(classes.size());
  const double main = size_main_term(ring, curve, N);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    rows[i].cls = classes[i];
    rows[i].main_term = main;
  }
  for (const Poly& D : collect_family(ring, N, curve.finite_conductor))
    ++rows[index.at(ring.rem(D, curve.finite_conductor))].enumerated;
  for (auto& r : rows)
    r.relative_deviation = std::fabs(static_cast<double>(r.enumerated) - main) / main;
  return rows;
}

CharSquareResult char_square_check(const PolyRing& ring, const CurveData& curve, int N,
                                   const Poly& C, const Poly& P) {
  CharSquareResult r;
  for (const Poly& D : collect_family(ring, N, curve.finite_conductor, C))
    if (!ring.coprime(D, P)) ++r.residual;
  r.bound = 2.0 * std::pow(static_cast<double>(ring.p()), N - P.degree());
  return r;
}

double hypothesis_m_diag(const PolyRing& ring, const CurveData& curve,
                         FiberTraceCache& cache, int N, int n) {
  cache.get(n);
  long double S = 0;
  for (const Poly& D : collect_family(ring, N, curve.finite_conductor))
    S += static_cast<long double>(prime_sum_degree(ring, curve, cache, D, n));
  const double v = static_cast<double>(S / std::pow(static_cast<long double>(ring.p()), n + N));
  if (std::fabs(v) > N)
    fail(ErrorCode::InvalidArgument, "S(N, n) / q^{n+N} = " + num(v) + " exceeds the trivial bound");
  return v;
}

EllReport ell_density(const PolyRing& ring, const CurveData& curve, const ApTable& table,
                      int N, unsigned ell, const TestFunction& phi, int n_max,
                      unsigned workers) {
  if (ell < 2 || (ring.p() - 1) % ell != 0)
    fail(ErrorCode::OrderNotDividing, "order " + std::to_string(ell) + " does not divide q - 1");
  if (phi.nu > 0.5)
    fail(ErrorCode::SupportTooWide, "order-ell density needs nu <= 1/2, got " + num(phi.nu));
  EllReport r;
  r.N = N;
  r.ell = ell;
  r.M = curve.twist_degree(N);
  const auto chars = enumerate_ell_chars(ring, ell, N, curve.finite_conductor);
  r.family_size = chars.size();
  const int top = std::max(n_max, r.M);
  std::vector<std::vector<cd>> tr(chars.size());
  std::vector<double> dev(chars.size());
  parallel_for(chars.size(), workers, [&](std::size_t i) {
    const LPolynomial L = ell_L(ring, curve, table, chars[i], r.M);
    dev[i] = spectral(L).max_rh_deviation;
    auto c = [&](int k) { return k <= r.M ? L.ccoeffs[static_cast<std::size_t>(k)] : cd(0); };
    std::vector<cd> p(static_cast<std::size_t>(top) + 1);
    for (int n = 1; n <= top; ++n) {
      cd v = -static_cast<double>(n) * c(n);
      for (int j = 1; j < n; ++j) v -= p[static_cast<std::size_t>(j)] * c(n - j);
      p[static_cast<std::size_t>(n)] = v;
    }
    tr[i].resize(static_cast<std::size_t>(top) + 1);
    for (int n = 1; n <= top; ++n) tr[i][static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n)] / std::pow(static_cast<double>(ring.p()), n);
  });
  std::vector<cd> avg(static_cast<std::size_t>(top) + 1, 0.0);
  for (std::size_t i = 0; i < chars.size(); ++i) {
    r.max_rh_deviation = std::max(r.max_rh_deviation, dev[i]);
    for (int n = 1; n <= top; ++n) avg[static_cast<std::size_t>(n)] += tr[i][static_cast<std::size_t>(n)];
  }
  if (!chars.empty())
    for (auto& v : avg) v /= static_cast<double>(chars.size());
  for (int n = 1; n <= n_max; ++n) {
    r.traces.push_back(avg[static_cast<std::size_t>(n)]);
    r.max_trace_imag = std::max(r.max_trace_imag, std::fabs(avg[static_cast<std::size_t>(n)].imag()));
  }
  r.density.empirical = fourier_density(r.M, phi, [&](int n) { return avg[static_cast<std::size_t>(n)]; });
  r.density.reference = rmt_reference(r.M, phi, Symmetry::Unitary);
  r.density.deviation = std::abs(r.density.empirical - r.density.reference);
  return r;
}

FamilyReport family_report(const PolyRing& ring, const CurveData& curve,
                           const FamilyData& fam, int n_max,
                           const std::optional<TestFunction>& phi) {
  FamilyReport r;
  r.N = fam.N;
  r.cls = fam.cls;
  r.family_size = fam.twists.size();
  r.M = fam.M;
  for (int n = 1; n <= n_max; ++n) r.traces.push_back(trace_average(fam, n));
  r.phi = phi;
  if (phi) {
    r.density = one_level_density(fam, *phi);
    r.density_direct = one_level_density_direct(fam, *phi);
  }
  r.ranks = rank_report(ring, curve, fam);
  for (const auto& t : fam.twists) r.max_rh_deviation = std::max(r.max_rh_deviation, t.s.max_rh_deviation);
  return r;
}

namespace {

nlohmann::ordered_json curve_json(const CurveData& curve) {
  return {{"p", curve.p},
          {"A", PolyRing::format(curve.A)},
          {"B", PolyRing::format(curve.B)},
          {"finite_conductor", PolyRing::format(curve.finite_conductor)},
          {"deg_N_E", curve.deg_N_E}};
}

nlohmann::ordered_json trace_json(const std::vector<cd>& traces, bool with_eta) {
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < traces.size(); ++i) {
    nlohmann::ordered_json row = {{"n", i + 1}, {"re", traces[i].real()}, {"im", traces[i].imag()}};
    row["reference"] = with_eta ? eta(static_cast<int>(i + 1)) : 0.0;
    arr.push_back(row);
  }
  return arr;
}

}  // namespace

nlohmann::ordered_json to_json(const CurveData& curve, const FamilyReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["family"] = "quadratic";
  j["curve"] = curve_json(curve);
  j["N"] = r.N;
  j["class"] = r.cls ? nlohmann::ordered_json(PolyRing::format(*r.cls)) : nlohmann::ordered_json(nullptr);
  j["family_size"] = r.family_size;
  j["M"] = r.M;
  j["traces"] = trace_json(r.traces, true);
  if (r.phi) {
    j["density"] = {{"nu", r.phi->nu},
                    {"empirical", r.density.empirical.real()},
                    {"empirical_imag", r.density.empirical.imag()},
                    {"direct", r.density_direct},
                    {"reference", r.density.reference},
                    {"deviation", r.density.deviation}};
  }
  auto hist = nlohmann::ordered_json::array();
  for (const auto& [rank, count] : r.ranks.histogram) hist.push_back({{"rank", rank}, {"count", count}});
  j["ranks"] = {{"histogram", hist},
                {"average", r.ranks.average},
                {"frac_rank0", r.ranks.frac_rank0},
                {"frac_rank1", r.ranks.frac_rank1},
                {"parity_violations", r.ranks.parity_violations}};
  j["signs"] = {{"plus", r.ranks.plus},
                {"minus", r.ranks.minus},
                {"eps_times_chi_constant", r.ranks.sign_constant},
                {"constant", r.ranks.sign_constant_value}};
  j["max_rh_deviation"] = r.max_rh_deviation;
  return j;
}

nlohmann::ordered_json to_json(const CurveData& curve, const EllReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["family"] = "order-" + std::to_string(r.ell);
  j["curve"] = curve_json(curve);
  j["N"] = r.N;
  j["ell"] = r.ell;
  j["family_size"] = r.family_size;
  j["M"] = r.M;
  j["traces"] = trace_json(r.traces, false);
  j["density"] = {{"empirical", r.density.empirical.real()},
                  {"empirical_imag", r.density.empirical.imag()},
                  {"reference", r.density.reference},
                  {"deviation", r.density.deviation}};
  j["max_rh_deviation"] = r.max_rh_deviation;
  j["max_trace_imag"] = r.max_trace_imag;
  return j;
}

std::string traces_csv(const FamilyReport& r) {
  std::string out = "n,re,im,reference\n";
  for (std::size_t i = 0; i < r.traces.size(); ++i)
    out += std::to_string(i + 1) + "," + num(r.traces[i].real()) + "," + num(r.traces[i].imag()) +
           "," + num(eta(static_cast<int>(i + 1))) + "\n";
  return out;
}

std::string ranks_csv(const FamilyReport& r) {
  std::string out = "rank,count\n";
  for (const auto& [rank, count] : r.ranks.histogram)
    out += std::to_string(rank) + "," + std::to_string(count) + "\n";
  return out;
}

std::string sizes_csv(const std::vector<SizeResult>& rows) {
  std::string out = "class,enumerated,main_term,relative_deviation\n";
  for (const auto& r : rows)
    out += "\"" + PolyRing::format(r.cls) + "\"," + std::to_string(r.enumerated) + "," +
           num(r.main_term) + "," + num(r.relative_deviation) + "\n";
  return out;
}

}  // namespace twistlab
