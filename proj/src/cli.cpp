#include "twistlab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "twistlab/famstats.hpp"

namespace twistlab {

namespace {

using ojson = nlohmann::ordered_json;

const std::vector<std::string> kSuites = {"rh", "duality", "hasse", "rh2", "ef", "sign", "size"};

PolyRing make_ring(const RunConfig& c) {
  FieldSpec spec(c.p);
  return PolyRing(spec.p);
}

CurveData make_curve(const PolyRing& ring, const RunConfig& c) {
  return build_curve(ring, ring.parse(c.A), ring.parse(c.B));
}

std::optional<Poly> parse_class(const PolyRing& ring, const RunConfig& c) {
  if (!c.cls) return std::nullopt;
  return ring.parse(*c.cls);
}

ApTable load_table(const PolyRing& ring, const CurveData& curve, const RunConfig& c,
                   int max_deg) {
  ApTableOptions opts;
  opts.threads = c.workers;
  const std::string path = ap_cache_path(c, max_deg);
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  return load_or_build_ap_table(ring, curve, max_deg, path, opts);
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot write " + path);
  f << body;
}

ojson curve_summary(const CurveData& E) {
  ojson bad = ojson::array();
  for (const auto& bp : E.bad_primes)
    bad.push_back({{"P", PolyRing::format(bp.P)},
                   {"type", std::string(to_string(bp.type))},
                   {"exponent", bp.exponent}});
  return {{"p", E.p},
          {"A", PolyRing::format(E.A)},
          {"B", PolyRing::format(E.B)},
          {"discriminant", PolyRing::format(E.Delta)},
          {"finite_conductor", PolyRing::format(E.finite_conductor)},
          {"M_E", PolyRing::format(E.mult_part)},
          {"bad_primes", bad},
          {"infinity", std::string(to_string(E.at_infinity))},
          {"f_inf", E.f_inf},
          {"deg_N_E", E.deg_N_E}};
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// ---- verify suites --------------------------------------------------------

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
  std::optional<ErrorCode> error;
};

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

SuiteResult suite_rh(const PolyRing& ring) {
  double worst = 0;
  int count = 0, bad_degree = 0;
  auto check = [&](const Character& chi, int degF) {
    const DirichletLPoly L = char_L_poly(ring, chi);
    const bool even = L.parity == Parity::Even;
    if (L.M != (even ? degF - 2 : degF - 1)) ++bad_degree;
    worst = std::max(worst, L.max_root_deviation);
    ++count;
  };
  for (int n = 1; n <= 3; ++n)
    for (const Poly& D : collect_family(ring, n, Poly{1})) check(QuadChar{D}, n);
  if ((ring.p() - 1) % 3 == 0)
    for (int n = 1; n <= 2; ++n)
      for (const EllChar& chi : enumerate_ell_chars(ring, 3, n, Poly{1})) check(chi, n);
  return {"rh", bad_degree == 0 && worst <= 1e-9,
          std::to_string(count) + " characters, max root deviation " + sci(worst) +
              ", degree mismatches " + std::to_string(bad_degree), std::nullopt};
}

SuiteResult suite_duality(const PolyRing& ring) {
  double worst = 0, omega_gap = 0;
  int count = 0;
  for (int n = 1; n <= 3; ++n)
    for (const Poly& D : collect_family(ring, n, Poly{1})) {
      const Character chi = QuadChar{D};
      const GaussData g = gauss_sum(ring, chi);
      const DirichletLPoly L = char_L_poly(ring, chi);
      omega_gap = std::max(omega_gap, std::abs(g.omega - g.omega_roots));
      for (int j = 0; j <= n; ++j)
        worst = std::max(worst, duality_residual(ring, chi, j, L, g) / std::pow(ring.p(), n));
      ++count;
    }
  return {"duality", worst <= 1e-8 && omega_gap <= 1e-8,
          std::to_string(count) + " characters, max scaled residual " + sci(worst) +
              ", omega gap " + sci(omega_gap), std::nullopt};
}

SuiteResult suite_hasse(const PolyRing& ring, const CurveData& E, const ApTable& t) {
  std::size_t bad = 0;
  for (int d = 1; d <= t.max_degree; ++d) {
    const double bound = 2 * std::pow(static_cast<double>(ring.p()), d / 2.0);
    for (const ApEntry& e : t.primes(d)) {
      const bool mult = e.type == Reduction::MultSplit || e.type == Reduction::MultNonsplit;
      if (std::fabs(static_cast<double>(e.a)) > bound) ++bad;
      if (mult && e.a != 1 && e.a != -1) ++bad;
      if (e.type == Reduction::Additive && e.a != 0) ++bad;
    }
  }
  (void)E;
  return {"hasse", bad == 0,
          std::to_string(t.size()) + " primes to degree " + std::to_string(t.max_degree) +
              ", violations " + std::to_string(bad), std::nullopt};
}

SuiteResult suite_rh2(const PolyRing& ring, const CurveData& E, FiberTraceCache& cache) {
  double worst = 0;
  int count = 0, bad_degree = 0;
  for (int N = 1; N <= 2; ++N)
    for (const Poly& D : collect_family(ring, N, E.finite_conductor)) {
      const LPolynomial L = twist_L(ring, E, cache, D);
      if (L.M != 2 * N + E.deg_N_E - 4 || L.coeffs.back() == 0) ++bad_degree;
      worst = std::max(worst, spectral(L).max_rh_deviation);
      ++count;
    }
  return {"rh2", bad_degree == 0 && worst <= 1e-8,
          std::to_string(count) + " twists, max root deviation " + sci(worst), std::nullopt};
}

SuiteResult suite_ef(const PolyRing& ring, const CurveData& E, FiberTraceCache& cache,
                     const ApTable& t) {
  int count = 0, mismatch = 0;
  double closure = 0;
  for (int N = 1; N <= 2; ++N)
    for (const Poly& D : collect_family(ring, N, E.finite_conductor)) {
      const LPolynomial a = twist_L(ring, E, cache, D);
      const LPolynomial b = euler_L(ring, E, t, D, a.M);
      if (a.coeffs != b.coeffs) ++mismatch;
      const SpectralData s = spectral(a);
      const auto S = fiber_power_sums(ring, E, cache, D, 3);
      for (int n = 1; n <= 3; ++n) {
        cd tr = 0;
        for (double th : s.angles) tr += std::polar(1.0, n * th);
        const double lhs = -static_cast<double>(S[static_cast<std::size_t>(n)]) / std::pow(ring.p(), n);
        closure = std::max(closure, std::abs(tr - lhs));
      }
      ++count;
    }
  return {"ef", mismatch == 0 && closure <= 1e-6,
          std::to_string(count) + " twists, method mismatches " + std::to_string(mismatch) +
              ", explicit formula gap " + sci(closure), std::nullopt};
}

SuiteResult suite_sign(const PolyRing& ring, const CurveData& E, FiberTraceCache& cache) {
  int count = 0, bad = 0;
  for (int N = 1; N <= 3; ++N) {
    std::optional<int> constant;
    for (const Poly& D : collect_family(ring, N, E.finite_conductor)) {
      const LPolynomial L = twist_L(ring, E, cache, D);
      const SpectralData s = spectral(L);
      const int M = L.M;
      for (int j = 0; 2 * j <= M; ++j) {
        const std::int64_t qp = static_cast<std::int64_t>(pow_u64(ring.p(), static_cast<unsigned>(M - 2 * j)));
        if (L.coeffs[static_cast<std::size_t>(M - j)] != L.eps * qp * L.coeffs[static_cast<std::size_t>(j)]) ++bad;
      }
      if ((s.rank % 2 == 0) != (L.eps == 1)) ++bad;
      const int v = L.eps * quad_eval(ring, E.mult_part, D);
      if (!constant) constant = v;
      else if (*constant != v) ++bad;
      ++count;
    }
  }
  return {"sign", bad == 0,
          std::to_string(count) + " twists, violations " + std::to_string(bad), std::nullopt};
}

SuiteResult suite_size(const PolyRing& ring, const CurveData& E) {
  int bad = 0;
  std::string detail;
  for (int N = 2; N <= 3; ++N) {
    const auto rows = size_table(ring, E, N);
    std::uint64_t sum = 0;
    for (const auto& r : rows) sum += r.enumerated;
    if (sum != collect_family(ring, N, E.finite_conductor).size()) ++bad;
    const Poly C = rows.front().cls;
    for (const Poly& P : {Poly{0, 1}, Poly{1, 1}}) {
      const auto r = char_square_check(ring, E, N, C, P);
      if (static_cast<double>(r.residual) > r.bound) ++bad;
    }
  }
  return {"size", bad == 0, "partition and square-sum violations " + std::to_string(bad),
          std::nullopt};
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  std::vector<std::string> names = c.suites.empty() ? kSuites : c.suites;
  for (const auto& n : names)
    if (std::find(kSuites.begin(), kSuites.end(), n) == kSuites.end())
      fail(ErrorCode::InvalidArgument, "unknown suite '" + n + "'");
  std::vector<SuiteResult> results;
  std::optional<PolyRing> ring;
  std::optional<CurveData> curve;
  std::unique_ptr<FiberTraceCache> cache;
  auto run = [&](const std::string& name, auto&& fn) {
    try {
      if (!ring) ring.emplace(make_ring(c));
      results.push_back(fn());
    } catch (const Error& e) {
      results.push_back({name, false, std::string(to_string(e.code())) + ": " + e.what(), e.code()});
    }
  };
  auto need_curve = [&]() -> const CurveData& {
    if (!curve) curve.emplace(make_curve(*ring, c));
    if (!cache) cache = std::make_unique<FiberTraceCache>(*ring, *curve);
    return *curve;
  };
  auto table_for = [&]() {
    const CurveData& E = need_curve();
    return load_table(*ring, E, c, E.twist_degree(2));
  };
  for (const auto& name : names) {
    if (name == "rh") run(name, [&] { return suite_rh(*ring); });
    else if (name == "duality") run(name, [&] { return suite_duality(*ring); });
    else if (name == "hasse") run(name, [&] { const ApTable t = table_for(); return suite_hasse(*ring, *curve, t); });
    else if (name == "rh2") run(name, [&] { need_curve(); return suite_rh2(*ring, *curve, *cache); });
    else if (name == "ef") run(name, [&] { const ApTable t = table_for(); return suite_ef(*ring, *curve, *cache, t); });
    else if (name == "sign") run(name, [&] { need_curve(); return suite_sign(*ring, *curve, *cache); });
    else if (name == "size") run(name, [&] { need_curve(); return suite_size(*ring, *curve); });
  }
  bool ok = true, corrupt = false;
  if (c.format == "json") {
    ojson arr = ojson::array();
    for (const auto& r : results)
      arr.push_back({{"suite", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    out << dump({{"schema", 1}, {"suites", arr}});
  } else {
    for (const auto& r : results)
      out << r.name << (r.pass ? " PASS " : " FAIL ") << r.detail << "\n";
  }
  for (const auto& r : results) {
    ok = ok && r.pass;
    if (r.error == ErrorCode::CacheCorrupt) corrupt = true;
  }
  if (corrupt) return 5;
  return ok ? 0 : 4;
}

// ---- family commands ------------------------------------------------------

Poly parse_twist(const PolyRing& ring, const CurveData& E, const std::string& text) {
  const Poly D = ring.parse(text);
  if (D.is_zero() || !D.is_monic())
    fail(ErrorCode::InvalidArgument, "twist " + text + " must be monic");
  if (D.degree() >= 1 && !ring.is_squarefree(D))
    fail(ErrorCode::InvalidArgument, "twist " + text + " is not squarefree");
  if (!ring.coprime(D, E.finite_conductor))
    fail(ErrorCode::NonCoprimeConductor, "twist " + text + " shares a factor with N_E");
  return D;
}

int cmd_lpoly(const RunConfig& c, std::ostream& out) {
  const PolyRing ring = make_ring(c);
  const CurveData E = make_curve(ring, c);
  FiberTraceCache cache(ring, E);
  std::vector<Poly> Ds;
  if (c.twist) Ds.push_back(parse_twist(ring, E, *c.twist));
  else Ds = collect_family(ring, c.N, E.finite_conductor, parse_class(ring, c));
  ojson arr = ojson::array();
  for (const Poly& D : Ds) {
    const LPolynomial L = twist_L(ring, E, cache, D);
    const SpectralData s = spectral(L);
    if (c.format == "json")
      arr.push_back({{"D", PolyRing::format(D)}, {"M", L.M}, {"coeffs", L.coeffs},
                     {"rank", s.rank}, {"eps", L.eps}, {"angles", s.angles}});
    else
      out << dump_line(D, L, s) << "\n";
  }
  if (c.format == "json") out << dump(arr);
  return 0;
}

FamilyData family_for(const RunConfig& c, const PolyRing& ring, const CurveData& E,
                      FiberTraceCache& cache) {
  return compute_family(ring, E, cache, c.N, parse_class(ring, c), c.workers);
}

int cmd_traces(const RunConfig& c, std::ostream& out) {
  const PolyRing ring = make_ring(c);
  const CurveData E = make_curve(ring, c);
  FiberTraceCache cache(ring, E);
  const FamilyData fam = family_for(c, ring, E, cache);
  if (c.n_max > 2 * fam.M)
    fail(ErrorCode::InvalidArgument, "n-max beyond 2M = " + std::to_string(2 * fam.M));
  const FamilyReport r = family_report(ring, E, fam, c.n_max, std::nullopt);
  if (c.format == "csv") {
    out << traces_csv(r);
    return 0;
  }
  ojson j = to_json(E, r);
  out << dump({{"schema", 1}, {"N", r.N}, {"class", j["class"]}, {"family_size", r.family_size},
               {"M", r.M}, {"traces", j["traces"]}});
  return 0;
}

int cmd_density(const RunConfig& c, std::ostream& out) {
  const PolyRing ring = make_ring(c);
  const CurveData E = make_curve(ring, c);
  FiberTraceCache cache(ring, E);
  const TestFunction phi(c.nu);
  if (phi.nu > 1 && !c.allow_wide)
    fail(ErrorCode::SupportTooWide, "nu > 1 needs --allow-wide");
  const FamilyData fam = family_for(c, ring, E, cache);
  const DensityResult d = one_level_density(fam, phi, c.allow_wide);
  ojson j = {{"schema", 1},
             {"N", c.N},
             {"family_size", fam.twists.size()},
             {"M", fam.M},
             {"nu", c.nu},
             {"empirical", d.empirical.real()},
             {"empirical_imag", d.empirical.imag()},
             {"direct", one_level_density_direct(fam, phi)},
             {"reference", d.reference},
             {"deviation", d.deviation}};
  if (phi.nu > 1) j["warning"] = "support beyond (-1, 1); exploratory only";
  if (c.format == "csv") {
    out << "N,nu,empirical,reference,deviation\n"
        << c.N << "," << j["nu"].dump() << "," << j["empirical"].dump() << ","
        << j["reference"].dump() << "," << j["deviation"].dump() << "\n";
  } else {
    out << dump(j);
  }
  return 0;
}

int cmd_ranks(const RunConfig& c, std::ostream& out) {
  const PolyRing ring = make_ring(c);
  const CurveData E = make_curve(ring, c);
  FiberTraceCache cache(ring, E);
  const FamilyData fam = family_for(c, ring, E, cache);
  const FamilyReport r = family_report(ring, E, fam, 0, std::nullopt);
  if (c.format == "csv") {
    out << ranks_csv(r);
    return 0;
  }
  ojson j = to_json(E, r);
  out << dump({{"schema", 1}, {"N", r.N}, {"class", j["class"]}, {"family_size", r.family_size},
               {"ranks", j["ranks"]}, {"signs", j["signs"]}});
  return 0;
}

ojson sizes_json(const std::vector<SizeResult>& rows, int N, std::uint64_t total) {
  ojson arr = ojson::array();
  for (const auto& r : rows)
    arr.push_back({{"class", PolyRing::format(r.cls)},
                   {"enumerated", r.enumerated},
                   {"main_term", r.main_term},
                   {"relative_deviation", r.relative_deviation}});
  return {{"schema", 1}, {"N", N}, {"family_size", total}, {"classes", arr}};
}

int cmd_sizes(const RunConfig& c, std::ostream& out) {
  const PolyRing ring = make_ring(c);
  const CurveData E = make_curve(ring, c);
  std::vector<SizeResult> rows;
  if (c.cls) rows.push_back(size_check(ring, E, c.N, ring.parse(*c.cls)));
  else rows = size_table(ring, E, c.N);
  std::uint64_t total = 0;
  for (const auto& r : rows) total += r.enumerated;
  if (c.format == "csv") out << sizes_csv(rows);
  else out << dump(sizes_json(rows, c.N, total));
  return 0;
}

int cmd_ell(const RunConfig& c, std::ostream& out) {
  const PolyRing ring = make_ring(c);
  const CurveData E = make_curve(ring, c);
  const unsigned ell = c.ell.value_or(3);
  if (ell < 2 || (ring.p() - 1) % ell != 0)
    fail(ErrorCode::OrderNotDividing, "order " + std::to_string(ell) + " does not divide q - 1");
  const ApTable t = load_table(ring, E, c, E.twist_degree(c.N));
  const EllReport r = ell_density(ring, E, t, c.N, ell, TestFunction(c.nu), c.n_max, c.workers);
  if (c.format == "csv") {
    out << "n,re,im\n";
    for (std::size_t i = 0; i < r.traces.size(); ++i)
      out << i + 1 << "," << ojson(r.traces[i].real()).dump() << "," << ojson(r.traces[i].imag()).dump() << "\n";
  } else {
    out << dump(to_json(E, r));
  }
  return 0;
}

int cmd_stats(const RunConfig& c, std::ostream& out) {
  const PolyRing ring = make_ring(c);
  const CurveData E = make_curve(ring, c);
  std::filesystem::create_directories(c.out_dir);
  const std::string dir = c.out_dir + "/";
  ojson files = ojson::array();
  if (c.ell) {
    const unsigned ell = *c.ell;
    if (ell < 2 || (ring.p() - 1) % ell != 0)
      fail(ErrorCode::OrderNotDividing, "order " + std::to_string(ell) + " does not divide q - 1");
    const ApTable t = load_table(ring, E, c, E.twist_degree(c.N));
    const EllReport r = ell_density(ring, E, t, c.N, ell, TestFunction(c.nu), c.n_max, c.workers);
    write_file(dir + "ell_report.json", dump(to_json(E, r)));
    std::string csv = "n,re,im\n";
    for (std::size_t i = 0; i < r.traces.size(); ++i)
      csv += std::to_string(i + 1) + "," + ojson(r.traces[i].real()).dump() + "," +
             ojson(r.traces[i].imag()).dump() + "\n";
    write_file(dir + "ell_traces.csv", csv);
    files = {dir + "ell_report.json", dir + "ell_traces.csv"};
  } else {
    FiberTraceCache cache(ring, E);
    const FamilyData fam = family_for(c, ring, E, cache);
    const TestFunction phi(c.nu);
    const FamilyReport r = family_report(ring, E, fam, std::min(c.n_max, 2 * fam.M), phi);
    ojson j = to_json(E, r);
    std::vector<SizeResult> rows;
    if (c.cls) rows.push_back(size_check(ring, E, c.N, ring.parse(*c.cls)));
    else rows = size_table(ring, E, c.N);
    std::uint64_t total = 0;
    for (const auto& s : rows) total += s.enumerated;
    j["sizes"] = sizes_json(rows, c.N, total)["classes"];
    write_file(dir + "report.json", dump(j));
    write_file(dir + "traces.csv", traces_csv(r));
    write_file(dir + "ranks.csv", ranks_csv(r));
    write_file(dir + "sizes.csv", sizes_csv(rows));
    files = {dir + "report.json", dir + "traces.csv", dir + "ranks.csv", dir + "sizes.csv"};
  }
  out << dump({{"schema", 1}, {"written", files}});
  return 0;
}

int cmd_ap_table(const RunConfig& c, std::ostream& out) {
  const PolyRing ring = make_ring(c);
  const CurveData E = make_curve(ring, c);
  const ApTable t = load_table(ring, E, c, c.max_deg);
  const SuiteResult h = suite_hasse(ring, E, t);
  ojson counts = ojson::array();
  for (int d = 1; d <= t.max_degree; ++d) counts.push_back(t.primes(d).size());
  out << dump({{"schema", 1},
               {"path", ap_cache_path(c, c.max_deg)},
               {"max_degree", t.max_degree},
               {"primes_by_degree", counts},
               {"hasse", h.pass},
               {"detail", h.detail}});
  return h.pass ? 0 : 4;
}

int dispatch(const RunConfig& c, std::ostream& out) {
  if (c.command == "conductor") {
    const PolyRing ring = make_ring(c);
    out << dump(curve_summary(make_curve(ring, c)));
    return 0;
  }
  if (c.command == "ap-table") return cmd_ap_table(c, out);
  if (c.command == "lpoly") return cmd_lpoly(c, out);
  if (c.command == "traces") return cmd_traces(c, out);
  if (c.command == "density") return cmd_density(c, out);
  if (c.command == "ranks") return cmd_ranks(c, out);
  if (c.command == "sizes") return cmd_sizes(c, out);
  if (c.command == "ell") return cmd_ell(c, out);
  if (c.command == "verify") return cmd_verify(c, out);
  if (c.command == "stats") return cmd_stats(c, out);
  fail(ErrorCode::InvalidArgument, "unknown command '" + c.command + "'");
}

}  // namespace

ojson config_to_json(const RunConfig& c) {
  ojson j;
  j["p"] = c.p;
  j["A"] = c.A;
  j["B"] = c.B;
  j["command"] = c.command;
  j["N"] = c.N;
  j["class"] = c.cls ? ojson(*c.cls) : ojson(nullptr);
  j["n_max"] = c.n_max;
  j["nu"] = c.nu;
  j["ell"] = c.ell ? ojson(*c.ell) : ojson(nullptr);
  j["cache_dir"] = c.cache_dir;
  j["workers"] = c.workers;
  j["format"] = c.format;
  j["max_deg"] = c.max_deg;
  j["twist"] = c.twist ? ojson(*c.twist) : ojson(nullptr);
  j["suites"] = c.suites;
  j["out_dir"] = c.out_dir;
  j["allow_wide"] = c.allow_wide;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  if (!j.is_object()) fail(ErrorCode::ParseError, "config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "p") c.p = v.get<std::uint32_t>();
      else if (key == "A") c.A = v.get<std::string>();
      else if (key == "B") c.B = v.get<std::string>();
      else if (key == "command") c.command = v.get<std::string>();
      else if (key == "N") c.N = v.get<int>();
      else if (key == "class") c.cls = v.is_null() ? std::nullopt : std::optional(v.get<std::string>());
      else if (key == "n_max") c.n_max = v.get<int>();
      else if (key == "nu") c.nu = v.get<double>();
      else if (key == "ell") c.ell = v.is_null() ? std::nullopt : std::optional(v.get<unsigned>());
      else if (key == "cache_dir") c.cache_dir = v.get<std::string>();
      else if (key == "workers") c.workers = v.get<unsigned>();
      else if (key == "format") c.format = v.get<std::string>();
      else if (key == "max_deg") c.max_deg = v.get<int>();
      else if (key == "twist") c.twist = v.is_null() ? std::nullopt : std::optional(v.get<std::string>());
      else if (key == "suites") c.suites = v.get<std::vector<std::string>>();
      else if (key == "out_dir") c.out_dir = v.get<std::string>();
      else if (key == "allow_wide") c.allow_wide = v.get<bool>();
      else fail(ErrorCode::ParseError, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad config value: ") + e.what());
  }
  return c;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::BudgetExceeded:
    case ErrorCode::FieldBudgetExceeded:
    case ErrorCode::InsufficientApTable:
      return 3;
    case ErrorCode::CacheCorrupt:
      return 5;
    case ErrorCode::IntegerDriftExceeded:
    case ErrorCode::InconsistentSign:
    case ErrorCode::AmbiguousSign:
    case ErrorCode::NonIntegralNewton:
    case ErrorCode::RootFinderNonConvergence:
    case ErrorCode::PointCountFailure:
    case ErrorCode::NoIrreducibleFound:
      return 4;
    default:
      return 2;
  }
}

std::string ap_cache_path(const RunConfig& c, int max_deg) {
  const std::string key = std::to_string(c.p) + "|" + c.A + "|" + c.B + "|" + std::to_string(max_deg);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
  const std::string dir = c.cache_dir.empty() ? ".twistlab-cache" : c.cache_dir;
  return dir + "/ap-p" + std::to_string(c.p) + "-d" + std::to_string(max_deg) + "-" + hex + ".txt";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistics of twisted L-functions of elliptic curves over F_q(t)", "twistlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "twistlab 1.0");

  std::string config_path, A, B, cache_dir, format, cls, twist, suites, out_dir;
  std::uint32_t p = 0;
  unsigned workers = 0, ell = 0;
  int N = 0, n_max = 0, max_deg = 0;
  double nu = 0;
  bool allow_wide = false;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  auto* o_p = app.add_option("--p", p, "characteristic");
  auto* o_A = app.add_option("--A", A, "coefficients of A(t), ascending, comma separated");
  auto* o_B = app.add_option("--B", B, "coefficients of B(t)");
  auto* o_cache = app.add_option("--cache-dir", cache_dir, "a_P cache directory (env TWISTLAB_CACHE)");
  auto* o_workers = app.add_option("--workers", workers, "worker threads, 0 = all cores");
  auto* o_format = app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  struct Sub {
    CLI::App* app;
    CLI::Option *N = nullptr, *n_max = nullptr, *nu = nullptr, *cls = nullptr, *ell = nullptr,
                *max_deg = nullptr, *twist = nullptr, *suites = nullptr, *out = nullptr,
                *wide = nullptr;
  };
  std::vector<Sub> subs;
  auto sub = [&](const std::string& name, const std::string& help) -> Sub& {
    subs.push_back({app.add_subcommand(name, help)});
    return subs.back();
  };
  {
    sub("conductor", "conductor and reduction types of the curve");
    Sub& s = sub("ap-table", "build or load the a_P table");
    s.max_deg = s.app->add_option("--max-deg", max_deg, "largest prime degree");
  }
  {
    Sub& s = sub("lpoly", "L-polynomials of quadratic twists");
    s.twist = s.app->add_option("--twist", twist, "twist conductor D");
    s.N = s.app->add_option("--N", N, "dump the whole family of degree N");
    s.cls = s.app->add_option("--class", cls, "residue class C");
  }
  {
    Sub& s = sub("traces", "family averages of tr Theta^n");
    s.N = s.app->add_option("--N", N, "twist degree");
    s.n_max = s.app->add_option("--n-max", n_max, "largest n");
    s.cls = s.app->add_option("--class", cls, "residue class C");
  }
  {
    Sub& s = sub("density", "one-level density against the orthogonal reference");
    s.N = s.app->add_option("--N", N, "twist degree");
    s.nu = s.app->add_option("--nu", nu, "support of the Fourier transform");
    s.cls = s.app->add_option("--class", cls, "residue class C");
    s.wide = s.app->add_flag("--allow-wide", allow_wide, "permit nu > 1 (exploration)");
  }
  {
    Sub& s = sub("ranks", "rank histogram and sign split");
    s.N = s.app->add_option("--N", N, "twist degree");
    s.cls = s.app->add_option("--class", cls, "residue class C");
  }
  {
    Sub& s = sub("sizes", "family sizes per invertible class");
    s.N = s.app->add_option("--N", N, "twist degree");
    s.cls = s.app->add_option("--class", cls, "residue class C");
  }
  {
    Sub& s = sub("ell", "order-ell twist family against the unitary reference");
    s.ell = s.app->add_option("--order", ell, "character order");
    s.N = s.app->add_option("--N", N, "conductor degree");
    s.nu = s.app->add_option("--nu", nu, "support of the Fourier transform");
    s.n_max = s.app->add_option("--n-max", n_max, "largest n for traces");
  }
  {
    Sub& s = sub("verify", "run the identity suites");
    s.suites = s.app->add_option("--suites", suites, "comma separated subset of rh,duality,hasse,rh2,ef,sign,size");
  }
  {
    Sub& s = sub("stats", "write family reports");
    s.N = s.app->add_option("--N", N, "twist degree");
    s.nu = s.app->add_option("--nu", nu, "support of the Fourier transform");
    s.n_max = s.app->add_option("--n-max", n_max, "largest n for traces");
    s.cls = s.app->add_option("--class", cls, "residue class C");
    s.ell = s.app->add_option("--ell", ell, "switch to the order-ell family");
    s.out = s.app->add_option("--out", out_dir, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return 2;
  }

  try {
    RunConfig c;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, "config " + config_path + ": " + e.what());
      }
      c = config_from_json(j);
    }
    if (const char* env = std::getenv("TWISTLAB_CACHE"); env && *env) c.cache_dir = env;
    if (o_p->count()) c.p = p;
    if (o_A->count()) c.A = A;
    if (o_B->count()) c.B = B;
    if (o_cache->count()) c.cache_dir = cache_dir;
    if (o_workers->count()) c.workers = workers;
    if (o_format->count()) c.format = format;
    for (const Sub& s : subs) {
      if (!s.app->parsed()) continue;
      c.command = s.app->get_name();
      if (s.N && s.N->count()) c.N = N;
      if (s.n_max && s.n_max->count()) c.n_max = n_max;
      if (s.nu && s.nu->count()) c.nu = nu;
      if (s.cls && s.cls->count()) c.cls = cls;
      if (s.ell && s.ell->count()) c.ell = ell;
      if (s.max_deg && s.max_deg->count()) c.max_deg = max_deg;
      if (s.twist && s.twist->count()) c.twist = twist;
      if (s.out && s.out->count()) c.out_dir = out_dir;
      if (s.wide && s.wide->count()) c.allow_wide = allow_wide;
      if (s.suites && s.suites->count()) {
        c.suites.clear();
        std::stringstream ss(suites);
        for (std::string item; std::getline(ss, item, ',');)
          if (!item.empty()) c.suites.push_back(item);
      }
    }
    if (c.N < 0) fail(ErrorCode::InvalidArgument, "N must be nonnegative");
    if (c.n_max < 0) fail(ErrorCode::InvalidArgument, "n-max must be nonnegative");
    return dispatch(c, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: InvalidArgument: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace twistlab
