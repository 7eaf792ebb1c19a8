#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rectcft/rectcft.hpp"
#include "rectcft/cli/checks.hpp"
#include "rectcft/io/json.hpp"

namespace rectcft::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kStructural = 3, kNumerical = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Limits {
  int max_symbolic_level = 40;
  int max_order = 60;
  int max_sites = 1000;

  static Limits from_env() {
    Limits l;
    if (const char* s = std::getenv("RECTCFT_MAX_ORDER")) {
      char* end = nullptr;
      const long v = std::strtol(s, &end, 10);
      if (end == s || *end != '\0' || v < 1) throw UsageError("RECTCFT_MAX_ORDER must be a positive integer");
      l.max_order = static_cast<int>(v);
    }
    return l;
  }
};

using io::Json;

struct Common {
  std::string format = "json";
  std::string out;
  int jobs = 1;
  bool selftest = false;
};

inline void require_range(const std::string& what, long v, long lo, long hi) {
  if (v < lo || v > hi)
    throw UsageError(what + " = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
}

/// Main output goes to --out when given, otherwise to the caller's stream.
class Sink {
 public:
  Sink(std::ostream& fallback, const std::string& path) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open output file " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

inline int finish_checks(const CheckList& checks, std::ostream& out) {
  checks.print(out);
  return checks.all_ok() ? kOk : kCheckFailed;
}

inline void write_json(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

// ---- virasoro ---------------------------------------------------------------

inline bool gluing_vanishes(VermaEngine<CPoly>& engine, const VermaVector<CPoly>& b, int n) {
  const auto r = gluing_residual(engine, b, GluingParams::homogeneous(n));
  for (const auto& [p, a] : r.terms())
    if (level(p) <= b.cutoff() - n) return false;
  return true;
}

inline bool eta_identity_holds(const Amplitude<CPoly>& amp) {
  const EtaPower eta = eta_inverse_power({make_rational(1, 2), Rational(0)}, Variable::qhat, amp.series.order());
  return eta.series == amp.series && eta.prefactor == amp.prefactor;
}

inline Series<Rational> p1_closed_form(int order) {
  Series<Rational> s = Series<Rational>::one(Variable::q, order);
  if (order >= 1) s.set(1, Rational(-4));
  return pow(s, make_rational(-1, 4));
}

inline CheckList virasoro_selftest() {
  CheckList c;
  const auto b4 = boundary_state(4);
  c.add("boundary_state(4) coefficients",
        b4.size() == 4 && b4.coefficient({}) == CPoly(1) && b4.coefficient({2}) == CPoly(-1) &&
            b4.coefficient({4}) == CPoly(make_rational(-1, 2)) && b4.coefficient({2, 2}) == CPoly(make_rational(1, 2)));
  VermaEngine<CPoly> engine(CPoly::c(), 8);
  const auto b8 = boundary_state(engine, 8);
  bool glue = true;
  for (int n = 1; n <= 4; ++n) glue = glue && gluing_vanishes(engine, b8, n);
  c.add("gluing residuals vanish, n = 1..4 at level 8", glue);
  c.add("amplitude equals eta^{-c/2} to order 12", eta_identity_holds(boundary_amplitude(12)));
  VermaEngine<CPoly> e2(CPoly::c(), 6);
  VermaVector<CPoly> v = VermaVector<CPoly>::vacuum(6);
  bool l2 = true;
  CPoly expected(1);
  for (int k = 1; k <= 3; ++k) {
    v = e2.apply(-2, v);
    expected = expected * (CPoly::c() + CPoly(8 * (k - 1))) * make_rational(k, 2);
    l2 = l2 && e2.shapovalov(v, v) == expected;
  }
  c.add("|L_{-2}^k|0>|^2 product formula, k <= 3", l2);
  c.add("P_1 = (1-4q)^{-1/4} to order 8", p_series(1, 8) == p1_closed_form(8));
  c.add("P_2 closed form to order 8", p2_closed_form_check(8));
  c.add("P_3 q^8 coefficient is 245/8", p_series(3, 8)[8] == make_rational(245, 8));
  return c;
}

inline int run_boundary_state(const Common& o, const Limits& lim, int lvl, const std::optional<std::string>& at_c,
                              std::optional<int> factors, std::ostream& out) {
  if (o.selftest) return finish_checks(virasoro_selftest(), out);
  require_range("--level", lvl, 0, at_c ? lim.max_order : lim.max_symbolic_level);
  if (factors) require_range("--factors", *factors, 1, 30);
  Sink sink(out, o.out);
  Json terms = Json::array();
  std::ostringstream plain, csv;
  csv << "partition,coefficient\n";
  auto emit = [&](const auto& state) {
    for (const auto& [p, a] : state.terms()) {
      terms.push_back({{"partition", io::partition_json(p)}, {"coefficient", io::to_json(a)}});
      std::string coeff;
      if constexpr (std::is_same_v<std::decay_t<decltype(a)>, CPoly>) coeff = a.to_string();
      else coeff = to_string(a);
      plain << (p.empty() ? "|0>" : to_string(p)) << ": " << coeff << '\n';
      std::string ps;
      for (std::size_t i = 0; i < p.size(); ++i) ps += (i ? " " : "") + std::to_string(p[i]);
      csv << ps << ",\"" << coeff << "\"\n";
    }
  };
  Json j;
  j["level"] = lvl;
  if (at_c) {
    const Rational c = parse_rational(*at_c);
    VermaEngine<Rational> engine(c, lvl);
    emit(factors ? finitized_state(engine, *factors, lvl) : boundary_state(engine, lvl));
    j["central_charge"] = to_string(c);
  } else {
    VermaEngine<CPoly> engine(CPoly::c(), lvl);
    emit(factors ? finitized_state(engine, *factors, lvl) : boundary_state(engine, lvl));
    j["central_charge"] = "c";
  }
  if (factors) j["factors"] = *factors;
  j["terms"] = terms;
  if (o.format == "plain") *sink << plain.str();
  else if (o.format == "csv") *sink << csv.str();
  else write_json(*sink, j);
  return kOk;
}

inline int run_amplitude(const Common& o, const Limits& lim, int order, const std::optional<std::string>& at_c,
                         std::ostream& out) {
  if (o.selftest) return finish_checks(virasoro_selftest(), out);
  require_range("--order", order, 0, std::min(lim.max_order, lim.max_symbolic_level));
  const Amplitude<CPoly> amp = boundary_amplitude(order);
  const bool eta = eta_identity_holds(amp);
  Sink sink(out, o.out);
  Json j;
  j["order"] = order;
  if (at_c) {
    const Rational c = parse_rational(*at_c);
    const Series<Rational> s = evaluate_at(amp.series, c);
    j["central_charge"] = to_string(c);
    j["series"] = io::series_json(s, amp.prefactor);
    if (o.format == "plain") *sink << io::plain_series(s) << '\n';
  } else {
    j["central_charge"] = "c";
    j["series"] = io::series_json(amp.series, amp.prefactor);
    if (o.format == "plain") *sink << io::plain_series(amp.series) << '\n';
  }
  j["eta_check"] = eta ? "pass" : "fail";
  if (o.format == "plain") *sink << "eta_check: " << (eta ? "pass" : "fail") << '\n';
  else if (o.format == "csv") {
    *sink << "n,coefficient\n";
    for (int n = 0; n <= order; ++n)
      *sink << n << ",\"" << (at_c ? to_string(amp.series[n].evaluate(parse_rational(*at_c))) : amp.series[n].to_string())
            << "\"\n";
  } else write_json(*sink, j);
  return eta ? kOk : kCheckFailed;
}

inline int run_pn(const Common& o, const Limits& lim, int N, int order, std::ostream& out) {
  if (o.selftest) return finish_checks(virasoro_selftest(), out);
  require_range("--slits-exponent", N, 1, 30);
  require_range("--order", order, 0, std::min(lim.max_order, lim.max_symbolic_level / 2));
  const Series<Rational> p = p_series(N, order);
  const PkReport r = pk_conjecture_check(p);
  Sink sink(out, o.out);
  Json j;
  j["slits_exponent"] = N;
  j["series"] = io::series_json(p);
  Json dev;
  if (r.first_deviation < 0) dev = nullptr;
  else
    dev = {{"k", r.first_deviation}, {"sign", r.sign}, {"coefficient", to_string(r.value)},
           {"partitions", r.partitions.get_str()}};
  j["first_deviation_from_p_k"] = dev;
  if (o.format == "plain") {
    *sink << io::plain_series(p) << '\n';
  } else if (o.format == "csv") {
    *sink << "k,coefficient\n";
    for (int k = 0; k <= order; ++k) *sink << k << "," << to_string(p[k]) << '\n';
  } else {
    write_json(*sink, j);
  }
  return kOk;
}

inline int run_gluing(const Common& o, const Limits& lim, int nmax, int lvl, std::ostream& out) {
  if (o.selftest) return finish_checks(virasoro_selftest(), out);
  require_range("--level", lvl, 1, lim.max_symbolic_level);
  require_range("--nmax", nmax, 1, lvl);
  VermaEngine<CPoly> engine(CPoly::c(), lvl);
  const auto b = boundary_state(engine, lvl);
  Sink sink(out, o.out);
  Json rows = Json::array();
  bool all = true;
  CheckList checks;
  for (int n = 1; n <= nmax; ++n) {
    const bool ok = gluing_vanishes(engine, b, n);
    all = all && ok;
    rows.push_back({{"n", n}, {"exact_through_level", lvl - n}, {"vanishes", ok}});
    checks.add("n = " + std::to_string(n) + " through level " + std::to_string(lvl - n), ok);
  }
  if (o.format == "json") write_json(*sink, {{"level", lvl}, {"results", rows}, {"all_vanish", all}});
  else if (o.format == "csv") {
    *sink << "n,exact_through_level,vanishes\n";
    for (const auto& r : rows) *sink << r["n"] << "," << r["exact_through_level"] << "," << r["vanishes"] << '\n';
  } else checks.print(*sink);
  return all ? kOk : kCheckFailed;
}

inline CheckList slitmap_checks() {
  CheckList c;
  for (int N = 1; N <= 4; ++N) {
    const double slope = slit_decay_slope(N);
    const double expect = 1.0 - std::pow(2.0, N + 1);
    c.add("decay slope N = " + std::to_string(N), std::abs(slope - expect) <= 0.05 * std::abs(expect),
          "slope " + fmt(slope, 6) + ", expected " + fmt(expect, 6));
  }
  double err = 0;
  for (int N = 1; N <= 4; ++N)
    for (int t = 0; t < 8; ++t) {
      const Complex z = std::polar(6.0, 0.1 + 0.7 * t);
      err = std::max(err, std::abs(slit_map_inverse(N, slit_map(N, z)) - z));
      err = std::max(err, std::abs(slit_composition(N, z) - slit_map(N, z)));
    }
  c.add("composition and inverse round trips", err < 1e-10, "max error " + fmt(err, 3));
  return c;
}

inline int run_slitmap(const Common& o, bool check, std::optional<int> N, const std::vector<double>& z,
                       std::ostream& out) {
  if (o.selftest || check) {
    const CheckList c = slitmap_checks();
    Sink sink(out, o.out);
    if (o.format == "json") {
      Json a = Json::array();
      for (const auto& x : c.items()) a.push_back({{"check", x.name}, {"pass", x.ok}, {"detail", x.detail}});
      write_json(*sink, {{"checks", a}});
    } else {
      c.print(*sink);
    }
    return c.all_ok() ? kOk : kCheckFailed;
  }
  if (!N || z.size() != 2) throw UsageError("slitmap needs --check, or --exponent N with --z RE IM");
  require_range("--exponent", *N, 0, 30);
  const Complex w = slit_map(*N, Complex(z[0], z[1]));
  Sink sink(out, o.out);
  if (o.format == "json") write_json(*sink, {{"exponent", *N}, {"z", z}, {"f", {w.real(), w.imag()}}});
  else *sink << fmt(w.real(), 17) << " " << fmt(w.imag(), 17) << '\n';
  return kOk;
}

// ---- free fields ------------------------------------------------------------

inline int boson_gluing_bad(int lvl) {
  const auto b = boson_boundary_state(lvl);
  int bad = 0;
  for (int m = 1; m <= lvl; ++m) {
    const BosonVector r = boson_gluing_residual(b, m);
    for (const auto& [p, a] : r.terms())
      if (level(p) <= lvl - m) ++bad;
  }
  return bad;
}

inline bool boson_eta_holds(int order) {
  const auto amp = boson_amplitude(order);
  const auto eta = eta_inverse_power({Rational(0), make_rational(1, 2)}, Variable::qhat, order);
  return require_constant(eta.series) == amp.series && eta.prefactor == amp.prefactor;
}

inline int run_boson(const Common& o, const Limits& lim, std::optional<int> amp_order, std::optional<int> glue,
                     std::optional<int> compare, std::ostream& out) {
  if (o.selftest) {
    CheckList c;
    c.add("a_m residuals vanish through level 8", boson_gluing_bad(8) == 0);
    c.add("amplitude equals eta^{-1/2} to order 16", boson_eta_holds(16));
    c.add("amplitude matches the product formula", even_part_in_q(boson_amplitude(16).series) == boson_product_formula(8));
    c.add("Virasoro state equals coherent state at level 6", boson_virasoro_state(6) == boson_boundary_state(6));
    return finish_checks(c, out);
  }
  if (!amp_order && !glue && !compare)
    throw UsageError("boson needs --amplitude-order, --gluing-level or --compare-virasoro");
  Sink sink(out, o.out);
  Json j;
  bool ok = true;
  if (amp_order) {
    require_range("--amplitude-order", *amp_order, 0, lim.max_order);
    const auto amp = boson_amplitude(*amp_order);
    const bool eta = boson_eta_holds(*amp_order);
    ok = ok && eta;
    j["amplitude"] = io::series_json(amp.series, amp.prefactor);
    j["eta_check"] = eta ? "pass" : "fail";
    if (o.format == "plain") *sink << io::plain_series(amp.series) << "\neta_check: " << (eta ? "pass" : "fail") << '\n';
  }
  if (glue) {
    require_range("--gluing-level", *glue, 1, lim.max_order);
    const int bad = boson_gluing_bad(*glue);
    ok = ok && bad == 0;
    j["gluing"] = {{"level", *glue}, {"nonzero_terms", bad}};
    if (o.format == "plain") *sink << "gluing through level " << *glue << ": " << (bad ? "FAIL" : "PASS") << '\n';
  }
  if (compare) {
    require_range("--level", *compare, 0, lim.max_symbolic_level);
    const bool eq = boson_virasoro_state(*compare) == boson_boundary_state(*compare);
    ok = ok && eq;
    j["virasoro_comparison"] = {{"level", *compare}, {"equal", eq}};
    if (o.format == "plain") *sink << "Virasoro state at level " << *compare << ": " << (eq ? "PASS" : "FAIL") << '\n';
  }
  if (o.format != "plain") write_json(*sink, j);
  return ok ? kOk : kCheckFailed;
}

inline bool fermion_eta_holds(int order) {
  const auto amp = fermion_amplitude(order);
  const auto eta = eta_inverse_power({Rational(0), make_rational(1, 4)}, Variable::qhat, order);
  return require_constant(eta.series) == amp.series;
}

inline CheckList majorana_selftest() {
  CheckList c;
  const GMatrix g = g_series(10);
  c.add("G_01 = 1/2, G_03 = 1/8, G_12 = 5/8",
        g.at(0, 1) == make_rational(1, 2) && g.at(0, 3) == make_rational(1, 8) && g.at(1, 2) == make_rational(5, 8));
  c.add("G antisymmetric with parity zeros to cutoff 10", g.is_antisymmetric() && g.has_parity_zeros());
  const auto amp = fermion_amplitude(6);
  c.add("amplitude coefficients 1/4, 13/32",
        amp.series[2] == make_rational(1, 4) && amp.series[4] == make_rational(13, 32));
  c.add("amplitude equals eta^{-1/4} to order 10", fermion_eta_holds(10));
  c.add("Virasoro state equals coherent state at level 6",
        fermion_virasoro_state(6) == fermion_boundary_state(6, g_series(7)));
  return c;
}

inline int run_majorana(const Common& o, const Limits& lim, std::optional<int> gtable, std::optional<int> amatrix,
                        std::optional<int> amp_order, std::optional<int> compare, std::ostream& out) {
  if (o.selftest) return finish_checks(majorana_selftest(), out);
  if (!gtable && !amatrix && !amp_order && !compare)
    throw UsageError("majorana needs --g-table, --amatrix, --amplitude-order or --compare-virasoro");
  Sink sink(out, o.out);
  Json j;
  bool ok = true;
  if (gtable) {
    require_range("--g-table", *gtable, 1, lim.max_order);
    const GMatrix g = g_series(*gtable);
    Json rows = Json::array();
    for (int m = 0; m <= *gtable; ++m)
      for (int n = m + 1; n <= *gtable; ++n)
        if (!is_zero(g.at(m, n))) rows.push_back({{"m", m}, {"n", n}, {"G", to_string(g.at(m, n))}});
    const bool sym = g.is_antisymmetric() && g.has_parity_zeros();
    ok = ok && sym;
    j["g_table"] = {{"cutoff", *gtable}, {"entries", rows}, {"antisymmetric_with_parity_zeros", sym}};
    if (o.format == "plain")
      for (const auto& r : rows)
        *sink << "G_" << r["m"].get<int>() << "," << r["n"].get<int>() << " = " << r["G"].get<std::string>() << '\n';
  }
  if (amatrix) {
    require_range("--amatrix", *amatrix, 2, 2000);
    const AMatrixG a = g_from_amatrix(*amatrix);
    const GMatrix g = g_series(7);
    double dev = 0;
    for (int m = 0; m <= 7; ++m)
      for (int n = 0; n <= 7; ++n) dev = std::max(dev, std::abs(a.g(m, n) - to_double(g.at(m, n))));
    j["amatrix"] = {{"truncation", *amatrix}, {"max_deviation_m_n_le_7", dev}, {"raw_antisymmetry", a.raw_antisymmetry}};
    if (o.format == "plain") *sink << "A-matrix truncation " << *amatrix << ": max deviation " << fmt(dev, 6) << '\n';
  }
  if (amp_order) {
    require_range("--amplitude-order", *amp_order, 0, lim.max_order);
    const auto amp = fermion_amplitude(*amp_order);
    const bool eta = fermion_eta_holds(*amp_order);
    ok = ok && eta;
    j["amplitude"] = io::series_json(amp.series, amp.prefactor);
    j["eta_check"] = eta ? "pass" : "fail";
    if (o.format == "plain") *sink << io::plain_series(amp.series) << "\neta_check: " << (eta ? "pass" : "fail") << '\n';
  }
  if (compare) {
    require_range("--level", *compare, 0, lim.max_symbolic_level);
    const bool eq = fermion_virasoro_state(*compare) == fermion_boundary_state(*compare, g_series(*compare + 1));
    ok = ok && eq;
    j["virasoro_comparison"] = {{"level", *compare}, {"equal", eq}};
    if (o.format == "plain") *sink << "Virasoro state at level " << *compare << ": " << (eq ? "PASS" : "FAIL") << '\n';
  }
  if (o.format != "plain") write_json(*sink, j);
  return ok ? kOk : kCheckFailed;
}

// ---- lattice ----------------------------------------------------------------

inline LoopWeight parse_loop_weight(const std::string& p) {
  if (p == "inf") return LoopWeight::infinity();
  return LoopWeight::finite(std::stod(p));
}

inline CheckList loop_selftest() {
  CheckList c;
  bool tl = true;
  for (int N = 2; N <= 8; N += 2) {
    const LoopSystem sys(N, LoopWeight::finite(3).beta());
    const double b = sys.beta();
    for (int i = 1; i < N; ++i) {
      const Eigen::MatrixXd e = sys.generator(i);
      tl = tl && (e * e - b * e).norm() < 1e-12;
      if (i + 1 < N) {
        const Eigen::MatrixXd f = sys.generator(i + 1);
        tl = tl && (e * f * e - e).norm() < 1e-12 && (f * e * f - f).norm() < 1e-12;
      }
    }
  }
  c.add("TL relations for N <= 8", tl);
  const LoopSystem s8(8, LoopWeight::finite(3).beta());
  const Eigen::MatrixXd G = s8.gram(), H = s8.hamiltonian();
  c.add("G H = H^T G at N = 8", (G * H - H.transpose() * G).norm() < 1e-12);
  c.add("Catalan(5) = 42 link states at N = 10", LinkBasis(10).size() == 42);
  const auto rows = overlap_table(LoopWeight::finite(3), 10, 14, 2);
  double b2 = 0;
  for (const auto& r : rows)
    if (r.k == 2) b2 = std::max(b2, r.overlap);
  c.add("<B|2> < 1e-8 at p = 3, N = 10..14", b2 < 1e-8, fmt(b2, 3));
  return c;
}

inline Json estimate_json(const Estimate& e) { return {{"value", e.value}, {"spread", e.spread}}; }

inline int run_loop(const Common& o, const Limits& lim, const std::string& p, int nmin, int nmax, int kmax,
                    int drop_first, std::ostream& out) {
  if (o.selftest) return finish_checks(loop_selftest(), out);
  require_range("--nmin", nmin, 2, 24);
  require_range("--nmax", nmax, nmin, std::min(28, lim.max_sites));
  require_range("--kmax", kmax, 0, 20);
  const LoopWeight w = parse_loop_weight(p);
  const auto rows = overlap_table(w, nmin, nmax, kmax, o.jobs);
  auto write_csv = [&](std::ostream& os) {
    os << "p,N,k,energy,overlap\n";
    for (const auto& r : rows) os << r.p << "," << r.N << "," << r.k << "," << fmt(r.energy) << "," << fmt(r.overlap) << '\n';
  };
  if (!o.out.empty()) {
    Sink sink(out, o.out);
    write_csv(*sink);
  } else if (o.format == "csv") {
    write_csv(out);
    return kOk;
  }
  if (kmax < 1) return kOk;
  const LoopSummary s = summarize_loop(rows, w, drop_first);
  if (o.format == "plain") {
    out << "p = " << s.p << "  c = " << fmt(s.central_charge, 8) << '\n'
        << "a1 = " << fmt(s.a1.value, 7) << " +- " << fmt(s.a1.spread, 3) << "  (CFT " << fmt(-s.central_charge / 8, 6)
        << ")\n"
        << "alpha = " << fmt(s.alpha.value, 7) << " +- " << fmt(s.alpha.spread, 3) << '\n'
        << "<B|1> = " << fmt(s.b1.value, 7) << " +- " << fmt(s.b1.spread, 3) << "  (CFT "
        << fmt(std::sqrt(s.central_charge / 2), 6) << ")\n";
    if (kmax >= 2) out << "max <B|2>_N, N >= 10: " << fmt(s.b2_max, 3) << '\n';
    return kOk;
  }
  Json j;
  j["p"] = s.p;
  j["central_charge"] = s.central_charge;
  j["nmin"] = nmin;
  j["nmax"] = nmax;
  j["a1"] = estimate_json(s.a1);
  j["a1_cft"] = -s.central_charge / 8;
  j["alpha"] = estimate_json(s.alpha);
  j["B1"] = estimate_json(s.b1);
  j["B1_cft"] = std::sqrt(s.central_charge / 2);
  if (kmax >= 2) j["B2_max_N_ge_10"] = s.b2_max;
  j["excited_drop_first"] = drop_first;
  j["spread_kind"] = "window spread";
  write_json(out, j);
  return kOk;
}

/// 2^N brute force of |<up...up|n>|^2 summed over a complete eigenbasis.
inline CheckList ising_selftest() {
  CheckList c;
  bool complete = true;
  double odd = 0;
  for (int N = 2; N <= 6; ++N) {
    const auto s = solve_chain(N);
    double sum = 0;
    for (unsigned mask = 0; mask < (1u << N); ++mask) {
      ExcitationSet e;
      for (int k = 1; k <= N; ++k)
        if (mask & (1u << (k - 1))) e.push_back(k);
      sum += overlap_sq(s, e);
      if (e.size() % 2 == 1) odd = std::max(odd, std::abs(overlap_determinant(s, e).value()));
    }
    complete = complete && std::abs(sum - 1) < 1e-10;
  }
  c.add("sum of overlaps squared is 1 for N = 2..6", complete);
  c.add("odd-parity determinants vanish", odd < 1e-12, fmt(odd, 3));
  const auto s = solve_chain(200);
  const double orth = (s.phi_plus * s.phi_plus.transpose() - Eigen::MatrixXd::Identity(200, 200)).norm() +
                      (s.phi_minus * s.phi_minus.transpose() - Eigen::MatrixXd::Identity(200, 200)).norm();
  c.add("phi+- orthogonal at N = 200", orth < 1e-12, fmt(orth, 3));
  return c;
}

inline int run_ising(const Common& o, const Limits& lim, int nmin, int nmax, int kmax, int drop_first,
                     std::ostream& out) {
  if (o.selftest) return finish_checks(ising_selftest(), out);
  require_range("--nmin", nmin, 1, lim.max_sites);
  require_range("--nmax", nmax, nmin, lim.max_sites);
  require_range("--kmax", kmax, 0, 20);
  const auto rows = ising_overlap_table(nmin, nmax, kmax, o.jobs);
  auto write_csv = [&](std::ostream& os) {
    os << "N,k,h_label,overlap\n";
    for (const auto& r : rows) os << r.N << "," << r.k << "," << r.h << "," << fmt(r.overlap) << '\n';
  };
  if (!o.out.empty()) {
    Sink sink(out, o.out);
    write_csv(*sink);
  } else if (o.format == "csv") {
    write_csv(out);
    return kOk;
  }
  const IsingSummary s = summarize_ising(rows, drop_first);
  if (o.format == "plain") {
    out << "a1 = " << fmt(s.a1.value, 8) << " +- " << fmt(s.a1.spread, 3) << "  (CFT -0.0625)\n"
        << "alpha = " << fmt(s.alpha.value, 8) << " +- " << fmt(s.alpha.spread, 3) << '\n';
    for (const auto& st : s.states)
      out << "<B|" << st.k << ">  h = " << st.h << "  " << fmt(st.overlap.value, 8) << " +- "
          << fmt(st.overlap.spread, 3) << '\n';
    return kOk;
  }
  Json states = Json::array();
  for (const auto& st : s.states)
    states.push_back({{"k", st.k}, {"h", st.h}, {"excitation", st.excitation},
                      {"parity", st.odd ? "odd" : "even"}, {"overlap", estimate_json(st.overlap)}});
  Json j;
  j["nmin"] = nmin;
  j["nmax"] = nmax;
  j["a1"] = estimate_json(s.a1);
  j["alpha"] = estimate_json(s.alpha);
  j["states"] = states;
  j["excited_drop_first"] = drop_first;
  j["spread_kind"] = "window spread";
  write_json(out, j);
  return kOk;
}

// ---- fit ----------------------------------------------------------------------

inline std::vector<FitPoint> read_points(std::istream& is) {
  std::vector<FitPoint> pts;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw UsageError("fit input lines need two comma-separated columns");
    try {
      std::size_t used = 0;
      const double N = std::stod(line.substr(0, comma), &used);
      const double y = std::stod(line.substr(comma + 1));
      pts.push_back({N, y});
    } catch (const std::invalid_argument&) {
      if (!header) throw UsageError("unparsable fit input line: " + line);
    }
    header = false;
  }
  return pts;
}

inline FitBasis parse_basis(const std::string& spec) {
  if (spec == "absolute") return FitBasis::absolute();
  if (spec == "ratio") return FitBasis::ratio();
  FitBasis b;
  std::stringstream ss(spec);
  std::string t;
  while (std::getline(ss, t, ',')) {
    bool found = false;
    for (int i = 0; i < kFitTerms; ++i)
      if (t == term_name(static_cast<FitTerm>(i))) {
        b.use[static_cast<std::size_t>(i)] = true;
        found = true;
      }
    if (!found) throw UsageError("unknown fit term '" + t + "' (use N, logN, 1, 1/N, 1/N^2, 1/N^3)");
  }
  return b;
}

inline CheckList fit_selftest() {
  CheckList c;
  std::vector<FitPoint> pts;
  for (int N = 4; N <= 40; N += 2) pts.push_back({double(N), 2.0 * N - 0.0625 * std::log(N) + 1 + 3.0 / N});
  const FitResult f = fit(pts, FitBasis::of({FitTerm::N, FitTerm::LogN, FitTerm::One, FitTerm::InvN}));
  c.add("exact recovery of synthetic data",
        std::abs(f.coefficient(FitTerm::N) - 2) < 1e-10 && std::abs(f.coefficient(FitTerm::LogN) + 0.0625) < 1e-10 &&
            std::abs(f.coefficient(FitTerm::One) - 1) < 1e-10 && std::abs(f.coefficient(FitTerm::InvN) - 3) < 1e-10);
  std::vector<FitPoint> rev(pts.rbegin(), pts.rend());
  const FitResult g = fit(rev, FitBasis::of({FitTerm::N, FitTerm::LogN, FitTerm::One, FitTerm::InvN}));
  c.add("invariant under reordering", std::abs(g.coefficient(FitTerm::LogN) - f.coefficient(FitTerm::LogN)) < 1e-12);
  c.add("ratio-fit a2 = -log(0.5) gives 0.5", [] {
    FitResult r;
    r.a[static_cast<std::size_t>(FitTerm::One)] = -std::log(0.5);
    return std::abs(extract_overlap(r, OverlapMode::ratio).value - 0.5) < 1e-15;
  }());
  return c;
}

inline int run_fit(const Common& o, const std::string& in, const std::string& basis, int drop_first, int windows,
                   std::ostream& out) {
  if (o.selftest) return finish_checks(fit_selftest(), out);
  std::vector<FitPoint> pts;
  if (in.empty() || in == "-") {
    pts = read_points(std::cin);
  } else {
    std::ifstream f(in);
    if (!f) throw UsageError("cannot open " + in);
    pts = read_points(f);
  }
  const FitResult r = fit(pts, parse_basis(basis), drop_first, windows);
  Sink sink(out, o.out);
  if (o.format == "json") {
    write_json(*sink, io::fit_json(r));
  } else {
    for (int t = 0; t < kFitTerms; ++t) {
      const auto ft = static_cast<FitTerm>(t);
      if (!r.a[static_cast<std::size_t>(t)]) continue;
      if (o.format == "csv") *sink << term_name(ft) << "," << fmt(r.coefficient(ft), 15) << "," << fmt(r.uncertainty(ft), 6) << '\n';
      else *sink << term_name(ft) << ": " << fmt(r.coefficient(ft), 15) << " +- " << fmt(r.uncertainty(ft), 6) << '\n';
    }
  }
  return kOk;
}

// ---- entry point ----------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact and numerical boundary-state computations for rectangle geometries"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Common o;
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "plain"}));
  app.add_option("--jobs", o.jobs, "parallel work items")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output file (tables for loop/ising)");

  auto selftest = [&](CLI::App* s) { s->add_flag("--selftest", o.selftest, "run the module's invariant checks"); };

  int level = 4;
  int order = 20;
  int nmax = 6;
  std::optional<std::string> at_c;
  std::optional<int> factors;

  auto* bs = app.add_subcommand("boundary-state", "coefficients of the boundary state in the L_{-n} basis");
  bs->add_option("--level", level, "level cutoff");
  bs->add_option("--at-c", at_c, "rational central charge instead of symbolic c");
  bs->add_option("--factors", factors, "N-factor finitized state instead of the full product");
  selftest(bs);

  bool symbolic = false;
  auto* amp = app.add_subcommand("amplitude", "symbolic rectangle amplitude and the eta identity");
  amp->add_option("--order", order, "qhat order");
  auto* sym = amp->add_flag("--symbolic", symbolic, "keep c symbolic (default)");
  amp->add_option("--at-c", at_c, "evaluate at a rational central charge")->excludes(sym);
  selftest(amp);

  int slits = 1;
  auto* pn = app.add_subcommand("pn", "P_N(q) series of the 2^N - 1 slit state");
  pn->add_option("--slits-exponent", slits, "N")->required();
  pn->add_option("--order", order, "q order");
  selftest(pn);

  auto* gl = app.add_subcommand("gluing-check", "verify the corner-corrected gluing condition");
  gl->add_option("--nmax", nmax, "largest mode index");
  gl->add_option("--level", level, "level cutoff");
  selftest(gl);

  bool check = false;
  std::optional<int> exponent;
  std::vector<double> z;
  auto* sm = app.add_subcommand("slitmap", "slit maps f_N and their asymptotics");
  sm->add_flag("--check", check, "decay-rate and round-trip checks");
  sm->add_option("--exponent", exponent, "N in f_N");
  sm->add_option("--z", z, "point RE IM")->expected(2);
  selftest(sm);

  std::optional<int> amp_order, glue_level, gtable, amatrix;
  bool compare = false;
  auto* bo = app.add_subcommand("boson", "free boson coherent boundary state");
  bo->add_option("--amplitude-order", amp_order, "qhat order of the amplitude");
  bo->add_option("--gluing-level", glue_level, "check a_m + a_{-m} annihilation through this level");
  bo->add_flag("--compare-virasoro", compare, "compare with the c = 1 Virasoro product state");
  bo->add_option("--level", level, "level for --compare-virasoro");
  selftest(bo);

  auto* mj = app.add_subcommand("majorana", "NS Majorana fermion boundary state");
  mj->add_option("--g-table", gtable, "exact G_mn for m, n <= cutoff");
  mj->add_option("--amatrix", amatrix, "A-matrix route at this truncation");
  mj->add_option("--amplitude-order", amp_order, "qhat order of the amplitude");
  mj->add_flag("--compare-virasoro", compare, "compare with the c = 1/2 Virasoro product state");
  mj->add_option("--level", level, "level for --compare-virasoro");
  selftest(mj);

  std::string p = "3";
  int nmin = 8;
  int lnmax = 24, kmax = 3, drop = 2;
  auto* lp = app.add_subcommand("loop", "Temperley-Lieb loop model overlaps");
  lp->add_option("--p", p, "loop parameter")->check(CLI::IsMember({"3", "4", "5", "inf"}));
  lp->add_option("--nmin", nmin, "smallest even N");
  lp->add_option("--nmax", lnmax, "largest N");
  lp->add_option("--kmax", kmax, "highest state index");
  lp->add_option("--drop-first", drop, "points dropped in excited-state fits");
  selftest(lp);

  int inmin = 2, inmax = 500, ikmax = 10;
  auto* is = app.add_subcommand("ising", "free/free transverse-field Ising chain overlaps");
  is->add_option("--nmin", inmin, "smallest N");
  is->add_option("--nmax", inmax, "largest N");
  is->add_option("--kmax", ikmax, "highest state index");
  is->add_option("--drop-first", drop, "points dropped in excited-state fits");
  selftest(is);

  std::string in, basis = "absolute";
  int fdrop = 0, windows = 3;
  auto* ft = app.add_subcommand("fit", "least-squares scaling fit of (N, y) CSV data");
  ft->add_option("--in", in, "input CSV (default stdin)");
  ft->add_option("--basis", basis, "absolute, ratio, or a comma list of N,logN,1,1/N,1/N^2,1/N^3");
  ft->add_option("--drop-first", fdrop, "smallest-N points dropped");
  ft->add_option("--windows", windows, "extra windows for the spread");
  selftest(ft);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const Limits lim = Limits::from_env();
    if (*bs) return run_boundary_state(o, lim, level, at_c, factors, out);
    if (*amp) return run_amplitude(o, lim, order, at_c, out);
    if (*pn) return run_pn(o, lim, slits, order, out);
    if (*gl) return run_gluing(o, lim, nmax, level, out);
    if (*sm) return run_slitmap(o, check, exponent, z, out);
    if (*bo) return run_boson(o, lim, amp_order, glue_level, compare ? std::optional<int>(level) : std::nullopt, out);
    if (*mj) return run_majorana(o, lim, gtable, amatrix, amp_order, compare ? std::optional<int>(level) : std::nullopt, out);
    if (*lp) return run_loop(o, lim, p, nmin, lnmax, kmax, drop, out);
    if (*is) return run_ising(o, lim, inmin, inmax, ikmax, drop, out);
    if (*ft) return run_fit(o, in, basis, fdrop, windows, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const StructuralError& e) {
    err << "structural error: " << e.what() << '\n';
    return kStructural;
  } catch (const NumericalAlarm& e) {
    err << "numerical alarm: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace rectcft::cli
