#pragma once

#include <sstream>
#include <type_traits>
#include <string>
#include <vector>

#include <json.hpp>

#include "rectcft/algebra/cpoly.hpp"
#include "rectcft/algebra/rational.hpp"
#include "rectcft/algebra/series.hpp"
#include "rectcft/fit/scaling_fit.hpp"
#include "rectcft/virasoro/partition.hpp"

namespace rectcft::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return to_string(r); }

/// Coefficients of c^0, c^1, ... as "num/den" strings.
inline Json to_json(const CPoly& p) {
  Json a = Json::array();
  for (const auto& x : p.coefficients()) a.push_back(to_string(x));
  return a;
}

template <class R>
Json series_json(const Series<R>& s, const Prefactor& pre = {}) {
  Json j;
  j["variable"] = variable_name(s.variable());
  j["prefactor"] = {{"c_coefficient", to_string(pre.c_coefficient)}, {"constant", to_string(pre.constant)}};
  j["offset"] = s.offset();
  j["order"] = s.order();
  Json c = Json::array();
  for (int k = s.offset(); k <= s.order(); ++k) c.push_back(to_json(s[k]));
  j["coefficients"] = c;
  return j;
}

inline Json fit_json(const FitResult& f) {
  Json j;
  Json terms = Json::object();
  for (int t = 0; t < kFitTerms; ++t) {
    const auto ft = static_cast<FitTerm>(t);
    if (!f.a[static_cast<std::size_t>(t)]) continue;
    terms[term_name(ft)] = {{"value", f.coefficient(ft)}, {"spread", f.uncertainty(ft)}};
  }
  j["coefficients"] = terms;
  j["residual_norm"] = f.residual_norm;
  j["points"] = f.points;
  j["windows"] = f.windows;
  j["nmin"] = f.nmin;
  j["nmax"] = f.nmax;
  return j;
}

namespace detail {

inline bool needs_parens(const std::string& s) {
  return s.find(' ') != std::string::npos || s.find('/') != std::string::npos;
}

inline std::string plain_coefficient(const Rational& r) { return r.get_str(); }
inline std::string plain_coefficient(const CPoly& p) { return p.to_string(); }

}  // namespace detail

/// "1 + q + 2q^2 - 1/2q^3 + ..." with c-polynomial coefficients parenthesized.
template <class R>
std::string plain_series(const Series<R>& s) {
  std::ostringstream out;
  bool first = true;
  const std::string var = variable_name(s.variable());
  for (int k = s.offset(); k <= s.order(); ++k) {
    const R a = s[k];
    if (is_zero(a)) continue;
    std::string coeff = detail::plain_coefficient(a);
    bool negative = false;
    if constexpr (std::is_same_v<R, Rational>) {
      negative = sgn(a) < 0;
      if (negative) coeff = Rational(-a).get_str();
    }
    if (!first) out << (negative ? " - " : " + ");
    else if (negative) out << "-";
    first = false;
    const bool unit = coeff == "1";
    if (k == 0) {
      out << (detail::needs_parens(coeff) && !std::is_same_v<R, Rational> ? "(" + coeff + ")" : coeff);
      continue;
    }
    if (!unit) out << (detail::needs_parens(coeff) && !std::is_same_v<R, Rational> ? "(" + coeff + ")" : coeff);
    out << var;
    if (k != 1) out << "^" << k;
  }
  if (first) out << "0";
  out << " + O(" << var << "^" << s.order() + 1 << ")";
  return out.str();
}

inline Json partition_json(const Partition& p) { return Json(p); }

}  // namespace rectcft::io
