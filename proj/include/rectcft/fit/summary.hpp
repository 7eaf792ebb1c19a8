#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rectcft/fit/scaling_fit.hpp"
#include "rectcft/lattice/ising.hpp"
#include "rectcft/lattice/loop_spectrum.hpp"

namespace rectcft {

struct Estimate {
  double value = 0;
  double spread = 0;
};

/// a1 and alpha from the absolute fit of -log<B|0>_N; alpha = exp(-a2).
struct GroundFit {
  Estimate a1;
  Estimate alpha;
  FitResult fit;
};

inline GroundFit fit_ground_state(const std::vector<FitPoint>& log_overlaps, int drop_first = 0) {
  std::vector<FitPoint> y;
  for (const auto& p : log_overlaps) y.push_back({p.N, -p.y});
  GroundFit g;
  g.fit = fit(y, FitBasis::absolute(), drop_first);
  g.a1 = {g.fit.coefficient(FitTerm::LogN), g.fit.uncertainty(FitTerm::LogN)};
  const double alpha = std::exp(-g.fit.coefficient(FitTerm::One));
  g.alpha = {alpha, alpha * g.fit.uncertainty(FitTerm::One)};
  return g;
}

inline Estimate fit_excited_ratio(const std::vector<FitPoint>& log_k, const std::vector<FitPoint>& log_0,
                                  int drop_first = 2) {
  const auto e = extract_overlap(fit(ratio_points(log_k, log_0), FitBasis::ratio(), drop_first), OverlapMode::ratio);
  return {e.value, e.spread};
}

struct LoopSummary {
  std::string p;
  double central_charge = 0;
  Estimate a1, alpha, b1;
  double b2_max = 0;  // max <B|2>_N over N >= 10
  int sizes = 0;
};

inline LoopSummary summarize_loop(const std::vector<LoopRecord>& rows, const LoopWeight& w, int drop_excited = 2) {
  std::map<int, std::vector<FitPoint>> logs;
  LoopSummary s;
  s.p = w.label();
  s.central_charge = w.central_charge();
  for (const auto& r : rows) {
    if (r.k == 2 && r.N >= 10) s.b2_max = std::max(s.b2_max, r.overlap);
    if (r.overlap > 0) logs[r.k].push_back({static_cast<double>(r.N), std::log(r.overlap)});
  }
  s.sizes = static_cast<int>(logs[0].size());
  const GroundFit g = fit_ground_state(logs[0]);
  s.a1 = g.a1;
  s.alpha = g.alpha;
  if (logs.count(1)) s.b1 = fit_excited_ratio(logs[1], logs[0], drop_excited);
  return s;
}

struct IsingStateSummary {
  int k = 0;
  ExcitationSet excitation;
  std::string h;
  bool odd = false;
  Estimate overlap;  // odd: max over N of the reported overlap
  int points = 0;
};

struct IsingSummary {
  Estimate a1, alpha;
  std::vector<IsingStateSummary> states;
  double odd_max = 0;
  int nmax = 0;
};

/// State k is identified by its excitation set at the largest N; smaller N
/// contribute only where the k-th level carries that same set.
inline IsingSummary summarize_ising(const std::vector<OverlapRecord>& rows, int drop_excited = 2) {
  IsingSummary s;
  for (const auto& r : rows) s.nmax = std::max(s.nmax, r.N);
  std::map<int, ExcitationSet> label;
  for (const auto& r : rows)
    if (r.N == s.nmax) label[r.k] = r.excitation;
  std::map<int, std::vector<FitPoint>> logs;
  std::map<int, double> odd_max;
  for (const auto& r : rows) {
    if (r.excitation.size() % 2 == 1) {
      s.odd_max = std::max(s.odd_max, r.overlap);
      odd_max[r.k] = std::max(odd_max[r.k], r.overlap);
      continue;
    }
    auto it = label.find(r.k);
    if (it == label.end() || it->second != r.excitation || !(r.overlap > 0)) continue;
    logs[r.k].push_back({static_cast<double>(r.N), r.log_overlap});
  }
  const GroundFit g = fit_ground_state(logs[0]);
  s.a1 = g.a1;
  s.alpha = g.alpha;
  for (const auto& [k, exc] : label) {
    if (k == 0) continue;
    IsingStateSummary st;
    st.k = k;
    st.excitation = exc;
    st.h = h_label(exc);
    st.odd = exc.size() % 2 == 1;
    if (st.odd) {
      st.overlap = {odd_max[k], 0};
    } else {
      st.overlap = fit_excited_ratio(logs[k], logs[0], drop_excited);
      st.points = static_cast<int>(logs[k].size());
    }
    s.states.push_back(std::move(st));
  }
  return s;
}

}  // namespace rectcft
