#pragma once

// Empirical risk and its minimization over network-defined set classes:
// exact by exhaustive enumeration at enumerable budgets, heuristic search
// otherwise. The heuristic combines data-driven staircase-boundary
// initializations with single-weight coordinate-descent moves on the dyadic
// grid; the reported hypothesis is never worse than the best initialization.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsybnet/distributions.hpp"
#include "tsybnet/enumerate.hpp"
#include "tsybnet/set_calculus.hpp"

namespace tsybnet {

struct Hypothesis {
  std::shared_ptr<const Network> net;  // null for analytic probe sets
  MemberFn member;
  std::string provenance;

  // present when the set is {x : iota x_j <= gamma(x_-j)} on the whole cube
  struct BoundaryForm {
    int j = 0;
    int iota = +1;
    BoundaryFn gamma;
  };
  std::optional<BoundaryForm> boundary;
};

inline Hypothesis network_hypothesis(Network net, std::string provenance = "network") {
  auto shared = std::make_shared<Network>(std::move(net));
  Hypothesis h;
  h.net = shared;
  h.member = [shared](std::span<const double> x) { return membership(*shared, x); };
  h.provenance = std::move(provenance);
  return h;
}

inline Hypothesis analytic_hypothesis(MemberFn member, std::string provenance = "analytic") {
  Hypothesis h;
  h.member = std::move(member);
  h.provenance = std::move(provenance);
  return h;
}

// exact misclassification fraction, a multiple of 1/n
inline double empirical_risk(const Hypothesis& g, const Dataset& data) {
  if (data.size() == 0) throw error("empirical risk of an empty dataset");
  std::int64_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const bool in = g.member(data.point(i));
    wrong += (data.labels[i] != (in ? 1 : 0));
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

struct ErmReport {
  Hypothesis chosen;
  double risk = 1.0;
  std::string mode;  // "exact" | "heuristic"
  std::uint64_t candidates = 0;
  std::uint64_t seed = 0;
  std::vector<double> trace;  // best-so-far risk after each candidate
};

// Minimizer over the enumerated class; ties break to the first candidate in
// canonical enumeration order.
inline ErmReport erm_exact(const ClassBudget& budget, const Dataset& data,
                           std::uint64_t limit = 2000000) {
  if (data.size() == 0) throw error("erm_exact on an empty dataset");
  if (count_bound(budget) > BigInt(limit))
    throw infeasible_budget_error(
        "exact ERM refused: class bound " + count_bound(budget).str() + " exceeds limit " +
            std::to_string(limit) + "; use the heuristic mode",
        count_bound(budget).str());

  ErmReport rep;
  rep.mode = "exact";
  double best = std::numeric_limits<double>::infinity();
  Network best_net;
  std::vector<double> cur, nxt, out;
  const std::int64_t n = static_cast<std::int64_t>(data.size());
  enumerate_class(budget, limit, [&](const Network& net) {
    ++rep.candidates;
    std::int64_t wrong = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      realize_into(net, data.point(i), cur, nxt, out);
      const bool in = std::abs(out[0] - 1.0) <= kMembershipTol;
      wrong += (data.labels[i] != (in ? 1 : 0));
    }
    const double risk = static_cast<double>(wrong) / static_cast<double>(n);
    if (risk < best) {
      best = risk;
      best_net = net;
    }
  });
  rep.risk = best;
  rep.chosen = network_hypothesis(std::move(best_net), "erm_exact");
  return rep;
}

// ---------------------------------------------------------------------------
// staircase boundary hypotheses (the structured initializations)

struct StaircaseSpec {
  int j = 0;
  int iota = +1;
  std::vector<double> edges;   // m+1 dyadic cell edges on the remaining axis
  std::vector<double> values;  // m dyadic thresholds in the oriented coordinate
};

// The staircase realized as a piecewise-linear boundary with ramps of width
// 2^-ramp_c at each cell edge; slopes stay dyadic because ramp widths are
// powers of two.
inline PiecewiseLinear staircase_profile(const StaircaseSpec& sc, int ramp_c) {
  const double delta = std::ldexp(1.0, -ramp_c);
  PiecewiseLinear pl;
  const std::size_t m = sc.values.size();
  pl.t.push_back(0.0);
  pl.v.push_back(sc.values[0]);
  for (std::size_t k = 1; k < m; ++k) {
    if (sc.values[k] == sc.values[k - 1]) continue;  // no ramp needed
    const double t = sc.edges[k];
    pl.t.push_back(t - delta);
    pl.v.push_back(sc.values[k - 1]);
    pl.t.push_back(t);
    pl.v.push_back(sc.values[k]);
  }
  pl.t.push_back(1.0);
  pl.v.push_back(sc.values[m - 1]);
  return pl;
}

// d = 2 only: the set {x : iota x_j <= g(x_other)} with g the ramped staircase
inline Hypothesis staircase_hypothesis(const StaircaseSpec& sc, int d, int ramp_c) {
  if (d != 2) throw error("staircase hypotheses are built for d = 2");
  PiecewiseLinear pl = staircase_profile(sc, ramp_c);
  pl.validate();
  auto base = pw_linear_boundary_net(pl);
  if (base.snap_error != 0.0) throw error("staircase profile failed to realize exactly");
  Network net = boundary_side_gate_net(base.net, sc.j, sc.iota, d);

  auto shared = std::make_shared<Network>(std::move(net));
  auto profile = std::make_shared<PiecewiseLinear>(std::move(pl));
  const int j = sc.j, iota = sc.iota;
  Hypothesis h;
  h.net = shared;
  h.member = [profile, j, iota](std::span<const double> x) {
    return iota * x[static_cast<std::size_t>(j)] <= profile->eval(x[static_cast<std::size_t>(1 - j)]);
  };
  h.provenance = "staircase(j=" + std::to_string(j) + ",iota=" + std::to_string(iota) +
                 ",cells=" + std::to_string(sc.values.size()) + ")";
  Hypothesis::BoundaryForm bf;
  bf.j = j;
  bf.iota = iota;
  bf.gamma = [profile](std::span<const double> y) { return profile->eval(y[0]); };
  h.boundary = bf;
  return h;
}

namespace detail {

// best dyadic threshold for one cell: scan the sorted points, then snap the
// optimal interval to the value grid with an exact recount
struct CellFit {
  double value = 0.0;
  std::int64_t risk = 0;  // misclassified count within the cell
};

inline CellFit fit_cell_threshold(std::vector<std::pair<double, int>>& pts, double ulo,
                                  double uhi, int value_grid_c, double fallback) {
  CellFit fit;
  if (pts.empty()) {
    fit.value = fallback;
    return fit;
  }
  std::sort(pts.begin(), pts.end());
  const std::int64_t total = static_cast<std::int64_t>(pts.size());
  std::int64_t ones = 0;
  for (const auto& p : pts) ones += p.second;

  // prefix[i] = number of labels 1 among the first i points
  std::vector<std::int64_t> prefix(pts.size() + 1, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) prefix[i + 1] = prefix[i] + pts[i].second;

  auto risk_with_first_k_inside = [&](std::int64_t k) {
    // inside points labelled 0 are wrong, outside points labelled 1 are wrong
    const std::int64_t in_zeros = k - prefix[static_cast<std::size_t>(k)];
    const std::int64_t out_ones = ones - prefix[static_cast<std::size_t>(k)];
    return in_zeros + out_ones;
  };
  auto risk_at_value = [&](double v) {
    const auto it = std::upper_bound(pts.begin(), pts.end(), v,
                                     [](double a, const auto& p) { return a < p.first; });
    return risk_with_first_k_inside(it - pts.begin());
  };

  // best k over interval boundaries (k points inside)
  std::int64_t best_k = 0, best_risk = risk_with_first_k_inside(0);
  for (std::int64_t k = 1; k <= total; ++k) {
    if (k < total && pts[static_cast<std::size_t>(k)].first == pts[static_cast<std::size_t>(k - 1)].first)
      continue;  // same u, not a valid cut
    const std::int64_t rk = risk_with_first_k_inside(k);
    if (rk < best_risk) {
      best_risk = rk;
      best_k = k;
    }
  }

  // the optimal v lives in [a, b): a = last inside u (or ulo), b = next u
  const double a = best_k == 0 ? ulo : pts[static_cast<std::size_t>(best_k - 1)].first;
  const double b = best_k == static_cast<std::int64_t>(total)
                       ? uhi
                       : pts[static_cast<std::size_t>(best_k)].first;
  const double scale = std::ldexp(1.0, value_grid_c);
  double cand1 = std::ceil(a * scale) / scale;
  double cand2 = std::floor(b * scale) / scale;
  cand1 = std::clamp(cand1, ulo, uhi);
  cand2 = std::clamp(cand2, ulo, uhi);
  const std::int64_t r1 = risk_at_value(cand1);
  const std::int64_t r2 = risk_at_value(cand2);
  if (r1 <= r2) {
    fit.value = cand1;
    fit.risk = r1;
  } else {
    fit.value = cand2;
    fit.risk = r2;
  }
  return fit;
}

}  // namespace detail

// exact per-cell threshold ERM for one orientation and resolution (d = 2)
inline StaircaseSpec fit_staircase(const Dataset& data, int j, int iota, int cells,
                                   int value_grid_c, int edge_grid_c = 13) {
  if (data.d != 2) throw error("fit_staircase handles d = 2");
  if (cells < 1 || cells > (1 << edge_grid_c)) throw error("bad staircase resolution");
  StaircaseSpec sc;
  sc.j = j;
  sc.iota = iota;
  const double scale = std::ldexp(1.0, edge_grid_c);
  sc.edges.resize(static_cast<std::size_t>(cells) + 1);
  for (int k = 0; k <= cells; ++k)
    sc.edges[static_cast<std::size_t>(k)] =
        std::nearbyint(static_cast<double>(k) / cells * scale) / scale;
  sc.edges.front() = 0.0;
  sc.edges.back() = 1.0;

  std::vector<std::vector<std::pair<double, int>>> buckets(static_cast<std::size_t>(cells));
  const int other = 1 - j;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.point(i);
    const double z = x[static_cast<std::size_t>(other)];
    int cell = static_cast<int>(z * cells);
    cell = std::clamp(cell, 0, cells - 1);
    // edge snapping can shift bucket boundaries by up to 2^-edge_grid_c
    while (cell > 0 && z < sc.edges[static_cast<std::size_t>(cell)]) --cell;
    while (cell + 1 < cells && z >= sc.edges[static_cast<std::size_t>(cell + 1)]) ++cell;
    buckets[static_cast<std::size_t>(cell)].emplace_back(
        iota * x[static_cast<std::size_t>(j)], data.labels[i]);
  }

  const double ulo = iota > 0 ? 0.0 : -1.0;
  const double uhi = iota > 0 ? 1.0 : 0.0;
  sc.values.resize(static_cast<std::size_t>(cells));
  double fallback = ulo;  // empty leading cells default to the empty set
  for (int k = 0; k < cells; ++k) {
    const auto fit = detail::fit_cell_threshold(buckets[static_cast<std::size_t>(k)], ulo, uhi,
                                                value_grid_c, fallback);
    sc.values[static_cast<std::size_t>(k)] = fit.value;
    fallback = fit.value;
  }
  return sc;
}

// ---------------------------------------------------------------------------
// heuristic ERM

struct HeuristicConfig {
  std::uint64_t seed = 1;
  int restarts = 4;
  int iters = 200;           // coordinate-descent proposals per restart
  double anneal_temp = 0.0;  // > 0 accepts worsening moves with prob exp(-n delta / T)
  bool structured = true;    // data-driven staircase initializations (d = 2)
  std::vector<int> cell_candidates;  // staircase resolutions; empty = {4, 8, 16}
  int value_grid_c = 13;
  int ramp_c = 12;
};

namespace detail {

inline Network random_budget_net(const ClassBudget& b, SplitRng& rng) {
  const int L = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(std::min(b.L0, b.s0)) + 1));
  std::vector<int> widths;
  for (int i = 0; i < L; ++i)
    widths.push_back(1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(b.s0))));
  Network net = detail::make_skeleton(b.d, widths, b.c);
  const ArchSlots arch(b.d, widths);
  const WeightGrid grid(b.c);
  const auto vals = grid.values();
  const int nz = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(b.s0)));
  for (int i = 0; i < nz; ++i) {
    const int slot = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(arch.total)));
    detail::set_slot(net, arch, slot, vals[rng.next_below(vals.size())]);
  }
  return net;
}

inline double net_risk(const Network& net, const Dataset& data, std::vector<double>& c1,
                       std::vector<double>& c2, std::vector<double>& c3) {
  std::int64_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    realize_into(net, data.point(i), c1, c2, c3);
    const bool in = std::abs(c3[0] - 1.0) <= kMembershipTol;
    wrong += (data.labels[i] != (in ? 1 : 0));
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

}  // namespace detail

// Multi-restart search: staircase initializations fitted from the data (kept
// only when the realized net fits the budget) plus random restarts refined by
// single-weight moves on the grid. Deterministic per seed; the trace of
// best-so-far risks is non-increasing by construction.
inline ErmReport erm_heuristic(const ClassBudget& budget, const Dataset& data,
                               const HeuristicConfig& cfg) {
  budget.validate();
  if (data.size() == 0) throw error("erm_heuristic on an empty dataset");
  ErmReport rep;
  rep.mode = "heuristic";
  rep.seed = cfg.seed;

  double best = std::numeric_limits<double>::infinity();
  Hypothesis best_hyp;
  auto consider = [&](Hypothesis h, double risk) {
    ++rep.candidates;
    if (risk < best) {
      best = risk;
      best_hyp = std::move(h);
    }
    rep.trace.push_back(best);
  };

  // structured staircase initializations
  if (cfg.structured && data.d == 2) {
    std::vector<int> cells = cfg.cell_candidates.empty() ? std::vector<int>{4, 8, 16}
                                                         : cfg.cell_candidates;
    for (int j : {0, 1})
      for (int iota : {+1, -1})
        for (int m : cells) {
          if (m < 1) continue;
          StaircaseSpec sc = fit_staircase(data, j, iota, m, std::min(cfg.value_grid_c, budget.c));
          Hypothesis h;
          try {
            h = staircase_hypothesis(sc, data.d, std::min(cfg.ramp_c, budget.c));
          } catch (const error&) {
            continue;
          }
          const Network& net = *h.net;
          if (net.layer_count() > budget.L0 || sparsity(net) > budget.s0 ||
              net.grid_c > budget.c)
            continue;  // outside the class at this budget
          consider(h, empirical_risk(h, data));
        }
  }

  // random restarts with coordinate descent over single weights
  SplitRng root(cfg.seed);
  std::vector<double> c1, c2, c3;
  const double n = static_cast<double>(data.size());
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    SplitRng rng = root.split(0xE0, static_cast<std::uint64_t>(restart));
    Network net = detail::random_budget_net(budget, rng);
    const detail::ArchSlots arch(budget.d, [&] {
      std::vector<int> w;
      for (const Layer& l : net.hidden) w.push_back(l.W.rows);
      return w;
    }());
    const WeightGrid grid(budget.c);
    const auto vals = grid.values();

    double cur = detail::net_risk(net, data, c1, c2, c3);
    consider(network_hypothesis(net, "coordinate_descent"), cur);

    for (int it = 0; it < cfg.iters; ++it) {
      const int slot = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(arch.total)));
      const double old = detail::get_slot(net, arch, slot);
      double prop = vals[rng.next_below(vals.size())];
      if (prop == old) continue;
      detail::set_slot(net, arch, slot, prop);
      if (sparsity(net) > budget.s0) {
        detail::set_slot(net, arch, slot, old);
        continue;
      }
      const double risk = detail::net_risk(net, data, c1, c2, c3);
      bool accept = risk < cur;
      if (!accept && cfg.anneal_temp > 0.0)
        accept = rng.next_unit() < std::exp(-(risk - cur) * n / cfg.anneal_temp);
      if (accept) {
        cur = risk;
        if (cur < best) consider(network_hypothesis(net, "coordinate_descent"), cur);
      } else {
        detail::set_slot(net, arch, slot, old);
      }
    }
  }

  if (!best_hyp.member) {
    // nothing fit the budget: fall back to the empty set (boundary form at
    // the domain floor keeps downstream quadratures on the fast path)
    best_hyp = network_hypothesis(affine_net(Mat(1, budget.d), 0), "empty_set");
    Hypothesis::BoundaryForm bf;
    bf.j = 0;
    bf.iota = +1;
    bf.gamma = [](std::span<const double>) { return 0.0; };
    best_hyp.boundary = bf;
    best = empirical_risk(best_hyp, data);
    rep.trace.push_back(best);
  }
  rep.risk = best;
  rep.chosen = std::move(best_hyp);
  return rep;
}

// ---------------------------------------------------------------------------
// excess risk against the distribution's Bayes set

struct ExcessRisk {
  double d_fq = 0.0;
  double d_delta = 0.0;
};

inline ExcessRisk excess_risk(const TsybakovDistribution& q, const Hypothesis& g,
                              const QuadratureSpec& spec) {
  ExcessRisk out;
  if (g.boundary && g.boundary->j == q.j && g.boundary->iota == q.iota && !q.density) {
    out.d_fq = d_fq_columns(q, q.gamma_low, g.boundary->gamma, spec.resolution);
    out.d_delta = d_delta_columns(q, q.gamma_low, g.boundary->gamma, spec.resolution);
    return out;
  }
  MemberFn bayes = [&q](std::span<const double> x) { return bayes_membership(q, x); };
  out.d_fq = d_fq(q, bayes, g.member, spec).value;
  out.d_delta = d_delta(q, bayes, g.member, spec).value;
  return out;
}

}  // namespace tsybnet
