#pragma once

// Explicit networks whose preimage of 1 approximates a Bayes set built from
// boundary fragments. Sub-constructions: dyadic snap grid, Heaviside net,
// box gate nets with shared doubling chains, clipped boundary nets, fragment
// indicator nets and the summed approximation net. Boundary approximators
// are pluggable behind a sup-norm contract; an exact piecewise-linear
// realizer and a grid-interpolation net are provided.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsybnet/compose.hpp"
#include "tsybnet/network.hpp"
#include "tsybnet/rng.hpp"

namespace tsybnet {

inline constexpr double kMembershipTol = 1e-9;

// true iff the scalar-output net realizes 1 at x (within tolerance)
inline bool membership(const Network& net, std::span<const double> x) {
  return std::abs(realize1(net, x) - 1.0) <= kMembershipTol;
}

// ---------------------------------------------------------------------------
// boundary fragment sets

struct Box {
  std::vector<double> lo, hi;  // product of [lo_i, hi_i]

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
  double volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
    return v;
  }
};

using BoundaryFn = std::function<double(std::span<const double>)>;

// one fragment: the part of the set inside `box` on the iota-side of the
// graph of gamma along coordinate j
struct Fragment {
  int j = 0;        // 0-based coordinate index
  int iota = +1;    // +1 or -1
  Box box;
  BoundaryFn gamma;  // on [0,1]^{d-1}, arguments are x with coordinate j removed
};

struct BoundaryFragmentSet {
  int d = 2;
  std::vector<Fragment> fragments;
  int r = 0;          // max fragment count
  double eps2 = 0.0;  // min extent along j_nu over fragments

  void validate() const {
    if (d < 2) throw error("boundary fragment sets require dimension >= 2");
    if (static_cast<int>(fragments.size()) > r)
      throw error("fragment count exceeds declared maximum r");
    for (const Fragment& f : fragments) {
      if (f.box.dim() != d) throw error("fragment box dimension mismatch");
      if (f.j < 0 || f.j >= d) throw error("fragment coordinate out of range");
      if (f.iota != 1 && f.iota != -1) throw error("fragment sign must be +-1");
      if (f.box.hi[static_cast<std::size_t>(f.j)] - f.box.lo[static_cast<std::size_t>(f.j)] <
          eps2 - 1e-15)
        throw error("fragment extent along its coordinate is below eps2");
    }
    // pairwise Lebesgue-null box intersections
    for (std::size_t i = 0; i < fragments.size(); ++i)
      for (std::size_t k = i + 1; k < fragments.size(); ++k) {
        double inter = 1.0;
        for (int ax = 0; ax < d; ++ax) {
          const double lo = std::max(fragments[i].box.lo[static_cast<std::size_t>(ax)],
                                     fragments[k].box.lo[static_cast<std::size_t>(ax)]);
          const double hi = std::min(fragments[i].box.hi[static_cast<std::size_t>(ax)],
                                     fragments[k].box.hi[static_cast<std::size_t>(ax)]);
          inter *= std::max(0.0, hi - lo);
        }
        if (inter > 0.0) throw error("fragment boxes overlap with positive measure");
      }
  }

  // exact membership in the described set
  bool contains(std::span<const double> x) const {
    std::vector<double> rest(static_cast<std::size_t>(d - 1));
    for (const Fragment& f : fragments) {
      if (!f.box.contains(x)) continue;
      int k = 0;
      for (int i = 0; i < d; ++i)
        if (i != f.j) rest[static_cast<std::size_t>(k++)] = x[static_cast<std::size_t>(i)];
      if (f.iota * x[static_cast<std::size_t>(f.j)] <= f.gamma(rest)) return true;
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// elementary nets of the construction

// scalar input; 0 for x <= -1, x+1 on (-1,0), 1 for x >= 0
inline Network heaviside_net(int grid_c = 0) {
  Layer l;
  l.W = Mat(2, 1);
  l.W.at(0, 0) = 1.0;
  l.W.at(1, 0) = 1.0;
  l.b = {-1.0, 0.0};  // s(x+1), s(x)
  Mat f(1, 2);
  f.at(0, 0) = 1.0;
  f.at(0, 1) = -1.0;
  return Network(1, {std::move(l)}, std::move(f), grid_c);
}

// d-dim input; 0 outside [a - h/2, b + h/2], 1 on [a, b], linear ramps between
inline Network box_gate_net(double a, double b, double h, int coord, int input_dim) {
  const Dyadic hd = dyadic_floor(h);
  if (hd.value() != h) throw error("box gate step must be a power of two");
  const int ch = hd.c;
  const int grid = ch + 1;  // shifts a - h/2 etc. live on the half-step grid
  if (!is_dyadic(a, grid) || !is_dyadic(b, grid))
    throw error("box gate endpoints must lie on the dyadic grid");
  if (!(a < b)) throw error("box gate requires a < b");

  Layer l;
  l.W = Mat(4, input_dim);
  for (int r = 0; r < 4; ++r) l.W.at(r, coord) = 1.0;
  l.b = {a - h / 2, a, b, b + h / 2};
  Mat f(1, 4);
  f.at(0, 0) = 1.0;
  f.at(0, 1) = -1.0;
  f.at(0, 2) = -1.0;
  f.at(0, 3) = 1.0;
  Network core(input_dim, {std::move(l)}, std::move(f), grid);

  // scale by 2 h^{-1} = 2^{ch+1} via a doubling chain
  return concatenate(pow2_scaling_net(ch + 1, grid), core);
}

// base + h where base >= mid + h, base - h where base <= mid - h,
// 2 base - mid between; sup deviation from base is h
inline Network clip_net(const Network& base, double midpoint, double h) {
  if (base.output_dim() != 1) throw error("clip_net requires a scalar-output base");
  const Dyadic hd = dyadic_floor(h);
  if (hd.value() != h) throw error("clip step must be a power of two");
  int grid = std::max(base.grid_c, hd.c);
  while (!is_dyadic(midpoint, grid)) {
    ++grid;
    if (grid > 62) throw error("clip midpoint is not dyadic");
  }
  if (std::abs(midpoint - h) > 1.0 || std::abs(midpoint + h) > 1.0 || std::abs(midpoint) > 1.0)
    throw error("clip shifts exceed the admissible weight range");

  std::vector<Layer> layers = base.hidden;
  Layer top;
  top.W = Mat(4, base.final_W.cols);
  for (int c = 0; c < base.final_W.cols; ++c) {
    top.W.at(0, c) = base.final_W.at(0, c);
    top.W.at(1, c) = -base.final_W.at(0, c);
  }
  // s(base - (mid - h)), s(-base + mid + h), and a sign-split constant pair
  // s(mid) - s(-mid) = mid valid for either sign of the midpoint
  top.b = {midpoint - h, -(midpoint + h), -midpoint, midpoint};
  layers.push_back(std::move(top));
  Mat f(1, 4);
  f.at(0, 0) = 1.0;
  f.at(0, 1) = -1.0;
  f.at(0, 2) = 1.0;
  f.at(0, 3) = -1.0;
  return Network(base.input_dim, std::move(layers), std::move(f), grid);
}

// d-dim input, d-dim output; coordinate j becomes iota x_j - gamma_hat(x_-j),
// all other coordinates pass through
inline Network boundary_shift_net(const Network& approx, int j, int iota, int d) {
  if (approx.input_dim != d - 1)
    throw error("boundary_shift_net: approximator must consume d-1 coordinates");
  if (approx.output_dim() != 1)
    throw error("boundary_shift_net: approximator must be scalar-valued");

  std::vector<int> rest;
  for (int i = 0; i < d; ++i)
    if (i != j) rest.push_back(i);
  const Network gam = concatenate(approx, selector_net(rest, d, approx.grid_c));
  const Network pass = identity_net(d, approx.grid_c);
  const Network par = parallelize(pass, gam);  // outputs (x_1..x_d, gamma_hat)

  Mat C(d, d + 1);
  for (int i = 0; i < d; ++i) {
    if (i == j) {
      C.at(i, i) = static_cast<double>(iota);
      C.at(i, d) = -1.0;
    } else {
      C.at(i, i) = 1.0;
    }
  }
  return concatenate(affine_net(std::move(C), approx.grid_c), par);
}

// scalar gate that is 1 exactly when iota x_j <= gamma_hat(x_-j)
inline Network boundary_side_gate_net(const Network& approx, int j, int iota, int d) {
  const Network shifted = boundary_shift_net(approx, j, iota, d);
  Mat neg(1, d);
  neg.at(0, j) = -1.0;  // feed gamma_hat - iota x_j into the Heaviside
  const Network pick = concatenate(affine_net(std::move(neg), shifted.grid_c), shifted);
  return concatenate(heaviside_net(shifted.grid_c), pick);
}

// s(sum of d box gates + boundary gate - d); 1 exactly on the snapped box on
// the correct side of the approximate boundary, in [0,1) otherwise
inline Network fragment_indicator_net(const std::vector<Network>& gates,
                                      const Network& boundary_gate, int d) {
  if (static_cast<int>(gates.size()) != d)
    throw error("fragment_indicator_net expects d box gates");
  int grid = boundary_gate.grid_c;
  for (const Network& g : gates) grid = std::max(grid, g.grid_c);

  std::vector<Network> branches = gates;
  branches.push_back(boundary_gate);
  branches.push_back(constant_net(static_cast<double>(d), d, std::max(grid, 2)));
  const Network par = parallelize_all(branches);

  Mat row(1, d + 2);
  for (int i = 0; i < d; ++i) row.at(0, i) = 1.0;
  row.at(0, d) = 1.0;
  row.at(0, d + 1) = -1.0;
  Network sum = concatenate(affine_net(std::move(row), par.grid_c), par);

  // final ReLU: one more unit on top
  std::vector<Layer> layers = sum.hidden;
  Layer top;
  top.W = Mat(1, sum.final_W.cols);
  for (int c = 0; c < sum.final_W.cols; ++c) top.W.at(0, c) = sum.final_W.at(0, c);
  top.b = {0.0};
  layers.push_back(std::move(top));
  Mat f(1, 1);
  f.at(0, 0) = 1.0;
  return Network(d, std::move(layers), std::move(f), sum.grid_c);
}

// ---------------------------------------------------------------------------
// boundary approximators

// piecewise-linear function on [0,1]: nodes (t_i, v_i), t_0 = 0 < ... < t_K = 1
struct PiecewiseLinear {
  std::vector<double> t, v;

  void validate() const {
    if (t.size() != v.size() || t.size() < 2) throw error("piecewise-linear spec needs >= 2 nodes");
    if (t.front() != 0.0 || t.back() != 1.0)
      throw error("piecewise-linear spec must span [0,1]");
    for (std::size_t i = 1; i < t.size(); ++i)
      if (!(t[i] > t[i - 1])) throw error("piecewise-linear breakpoints must increase");
  }

  double eval(double x) const {
    if (x <= t.front()) return v.front();
    if (x >= t.back()) return v.back();
    const std::size_t i = static_cast<std::size_t>(
        std::upper_bound(t.begin() + 1, t.end(), x) - t.begin());
    const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return v[i - 1] + w * (v[i] - v[i - 1]);
  }
};

struct PwLinearNetResult {
  Network net;
  double snap_error = 0.0;  // sup |gamma - snapped gamma| when snapping occurred
};

namespace detail {

// gamma(x) = v0 + sum_i dm_i s(x - t_i) with dm the slope increments. Large
// magnitudes are factored through one shared doubling chain: layer 2 forms
// T = 2^-M gamma as a sign-split pair and M doubling layers restore the
// scale, so all weights stay dyadic with |w| <= 1.
inline Network pw_linear_realize(const std::vector<double>& t, const std::vector<double>& v,
                                 int grid_c) {
  const std::size_t K = t.size() - 1;  // segment count
  std::vector<double> dm(K);           // slope increments at t_0..t_{K-1}
  double prev_slope = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    const double slope = (v[i + 1] - v[i]) / (t[i + 1] - t[i]);
    dm[i] = slope - prev_slope;
    prev_slope = slope;
  }

  if (std::abs(v[0]) > 1.0)
    throw error("piecewise-linear boundary values must stay within [-1, 1]");
  double maxmag = 0.0;
  for (double m : dm) maxmag = std::max(maxmag, std::abs(m));
  int M = 0;
  while (std::ldexp(1.0, M) < maxmag) ++M;

  // layer 1: units s(x - t_i) plus a constant-1 unit
  Layer l1;
  l1.W = Mat(static_cast<int>(K) + 1, 1);
  l1.b.assign(K + 1, 0.0);
  for (std::size_t i = 0; i < K; ++i) {
    l1.W.at(static_cast<int>(i), 0) = 1.0;
    l1.b[i] = t[i];
  }
  l1.b[K] = -1.0;  // s(0 x + 1) = 1

  int net_grid = grid_c;
  auto track_grid = [&net_grid](double w) {
    const int c = min_dyadic_exponent(w);
    if (c < 0) throw error("piecewise-linear realization produced a non-dyadic weight");
    net_grid = std::max(net_grid, c);
  };
  for (double tv : t) track_grid(tv);
  track_grid(v[0]);

  if (M == 0) {
    // T = v0 + sum dm_i u_i fits directly: (T+, T-) and final (1, -1)
    Layer l2;
    l2.W = Mat(2, static_cast<int>(K) + 1);
    for (std::size_t i = 0; i < K; ++i) {
      track_grid(dm[i]);
      l2.W.at(0, static_cast<int>(i)) = dm[i];
      l2.W.at(1, static_cast<int>(i)) = -dm[i];
    }
    l2.W.at(0, static_cast<int>(K)) = v[0];
    l2.W.at(1, static_cast<int>(K)) = -v[0];
    l2.b = {0.0, 0.0};
    std::vector<Layer> layers{std::move(l1), std::move(l2)};
    Mat f(1, 2);
    f.at(0, 0) = 1.0;
    f.at(0, 1) = -1.0;
    return Network(1, std::move(layers), std::move(f), net_grid);
  }

  // width 5: (T+, T+, T-, T-, const) with T = 2^-M (gamma - v0); the constant
  // rides along unscaled and the final layer restores gamma = 2^M T + v0
  Layer l2;
  l2.W = Mat(5, static_cast<int>(K) + 1);
  for (std::size_t i = 0; i < K; ++i) {
    const double w = std::ldexp(dm[i], -M);
    track_grid(w);
    l2.W.at(0, static_cast<int>(i)) = w;
    l2.W.at(1, static_cast<int>(i)) = w;
    l2.W.at(2, static_cast<int>(i)) = -w;
    l2.W.at(3, static_cast<int>(i)) = -w;
  }
  l2.W.at(4, static_cast<int>(K)) = 1.0;
  l2.b = {0.0, 0.0, 0.0, 0.0, 0.0};

  std::vector<Layer> layers{std::move(l1), std::move(l2)};
  for (int s = 0; s < M; ++s) {
    Layer l;
    l.W = Mat(5, 5);
    l.W.at(0, 0) = l.W.at(0, 1) = 1.0;
    l.W.at(1, 0) = l.W.at(1, 1) = 1.0;
    l.W.at(2, 2) = l.W.at(2, 3) = 1.0;
    l.W.at(3, 2) = l.W.at(3, 3) = 1.0;
    l.W.at(4, 4) = 1.0;
    l.b = {0.0, 0.0, 0.0, 0.0, 0.0};
    layers.push_back(std::move(l));
  }

  Mat f(1, 5);
  f.at(0, 0) = 1.0;   // 2^M T+
  f.at(0, 2) = -1.0;  // 2^M T-
  f.at(0, 4) = v[0];
  return Network(1, std::move(layers), std::move(f), net_grid);
}

}  // namespace detail

// Exact ReLU realization of a piecewise-linear boundary (d-1 = 1). Specs
// whose nodes and slopes are dyadic realize exactly; anything else is
// resampled onto a uniform dyadic grid and the sup snap error reported.
inline PwLinearNetResult pw_linear_boundary_net(const PiecewiseLinear& spec,
                                                int resample_grid_c = 10) {
  spec.validate();
  bool exact = true;
  for (std::size_t i = 0; i < spec.t.size() && exact; ++i)
    exact = min_dyadic_exponent(spec.t[i], 48) >= 0 && min_dyadic_exponent(spec.v[i], 48) >= 0;
  for (std::size_t i = 0; i + 1 < spec.t.size() && exact; ++i)
    exact =
        min_dyadic_exponent((spec.v[i + 1] - spec.v[i]) / (spec.t[i + 1] - spec.t[i]), 48) >= 0;

  if (exact) {
    Network net = detail::pw_linear_realize(spec.t, spec.v, 0);
    return {std::move(net), 0.0};
  }

  const int cg = resample_grid_c;
  const int cv = cg + 10;
  PiecewiseLinear snapped;
  const std::int64_t n = std::int64_t{1} << cg;
  for (std::int64_t i = 0; i <= n; ++i) {
    const double x = std::ldexp(static_cast<double>(i), -cg);
    snapped.t.push_back(x);
    snapped.v.push_back(std::ldexp(std::nearbyint(std::ldexp(spec.eval(x), cv)), -cv));
  }
  double snap_err = 0.0;
  for (int i = 0; i <= 4096; ++i) {
    const double x = i / 4096.0;
    snap_err = std::max(snap_err, std::abs(spec.eval(x) - snapped.eval(x)));
  }
  Network net = detail::pw_linear_realize(snapped.t, snapped.v, 0);
  return {std::move(net), snap_err};
}

// ---------------------------------------------------------------------------
// composed boundaries (stagewise construction)

// One stage of a composed boundary gamma_r o ... o gamma_1. Every component
// picks coordinates of the stage input and applies either an exact
// piecewise-linear map, a dyadic affine combination, or a Hoelder function
// approximated at the stage budget.
struct ComposeStage {
  struct Component {
    enum class Kind { kPwLinear, kAffine, kHolder } kind = Kind::kPwLinear;
    std::vector<int> pick;           // indices into the stage input
    PiecewiseLinear pw;              // kPwLinear (pick one coordinate)
    std::vector<double> weights;     // kAffine, dyadic, |w| <= 1
    std::function<double(double)> fn;  // kHolder (pick one coordinate)
    double holder_beta = 1.0;
    double holder_B = 1.0;
  };
  std::vector<Component> comps;
  double beta = 1.0;  // smoothness attributed to this stage
};

struct ComposeResult {
  Network net;
  std::vector<double> stage_eps;   // per-stage budgets from the splitting
  std::vector<double> beta_star;   // beta_i * prod_{k>i} min(beta_k, 1)
  double probe_error = 0.0;        // sup |net - composition| on the probe set
  std::vector<double> stage_probe_error;  // per-stage contract check
};

struct GridInterpResult {
  Network net;
  double grid_width = 0.0;
  std::int64_t sparsity = 0;
};

// Linear interpolant of a Hoelder(beta2, B2) function on a dyadic grid,
// realized exactly; sup error <= eps. Only beta2 in (0, 1] is supported.
inline GridInterpResult grid_interp_boundary_net(const std::function<double(double)>& gamma,
                                                 double beta2, double B2, double eps,
                                                 int value_grid_c = -1) {
  if (!(beta2 > 0.0) || beta2 > 1.0)
    throw error("grid interpolation requires beta2 in (0, 1]");
  if (!(eps > 0.0) || !(B2 > 0.0)) throw error("grid interpolation requires eps, B2 > 0");

  // B2 g^{beta2} <= eps/2 and value snapping <= eps/4
  const double target = std::pow(eps / (2.0 * B2), 1.0 / beta2);
  const Dyadic g = dyadic_floor(std::min(1.0, target));
  int cv = value_grid_c;
  if (cv < 0) {
    cv = 2;
    while (std::ldexp(1.0, -cv) > eps / 2.0) ++cv;
  }

  PiecewiseLinear pl;
  const std::int64_t n = std::int64_t{1} << g.c;
  pl.t.reserve(static_cast<std::size_t>(n + 1));
  pl.v.reserve(static_cast<std::size_t>(n + 1));
  for (std::int64_t i = 0; i <= n; ++i) {
    const double x = std::ldexp(static_cast<double>(i), -g.c);
    pl.t.push_back(x);
    pl.v.push_back(std::ldexp(std::nearbyint(std::ldexp(gamma(x), cv)), -cv));
  }
  Network net = detail::pw_linear_realize(pl.t, pl.v, std::max({g.c, cv, 2}));
  const std::int64_t s = sparsity(net);
  return {std::move(net), g.value(), s};
}

namespace detail {

inline Network compose_component_net(const ComposeStage::Component& comp, int stage_in,
                                     double stage_eps) {
  switch (comp.kind) {
    case ComposeStage::Component::Kind::kPwLinear: {
      if (comp.pick.size() != 1) throw error("piecewise-linear component picks one coordinate");
      Network base = pw_linear_boundary_net(comp.pw).net;
      return concatenate(base, selector_net(comp.pick, stage_in, base.grid_c));
    }
    case ComposeStage::Component::Kind::kAffine: {
      if (comp.weights.size() != comp.pick.size())
        throw error("affine component weights must match picked coordinates");
      Mat W(1, stage_in);
      for (std::size_t i = 0; i < comp.pick.size(); ++i) {
        const int c = min_dyadic_exponent(comp.weights[i]);
        if (c < 0 || std::abs(comp.weights[i]) > 1.0)
          throw error("affine component weights must be dyadic with |w| <= 1");
        W.at(0, comp.pick[i]) = comp.weights[i];
      }
      int grid = 0;
      for (double w : comp.weights) grid = std::max(grid, min_dyadic_exponent(w));
      return affine_net(std::move(W), grid);
    }
    case ComposeStage::Component::Kind::kHolder: {
      if (comp.pick.size() != 1) throw error("Hoelder component picks one coordinate");
      Network base =
          grid_interp_boundary_net(comp.fn, comp.holder_beta, comp.holder_B, stage_eps).net;
      return concatenate(base, selector_net(comp.pick, stage_in, base.grid_c));
    }
  }
  throw error("unknown component kind");
}

inline double compose_component_eval(const ComposeStage::Component& comp,
                                     std::span<const double> x) {
  switch (comp.kind) {
    case ComposeStage::Component::Kind::kPwLinear:
      return comp.pw.eval(x[static_cast<std::size_t>(comp.pick[0])]);
    case ComposeStage::Component::Kind::kAffine: {
      double acc = 0.0;
      for (std::size_t i = 0; i < comp.pick.size(); ++i)
        acc += comp.weights[i] * x[static_cast<std::size_t>(comp.pick[i])];
      return acc;
    }
    case ComposeStage::Component::Kind::kHolder:
      return comp.fn(x[static_cast<std::size_t>(comp.pick[0])]);
  }
  throw error("unknown component kind");
}

}  // namespace detail

// Concatenated/parallelized realization of gamma_r o ... o gamma_1 with the
// stagewise budget splitting eps_i = (eps / (C r))^{1 / prod_{k>i} min(beta_k, 1)}.
inline ComposeResult compose_boundary_net(const std::vector<ComposeStage>& stages, double eps,
                                          int input_dim, double split_C = 1.0,
                                          int probe_count = 512, std::uint64_t probe_seed = 7) {
  if (stages.empty()) throw error("compose_boundary_net needs at least one stage");
  const int r = static_cast<int>(stages.size());

  ComposeResult res;
  res.stage_eps.resize(static_cast<std::size_t>(r));
  res.beta_star.resize(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    double tail = 1.0;
    for (int k = i + 1; k < r; ++k) tail *= std::min(stages[static_cast<std::size_t>(k)].beta, 1.0);
    res.beta_star[static_cast<std::size_t>(i)] = stages[static_cast<std::size_t>(i)].beta * tail;
    res.stage_eps[static_cast<std::size_t>(i)] =
        std::pow(eps / (split_C * r), 1.0 / tail);
  }

  std::optional<Network> acc;
  std::vector<std::vector<Network>> comp_nets(static_cast<std::size_t>(r));
  int cur_in = input_dim;
  for (int i = 0; i < r; ++i) {
    const ComposeStage& st = stages[static_cast<std::size_t>(i)];
    for (const auto& comp : st.comps)
      comp_nets[static_cast<std::size_t>(i)].push_back(detail::compose_component_net(
          comp, cur_in, res.stage_eps[static_cast<std::size_t>(i)]));
    Network stage_net = parallelize_all(comp_nets[static_cast<std::size_t>(i)]);
    acc = acc ? concatenate(stage_net, *acc) : std::move(stage_net);
    cur_in = static_cast<int>(st.comps.size());
  }
  if (acc->output_dim() != 1) throw error("composed boundary must end scalar-valued");

  // probe: whole-composition error and per-stage contract violations
  SplitRng rng(probe_seed);
  res.stage_probe_error.assign(static_cast<std::size_t>(r), 0.0);
  std::vector<double> x(static_cast<std::size_t>(input_dim));
  for (int p = 0; p < probe_count; ++p) {
    for (double& xi : x) xi = rng.next_unit();
    std::vector<double> cur(x.begin(), x.end());
    for (int i = 0; i < r; ++i) {
      const ComposeStage& st = stages[static_cast<std::size_t>(i)];
      std::vector<double> nxt(st.comps.size());
      for (std::size_t jc = 0; jc < st.comps.size(); ++jc) {
        nxt[jc] = detail::compose_component_eval(st.comps[jc], cur);
        const double approx = realize1(comp_nets[static_cast<std::size_t>(i)][jc], cur);
        res.stage_probe_error[static_cast<std::size_t>(i)] = std::max(
            res.stage_probe_error[static_cast<std::size_t>(i)], std::abs(approx - nxt[jc]));
      }
      cur = std::move(nxt);
    }
    const double truth = cur[0];
    const double got = realize1(*acc, x);
    res.probe_error = std::max(res.probe_error, std::abs(got - truth));
  }
  res.net = std::move(*acc);
  return res;
}

// ---------------------------------------------------------------------------
// the Bayes-set approximating network

// log-polynomial budget functions with constants C1..C4
struct ApproxBudget {
  double C1 = 1.0, C2 = 1.0;
  int C3 = 0, C4 = 1;
  double rho = 1.0;
  double eps0 = 1.0;

  double L0(double eps) const { return C1 * std::ceil(std::log(1.0 / eps)); }
  double s0(double eps) const { return C2 * std::pow(eps, -rho) * std::log(1.0 / eps); }
  double c0(double eps) const { return C3 + C4 * std::ceil(std::log(1.0 / eps)); }
};

using BoundaryApproximator = std::function<Network(const Fragment&, double eps)>;

struct SnappedFragment {
  int j = 0;
  int iota = +1;
  Box box;                   // the snapped box, inset to the h-grid
  Network clipped_boundary;  // gamma_hat on [0,1]^{d-1}
};

struct BayesApproxResult {
  Network net;  // Phi = sum of fragment nets; G := preimage of 1
  std::vector<SnappedFragment> fragments;
  int dropped = 0;
  double h_box = 0.0;   // grid step for boxes, largest power of two <= eps^kappa
  double h_clip = 0.0;  // clip step, largest power of two <= eps/2
  // measured budgets of the final net
  std::int64_t layers = 0;
  std::int64_t nonzeros = 0;
  int grid_c = 0;
  // declared budgets at this eps (when a budget spec was supplied)
  double budget_L0 = 0.0, budget_s0 = 0.0, budget_c0 = 0.0;

  bool member(std::span<const double> x) const {
    std::vector<double> rest;
    return member_cached(x, rest);
  }

  // structural membership: exactly the certified preimage-of-1 region
  bool member_cached(std::span<const double> x, std::vector<double>& rest) const {
    const int d = net.input_dim;
    rest.resize(static_cast<std::size_t>(d - 1));
    for (const SnappedFragment& f : fragments) {
      if (!f.box.contains(x)) continue;
      int k = 0;
      for (int i = 0; i < d; ++i)
        if (i != f.j) rest[static_cast<std::size_t>(k++)] = x[static_cast<std::size_t>(i)];
      const double gh = realize1(f.clipped_boundary, rest);
      if (f.iota * x[static_cast<std::size_t>(f.j)] <= gh) return true;
    }
    return false;
  }
};

// Builds the summed network whose preimage of 1 approximates the fragment
// set: boxes are snapped inward to the h_{eps^kappa} grid, each boundary net
// is clipped around the snapped box midline, and every fragment contributes
// s(sum of box gates + boundary gate - d).
inline BayesApproxResult bayes_approx_net(const BoundaryFragmentSet& set, double eps,
                                          double kappa, const BoundaryApproximator& approximate,
                                          double eps1 = std::numeric_limits<double>::infinity(),
                                          const ApproxBudget* budget = nullptr) {
  set.validate();
  const double eps0 = std::min(eps1, set.eps2 / 4.0);
  if (!(eps > 0.0) || !(eps < eps0))
    throw error("bayes_approx_net requires 0 < eps < min(eps1, eps2/4)");
  if (!(kappa >= 1.0)) throw error("bayes_approx_net requires kappa >= 1");

  const Dyadic hb = dyadic_floor(std::pow(eps, kappa));
  const Dyadic hc = dyadic_floor(eps / 2.0);
  const int d = set.d;

  BayesApproxResult res;
  res.h_box = hb.value();
  res.h_clip = hc.value();

  std::vector<Network> fragment_nets;
  for (const Fragment& frag : set.fragments) {
    // snap: smallest grid point strictly above lo, largest strictly below hi
    Box snapped;
    snapped.lo.resize(static_cast<std::size_t>(d));
    snapped.hi.resize(static_cast<std::size_t>(d));
    bool empty = false;
    for (int i = 0; i < d; ++i) {
      const double a = std::floor(std::ldexp(frag.box.lo[static_cast<std::size_t>(i)], hb.c)) + 1.0;
      const double b = std::ceil(std::ldexp(frag.box.hi[static_cast<std::size_t>(i)], hb.c)) - 1.0;
      snapped.lo[static_cast<std::size_t>(i)] = std::ldexp(a, -hb.c);
      snapped.hi[static_cast<std::size_t>(i)] = std::ldexp(b, -hb.c);
      if (!(snapped.lo[static_cast<std::size_t>(i)] < snapped.hi[static_cast<std::size_t>(i)]))
        empty = true;
    }
    if (empty) {
      ++res.dropped;
      continue;
    }

    Network base = approximate(frag, eps / 4.0);
    // midline of the snapped box in oriented coordinates iota x_j
    const double mid = frag.iota *
                       (snapped.lo[static_cast<std::size_t>(frag.j)] +
                        snapped.hi[static_cast<std::size_t>(frag.j)]) /
                       2.0;
    Network clipped = clip_net(base, mid, hc.value());
    Network side = boundary_side_gate_net(clipped, frag.j, frag.iota, d);

    std::vector<Network> gates;
    gates.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
      gates.push_back(box_gate_net(snapped.lo[static_cast<std::size_t>(i)],
                                   snapped.hi[static_cast<std::size_t>(i)], hb.value(), i, d));
    fragment_nets.push_back(fragment_indicator_net(gates, side, d));
    res.fragments.push_back({frag.j, frag.iota, std::move(snapped), std::move(clipped)});
  }

  if (fragment_nets.empty()) {
    res.net = affine_net(Mat(1, d), 0);  // identically zero: G is empty
  } else {
    Network par = parallelize_all(fragment_nets);
    Mat sum(1, par.output_dim());
    for (int i = 0; i < par.output_dim(); ++i) sum.at(0, i) = 1.0;
    res.net = concatenate(affine_net(std::move(sum), par.grid_c), par);
  }

  res.layers = res.net.layer_count();
  res.nonzeros = sparsity(res.net);
  res.grid_c = res.net.grid_c;
  if (budget) {
    res.budget_L0 = budget->L0(eps);
    res.budget_s0 = budget->s0(eps);
    res.budget_c0 = budget->c0(eps);
  }
  return res;
}

}  // namespace tsybnet
