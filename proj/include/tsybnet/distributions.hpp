#pragma once

// Classification distributions with boundary-fragment Bayes sets and a
// controlled noise exponent kappa = 1 + beta1, the metrics d_Delta and d_fQ,
// and the bump-hypercube family behind the minimax lower bound. The
// regression function follows the three-branch form
//   f(x) = 1/2 (1 + k2 (g_low - u)^b1)   for u <= g_low,
//          1/2 (1 - k2 u^b1)             for 0 < u <= g_band,
//          1/2 (1 - k3 (u - g_top)^b1)   for u > g_top = g_low + g_band,
// along the oriented coordinate u = iota x_j; g_band is zero outside the
// hypercube family. Boundary overlaps resolve to the first matching branch.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "tsybnet/rng.hpp"
#include "tsybnet/set_calculus.hpp"

namespace tsybnet {

struct QuadratureSpec {
  int resolution = 256;  // midpoint cells per axis
};

struct QuadratureResult {
  double value = 0.0;
  int resolution = 0;
  bool coarse_warning = false;
};

using DensityFn = std::function<double(std::span<const double>)>;
using MemberFn = std::function<bool(std::span<const double>)>;

struct TsybakovDistribution {
  int d = 2;
  double beta1 = 0.0;  // kappa = 1 + beta1
  double k2 = 0.5, k3 = 0.5;
  int j = 0;
  int iota = +1;
  BoundaryFn gamma_low;   // Bayes boundary on [0,1]^{d-1}
  BoundaryFn gamma_band;  // thin-band boundary; null means zero
  double marginal_bound = 1.0;  // M
  DensityFn density;            // null means uniform on [0,1]^d
  double envelope_beta = 0.0, envelope_B = 0.0;  // (beta, B) with g(t) = max(k2,k3) t^beta1

  double kappa() const { return 1.0 + beta1; }

  double band(std::span<const double> rest) const {
    return gamma_band ? gamma_band(rest) : 0.0;
  }

  // smallest fragment-set wrapper around the Bayes set
  BoundaryFragmentSet bayes_set() const {
    BoundaryFragmentSet set;
    set.d = d;
    set.r = 1;
    set.eps2 = 1.0;
    Fragment f;
    f.j = j;
    f.iota = iota;
    f.box = Box{std::vector<double>(static_cast<std::size_t>(d), 0.0),
                std::vector<double>(static_cast<std::size_t>(d), 1.0)};
    f.gamma = gamma_low;
    set.fragments = {f};
    return set;
  }
};

namespace detail {

inline void split_coord(std::span<const double> x, int j, double& u, std::vector<double>& rest) {
  rest.resize(x.size() - 1);
  int k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (static_cast<int>(i) == j)
      u = x[i];
    else
      rest[static_cast<std::size_t>(k++)] = x[i];
  }
}

inline double pow_signed(double t, double p) {
  // t >= 0 expected; p = 0 gives 1 including at t = 0 (hard margin)
  if (p == 0.0) return 1.0;
  return std::pow(t, p);
}

}  // namespace detail

inline double regression_function(const TsybakovDistribution& q, std::span<const double> x) {
  double u = 0.0;
  thread_local std::vector<double> rest;
  detail::split_coord(x, q.j, u, rest);
  u *= q.iota;
  const double gl = q.gamma_low(rest);
  if (u <= gl) return 0.5 * (1.0 + q.k2 * detail::pow_signed(gl - u, q.beta1));
  const double gb = q.band(rest);
  if (u > 0.0 && u <= gb) return 0.5 * (1.0 - q.k2 * detail::pow_signed(u, q.beta1));
  const double gt = gl + gb;
  return 0.5 * (1.0 - q.k3 * detail::pow_signed(std::max(0.0, u - gt), q.beta1));
}

inline bool bayes_membership(const TsybakovDistribution& q, std::span<const double> x) {
  return regression_function(q, x) >= 0.5;
}

inline double marginal_density(const TsybakovDistribution& q, std::span<const double> x) {
  return q.density ? q.density(x) : 1.0;
}

// ---------------------------------------------------------------------------
// sampling

struct Dataset {
  int d = 0;
  std::vector<double> points;  // row-major, n x d
  std::vector<int> labels;
  std::uint64_t seed = 0;

  std::size_t size() const { return labels.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
};

// X from the marginal (rejection against the uniform for bounded densities),
// Y ~ Bernoulli(f(X)); each point draws from its own counter substream so the
// result is independent of batching.
inline Dataset sample(const TsybakovDistribution& q, int n, std::uint64_t seed) {
  if (n < 1) throw error("sample requires n >= 1");
  Dataset data;
  data.d = q.d;
  data.seed = seed;
  data.points.resize(static_cast<std::size_t>(n) * q.d);
  data.labels.resize(static_cast<std::size_t>(n));
  SplitRng root(seed);
  std::vector<double> x(static_cast<std::size_t>(q.d));
  for (int i = 0; i < n; ++i) {
    SplitRng rng = root.split(0xD5, static_cast<std::uint64_t>(i));
    for (;;) {
      for (double& xi : x) xi = rng.next_unit();
      if (!q.density) break;
      if (rng.next_unit() * q.marginal_bound <= q.density(x)) break;
    }
    const double f = regression_function(q, x);
    data.labels[static_cast<std::size_t>(i)] = rng.next_bernoulli(f) ? 1 : 0;
    std::copy(x.begin(), x.end(),
              data.points.begin() + static_cast<std::size_t>(i) * q.d);
  }
  return data;
}

// ---------------------------------------------------------------------------
// metrics by tensor-grid midpoint quadrature

namespace detail {

template <class CellFn>
void for_each_cell(int d, int res, CellFn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (;;) {
    for (int i = 0; i < d; ++i)
      x[static_cast<std::size_t>(i)] = (idx[static_cast<std::size_t>(i)] + 0.5) / res;
    fn(std::span<const double>(x));
    int pos = d - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == res) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace detail

// warn when fewer than 2 cells span the smallest fragment extent
inline bool quadrature_too_coarse(int res, double min_fragment_extent) {
  return min_fragment_extent > 0.0 && res * min_fragment_extent < 2.0;
}

// Q_X(G1 symdiff G2) by midpoint quadrature
inline QuadratureResult d_delta(const TsybakovDistribution& q, const MemberFn& g1,
                                const MemberFn& g2, const QuadratureSpec& spec,
                                double min_fragment_extent = 1.0) {
  const int res = spec.resolution;
  const double cell = std::pow(1.0 / res, q.d);
  double acc = 0.0;
  detail::for_each_cell(q.d, res, [&](std::span<const double> x) {
    if (g1(x) != g2(x)) acc += marginal_density(q, x) * cell;
  });
  return {acc, res, quadrature_too_coarse(res, min_fragment_extent)};
}

// integral of |2 f - 1| over the symmetric difference
inline QuadratureResult d_fq(const TsybakovDistribution& q, const MemberFn& g1,
                             const MemberFn& g2, const QuadratureSpec& spec,
                             double min_fragment_extent = 1.0) {
  const int res = spec.resolution;
  const double cell = std::pow(1.0 / res, q.d);
  double acc = 0.0;
  detail::for_each_cell(q.d, res, [&](std::span<const double> x) {
    if (g1(x) != g2(x))
      acc += std::abs(2.0 * regression_function(q, x) - 1.0) * marginal_density(q, x) * cell;
  });
  return {acc, res, quadrature_too_coarse(res, min_fragment_extent)};
}

// ---------------------------------------------------------------------------
// column quadrature for boundary-form sets (uniform marginal): the inner
// integral along the oriented coordinate is evaluated in closed form.

namespace detail {

// integral of |2f - 1| du over [a, b] in the oriented coordinate at fixed rest
inline double band_integral(const TsybakovDistribution& q, double gl, double gb, double a,
                            double b) {
  if (b <= a) return 0.0;
  const double p1 = q.beta1 + 1.0;
  double acc = 0.0;
  // below-boundary piece: |2f-1| = k2 (gl - u)^b1 on (-inf, gl]
  {
    const double lo = a, hi = std::min(b, gl);
    if (hi > lo)
      acc += q.k2 / p1 *
             (std::pow(gl - lo, p1) - std::pow(std::max(0.0, gl - hi), p1));
  }
  // thin band piece: |2f-1| = k2 u^b1 on (max(gl,0), gb]
  if (gb > 0.0) {
    const double lo = std::max(a, std::max(gl, 0.0)), hi = std::min(b, gb);
    if (hi > lo) acc += q.k2 / p1 * (std::pow(hi, p1) - std::pow(lo, p1));
  }
  // far-side piece: |2f-1| = k3 (u - gt)^b1 on (gt, inf)
  {
    const double gt = gl + std::max(0.0, gb);
    const double lo = std::max(a, gt), hi = b;
    if (hi > lo)
      acc += q.k3 / p1 * (std::pow(hi - gt, p1) - std::pow(lo - gt, p1));
  }
  return acc;
}

template <class Fn>
void for_each_rest_cell(int dm1, int res, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(dm1), 0);
  std::vector<double> y(static_cast<std::size_t>(dm1));
  for (;;) {
    for (int i = 0; i < dm1; ++i)
      y[static_cast<std::size_t>(i)] = (idx[static_cast<std::size_t>(i)] + 0.5) / res;
    fn(std::span<const double>(y));
    int pos = dm1 - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == res) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace detail

// d_Delta between {u <= g1(rest)} and {u <= g2(rest)} (oriented coordinate)
inline double d_delta_columns(const TsybakovDistribution& q, const BoundaryFn& g1,
                              const BoundaryFn& g2, int res) {
  if (q.density) throw error("column quadrature supports the uniform marginal only");
  const double ulo = q.iota > 0 ? 0.0 : -1.0, uhi = q.iota > 0 ? 1.0 : 0.0;
  double acc = 0.0;
  const double cell = std::pow(1.0 / res, q.d - 1);
  detail::for_each_rest_cell(q.d - 1, res, [&](std::span<const double> y) {
    const double a = std::clamp(g1(y), ulo, uhi);
    const double b = std::clamp(g2(y), ulo, uhi);
    acc += std::abs(a - b) * cell;
  });
  return acc;
}

inline double d_fq_columns(const TsybakovDistribution& q, const BoundaryFn& g1,
                           const BoundaryFn& g2, int res) {
  if (q.density) throw error("column quadrature supports the uniform marginal only");
  const double ulo = q.iota > 0 ? 0.0 : -1.0, uhi = q.iota > 0 ? 1.0 : 0.0;
  double acc = 0.0;
  const double cell = std::pow(1.0 / res, q.d - 1);
  detail::for_each_rest_cell(q.d - 1, res, [&](std::span<const double> y) {
    const double gl = q.gamma_low(y);
    const double gb = q.band(y);
    double a = std::clamp(g1(y), ulo, uhi);
    double b = std::clamp(g2(y), ulo, uhi);
    if (a > b) std::swap(a, b);
    acc += detail::band_integral(q, gl, gb, a, b) * cell;
  });
  return acc;
}

// ---------------------------------------------------------------------------
// noise-condition diagnostics

struct NoiseProbeResult {
  std::vector<double> t;
  std::vector<double> prob;  // P(|2f - 1| <= t)
  double slope = 0.0;
  double stderr_slope = 0.0;
};

struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;  // residual sum of squares in log space
};

inline SlopeFit ols_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) throw error("slope fit needs matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw error("slope fit requires positive values");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw error("slope fit is degenerate");
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += e * e;
  }
  fit.rss = rss;
  const double dof = std::max(1.0, n - 2.0);
  fit.stderr_slope = std::sqrt(rss / dof / (sxx - sx * sx / n));
  return fit;
}

// band probabilities P(|2f(X)-1| <= t) on a t grid plus a log-log slope fit;
// the cell values are computed once and shared across the whole grid
inline NoiseProbeResult noise_exponent_probe(const TsybakovDistribution& q,
                                             const std::vector<double>& t_grid,
                                             const QuadratureSpec& spec) {
  if (!(q.kappa() > 1.0)) throw error("noise probe requires kappa > 1");
  const int res = spec.resolution;
  const double cell = std::pow(1.0 / res, q.d);
  std::vector<std::pair<double, double>> vals;  // (|2f-1|, mass)
  vals.reserve(static_cast<std::size_t>(std::pow(res, q.d)));
  detail::for_each_cell(q.d, res, [&](std::span<const double> x) {
    vals.emplace_back(std::abs(2.0 * regression_function(q, x) - 1.0),
                      marginal_density(q, x) * cell);
  });
  std::sort(vals.begin(), vals.end());
  std::vector<double> prefix(vals.size() + 1, 0.0);
  for (std::size_t i = 0; i < vals.size(); ++i) prefix[i + 1] = prefix[i] + vals[i].second;

  NoiseProbeResult out;
  out.t = t_grid;
  for (double t : t_grid) {
    const auto it = std::upper_bound(vals.begin(), vals.end(), t,
                                     [](double v, const auto& p) { return v < p.first; });
    out.prob.push_back(prefix[static_cast<std::size_t>(it - vals.begin())]);
  }
  bool all_zero = true;
  for (double p : out.prob) all_zero = all_zero && p == 0.0;
  if (all_zero) throw error("noise probe degenerate: all band probabilities are zero");
  if (out.t.size() >= 2) {
    const SlopeFit fit = ols_loglog(out.t, out.prob);
    out.slope = fit.slope;
    out.stderr_slope = fit.stderr_slope;
  } else {
    out.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

// min over boundary-hugging slab probes of d_fq / d_Delta^kappa
struct MarginProbeResult {
  double c1 = 0.0;  // best (smallest) ratio
  std::vector<double> deltas, ratios;
};

inline MarginProbeResult margin_constant_probe(const TsybakovDistribution& q,
                                               const std::vector<double>& deltas, int res,
                                               double kappa_override = 0.0) {
  MarginProbeResult out;
  out.c1 = std::numeric_limits<double>::infinity();
  const double kap = kappa_override > 0.0 ? kappa_override : q.kappa();
  for (double delta : deltas) {
    for (double sign : {+1.0, -1.0}) {
      const double off = sign * delta;
      BoundaryFn probe = [&, off](std::span<const double> y) { return q.gamma_low(y) + off; };
      const double dd = d_delta_columns(q, q.gamma_low, probe, res);
      if (dd <= 0.0) continue;  // degenerate probe, skipped
      const double df = d_fq_columns(q, q.gamma_low, probe, res);
      const double ratio = df / std::pow(dd, kap);
      out.deltas.push_back(off);
      out.ratios.push_back(ratio);
      out.c1 = std::min(out.c1, ratio);
    }
  }
  if (out.ratios.empty()) throw error("margin probe: all probes degenerate");
  if (!(out.c1 > 0.0)) throw error("margin probe: ratio not positive");
  return out;
}

// ---------------------------------------------------------------------------
// bump hypercube family (lower bound construction)

inline double mollifier(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

struct BumpHypercube {
  int K = 2;
  double k1 = 0.1;
  double beta2 = 1.0;
  int d = 2;
  std::vector<std::uint8_t> w;  // over {1..K}^{d-1}, row-major

  void validate() const {
    if (K < 2) throw error("bump hypercube requires K >= 2");
    if (d < 2) throw error("bump hypercube requires d >= 2");
    std::size_t cells = 1;
    for (int i = 0; i < d - 1; ++i) cells *= static_cast<std::size_t>(K);
    if (w.size() != cells) throw error("bump index vector has wrong length");
  }

  double amplitude() const { return k1 * std::pow(static_cast<double>(K), -beta2); }

  // index of the bump whose support contains y, or -1
  long active_index(std::span<const double> y) const {
    long idx = 0;
    for (int ax = 0; ax < d - 1; ++ax) {
      const double z = K * y[static_cast<std::size_t>(ax)];
      const long i = static_cast<long>(std::floor(z / 2.0)) + 1;  // support (2i-2, 2i)
      if (i < 1 || i > K) return -1;
      idx = idx * K + (i - 1);
    }
    return idx;
  }

  double bump_profile(std::span<const double> y) const {
    double prod = 1.0;
    for (int ax = 0; ax < d - 1; ++ax) {
      const double z = K * y[static_cast<std::size_t>(ax)];
      const long i = static_cast<long>(std::floor(z / 2.0)) + 1;
      prod *= mollifier(z - (2.0 * i - 1.0));
      if (prod == 0.0) return 0.0;
    }
    return prod;
  }

  double gamma_w(std::span<const double> y) const {
    const long idx = active_index(y);
    if (idx < 0 || !w[static_cast<std::size_t>(idx)]) return 0.0;
    return amplitude() * bump_profile(y);
  }
  double gamma_complement(std::span<const double> y) const {
    const long idx = active_index(y);
    if (idx < 0 || w[static_cast<std::size_t>(idx)]) return 0.0;
    return amplitude() * bump_profile(y);
  }
  double gamma_all(std::span<const double> y) const {
    const long idx = active_index(y);
    if (idx < 0) return 0.0;
    return amplitude() * bump_profile(y);
  }
};

inline BumpHypercube bump_hypercube(int K, double k1, double beta2, int d,
                                    std::vector<std::uint8_t> w) {
  BumpHypercube hc{K, k1, beta2, d, std::move(w)};
  hc.validate();
  return hc;
}

// distribution Q_w of the lower-bound family
inline TsybakovDistribution hypercube_distribution(const BumpHypercube& hc, double beta1,
                                                   double k2, double k3) {
  hc.validate();
  TsybakovDistribution q;
  q.d = hc.d;
  q.beta1 = beta1;
  q.k2 = k2;
  q.k3 = k3;
  q.j = 0;
  q.iota = +1;
  q.gamma_low = [hc](std::span<const double> y) { return hc.gamma_w(y); };
  q.gamma_band = [hc](std::span<const double> y) { return hc.gamma_complement(y); };
  q.envelope_beta = beta1;
  q.envelope_B = std::max(k2, k3) * 2.0;
  return q;
}

// validation pass for generated instances: f range, envelope, boundary class
inline void validate_distribution(const TsybakovDistribution& q, bool lower_bound_family,
                                  int probes = 4096, std::uint64_t seed = 99) {
  SplitRng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(q.d));
  std::vector<double> rest;
  const double env_k = std::max(q.k2, q.k3);
  for (int i = 0; i < probes; ++i) {
    for (double& xi : x) xi = rng.next_unit();
    const double f = regression_function(q, x);
    if (!(f >= 0.0 && f <= 1.0)) throw error("regression function outside [0,1]");
    if (lower_bound_family && !(f >= 0.25))
      throw error("lower-bound family requires f >= 1/4");
    // envelope: |2f - 1| <= max(k2,k3) t^beta1 with t the distance to the
    // Bayes boundary along the oriented coordinate (dominates every branch)
    double u = 0.0;
    detail::split_coord(x, q.j, u, rest);
    u *= q.iota;
    const double gl = q.gamma_low(rest);
    const double bound = env_k * detail::pow_signed(std::abs(u - gl), q.beta1);
    if (std::abs(2.0 * f - 1.0) > bound + 1e-12)
      throw error("envelope condition violated at a probe point");
  }
}

// ---------------------------------------------------------------------------
// Hellinger affinity and the Assouad quantities

// single-sample affinity by quadrature of sqrt(fA fB) + sqrt((1-fA)(1-fB)),
// raised to the n-th power; both distributions must share the marginal
inline double hellinger_affinity(const TsybakovDistribution& a, const TsybakovDistribution& b,
                                 const QuadratureSpec& spec, int n) {
  if (a.d != b.d) throw error("hellinger affinity: dimension mismatch");
  if (a.density || b.density)
    throw error("hellinger affinity assumes the shared uniform marginal");
  const int res = spec.resolution;
  const double cell = std::pow(1.0 / res, a.d);
  double acc = 0.0;
  detail::for_each_cell(a.d, res, [&](std::span<const double> x) {
    const double fa = regression_function(a, x);
    const double fb = regression_function(b, x);
    acc += (std::sqrt(fa * fb) + std::sqrt((1.0 - fa) * (1.0 - fb))) * cell;
  });
  return std::pow(std::min(acc, 1.0), n);
}

struct AssouadReport {
  int K = 0;
  std::int64_t n = 0;
  double I1 = 0.0, I2 = 0.0;
  double I_bound = 0.0;           // 2 k1^{1+2b1} / (1+2b1) K^{-b2(2kappa-1+rho)}
  double affinity1 = 0.0;         // single-sample affinity of the single-bump pair
  double affinity_product = 0.0;  // (affinity1)^{2n} / 2, the min-measure lower bound
  double affinity_analytic = 0.0; // (1 - c* K^{-b2(2kappa-1+rho)})^{2n} / 2
  double cstar = 0.0;
  double separation = 0.0;        // (1/2) k1 K^{-b2} (int phi)^{d-1}
  double assouad_product = 0.0;   // separation * affinity_product
  double rho = 0.0;
  int refine_resolution = 0;
  bool refine_stable = false;     // affinity product stable to 3 digits
};

namespace detail {

// strip quadrature over the first bump: integrates fn(u, y, phi1(y)) with
// x_1 = u phi1(y); the substitution keeps every sample inside the strip
template <class Fn>
double strip_integral(const BumpHypercube& hc, int res, Fn&& fn) {
  const int dm1 = hc.d - 1;
  const double width = 2.0 / hc.K;  // support of bump (1,...,1) per axis
  const double cell = std::pow(width / res, dm1) / res;
  std::vector<int> idx(static_cast<std::size_t>(dm1), 0);
  std::vector<double> y(static_cast<std::size_t>(dm1));
  double acc = 0.0;
  for (;;) {
    for (int i = 0; i < dm1; ++i)
      y[static_cast<std::size_t>(i)] = (idx[static_cast<std::size_t>(i)] + 0.5) * width / res;
    const double phi = hc.amplitude() * hc.bump_profile(y);
    if (phi > 0.0) {
      for (int iu = 0; iu < res; ++iu) {
        const double u = (iu + 0.5) / res;
        acc += fn(u, phi) * phi * cell;
      }
    }
    int pos = dm1 - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == res) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return acc;
}

inline double mollifier_mass() {
  // int_{-1}^{1} phi, fixed resolution is plenty for this smooth integrand
  const int res = 20000;
  double acc = 0.0;
  for (int i = 0; i < res; ++i) {
    const double t = -1.0 + (i + 0.5) * 2.0 / res;
    acc += mollifier(t) * 2.0 / res;
  }
  return acc;
}

}  // namespace detail

// The displayed lower-bound quantities at one (K, n): the integrals I1/I2
// with their closed-form bound, the single-bump Hellinger affinity with the
// n-fold product lower bound, and the final Assouad separation product.
inline AssouadReport assouad_quantities(int K, std::int64_t n, double kappa, double beta2,
                                        int d, double k1, double k2, double k3,
                                        int base_resolution = 128) {
  const double beta1 = kappa - 1.0;
  const double rho = (d - 1) / beta2;
  BumpHypercube hc;
  hc.K = K;
  hc.k1 = k1;
  hc.beta2 = beta2;
  hc.d = d;
  std::size_t cells = 1;
  for (int i = 0; i < d - 1; ++i) cells *= static_cast<std::size_t>(K);
  hc.w.assign(cells, 0);
  hc.validate();

  // the pair shares its far-side branch, so k3 drops out of every quantity
  (void)k3;

  AssouadReport rep;
  rep.K = K;
  rep.n = n;
  rep.rho = rho;
  rep.cstar = 4.0 * k2 * k2 * std::pow(k1, 1.0 + 2.0 * beta1) / (1.0 + 2.0 * beta1);
  rep.I_bound = 2.0 * std::pow(k1, 1.0 + 2.0 * beta1) / (1.0 + 2.0 * beta1) *
                std::pow(static_cast<double>(K), -beta2 * (2.0 * kappa - 1.0 + rho));

  const double exponent = 2.0 * beta1;
  auto compute = [&](int res) {
    rep.I1 = detail::strip_integral(hc, res, [&](double u, double phi) {
      return detail::pow_signed((1.0 - u) * phi, exponent);
    });
    rep.I2 = detail::strip_integral(hc, res, [&](double u, double phi) {
      return detail::pow_signed(u * phi, exponent);
    });
    // affinity deficit: f0 (bump off, band branch) vs f1 (bump on, low branch)
    const double deficit = detail::strip_integral(hc, res, [&](double u, double phi) {
      const double f0 = 0.5 * (1.0 - k2 * detail::pow_signed(u * phi, beta1));
      const double f1 = 0.5 * (1.0 + k2 * detail::pow_signed((1.0 - u) * phi, beta1));
      return 1.0 - std::sqrt(f0 * f1) - std::sqrt((1.0 - f0) * (1.0 - f1));
    });
    rep.affinity1 = 1.0 - deficit;
    rep.affinity_product = 0.5 * std::exp(2.0 * static_cast<double>(n) * std::log(rep.affinity1));
    rep.refine_resolution = res;
  };

  compute(base_resolution);
  double prev = rep.affinity_product;
  for (int res = base_resolution * 2; res <= base_resolution * 8; res *= 2) {
    compute(res);
    if (std::abs(rep.affinity_product - prev) <= 5e-4 * std::max(1.0, std::abs(prev))) {
      rep.refine_stable = true;
      break;
    }
    prev = rep.affinity_product;
  }

  const double delta = rep.cstar * std::pow(static_cast<double>(K),
                                            -beta2 * (2.0 * kappa - 1.0 + rho));
  rep.affinity_analytic =
      delta < 1.0 ? 0.5 * std::exp(2.0 * static_cast<double>(n) * std::log(1.0 - delta)) : 0.0;

  static const double phi_mass = detail::mollifier_mass();
  rep.separation = 0.5 * k1 * std::pow(static_cast<double>(K), -beta2) *
                   std::pow(phi_mass, d - 1);
  rep.assouad_product = rep.separation * rep.affinity_product;
  return rep;
}

}  // namespace tsybnet
