#pragma once

// Network combinators: concatenation, parallelization, power-of-two chains
// and small affine helpers. Layer and sparsity budgets follow the standard
// calculus: concatenation uses L1+L2+1 layers and at most 2s1+2s2 nonzeros,
// parallelization uses max(L1,L2) layers and at most s1+s2+2dL nonzeros.

#include <algorithm>
#include <vector>

#include "tsybnet/network.hpp"

namespace tsybnet {

// L = 0 network x |-> W x
inline Network affine_net(Mat W, int grid_c) {
  int in = W.cols;
  return Network(in, {}, std::move(W), grid_c);
}

// L = 0 network picking the listed coordinates (0-based)
inline Network selector_net(const std::vector<int>& idx, int input_dim, int grid_c = 0) {
  Mat W(static_cast<int>(idx.size()), input_dim);
  for (int r = 0; r < W.rows; ++r) {
    if (idx[static_cast<std::size_t>(r)] < 0 || idx[static_cast<std::size_t>(r)] >= input_dim)
      throw error("selector index out of range");
    W.at(r, idx[static_cast<std::size_t>(r)]) = 1.0;
  }
  return affine_net(std::move(W), grid_c);
}

inline Network identity_net(int dim, int grid_c = 0) {
  return affine_net(Mat::identity(dim), grid_c);
}

// realize(result, x) = realize(outer, realize(inner, x)); L = L1 + L2 + 1.
// The middle layer carries the inner output as a (positive, negative) split,
// so equality holds for all real intermediate values.
inline Network concatenate(const Network& outer, const Network& inner) {
  if (outer.input_dim != inner.output_dim())
    throw error("concatenate: inner output dimension does not match outer input");
  const int mid = inner.output_dim();

  std::vector<Layer> layers = inner.hidden;

  Layer split;
  split.W = Mat(2 * mid, inner.final_W.cols);
  for (int r = 0; r < mid; ++r)
    for (int c = 0; c < inner.final_W.cols; ++c) {
      split.W.at(r, c) = inner.final_W.at(r, c);
      split.W.at(mid + r, c) = -inner.final_W.at(r, c);
    }
  split.b.assign(static_cast<std::size_t>(2 * mid), 0.0);
  layers.push_back(std::move(split));

  Mat final_W;
  if (outer.layer_count() == 0) {
    final_W = Mat(outer.final_W.rows, 2 * mid);
    for (int r = 0; r < outer.final_W.rows; ++r)
      for (int c = 0; c < mid; ++c) {
        final_W.at(r, c) = outer.final_W.at(r, c);
        final_W.at(r, mid + c) = -outer.final_W.at(r, c);
      }
  } else {
    Layer first;
    const Mat& W1 = outer.hidden.front().W;
    first.W = Mat(W1.rows, 2 * mid);
    for (int r = 0; r < W1.rows; ++r)
      for (int c = 0; c < mid; ++c) {
        first.W.at(r, c) = W1.at(r, c);
        first.W.at(r, mid + c) = -W1.at(r, c);
      }
    first.b = outer.hidden.front().b;
    layers.push_back(std::move(first));
    for (std::size_t i = 1; i < outer.hidden.size(); ++i) layers.push_back(outer.hidden[i]);
    final_W = outer.final_W;
  }

  return Network(inner.input_dim, std::move(layers), std::move(final_W),
                 std::max(outer.grid_c, inner.grid_c));
}

namespace detail {

// Prefix `delay` identity layers in front of a network. The pass-through is a
// plain identity, exact for non-negative inputs; all uses here feed [0,1]^d
// or [0,1]-valued intermediates.
inline Network delay_input(const Network& net, int delay) {
  if (delay <= 0) return net;
  std::vector<Layer> layers;
  layers.reserve(net.hidden.size() + static_cast<std::size_t>(delay));
  for (int i = 0; i < delay; ++i) {
    Layer l;
    l.W = Mat::identity(net.input_dim);
    l.b.assign(static_cast<std::size_t>(net.input_dim), 0.0);
    layers.push_back(std::move(l));
  }
  for (const Layer& l : net.hidden) layers.push_back(l);
  return Network(net.input_dim, std::move(layers), net.final_W, net.grid_c);
}

}  // namespace detail

// realize(result, x) = (realize(a, x), realize(b, x)); L = max(L1, L2).
// The shallower net is padded with input-side identity layers, which is
// exact on the non-negative inputs this calculus operates on.
inline Network parallelize(const Network& a, const Network& b) {
  if (a.input_dim != b.input_dim) throw error("parallelize: input dimensions differ");
  const int L = std::max(a.layer_count(), b.layer_count());
  const Network pa = detail::delay_input(a, L - a.layer_count());
  const Network pb = detail::delay_input(b, L - b.layer_count());

  std::vector<Layer> layers;
  layers.reserve(static_cast<std::size_t>(L));
  for (int s = 0; s < L; ++s) {
    const Layer& la = pa.hidden[static_cast<std::size_t>(s)];
    const Layer& lb = pb.hidden[static_cast<std::size_t>(s)];
    Layer merged;
    if (s == 0) {
      // both blocks read the shared input
      merged.W = Mat(la.W.rows + lb.W.rows, a.input_dim);
      for (int r = 0; r < la.W.rows; ++r)
        for (int c = 0; c < la.W.cols; ++c) merged.W.at(r, c) = la.W.at(r, c);
      for (int r = 0; r < lb.W.rows; ++r)
        for (int c = 0; c < lb.W.cols; ++c) merged.W.at(la.W.rows + r, c) = lb.W.at(r, c);
    } else {
      merged.W = Mat(la.W.rows + lb.W.rows, la.W.cols + lb.W.cols);
      for (int r = 0; r < la.W.rows; ++r)
        for (int c = 0; c < la.W.cols; ++c) merged.W.at(r, c) = la.W.at(r, c);
      for (int r = 0; r < lb.W.rows; ++r)
        for (int c = 0; c < lb.W.cols; ++c)
          merged.W.at(la.W.rows + r, la.W.cols + c) = lb.W.at(r, c);
    }
    merged.b = la.b;
    merged.b.insert(merged.b.end(), lb.b.begin(), lb.b.end());
    layers.push_back(std::move(merged));
  }

  Mat final_W;
  if (L == 0) {
    final_W = Mat(pa.final_W.rows + pb.final_W.rows, a.input_dim);
    for (int r = 0; r < pa.final_W.rows; ++r)
      for (int c = 0; c < pa.final_W.cols; ++c) final_W.at(r, c) = pa.final_W.at(r, c);
    for (int r = 0; r < pb.final_W.rows; ++r)
      for (int c = 0; c < pb.final_W.cols; ++c)
        final_W.at(pa.final_W.rows + r, c) = pb.final_W.at(r, c);
  } else {
    final_W = Mat(pa.final_W.rows + pb.final_W.rows, pa.final_W.cols + pb.final_W.cols);
    for (int r = 0; r < pa.final_W.rows; ++r)
      for (int c = 0; c < pa.final_W.cols; ++c) final_W.at(r, c) = pa.final_W.at(r, c);
    for (int r = 0; r < pb.final_W.rows; ++r)
      for (int c = 0; c < pb.final_W.cols; ++c)
        final_W.at(pa.final_W.rows + r, pa.final_W.cols + c) = pb.final_W.at(r, c);
  }

  return Network(a.input_dim, std::move(layers), std::move(final_W),
                 std::max(a.grid_c, b.grid_c));
}

inline Network parallelize_all(const std::vector<Network>& nets) {
  if (nets.empty()) throw error("parallelize_all: empty list");
  Network acc = nets.front();
  for (std::size_t i = 1; i < nets.size(); ++i) acc = parallelize(acc, nets[i]);
  return acc;
}

// Scalar doubling chain: realizes x |-> 2^M x on [0, inf) with at most M+1
// layers and sparsity at most 4M+1, all weights equal to 1.
inline Network pow2_scaling_net(int M, int grid_c) {
  if (M < 1) throw error("pow2_scaling_net requires M >= 1");
  std::vector<Layer> layers;
  {
    Layer l;
    l.W = Mat(2, 1);
    l.W.at(0, 0) = 1.0;
    l.W.at(1, 0) = 1.0;
    l.b = {0.0, 0.0};
    layers.push_back(std::move(l));
  }
  for (int i = 2; i <= M; ++i) {
    Layer l;
    l.W = Mat(2, 2);
    l.W.at(0, 0) = l.W.at(0, 1) = l.W.at(1, 0) = l.W.at(1, 1) = 1.0;
    l.b = {0.0, 0.0};
    layers.push_back(std::move(l));
  }
  Mat final_W(1, 2);
  final_W.at(0, 0) = 1.0;
  final_W.at(0, 1) = 1.0;
  return Network(1, std::move(layers), std::move(final_W), grid_c);
}

// Constant net realizing x |-> 2^M for scalar input; the first layer zeroes
// the input and emits 1 through the shift, then the doubling chain follows.
inline Network pow2_constant_net(int M, int grid_c) {
  Network chain = pow2_scaling_net(std::max(M, 1), grid_c);
  Layer seed;
  seed.W = Mat(1, 1);  // zero matrix
  seed.b = {-1.0};     // s(0 - (-1)) = 1
  std::vector<Layer> layers;
  layers.push_back(std::move(seed));
  for (const Layer& l : chain.hidden) layers.push_back(l);
  Mat final_W = chain.final_W;
  if (M == 0) {
    layers.resize(1);
    final_W = Mat(1, 1);
    final_W.at(0, 0) = 1.0;
  }
  return Network(1, std::move(layers), std::move(final_W), grid_c);
}

// (x -> 2^M x, x -> 2^M) pair
inline std::pair<Network, Network> power_of_two_nets(int M, int grid_c) {
  if (M < 1) throw error("power_of_two_nets requires M >= 1");
  return {pow2_scaling_net(M, grid_c), pow2_constant_net(M, grid_c)};
}

// Constant net realizing x |-> v (v >= 0 dyadic) for any input dimension.
// v = w * 2^M with w = v 2^-M on the grid; requires grid_c large enough.
inline Network constant_net(double v, int input_dim, int grid_c) {
  if (v < 0.0) throw error("constant_net requires v >= 0");
  const WeightGrid g(grid_c);
  int M = 0;
  while (std::ldexp(1.0, M) < v) ++M;
  const double w = std::ldexp(v, -M);
  if (!g.contains(w))
    throw error("constant_net: value not representable on the grid at this exponent");

  std::vector<Layer> layers;
  {
    Layer seed;
    seed.W = Mat(1, input_dim);  // zero row
    seed.b = {-1.0};
    layers.push_back(std::move(seed));
  }
  if (M == 0) {
    Mat final_W(1, 1);
    final_W.at(0, 0) = w;
    return Network(input_dim, std::move(layers), std::move(final_W), grid_c);
  }
  // the two chain outputs each equal 2^{M-1}, so (w, w) emits w 2^M = v
  Network chain = pow2_scaling_net(M, grid_c);
  for (const Layer& l : chain.hidden) layers.push_back(l);
  Mat final_W(1, 2);
  final_W.at(0, 0) = w;
  final_W.at(0, 1) = w;
  return Network(input_dim, std::move(layers), std::move(final_W), grid_c);
}

}  // namespace tsybnet
