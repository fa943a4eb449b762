#pragma once

// Feedforward ReLU networks with layered weight/shift representation.
//
// A network with L layers is the sequence (W_1, b_1, ..., W_L, b_L, W_{L+1});
// its realization is  x |-> W_{L+1} s(W_L ... s(W_1 x - b_1) ...)  where s is
// the componentwise ReLU and shifts are subtracted inside the activation.
// There is no shift after the final matrix. L = 0 means x |-> W x.
// All weights and shifts lie on the dyadic grid of the declared exponent.

#include <cstddef>
#include <span>
#include <vector>

#include "tsybnet/dyadic.hpp"

namespace tsybnet {

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // row-major

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

struct Layer {
  Mat W;
  std::vector<double> b;  // one shift per unit
};

struct Network {
  int input_dim = 0;
  std::vector<Layer> hidden;  // layers 1..L
  Mat final_W;                // W_{L+1}
  int grid_c = 0;

  Network() = default;
  Network(int in_dim, std::vector<Layer> layers, Mat final, int grid)
      : input_dim(in_dim), hidden(std::move(layers)), final_W(std::move(final)), grid_c(grid) {
    validate_shape();
  }

  int layer_count() const { return static_cast<int>(hidden.size()); }
  int output_dim() const { return final_W.rows; }

  std::vector<int> dims() const {
    std::vector<int> d;
    d.push_back(input_dim);
    for (const Layer& l : hidden) d.push_back(l.W.rows);
    d.push_back(final_W.rows);
    return d;
  }

  void validate_shape() const {
    int prev = input_dim;
    if (prev <= 0) throw error("network input dimension must be positive");
    for (const Layer& l : hidden) {
      if (l.W.cols != prev) throw error("layer weight matrix has wrong input width");
      if (static_cast<int>(l.b.size()) != l.W.rows)
        throw error("shift vector length does not match layer width");
      if (l.W.rows <= 0) throw error("layer width must be positive");
      prev = l.W.rows;
    }
    if (final_W.cols != prev) throw error("final matrix has wrong input width");
    if (final_W.rows <= 0) throw error("output dimension must be positive");
  }
};

// exact count of nonzero weight and shift entries
inline std::int64_t sparsity(const Network& net) {
  std::int64_t s = 0;
  for (const Layer& l : net.hidden) {
    for (double w : l.W.a) s += (w != 0.0);
    for (double v : l.b) s += (v != 0.0);
  }
  for (double w : net.final_W.a) s += (w != 0.0);
  return s;
}

// every weight and shift on the declared grid, |w| <= 1
inline bool on_grid(const Network& net) {
  const WeightGrid g(net.grid_c);
  for (const Layer& l : net.hidden) {
    for (double w : l.W.a)
      if (!g.contains(w)) return false;
    for (double v : l.b)
      if (!g.contains(v)) return false;
  }
  for (double w : net.final_W.a)
    if (!g.contains(w)) return false;
  return true;
}

inline void realize_into(const Network& net, std::span<const double> x,
                         std::vector<double>& cur, std::vector<double>& nxt,
                         std::vector<double>& out) {
  if (static_cast<int>(x.size()) != net.input_dim)
    throw error("realize: input dimension mismatch");
  cur.assign(x.begin(), x.end());
  for (const Layer& l : net.hidden) {
    nxt.assign(static_cast<std::size_t>(l.W.rows), 0.0);
    for (int r = 0; r < l.W.rows; ++r) {
      double acc = 0.0;
      const double* row = l.W.a.data() + static_cast<std::size_t>(r) * l.W.cols;
      for (int c = 0; c < l.W.cols; ++c) acc += row[c] * cur[static_cast<std::size_t>(c)];
      acc -= l.b[static_cast<std::size_t>(r)];
      nxt[static_cast<std::size_t>(r)] = acc > 0.0 ? acc : 0.0;
    }
    cur.swap(nxt);
  }
  out.assign(static_cast<std::size_t>(net.final_W.rows), 0.0);
  for (int r = 0; r < net.final_W.rows; ++r) {
    double acc = 0.0;
    const double* row = net.final_W.a.data() + static_cast<std::size_t>(r) * net.final_W.cols;
    for (int c = 0; c < net.final_W.cols; ++c) acc += row[c] * cur[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = acc;
  }
}

inline std::vector<double> realize(const Network& net, std::span<const double> x) {
  std::vector<double> cur, nxt, out;
  realize_into(net, x, cur, nxt, out);
  return out;
}

// scalar-output convenience
inline double realize1(const Network& net, std::span<const double> x) {
  if (net.output_dim() != 1) throw error("realize1 requires a scalar-output network");
  return realize(net, x)[0];
}

}  // namespace tsybnet
