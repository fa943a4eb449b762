#pragma once

// Exhaustive enumeration of the finite class of quantized sparse ReLU
// networks, together with the closed-form bound on its size:
//   |class| <= ((d s0 + min(s0, L0) (s0+1)^2) 2^{c+2})^{s0}.
//
// A configuration is a tuple (layer count, hidden widths, entry values).
// Only width-bounded representatives are enumerated: widths m_i <= s0 and at
// most min(s0, L0) layers, which realizes every set in the class. Canonical
// order: layer count ascending, widths lexicographic, then within a fixed
// architecture by nonzero count, support positions (layer-major, entry-major)
// and value tuples with grid values ascending.

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tsybnet/network.hpp"

namespace tsybnet {

using BigInt = boost::multiprecision::cpp_int;

struct ClassBudget {
  int L0 = 1;  // max layers
  int s0 = 2;  // max sparsity, > 1
  int c = 0;   // grid exponent
  int d = 2;   // input dimension

  void validate() const {
    if (s0 <= 1) throw error("class budget requires s0 > 1");
    if (L0 < 0 || c < 0 || d < 1) throw error("class budget fields must be non-negative");
  }
};

inline BigInt count_bound(const ClassBudget& b) {
  b.validate();
  const BigInt V = BigInt(b.d) * b.s0 + BigInt(std::min(b.s0, b.L0)) * (BigInt(b.s0) + 1) * (BigInt(b.s0) + 1);
  const BigInt base = V * (BigInt(1) << (b.c + 2));
  return boost::multiprecision::pow(base, static_cast<unsigned>(b.s0));
}

// log of count_bound, overflow-free for class-growth audits
inline double log_count_bound(const ClassBudget& b) {
  b.validate();
  const double V = static_cast<double>(b.d) * b.s0 +
                   std::min(b.s0, b.L0) * (b.s0 + 1.0) * (b.s0 + 1.0);
  return b.s0 * (std::log(V) + (b.c + 2) * std::log(2.0));
}

namespace detail {

// slot layout of one architecture: W1 row-major, b1, W2, b2, ..., final W
struct ArchSlots {
  int input_dim = 0;
  std::vector<int> widths;
  int total = 0;

  ArchSlots(int d, const std::vector<int>& m) : input_dim(d), widths(m) {
    int prev = d;
    for (int w : m) {
      total += w * prev + w;
      prev = w;
    }
    total += prev;  // final 1-row matrix
  }
};

inline Network make_skeleton(int d, const std::vector<int>& widths, int grid_c) {
  std::vector<Layer> layers;
  int prev = d;
  for (int w : widths) {
    Layer l;
    l.W = Mat(w, prev);
    l.b.assign(static_cast<std::size_t>(w), 0.0);
    layers.push_back(std::move(l));
    prev = w;
  }
  return Network(d, std::move(layers), Mat(1, prev), grid_c);
}

// write value into the flat slot index of the layout above
inline void set_slot(Network& net, const ArchSlots& arch, int slot, double v) {
  int off = slot;
  for (Layer& l : net.hidden) {
    const int wn = l.W.rows * l.W.cols;
    if (off < wn) {
      l.W.a[static_cast<std::size_t>(off)] = v;
      return;
    }
    off -= wn;
    if (off < l.W.rows) {
      l.b[static_cast<std::size_t>(off)] = v;
      return;
    }
    off -= l.W.rows;
  }
  net.final_W.a[static_cast<std::size_t>(off)] = v;
  (void)arch;
}

inline double get_slot(const Network& net, const ArchSlots& arch, int slot) {
  int off = slot;
  for (const Layer& l : net.hidden) {
    const int wn = l.W.rows * l.W.cols;
    if (off < wn) return l.W.a[static_cast<std::size_t>(off)];
    off -= wn;
    if (off < l.W.rows) return l.b[static_cast<std::size_t>(off)];
    off -= l.W.rows;
  }
  (void)arch;
  return net.final_W.a[static_cast<std::size_t>(off)];
}

}  // namespace detail

// Yields every configuration in canonical order. Throws
// infeasible_budget_error when count_bound(budget) exceeds `limit`.
inline std::uint64_t enumerate_class(const ClassBudget& budget, std::uint64_t limit,
                                     const std::function<void(const Network&)>& emit) {
  budget.validate();
  const BigInt bound = count_bound(budget);
  if (bound > BigInt(limit))
    throw infeasible_budget_error(
        "enumeration refused: count bound " + bound.str() + " exceeds limit " +
            std::to_string(limit),
        bound.str());

  const WeightGrid grid(budget.c);
  std::vector<double> nonzero;  // ascending
  for (double v : grid.values())
    if (v != 0.0) nonzero.push_back(v);

  std::uint64_t emitted = 0;
  const int max_layers = std::min(budget.s0, budget.L0);

  auto emit_arch = [&](const std::vector<int>& widths) {
    const detail::ArchSlots arch(budget.d, widths);
    Network net = detail::make_skeleton(budget.d, widths, budget.c);

    std::vector<int> support(static_cast<std::size_t>(budget.s0), 0);
    std::vector<int> valsel(static_cast<std::size_t>(budget.s0), 0);

    // nonzero count k, support combination, value odometer
    for (int k = 0; k <= std::min(budget.s0, arch.total); ++k) {
      if (k == 0) {
        emit(net);
        ++emitted;
        continue;
      }
      for (int i = 0; i < k; ++i) support[static_cast<std::size_t>(i)] = i;
      bool more_support = true;
      while (more_support) {
        std::fill(valsel.begin(), valsel.begin() + k, 0);
        bool more_vals = true;
        while (more_vals) {
          for (int i = 0; i < k; ++i)
            detail::set_slot(net, arch, support[static_cast<std::size_t>(i)],
                             nonzero[static_cast<std::size_t>(valsel[static_cast<std::size_t>(i)])]);
          emit(net);
          ++emitted;
          if (emitted > limit)
            throw infeasible_budget_error("enumeration exceeded limit mid-stream",
                                          bound.str());
          // advance value odometer, last slot fastest
          int pos = k - 1;
          while (pos >= 0) {
            if (++valsel[static_cast<std::size_t>(pos)] <
                static_cast<int>(nonzero.size()))
              break;
            valsel[static_cast<std::size_t>(pos)] = 0;
            --pos;
          }
          more_vals = pos >= 0;
        }
        for (int i = 0; i < k; ++i)
          detail::set_slot(net, arch, support[static_cast<std::size_t>(i)], 0.0);
        // advance support combination
        int pos = k - 1;
        while (pos >= 0 && support[static_cast<std::size_t>(pos)] ==
                               arch.total - k + pos)
          --pos;
        if (pos < 0) {
          more_support = false;
        } else {
          ++support[static_cast<std::size_t>(pos)];
          for (int i = pos + 1; i < k; ++i)
            support[static_cast<std::size_t>(i)] = support[static_cast<std::size_t>(i - 1)] + 1;
        }
      }
    }
  };

  // layer count ascending, widths lexicographic
  std::vector<int> widths;
  std::function<void(int)> fill = [&](int togo) {
    if (togo == 0) {
      emit_arch(widths);
      return;
    }
    for (int w = 1; w <= budget.s0; ++w) {
      widths.push_back(w);
      fill(togo - 1);
      widths.pop_back();
    }
  };
  for (int L = 0; L <= max_layers; ++L) {
    widths.clear();
    fill(L);
  }
  return emitted;
}

// collect variant for small budgets
inline std::vector<Network> enumerate_class_collect(const ClassBudget& budget,
                                                    std::uint64_t limit) {
  std::vector<Network> out;
  enumerate_class(budget, limit, [&](const Network& n) { out.push_back(n); });
  return out;
}

// realization fingerprint on a probe grid, for realization-level dedup
inline std::string realization_fingerprint(const Network& net,
                                           const std::vector<std::vector<double>>& probes) {
  std::string key;
  key.reserve(probes.size() * 12);
  std::vector<double> cur, nxt, out;
  for (const auto& p : probes) {
    realize_into(net, p, cur, nxt, out);
    for (double v : out) {
      // quantize to 1e-12 to absorb float noise
      const long long q = std::llround(v * 1e12);
      key.append(reinterpret_cast<const char*>(&q), sizeof(q));
    }
  }
  return key;
}

}  // namespace tsybnet
