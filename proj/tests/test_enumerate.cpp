#include "doctest.h"

#include <set>

#include "tsybnet/enumerate.hpp"

using namespace tsybnet;

namespace {

// independent recomputation of the counting bound by plain repeated
// multiplication, kept deliberately separate from count_bound
BigInt bound_oracle(int d, int s0, int L0, int c) {
  BigInt v = 0;
  v += BigInt(d) * s0;
  BigInt sq = BigInt(s0) + 1;
  sq *= BigInt(s0) + 1;
  v += BigInt(std::min(s0, L0)) * sq;
  BigInt p2 = 1;
  for (int i = 0; i < c + 2; ++i) p2 *= 2;
  BigInt base = v * p2;
  BigInt out = 1;
  for (int i = 0; i < s0; ++i) out *= base;
  return out;
}

}  // namespace

TEST_CASE("count bound closed form") {
  // d=2, s0=2, L0=1, c=1: ((2*2 + 1*(2+1)^2) * 2^3)^2 = 10816
  ClassBudget b{1, 2, 1, 2};
  CHECK(count_bound(b) == BigInt(10816));
  CHECK(count_bound(b) == bound_oracle(2, 2, 1, 1));

  // min{s0, L0} kicks in for deep budgets
  ClassBudget deep{5, 2, 1, 2};
  CHECK(count_bound(deep) == count_bound(ClassBudget{2, 2, 1, 2}));
  CHECK(count_bound(deep) == bound_oracle(2, 2, 5, 1));

  // log variant agrees with the exact bound
  const double lg = log_count_bound(b);
  CHECK(lg == doctest::Approx(std::log(10816.0)).epsilon(1e-12));

  ClassBudget bad{1, 1, 0, 2};
  CHECK_THROWS_AS(count_bound(bad), error);
}

TEST_CASE("enumeration stays within the bound and respects the budget") {
  ClassBudget b{1, 2, 1, 2};
  std::uint64_t n = 0;
  enumerate_class(b, 1u << 20, [&](const Network& net) {
    ++n;
    CHECK(sparsity(net) <= b.s0);
    CHECK(net.layer_count() <= std::min(b.L0, b.s0));
    CHECK(on_grid(net));
    for (int w : net.dims()) CHECK(w <= std::max(b.d, b.s0));
  });
  CHECK(n > 0);
  CHECK(BigInt(n) <= count_bound(b));

  auto nets = enumerate_class_collect(b, 1u << 20);
  CHECK(nets.size() == n);
}

TEST_CASE("enumeration refuses oversized budgets with the computed bound") {
  ClassBudget b{3, 6, 4, 3};
  try {
    enumerate_class(b, 1000, [](const Network&) {});
    FAIL("expected refusal");
  } catch (const infeasible_budget_error& e) {
    CHECK(e.bound() == count_bound(b).str());
  }
  CHECK_THROWS_AS(enumerate_class(ClassBudget{1, 1, 0, 2}, 100, [](const Network&) {}), error);
}

TEST_CASE("canonical order is deterministic") {
  ClassBudget b{1, 2, 0, 2};
  auto a = enumerate_class_collect(b, 1u << 20);
  auto c = enumerate_class_collect(b, 1u << 20);
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].dims() == c[i].dims());
    CHECK(a[i].final_W.a == c[i].final_W.a);
  }
}

TEST_CASE("distinct realizations counted by probe fingerprint") {
  ClassBudget b{1, 2, 0, 2};
  std::vector<std::vector<double>> probes;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) probes.push_back({i / 6.0, j / 6.0});

  std::set<std::string> distinct;
  std::uint64_t total = 0;
  enumerate_class(b, 1u << 20, [&](const Network& net) {
    ++total;
    distinct.insert(realization_fingerprint(net, probes));
  });
  CHECK(distinct.size() < total);          // many configs share realizations
  CHECK(BigInt(total) <= count_bound(b));  // configurations within the bound
  CHECK(distinct.size() > 1);
}

TEST_CASE("micro-grid: enumerated count never exceeds the bound") {
  for (int d : {2, 3})
    for (int s0 : {2, 3})
      for (int L0 : {1, 2})
        for (int c : {0, 1}) {
          ClassBudget b{L0, s0, c, d};
          const BigInt bound = count_bound(b);
          if (bound > BigInt(200000)) continue;
          std::uint64_t n = 0;
          enumerate_class(b, 200000, [&](const Network&) { ++n; });
          CHECK(BigInt(n) <= bound);
        }
}
