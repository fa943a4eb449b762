#include "doctest.h"

#include <cmath>

#include "tsybnet/erm.hpp"

using namespace tsybnet;

namespace {

Dataset tiny_dataset(std::uint64_t seed, int n, double boundary = 0.5, double beta1 = 0.0) {
  TsybakovDistribution q;
  q.d = 2;
  q.beta1 = beta1;
  q.k2 = q.k3 = 0.5;
  q.gamma_low = [boundary](std::span<const double>) { return boundary; };
  return sample(q, n, seed);
}

Dataset labelled(std::vector<std::array<double, 2>> xs, std::vector<int> ys) {
  Dataset d;
  d.d = 2;
  for (auto& x : xs) {
    d.points.push_back(x[0]);
    d.points.push_back(x[1]);
  }
  d.labels = std::move(ys);
  return d;
}

}  // namespace

TEST_CASE("empirical risk basics and recount oracle") {
  Dataset all1 = labelled({{0.1, 0.1}, {0.5, 0.9}, {0.8, 0.3}}, {1, 1, 1});
  Hypothesis whole = analytic_hypothesis([](std::span<const double>) { return true; });
  Hypothesis empty = analytic_hypothesis([](std::span<const double>) { return false; });
  CHECK(empirical_risk(whole, all1) == 0.0);
  CHECK(empirical_risk(empty, all1) == 1.0);

  // random instance vs brute-force recount
  Dataset data = tiny_dataset(12, 200);
  Hypothesis half = analytic_hypothesis([](std::span<const double> x) { return x[0] <= 0.5; });
  std::int64_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const bool in = data.point(i)[0] <= 0.5;
    if ((in ? 1 : 0) != data.labels[i]) ++wrong;
  }
  CHECK(empirical_risk(half, data) == static_cast<double>(wrong) / 200.0);
  // risks live on the 1/n grid
  const double r = empirical_risk(half, data);
  CHECK(r * 200.0 == std::nearbyint(r * 200.0));

  Dataset none;
  none.d = 2;
  CHECK_THROWS_AS(empirical_risk(whole, none), error);
}

TEST_CASE("exact ERM equals an independent brute-force minimizer") {
  ClassBudget budget{1, 2, 1, 2};
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    Dataset data = tiny_dataset(seed, 16);
    ErmReport rep = erm_exact(budget, data);

    // independent brute force over the same enumerated class
    double best = 2.0;
    std::vector<double> c1, c2, c3;
    enumerate_class(budget, 1u << 20, [&](const Network& net) {
      std::int64_t wrong = 0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        realize_into(net, data.point(i), c1, c2, c3);
        wrong += ((std::abs(c3[0] - 1.0) <= 1e-9 ? 1 : 0) != data.labels[i]);
      }
      best = std::min(best, static_cast<double>(wrong) / static_cast<double>(data.size()));
    });
    CHECK(rep.risk == best);
    CHECK(rep.mode == "exact");
    CHECK(empirical_risk(rep.chosen, data) == rep.risk);
  }
}

TEST_CASE("exact ERM tie-break picks the first candidate in canonical order") {
  // dataset whose minimum is achieved by many nets (e.g. all labels 1)
  Dataset data = labelled({{0.2, 0.2}, {0.7, 0.7}}, {1, 1});
  ClassBudget budget{1, 2, 0, 2};
  ErmReport a = erm_exact(budget, data);
  ErmReport b = erm_exact(budget, data);
  REQUIRE(a.chosen.net);
  REQUIRE(b.chosen.net);
  CHECK(a.risk == b.risk);
  CHECK(a.chosen.net->dims() == b.chosen.net->dims());
  CHECK(a.chosen.net->final_W.a == b.chosen.net->final_W.a);
  for (std::size_t i = 0; i < a.chosen.net->hidden.size(); ++i) {
    CHECK(a.chosen.net->hidden[i].W.a == b.chosen.net->hidden[i].W.a);
    CHECK(a.chosen.net->hidden[i].b == b.chosen.net->hidden[i].b);
  }
}

TEST_CASE("exact ERM refuses oversized budgets") {
  Dataset data = tiny_dataset(1, 8);
  ClassBudget big{4, 8, 6, 2};
  CHECK_THROWS_AS(erm_exact(big, data), infeasible_budget_error);
}

TEST_CASE("separable dataset reaches zero risk") {
  // all labels 1: the enumerated constant-one net (the whole cube) separates
  TsybakovDistribution q;
  q.d = 2;
  q.beta1 = 0.0;
  q.k2 = q.k3 = 1.0;
  q.gamma_low = [](std::span<const double>) { return 1.0; };  // f == 1
  Dataset data = sample(q, 24, 3);
  ErmReport rep = erm_exact(ClassBudget{1, 2, 1, 2}, data);
  CHECK(rep.risk == 0.0);
  const double probe[] = {0.37, 0.81};
  CHECK(rep.chosen.member(probe));
}

TEST_CASE("staircase fit and hypothesis") {
  Dataset data = tiny_dataset(7, 512, 0.5);
  StaircaseSpec sc = fit_staircase(data, 0, +1, 8, 13);
  CHECK(sc.values.size() == 8);
  for (double v : sc.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  Hypothesis h = staircase_hypothesis(sc, 2, 20);
  CHECK(h.net);
  CHECK(h.boundary.has_value());
  CHECK(on_grid(*h.net));

  // structural membership agrees with the realized network
  SplitRng rng(5);
  for (int i = 0; i < 500; ++i) {
    const double x[] = {rng.next_unit(), rng.next_unit()};
    CHECK(h.member(x) == membership(*h.net, x));
  }
}

TEST_CASE("heuristic matches exact on an enumerable micro-suite") {
  ClassBudget budget{1, 2, 1, 2};
  int hit = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Dataset data = tiny_dataset(seed, 24);
    ErmReport exact = erm_exact(budget, data);
    HeuristicConfig cfg;
    cfg.seed = seed;
    cfg.restarts = 12;
    cfg.iters = 600;
    cfg.anneal_temp = 0.3;
    cfg.structured = false;  // honest comparison of the search itself
    ErmReport heur = erm_heuristic(budget, data, cfg);
    ++total;
    hit += (heur.risk <= exact.risk + 1e-12);
    // trace is non-increasing and ends at the reported risk
    for (std::size_t i = 1; i < heur.trace.size(); ++i)
      CHECK(heur.trace[i] <= heur.trace[i - 1]);
    CHECK(heur.trace.back() == heur.risk);
  }
  CHECK(hit >= (total * 9) / 10);
}

TEST_CASE("heuristic with zero iterations returns the best initialization") {
  Dataset data = tiny_dataset(9, 128);
  HeuristicConfig cfg;
  cfg.seed = 2;
  cfg.restarts = 3;
  cfg.iters = 0;
  ErmReport rep = erm_heuristic(ClassBudget{32, 400, 24, 2}, data, cfg);
  CHECK(rep.risk <= 1.0);
  CHECK(rep.candidates > 0);
  CHECK(rep.mode == "heuristic");
  // deterministic per seed
  ErmReport rep2 = erm_heuristic(ClassBudget{32, 400, 24, 2}, data, cfg);
  CHECK(rep.risk == rep2.risk);
  CHECK(rep.chosen.provenance == rep2.chosen.provenance);
}

TEST_CASE("excess risk examples") {
  TsybakovDistribution q;
  q.d = 2;
  q.beta1 = 1.0;
  q.k2 = q.k3 = 0.5;
  q.gamma_low = [](std::span<const double>) { return 0.5; };

  // the Bayes set itself: (0, 0)
  Hypothesis bayes = analytic_hypothesis([&](std::span<const double> x) {
    return bayes_membership(q, x);
  });
  auto e0 = excess_risk(q, bayes, QuadratureSpec{256});
  CHECK(e0.d_fq == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(e0.d_delta == doctest::Approx(0.0).epsilon(1e-9));

  // complement of the Bayes set under f == 1: both metrics are 1
  TsybakovDistribution ones;
  ones.d = 2;
  ones.beta1 = 0.0;
  ones.k2 = ones.k3 = 1.0;
  ones.gamma_low = [](std::span<const double>) { return 1.0; };
  Hypothesis comp = analytic_hypothesis([](std::span<const double>) { return false; });
  auto e1 = excess_risk(ones, comp, QuadratureSpec{128});
  CHECK(e1.d_fq == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(e1.d_delta == doctest::Approx(1.0).epsilon(1e-9));

  // slab hypothesis at kappa = 2: d_fq = k delta^2 / 2, d_delta = delta
  const double delta = 0.0625;
  Hypothesis slab;
  slab.member = [&](std::span<const double> x) { return x[0] <= 0.5 + delta; };
  Hypothesis::BoundaryForm bf;
  bf.j = 0;
  bf.iota = +1;
  bf.gamma = [&](std::span<const double>) { return 0.5 + delta; };
  slab.boundary = bf;
  auto e2 = excess_risk(q, slab, QuadratureSpec{512});
  CHECK(e2.d_delta == doctest::Approx(delta).epsilon(1e-9));
  CHECK(e2.d_fq == doctest::Approx(0.5 * delta * delta / 2.0).epsilon(1e-9));
  // the kappa relation d_fq = c d_delta^kappa with c = k/2
  CHECK(e2.d_fq / std::pow(e2.d_delta, 2.0) == doctest::Approx(0.25).epsilon(1e-6));
}
