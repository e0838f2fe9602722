#include <doctest.h>

#include <cmath>
#include <random>

#include "ode_trials.hpp"
#include "parastab/errors.hpp"
#include "parastab/ode_comparison.hpp"

using namespace parastab;

TEST_CASE("linear ODE") {
  OdeProblem p;
  p.C1 = 1.3, p.C2 = 1e-300, p.p = 1, p.w0 = 0.8;
  const auto s = solve(p, 2.0, 1e-4);
  CHECK_FALSE(s.blowup);
  for (std::size_t i = 0; i < s.t.size(); i += 997)
    CHECK(std::abs(s.w[i] / (std::exp(-1.3 * s.t[i]) * 0.8) - 1) <= 1e-8);
}

TEST_CASE("equilibrium and blow-up") {
  OdeProblem p;
  p.C1 = 2, p.C2 = 0.5, p.p = 2;
  p.w0 = std::pow(p.C1 / p.C2, 1 / p.p);
  const auto s = solve(p, 1.0, 1e-4);
  CHECK(s.w.back() == doctest::Approx(p.w0).epsilon(1e-10));
  p.w0 *= 1.01;
  const auto b = solve(p, 20.0, 1e-4);
  CHECK(b.blowup);
  CHECK(b.t.back() < 20.0);
}

TEST_CASE("odd symmetry of the flow") {
  OdeProblem p;
  p.C1 = 1.5, p.C2 = 2, p.p = 1.5, p.w0 = 0.6;
  const auto a = solve(p, 3.0, 1e-3);
  p.w0 = -0.6;
  const auto b = solve(p, 3.0, 1e-3);
  for (std::size_t i = 0; i < a.w.size(); ++i) CHECK(std::abs(a.w[i] + b.w[i]) <= 1e-10);
}

TEST_CASE("proposition bounds for h = 0") {
  OdeProblem p;
  p.C1 = 2, p.C2 = 1, p.p = 1, p.w0 = 0.5;
  CHECK(verify_prop_odeh0(p, 5.0, default_ode_dt(p)));
  p.w0 = 0;
  CHECK(verify_prop_odeh0(p, 5.0, default_ode_dt(p)));
  p.w0 = -0.5;
  CHECK(verify_prop_odeh0(p, 5.0, default_ode_dt(p)));
  p.w0 = 2.5;
  CHECK_THROWS_AS(verify_prop_odeh0(p, 5.0, 1e-3), InvalidArgument);
  p.w0 = 0.1;
  p.h = [](double) { return 1.0; };
  CHECK_THROWS_AS(verify_prop_odeh0(p, 5.0, 1e-3), InvalidArgument);
}

TEST_CASE("lemma constants by substitution") {
  OdeProblem p;
  p.C1 = 2, p.C2 = 1, p.p = 1, p.r = 2, p.w0 = 0.1;
  p.h = [](double t) { return t < 1 ? 0.1 : 0.0; };  // ||h||_{L^2} = 0.1
  const auto res = verify_lemma_odeh(p, 0.5, 3.0, 1e-4, 1e-6, 0.1);
  CHECK(res.eps == doctest::Approx(1.9));
  CHECK(res.eps_tilde == doctest::Approx(1.6));
  CHECK(res.status == LemmaStatus::Holds);
}

TEST_CASE("lemma with h = 0 reduces to the proposition") {
  OdeProblem p;
  p.C1 = 3, p.C2 = 2, p.p = 2, p.w0 = 0.3;
  const auto res = verify_lemma_odeh(p, 0.5, 4.0, default_ode_dt(p));
  CHECK(res.status == LemmaStatus::Holds);
  CHECK(res.eps_tilde <= res.eps);
  CHECK(verify_prop_odeh0(p, 4.0, default_ode_dt(p)));
}

TEST_CASE("lemma hypothesis failure is distinct from a violated bound") {
  OdeProblem p;
  p.C1 = 1, p.C2 = 1, p.p = 1, p.w0 = 0.9;
  CHECK(verify_lemma_odeh(p, 0.5, 1.0, 1e-3).status == LemmaStatus::HypothesisNotMet);
  CHECK(verify_lemma_odeh(p, 1.5, 1.0, 1e-3).status == LemmaStatus::HypothesisNotMet);
}

TEST_CASE("sampled h and its L^r norm") {
  std::vector<double> t, v;
  for (int i = 0; i <= 100; ++i) t.push_back(0.01 * i), v.push_back(2.0);
  OdeProblem p;
  p.r = 3;
  p.h = sampled_function(t, v);
  CHECK(h_Lr_norm(p, 1.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(p.h_at(1.5) == 0.0);
  CHECK(p.h_at(0.505) == doctest::Approx(2.0));
}

TEST_CASE("randomized admissible problems") {
  std::mt19937 rng(2024);
  int holds = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto tr = testing::random_trial(rng);
    const auto res = verify_lemma_odeh(tr.prob, tr.eps_bar, tr.T, default_ode_dt(tr.prob));
    if (res.status != LemmaStatus::Holds)
      MESSAGE("trial " << trial << " status " << static_cast<int>(res.status) << " excess " << res.worst_excess);
    CHECK(res.status == LemmaStatus::Holds);
    CHECK(0 < tr.eps_bar);
    CHECK(tr.eps_bar < res.eps_tilde);
    CHECK(res.eps_tilde <= res.eps);
    OdeProblem h0 = tr.prob;
    h0.h = nullptr;
    CHECK(verify_prop_odeh0(h0, tr.T, default_ode_dt(h0)));
    holds += res.status == LemmaStatus::Holds;
  }
  CHECK(holds == 200);
}
