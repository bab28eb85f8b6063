#include <doctest.h>

#include <cmath>

#include "bfai/errors.hpp"
#include "bfai/experiments.hpp"
#include "bfai/problem.hpp"

using namespace bfai;

TEST_CASE("fifty-arm curves match hand-evaluated breakpoints") {
  ExperimentSpec e1 = build(ExperimentId::Exp1);
  // x = 26 is feasible by -0.08, x = 25 infeasible by +0.08.
  CHECK(e1.instance.mu(25, 1) == doctest::Approx(-0.08));
  CHECK(e1.instance.mu(24, 1) == doctest::Approx(0.08));
  CHECK(e1.instance.mu(0, 0) == doctest::Approx(0.0));
  CHECK(e1.instance.mu(49, 0) == doctest::Approx(0.08 * (1.0 - 50.0)));

  ExperimentSpec e2 = build(ExperimentId::Exp2);
  // y3 flips sign between x = 20 and x = 21.
  CHECK(e2.instance.mu(19, 2) == doctest::Approx(0.01));
  CHECK(e2.instance.mu(20, 2) == doctest::Approx(-0.01));
  CHECK(e2.instance.mu(0, 2) == doctest::Approx(0.01 * 400.0));
  // y4 and y5 flip between x = 40 and x = 41.
  CHECK(e2.instance.mu(39, 3) == doctest::Approx(-0.1));
  CHECK(e2.instance.mu(40, 3) == doctest::Approx(0.1));
  CHECK(e2.instance.mu(39, 4) == doctest::Approx(-0.03));
  CHECK(e2.instance.mu(40, 4) == doctest::Approx(0.03));
  CHECK(e2.instance.mu(49, 4) == doctest::Approx(0.3));

  ExperimentSpec e4 = build(ExperimentId::Exp4);
  CHECK(e4.instance.mu(19, 2) == doctest::Approx(0.11));
  CHECK(e4.instance.mu(20, 2) == doctest::Approx(-0.11));
}

TEST_CASE("per-measure variances") {
  ExperimentSpec e2 = build(ExperimentId::Exp2);
  for (int j = 0; j < 5; ++j) CHECK(e2.instance.sigma2(7, j) == 0.49);

  ExperimentSpec e3 = build(ExperimentId::Exp3);
  CHECK(e3.instance.sigma2(0, 0) == 0.36);
  CHECK(e3.instance.sigma2(10, 1) == 0.81);
  CHECK(e3.instance.sigma2(20, 2) == 0.64);
  CHECK(e3.instance.sigma2(30, 3) == 0.49);
  CHECK(e3.instance.sigma2(40, 4) == 1.0);
}

TEST_CASE("dose-finding instance") {
  ExperimentSpec dose = build(ExperimentId::Dose);
  CHECK(dose.instance.k == 5);
  CHECK(dose.instance.m == 1);
  CHECK(dose.instance.mu(1, 0) == 0.469);
  CHECK(dose.instance.mu(1, 1) == 0.184);
  CHECK(dose.instance.gamma[0] == 0.25);
  CHECK(dose.instance.sigma2(3, 0) == 0.01);
}

TEST_CASE("every instance classifies to its documented best arm") {
  const int expected_best[] = {26, 26, 26, 26, 10, 2};
  int idx = 0;
  for (auto id : all_experiment_ids()) {
    ExperimentSpec spec = build(id);
    ArmClassification cls = classify_arms(spec.instance.mu, spec.instance.gamma);
    CHECK(cls.best + 1 == expected_best[idx++]);
    CHECK(spec.n0 == 6);
    REQUIRE(spec.budgets.size() == 3);
    CHECK(spec.budgets[0] < spec.budgets[1]);
    CHECK(spec.budgets[1] < spec.budgets[2]);
  }
}

TEST_CASE("reference table rows") {
  auto find = [](const std::vector<ReferencePfs>& rows, const char* algorithm, double beta,
                 long budget) {
    for (const ReferencePfs& r : rows)
      if (r.algorithm == algorithm && r.beta == beta && r.budget == budget) return r.pfs;
    FAIL("row not found");
    return -1.0;
  };
  CHECK(find(published_reference(ExperimentId::Exp5), "bfai-ts", -1.0, 800) == 0.00);
  CHECK(find(published_reference(ExperimentId::Exp1), "bfai-ts", 0.5, 3400) == 0.02);
  CHECK(find(published_reference(ExperimentId::Dose), "uniform", 0.0, 8000) == 0.13);
  CHECK(published_reference(ExperimentId::Exp3).size() == 12);
}

TEST_CASE("experiment id parsing") {
  CHECK(parse_experiment_id("exp5") == ExperimentId::Exp5);
  CHECK(parse_experiment_id("dose") == ExperimentId::Dose);
  CHECK_FALSE(parse_experiment_id("exp9").has_value());
  CHECK_THROWS_AS(build("exp9"), UnknownIdError);
  for (auto id : all_experiment_ids()) CHECK(parse_experiment_id(to_string(id)) == id);
}
