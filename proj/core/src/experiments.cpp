#include "bfai/experiments.hpp"

#include <array>
#include <cmath>

#include "bfai/errors.hpp"

namespace bfai {

namespace {

// Piecewise measure curves for the 50-arm suite, x = 1..50.
double y1(double x) { return 0.08 * (1.0 - x); }
double y2(double x) { return x <= 25.0 ? 0.08 * (26.0 - x) : 0.08 * (25.0 - x); }
double y3(double x) {
  return x <= 20.0 ? 0.01 * (21.0 - x) * (21.0 - x) : -0.01 * (20.0 - x) * (20.0 - x);
}
double y3p(double x) {
  return x <= 20.0 ? 0.01 * (21.0 - x) * (21.0 - x) + 0.1
                   : -0.01 * (20.0 - x) * (20.0 - x) - 0.1;
}
double y4(double x) { return x <= 40.0 ? -0.1 * (41.0 - x) : 0.1 * (x - 40.0); }
double y5(double x) { return x <= 40.0 ? -0.03 * (41.0 - x) : 0.03 * (x - 40.0); }

Matrix curve_means(int k, const std::vector<double (*)(double)>& curves) {
  Matrix mu(k, static_cast<int>(curves.size()));
  for (int i = 0; i < k; ++i) {
    double x = static_cast<double>(i + 1);
    for (size_t j = 0; j < curves.size(); ++j) mu(i, static_cast<int>(j)) = curves[j](x);
  }
  return mu;
}

Matrix per_measure_variances(int k, const std::vector<double>& v) {
  Matrix sigma2(k, static_cast<int>(v.size()));
  for (int i = 0; i < k; ++i)
    for (size_t j = 0; j < v.size(); ++j) sigma2(i, static_cast<int>(j)) = v[j];
  return sigma2;
}

constexpr std::array<double, 10> kTenArmObjective = {
    -1.8455, 0.2556, -1.7275, 0.0219, -1.0574, 1.7303, 1.6237, 1.8268, -1.6826, 1.8150};
constexpr std::array<double, 10> kTenArmConstraint = {
    -1.8441, -0.0028, 0.4682, -1.0172, 0.6831, -1.5495, 0.1442, 1.2425, 1.3175, -0.6513};

// Dose-finding arms: (efficacy, infection probability) per dosage level.
constexpr std::array<std::array<double, 2>, 5> kDoseMeans = {{
    {0.34, 0.259}, {0.469, 0.184}, {0.465, 0.209}, {0.537, 0.293}, {0.36, 0.16}}};

}  // namespace

std::optional<ExperimentId> parse_experiment_id(std::string_view name) {
  if (name == "exp1") return ExperimentId::Exp1;
  if (name == "exp2") return ExperimentId::Exp2;
  if (name == "exp3") return ExperimentId::Exp3;
  if (name == "exp4") return ExperimentId::Exp4;
  if (name == "exp5") return ExperimentId::Exp5;
  if (name == "dose") return ExperimentId::Dose;
  return std::nullopt;
}

std::string_view to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::Exp1: return "exp1";
    case ExperimentId::Exp2: return "exp2";
    case ExperimentId::Exp3: return "exp3";
    case ExperimentId::Exp4: return "exp4";
    case ExperimentId::Exp5: return "exp5";
    case ExperimentId::Dose: return "dose";
  }
  return "?";
}

std::vector<ExperimentId> all_experiment_ids() {
  return {ExperimentId::Exp1, ExperimentId::Exp2, ExperimentId::Exp3,
          ExperimentId::Exp4, ExperimentId::Exp5, ExperimentId::Dose};
}

ExperimentSpec build(ExperimentId id) {
  switch (id) {
    case ExperimentId::Exp1: {
      Matrix mu = curve_means(50, {&y1, &y2});
      Matrix sigma2 = per_measure_variances(50, {0.49, 0.49});
      return {id, ProblemInstance(std::move(mu), std::move(sigma2), {0.0}),
              {2100, 2500, 3400}, 6, 0.3218};
    }
    case ExperimentId::Exp2: {
      Matrix mu = curve_means(50, {&y1, &y2, &y3, &y4, &y5});
      Matrix sigma2 = per_measure_variances(50, {0.49, 0.49, 0.49, 0.49, 0.49});
      return {id, ProblemInstance(std::move(mu), std::move(sigma2), {0.0, 0.0, 0.0, 0.0}),
              {1000, 2500, 3500}, 6, 0.2449};
    }
    case ExperimentId::Exp3: {
      Matrix mu = curve_means(50, {&y1, &y2, &y3, &y4, &y5});
      Matrix sigma2 = per_measure_variances(50, {0.36, 0.81, 0.64, 0.49, 1.0});
      return {id, ProblemInstance(std::move(mu), std::move(sigma2), {0.0, 0.0, 0.0, 0.0}),
              {2000, 2400, 3700}, 6, 0.2709};
    }
    case ExperimentId::Exp4: {
      Matrix mu = curve_means(50, {&y1, &y2, &y3p, &y4, &y5});
      Matrix sigma2 = per_measure_variances(50, {0.36, 0.81, 0.64, 0.49, 1.0});
      return {id, ProblemInstance(std::move(mu), std::move(sigma2), {0.0, 0.0, 0.0, 0.0}),
              {2600, 3300, 3700}, 6, 0.2615};
    }
    case ExperimentId::Exp5: {
      Matrix mu(10, 2);
      for (int i = 0; i < 10; ++i) {
        mu(i, 0) = kTenArmObjective[static_cast<size_t>(i)];
        mu(i, 1) = kTenArmConstraint[static_cast<size_t>(i)];
      }
      Matrix sigma2 = per_measure_variances(10, {1.0, 1.0});
      return {id, ProblemInstance(std::move(mu), std::move(sigma2), {0.0}),
              {200, 400, 800}, 6, 0.4831};
    }
    case ExperimentId::Dose: {
      Matrix mu(5, 2);
      for (int i = 0; i < 5; ++i) {
        mu(i, 0) = kDoseMeans[static_cast<size_t>(i)][0];
        mu(i, 1) = kDoseMeans[static_cast<size_t>(i)][1];
      }
      Matrix sigma2 = per_measure_variances(5, {0.01, 0.01});
      return {id, ProblemInstance(std::move(mu), std::move(sigma2), {0.25}),
              {3500, 6000, 8000}, 6, 0.4986};
    }
  }
  throw UnknownIdError("build: unknown experiment id");
}

ExperimentSpec build(std::string_view name) {
  auto id = parse_experiment_id(name);
  if (!id) throw UnknownIdError("build: unknown experiment id '" + std::string(name) + "'");
  return build(*id);
}

std::vector<ReferencePfs> published_reference(ExperimentId id) {
  // beta column: 1 for the no-challenger variant, -1 for "optimal beta".
  struct Row {
    const char* algorithm;
    double beta;
    std::array<double, 3> pfs;
  };
  const std::vector<long>& budgets = build(id).budgets;
  std::array<Row, 4> rows{};
  switch (id) {
    case ExperimentId::Exp1:
      rows = {{{"bfai-ts-1", 1.0, {0.20, 0.17, 0.13}},
               {"uniform", 0.0, {0.61, 0.51, 0.46}},
               {"bfai-ts", 0.5, {0.11, 0.06, 0.02}},
               {"bfai-ts", -1.0, {0.07, 0.02, 0.01}}}};
      break;
    case ExperimentId::Exp2:
      rows = {{{"bfai-ts-1", 1.0, {0.38, 0.14, 0.10}},
               {"uniform", 0.0, {0.71, 0.59, 0.50}},
               {"bfai-ts", 0.5, {0.24, 0.09, 0.03}},
               {"bfai-ts", -1.0, {0.19, 0.02, 0.01}}}};
      break;
    case ExperimentId::Exp3:
      rows = {{{"bfai-ts-1", 1.0, {0.24, 0.19, 0.12}},
               {"uniform", 0.0, {0.46, 0.48, 0.39}},
               {"bfai-ts", 0.5, {0.12, 0.07, 0.05}},
               {"bfai-ts", -1.0, {0.09, 0.05, 0.01}}}};
      break;
    case ExperimentId::Exp4:
      rows = {{{"bfai-ts-1", 1.0, {0.13, 0.06, 0.04}},
               {"uniform", 0.0, {0.54, 0.49, 0.51}},
               {"bfai-ts", 0.5, {0.04, 0.02, 0.02}},
               {"bfai-ts", -1.0, {0.02, 0.01, 0.00}}}};
      break;
    case ExperimentId::Exp5:
      rows = {{{"bfai-ts-1", 1.0, {0.37, 0.25, 0.22}},
               {"uniform", 0.0, {0.37, 0.41, 0.34}},
               {"bfai-ts", 0.5, {0.25, 0.18, 0.15}},
               {"bfai-ts", -1.0, {0.11, 0.03, 0.00}}}};
      break;
    case ExperimentId::Dose:
      rows = {{{"bfai-ts-1", 1.0, {0.18, 0.09, 0.06}},
               {"uniform", 0.0, {0.27, 0.19, 0.13}},
               {"bfai-ts", 0.5, {0.13, 0.07, 0.05}},
               {"bfai-ts", -1.0, {0.11, 0.05, 0.01}}}};
      break;
  }

  std::vector<ReferencePfs> out;
  out.reserve(12);
  for (const Row& row : rows)
    for (size_t b = 0; b < 3; ++b)
      out.push_back({row.algorithm, row.beta, budgets[b], row.pfs[b]});
  return out;
}

}  // namespace bfai
