#include "doctest.h"

#include "cppc/conditions.hpp"

using namespace cppc;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ConstraintData ex58() {
  return ConstraintData::width_one(GroundCone::orthant(1), vec({0}), 0.0, {vec({1}), vec({1})}, {1, 2}, {1, 1});
}

ConstraintData ex64(Vector f0, double d0) {
  return ConstraintData::width_one(GroundCone::orthant(2), std::move(f0), d0, {vec({1, 2}), vec({2, 1})}, {1, 1},
                                   {1, 1});
}

}  // namespace

TEST_CASE("condition i") {
  CHECK(check_cond_i(ex58()) == std::vector<bool>{true, true});
  auto zero_g = ConstraintData::width_one(GroundCone::orthant(1), vec({0}), 0.0, {vec({1})}, {0}, {1});
  CHECK(check_cond_i(zero_g) == std::vector<bool>{false});
  auto neg_g = ConstraintData::width_one(GroundCone::orthant(1), vec({0}), 0.0, {vec({2})}, {-3}, {1});
  CHECK(check_cond_i(neg_g) == std::vector<bool>{false});
}

TEST_CASE("validation of constraint data") {
  auto bad = ex58();
  bad.d.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  auto bad0 = ex58();
  bad0.d0 = 1.0;
  CHECK_THROWS_AS(bad0.validate(), std::invalid_argument);
}

TEST_CASE("sufficient boundedness of a single F_i") {
  const auto d = ConstraintData::width_one(GroundCone::orthant(2), vec({1, 1}), 1.0, {vec({1, 0})}, {1}, {1});
  CHECK(check_Fi_bounded_sufficient(d, 0));
  CHECK(!check_Fi_bounded_sufficient(d, 1));
  CHECK(!check_Fi_bounded_sufficient(ex64(vec({0, 0}), 0.0), 0));
  CHECK(check_Fi_bounded_sufficient(ex64(vec({0, 0}), 0.0), 1));
}

TEST_CASE("boundedness through the recession cone") {
  CHECK(check_boundedness(ex64(vec({0, 0}), 0.0)).status == Boundedness::Bounded);
  const auto unb = ConstraintData::width_one(GroundCone::orthant(1), vec({0}), 0.0, {vec({-1})}, {1}, {0});
  CHECK(check_boundedness(unb).status == Boundedness::NotBounded);
  // Free coordinate pinned by nothing.
  const auto fr = ConstraintData::width_one(GroundCone::product({GroundCone::orthant(1), GroundCone::free(1)}),
                                            vec({0, 0}), 0.0, {vec({1, 0})}, {1}, {1});
  CHECK(check_boundedness(fr).status == Boundedness::NotBounded);
  CHECK(check_boundedness(ex58()).status == Boundedness::Bounded);
}

TEST_CASE("scalar multiplier feasibility") {
  const auto k = GroundCone::orthant(2);
  const auto same = scalar_lambda_feasible(vec({1, 2}), 1.0, vec({1, 2}), 1.0, k, LambdaSign::Free);
  REQUIRE(same.has_value());
  CHECK(*same == doctest::Approx(1.0));
  CHECK(!scalar_lambda_feasible(vec({1, 1}), 1.0, vec({2, 3}), 2.0, k, LambdaSign::Free).has_value());
  // u_{i*} = 2u, u_i = u, both d = 1: lambda = 1 works.
  const auto l = scalar_lambda_feasible(vec({4, 4}), 1.0, vec({2, 2}), 1.0, k, LambdaSign::Nonneg);
  REQUIRE(l.has_value());
  CHECK(*l >= 0.0);
  CHECK(*l <= 1.0);
  // Slack widens the interval.
  CHECK(!scalar_lambda_feasible(vec({1}), 1.0, vec({1}), 1.0 - 1e-7, GroundCone::orthant(1), LambdaSign::Free)
             .has_value());
  CHECK(scalar_lambda_feasible(vec({1}), 1.0, vec({1}), 1.0 - 1e-7, GroundCone::orthant(1), LambdaSign::Free, 1e-6)
            .has_value());
}

TEST_CASE("condition iii") {
  const auto r58 = check_cond_iii(ex58());
  REQUIRE(r58.certificate.has_value());
  CHECK(r58.certificate->pivot == 1);
  CHECK(r58.certificate->lambda == std::vector<double>{1.0, 1.0});
  CHECK(verify_cond_iii(ex58(), *r58.certificate));

  const auto d64 = ex64(vec({2, 2}), 1.0);
  const auto r64 = check_cond_iii(d64);
  REQUIRE(r64.certificate.has_value());
  CHECK(r64.certificate->pivot == 0);
  CHECK(r64.certificate->sign == LambdaSign::Free);
  CHECK(verify_cond_iii(d64, *r64.certificate));

  const auto none = ConstraintData::width_one(GroundCone::orthant(2), vec({0, 0}), 0.0,
                                              {vec({1, 0}), vec({0, 1})}, {1, 1}, {1, 1});
  const auto rn = check_cond_iii(none);
  CHECK(!rn.certificate.has_value());
  CHECK(!rn.diagnostics.empty());

  // A certificate for other data does not verify.
  CondIIICertificate wrong;
  wrong.pivot = 1;
  wrong.lambda = {1.0, 1.0};
  wrong.sign = LambdaSign::Nonneg;
  CHECK(!verify_cond_iii(none, wrong));
}

TEST_CASE("combined report") {
  const auto rep = check_conditions(ex58());
  CHECK(rep.all_pass());
  const auto unb = ConstraintData::width_one(GroundCone::orthant(1), vec({0}), 0.0, {vec({-1})}, {1}, {0});
  CHECK(!check_conditions(unb).all_pass());
}
