#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ym/measure.hpp"
#include "ym/oscillation.hpp"

using namespace ym;

namespace {

PiecewiseFunction identity_on_unit() {
  return PiecewiseFunction(Interval(0, 1), {Piece::monotone(Interval(0, 1), parse("x"),
                                                            Direction::increasing)});
}

PiecewiseFunction constant_on(double lo, double hi, double p) {
  return PiecewiseFunction(Interval(lo, hi), {Piece::constant(Interval(lo, hi), p)});
}

PiecewiseFunction step_d(double a, double b) {
  ExampleParams params;
  params.a = a;
  params.b = b;
  return build_example(ExampleTag::d, params);
}

double arcsine_density(double y) { return 1.0 / (std::numbers::pi * std::sqrt(1 - y * y)); }

}  // namespace

TEST(Compute, StepFunctionAtoms) {
  const YoungMeasure ym = compute(step_d(1.0, 2.0));
  ASSERT_EQ(ym.atoms().size(), 2u);
  EXPECT_TRUE(ym.segments().empty());
  EXPECT_EQ(ym.atoms()[0].location, 1.0);
  EXPECT_NEAR(ym.atoms()[0].weight, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(ym.atoms()[1].location, 2.0);
  EXPECT_NEAR(ym.atoms()[1].weight, 2.0 / 3.0, 1e-15);
}

TEST(Compute, SingleConstantIsDirac) {
  const YoungMeasure ym = compute(constant_on(-2, 5, 0.25));
  ASSERT_EQ(ym.atoms().size(), 1u);
  EXPECT_EQ(ym.atoms()[0].location, 0.25);
  EXPECT_EQ(ym.atoms()[0].weight, 1.0);
}

TEST(Compute, EqualConstantsMerge) {
  PiecewiseFunction pf(Interval(0, 1), {Piece::constant(Interval(0, 0.25), 3),
                                        Piece::constant(Interval(0.25, 0.5), 1),
                                        Piece::constant(Interval(0.5, 1), 3)});
  const YoungMeasure ym = compute(pf);
  ASSERT_EQ(ym.atoms().size(), 2u);
  EXPECT_EQ(ym.atoms()[0].location, 1.0);
  EXPECT_EQ(ym.atoms()[1].location, 3.0);
  EXPECT_DOUBLE_EQ(ym.atoms()[1].weight, 0.75);
}

TEST(Compute, IdentityIsUniform) {
  const YoungMeasure ym = compute(identity_on_unit());
  EXPECT_TRUE(ym.atoms().empty());
  ASSERT_EQ(ym.segments().size(), 1u);
  for (double y : {0.0, 0.1, 0.5, 0.999, 1.0}) EXPECT_DOUBLE_EQ(density_at(ym, y), 1.0);
}

TEST(Compute, PropagatesValidationErrors) {
  PiecewiseFunction bad(Interval(0, 1), {Piece::constant(Interval(0, 0.5), 1)});
  EXPECT_THROW(compute(bad), ValidationError);
}

TEST(Density, ExampleB) {
  const YoungMeasure ym = compute(build_example(ExampleTag::b));
  EXPECT_NEAR(density_at(ym, 0.25), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(density_at(ym, 0.75), 4.0 / 3.0, 1e-15);
}

TEST(Density, SineAtZero) {
  const YoungMeasure ym = compute(build_example(ExampleTag::c));
  EXPECT_NEAR(density_at(ym, 0.0), 1.0 / std::numbers::pi, 1e-12);
}

TEST(Density, ZeroOutsideRangeAndForAtoms) {
  const YoungMeasure b = compute(build_example(ExampleTag::b));
  EXPECT_EQ(density_at(b, -0.1), 0.0);
  EXPECT_EQ(density_at(b, 1.1), 0.0);
  const YoungMeasure d = compute(step_d(1, 2));
  EXPECT_EQ(density_at(d, 1.0), 0.0);
}

TEST(Density, ByHandSumOverPieces) {
  // Oracle: inverse slopes of the sawtooth pieces added up directly.
  ExampleParams params;
  params.a = 2.0;
  params.b = 3.0;
  params.n = 4;
  const PiecewiseFunction pf = build_example(ExampleTag::a, params);
  const YoungMeasure ym = compute(pf);
  for (int i = 0; i < 1000; ++i) {
    const double y = 3.0 * (i + 0.5) / 1000;
    double by_hand = 0.0;
    for (const Piece& p : pf.pieces()) {
      const double slope = std::fabs(evaluate(p.monotone_body().derivative, 0.0));
      const Range r = image(p);
      if (y >= r.lo && y <= r.hi) by_hand += 1.0 / slope;
    }
    EXPECT_NEAR(density_at(ym, y), by_hand / 2.0, 1e-12);
  }
}

TEST(Density, SingularityForwarded) {
  const YoungMeasure ym = compute(build_example(ExampleTag::c));
  EXPECT_THROW(density_at(ym, 1.0), SingularityError);
}

TEST(Cdf, Examples) {
  const YoungMeasure arcsine = compute(build_example(ExampleTag::c));
  EXPECT_NEAR(cdf(arcsine, 0.0), 0.5, 1e-11);
  const YoungMeasure d = compute(step_d(1, 2));
  EXPECT_NEAR(cdf(d, 1.5), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(cdf_before(d, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(cdf(d, 1.0), 1.0 / 3.0, 1e-15);
  const YoungMeasure uniform = compute(identity_on_unit());
  EXPECT_NEAR(cdf(uniform, 0.25), 0.25, 1e-12);
}

TEST(Cdf, ArcsineClosedForm) {
  const YoungMeasure ym = compute(build_example(ExampleTag::c));
  for (double y = -0.95; y < 1.0; y += 0.1) {
    EXPECT_NEAR(cdf(ym, y), 0.5 + std::asin(y) / std::numbers::pi, 1e-11);
    EXPECT_NEAR(cdf_by_quadrature(ym, y).value, cdf(ym, y), 1e-9);
  }
}

TEST(Cdf, MonotoneAndReachesOne) {
  for (auto tag : {ExampleTag::a, ExampleTag::b, ExampleTag::c, ExampleTag::d}) {
    const YoungMeasure ym = compute(build_example(tag));
    const Range& k = ym.k_range();
    double previous = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double y = k.lo - 0.1 + (k.length() + 0.2) * i / 400.0;
      const double f = cdf(ym, y);
      EXPECT_GE(f, previous - 1e-15);
      previous = f;
    }
    EXPECT_NEAR(cdf(ym, k.hi), 1.0, 1e-9);
    EXPECT_NEAR(cdf_by_quadrature(ym, k.hi).value, 1.0, 1e-9);
  }
}

TEST(Integrate, Examples) {
  EXPECT_NEAR(integrate(compute(identity_on_unit()), parse_beta("y^2")), 1.0 / 3.0, 1e-12);
  const double a = 1.5;
  const double b = 4.0;
  EXPECT_NEAR(integrate(compute(step_d(a, b)), parse_beta("y")), (a + 2 * b) / 3, 1e-14);
  EXPECT_NEAR(integrate(compute(build_example(ExampleTag::c)), parse_beta("y^2")), 0.5, 1e-9);
}

TEST(Integrate, DomainErrorPropagates) {
  EXPECT_THROW(integrate(compute(build_example(ExampleTag::c)), parse_beta("ln(y)")),
               DomainError);
}

TEST(Pushforward, Examples) {
  EXPECT_NEAR(pushforward_integral(build_example(ExampleTag::c), parse_beta("y^2")), 0.5, 1e-12);
  EXPECT_NEAR(pushforward_integral(constant_on(0, 3, 2.0), parse_beta("exp(y)")), std::exp(2.0),
              1e-14);
  EXPECT_NEAR(pushforward_integral(identity_on_unit(), parse_beta("y")), 0.5, 1e-15);
}

TEST(Verify, ExampleBFamily) {
  std::vector<Expr> betas;
  for (const char* s : {"1", "y", "y^2", "sin(y)", "exp(y)"}) betas.push_back(parse_beta(s));
  const VerificationReport r = verify_identity(build_example(ExampleTag::b), betas, 1e-8);
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.checks.size(), 5u);
  for (const IdentityCheck& c : r.checks) {
    EXPECT_LE(c.residual, 1e-8) << c.beta;
    EXPECT_EQ(c.residual, std::fabs(c.lhs - c.rhs));
  }
  EXPECT_EQ(r.checks[3].beta, "sin(y)");
}

TEST(Verify, ConstantFunctionExact) {
  const auto betas = standard_beta_family();
  const VerificationReport r = verify_identity(constant_on(0, 1, 0.3), betas, 1e-15);
  EXPECT_TRUE(r.pass);
}

TEST(Verify, SineSquare) {
  const std::vector<Expr> betas{parse_beta("y^2")};
  const VerificationReport r = verify_identity(build_example(ExampleTag::c), betas, 1e-8);
  EXPECT_NEAR(r.checks[0].lhs, 0.5, 1e-8);
  EXPECT_NEAR(r.checks[0].rhs, 0.5, 1e-8);
}

TEST(Verify, PerturbationFails) {
  IdentityOptions options;
  options.perturb = 0.01;
  const auto betas = standard_beta_family();
  const VerificationReport r = verify_identity(build_example(ExampleTag::b), betas, 1e-8, options);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_residual, 1e-3);
}

TEST(Property, TotalMassIsOne) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> n_dist(1, 9);
  for (int trial = 0; trial < 20; ++trial) {
    ExampleParams params;
    params.n = n_dist(rng);
    for (auto tag : {ExampleTag::a, ExampleTag::b, ExampleTag::c, ExampleTag::d}) {
      EXPECT_NEAR(total_mass(compute(build_example(tag, params))), 1.0, 1e-12);
    }
  }
}

TEST(Property, AffineScalingCovariance) {
  // s·u has k_range scaled by s and density g(y/s)/s.
  const PiecewiseFunction base = build_example(ExampleTag::c);
  const YoungMeasure ym = compute(base);
  for (double s : {0.5, 3.0}) {
    std::vector<Piece> scaled;
    for (const Piece& p : base.pieces()) {
      scaled.push_back(Piece::monotone(p.domain(),
                                       make_mul(Expr::constant(s), p.monotone_body().expr),
                                       p.monotone_body().direction));
    }
    const YoungMeasure ys = compute(PiecewiseFunction(base.omega(), std::move(scaled)));
    EXPECT_NEAR(ys.k_range().lo, s * ym.k_range().lo, 1e-12);
    EXPECT_NEAR(ys.k_range().hi, s * ym.k_range().hi, 1e-12);
    for (int i = 0; i < 100; ++i) {
      const double y = s * (-0.99 + 1.98 * i / 99.0);
      EXPECT_NEAR(density_at(ys, y), density_at(ym, y / s) / s, 1e-9);
    }
  }
}

TEST(Property, ArcsineDensity) {
  const YoungMeasure ym = compute(build_example(ExampleTag::c));
  for (int i = 0; i < 200; ++i) {
    const double y = -0.99 + 1.98 * i / 199.0;
    const double expected = arcsine_density(y);
    EXPECT_NEAR(density_at(ym, y), expected, 1e-6 * expected);
  }
}

TEST(Cdf, AgreesWithQuadratureOnAffinePieces) {
  ExampleParams params;
  params.n = 3;
  for (auto tag : {ExampleTag::a, ExampleTag::b, ExampleTag::e}) {
    const YoungMeasure ym = compute(build_example(tag, params));
    for (int i = 1; i < 40; ++i) {
      const double y = ym.k_range().lo + ym.k_range().length() * i / 40.0;
      EXPECT_NEAR(cdf(ym, y), cdf_by_quadrature(ym, y).value, 1e-10) << to_char(tag) << " " << y;
    }
  }
}

TEST(Density, TopOfRangeOnlyFromSegmentsReachingIt) {
  const YoungMeasure ym = compute(build_example(ExampleTag::b));
  EXPECT_NEAR(density_at(ym, 1.0), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(density_at(ym, 0.0), 2.0 / 3.0, 1e-12);
}
