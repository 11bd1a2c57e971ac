#include <cmath>
#include <complex>

#include "doctest.h"
#include "incsmooth/bases.hpp"
#include "incsmooth/quadrature.hpp"

namespace {

using namespace incsmooth;

// Mean of e_a * conj(e_b) against the stated sampling rule; orthonormality
// makes this the identity.
template <typename Points, typename Weights>
double gram_residual(const BasisFamily& basis, Index nu_max, const Points& xs, const Weights& ws) {
  double worst = 0.0;
  for (Index a = 0; a <= nu_max; ++a)
    for (Index b = 0; b <= nu_max; ++b) {
      std::complex<double> s = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k)
        s += ws[k] * basis.eval(a, xs[k]) * std::conj(basis.eval(b, xs[k]));
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST_CASE("trigonometric basis interleaves negative and positive frequencies") {
  const BasisFamily trig = BasisFamily::trigonometric();
  CHECK(trig.eval(0, 0.37) == std::complex<double>{1.0, 0.0});
  CHECK(trig.eval(2, 0.25).imag() == doctest::Approx(1.0));   // exp(+2 pi i / 4) = i
  CHECK(trig.eval(1, 0.25).imag() == doctest::Approx(-1.0));  // exp(-2 pi i / 4) = -i
  CHECK(trig.eval(4, 0.5).real() == doctest::Approx(1.0));    // frequency 2 at half period
  CHECK(trig.sup_abs(17) == 1.0);
  CHECK(trig.sigma() == 0.0);
  CHECK(trig.complex_valued());
  CHECK_THROWS_AS(trig.eval(1, 1.5), DomainError);
}

TEST_CASE("dyadic product basis matches the digit pairing") {
  const BasisFamily walsh = BasisFamily::walsh();
  CHECK(walsh.eval(3, 0.625).real() == -1.0);
  CHECK(walsh.eval(1, 0.25).real() == 1.0);
  CHECK(walsh.eval(1, 0.5).real() == -1.0);
  CHECK(walsh.eval(1, 1.0).real() == -1.0);  // left limit, odd bit count
  CHECK(walsh.eval(3, 1.0).real() == 1.0);
  CHECK(walsh.sup_abs(9) == 1.0);
  CHECK_FALSE(walsh.complex_valued());
}

TEST_CASE("piecewise-constant wavelets are supported on dyadic cells") {
  const BasisFamily haar = BasisFamily::haar();
  const double s2 = std::sqrt(2.0);
  CHECK(haar.eval(2, 0.0).real() == doctest::Approx(s2));
  CHECK(haar.eval(2, 0.25).real() == doctest::Approx(-s2));  // second half of [0, 1/2)
  CHECK(haar.eval(2, 0.75).real() == 0.0);
  CHECK(haar.eval(2, 1.0).real() == 0.0);
  CHECK(haar.eval(3, 1.0).real() == doctest::Approx(-s2));   // last cell takes the left limit
  CHECK(haar.eval(5, 0.3).real() == doctest::Approx(2.0));   // level 2, first cell, first half
  CHECK(haar.sup_abs(2) == doctest::Approx(s2));
  CHECK(haar.sup_abs(5) == doctest::Approx(2.0));
  CHECK(dyadic_scale(3) == doctest::Approx(std::exp2(1.5)));
}

TEST_CASE("orthogonal polynomial basis evaluates through the recurrence") {
  const BasisFamily leg = BasisFamily::jacobi(0.0, 0.0);
  CHECK(leg.eval(0, 0.3).real() == 1.0);
  CHECK(leg.eval(1, 1.0).real() == doctest::Approx(std::sqrt(3.0)));
  CHECK(leg.eval(3, 1.0).real() == doctest::Approx(std::sqrt(7.0)));
  CHECK(leg.eval(3, -1.0).real() == doctest::Approx(-std::sqrt(7.0)));
  CHECK(leg.sup_abs(3) == doctest::Approx(std::sqrt(7.0)));
  CHECK(leg.sigma() == doctest::Approx(0.5));
  CHECK(BasisFamily::jacobi(1.0, 0.5).sigma() == doctest::Approx(1.5));
  CHECK_THROWS_AS(BasisFamily::jacobi(-0.6, 0.0), DomainError);
}

TEST_CASE("sampling rules certify orthonormality for each basis") {
  std::vector<double> uniform, dyadic, unit;
  for (int k = 0; k < 64; ++k) {
    uniform.push_back(k / 64.0);
    dyadic.push_back((k + 0.5) / 64.0);
    unit.push_back(1.0 / 64.0);
  }
  CHECK(gram_residual(BasisFamily::trigonometric(), 8, uniform, unit) < 1e-12);
  CHECK(gram_residual(BasisFamily::walsh(), 8, dyadic, unit) < 1e-12);
  CHECK(gram_residual(BasisFamily::haar(), 8, dyadic, unit) < 1e-12);

  for (const auto [a, b] : {std::pair{0.0, 0.0}, {1.0, 1.0}, {0.5, 1.5}}) {
    const QuadratureRule q = gauss_jacobi(64, a, b);
    std::vector<double> xs(q.nodes.data(), q.nodes.data() + q.nodes.size());
    std::vector<double> ws;
    const double mass = jacobi_weight_mass(a, b);
    for (Eigen::Index k = 0; k < q.weights.size(); ++k) ws.push_back(q.weights(k) / mass);
    CHECK(gram_residual(BasisFamily::jacobi(a, b), 8, xs, ws) < 1e-10);
  }
}

TEST_CASE("point evaluation continuity flips at the coefficient threshold") {
  const BasisFamily trig = BasisFamily::trigonometric();
  const auto poly_const_r = [](double r) {
    return WeightFamily::polynomial(builtin_a2(), constant_rule(r));
  };
  CHECK(rkhs_condition(trig, poly_const_r(2.0), RkhsLevel::Univariate).verdict ==
        Verdict::Convergent);
  CHECK(rkhs_condition(trig, poly_const_r(1.0), RkhsLevel::Univariate).verdict ==
        Verdict::Divergent);  // boundary diverges

  const BasisFamily leg = BasisFamily::jacobi(0.0, 0.0);
  CHECK(rkhs_condition(leg, poly_const_r(2.0), RkhsLevel::Univariate).verdict ==
        Verdict::Divergent);
  CHECK(rkhs_condition(leg, poly_const_r(2.5), RkhsLevel::Univariate).verdict ==
        Verdict::Convergent);
  CHECK(rkhs_condition(leg, poly_const_r(2.5), RkhsLevel::Univariate).threshold ==
        doctest::Approx(2.0));

  const WeightFamily sub =
      WeightFamily::subexponential(2.0, linear_rule(0.0, 1.0), constant_rule(0.5));
  CHECK(rkhs_condition(trig, sub, RkhsLevel::Univariate).verdict == Verdict::Convergent);

  const WeightFamily wide =
      WeightFamily::polynomial(builtin_a1(), affine_log_rule(4.0, 1.0));
  CHECK(rkhs_condition(trig, wide, RkhsLevel::Tensor).verdict == Verdict::Convergent);
  const WeightFamily narrow =
      WeightFamily::polynomial(builtin_a1(), affine_log_rule(4.0, 0.1));
  CHECK(rkhs_condition(trig, narrow, RkhsLevel::Tensor).verdict == Verdict::Divergent);

  Eigen::MatrixXd t(2, 2);
  t << 2, 4, 3, 9;
  CHECK_THROWS_AS(rkhs_condition(trig, WeightFamily::table(t, TableExtension::None),
                                 RkhsLevel::Univariate),
                  RhoUnavailable);
}
