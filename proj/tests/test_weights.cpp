#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "incsmooth/weights.hpp"

namespace {

using namespace incsmooth;

WeightFamily poly_2j() {
  return WeightFamily::polynomial(builtin_a2(), linear_rule(0.0, 2.0));
}

WeightFamily subexp_half() {
  return WeightFamily::subexponential(2.0, linear_rule(0.0, 1.0), constant_rule(0.5));
}

Eigen::MatrixXd small_table() {
  Eigen::MatrixXd t(2, 2);
  t << 2, 4, 3, 9;
  return t;
}

}  // namespace

TEST_CASE("builtin a-rules pair consecutive indices") {
  const SequenceRule a1 = builtin_a1(), a2 = builtin_a2();
  CHECK(a1(1) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(a1(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(a1(3) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(a2(1) == 2.0);
  CHECK(a2(2) == 2.0);
  CHECK(a2(3) == 3.0);
  CHECK(a2(4) == 3.0);
  CHECK(a2(5) == 4.0);
  CHECK_THROWS_AS(a2(0), DomainError);
}

TEST_CASE("polynomial weights are powers of the a-rule") {
  const WeightFamily f = poly_2j();
  CHECK(f.alpha(1, 1) == doctest::Approx(4.0));
  CHECK(f.alpha(3, 2) == doctest::Approx(81.0));
  CHECK(f.alpha(0, 5) == 1.0);
  CHECK(f.alpha(7, 0) == 1.0);
  CHECK(f.log_alpha(3, 2) == doctest::Approx(4.0 * std::log(3.0)));
}

TEST_CASE("subexponential weights exponentiate r * nu^b") {
  const WeightFamily f = subexp_half();
  CHECK(f.alpha(4, 2) == doctest::Approx(16.0));  // 2^(2 * sqrt(4))
  CHECK(f.alpha(0, 3) == 1.0);
  CHECK(f.base() == 2.0);
  CHECK_THROWS_AS(WeightFamily::subexponential(1.0, linear_rule(0.0, 1.0), constant_rule(0.5)),
                  DomainError);
}

TEST_CASE("table weights honor their extension") {
  const WeightFamily none = WeightFamily::table(small_table(), TableExtension::None);
  CHECK(none.alpha(2, 2) == doctest::Approx(9.0));
  CHECK(none.alpha(0, 1) == 1.0);
  CHECK(none.nu_extent() == Index{2});
  CHECK(none.j_extent() == Index{2});
  CHECK_THROWS_AS(none.alpha(3, 1), IndexOutOfTable);
  CHECK_THROWS_AS(none.alpha(1, 3), IndexOutOfTable);

  const WeightFamily geo = WeightFamily::table(small_table(), TableExtension::LastRowGeometric);
  CHECK(geo.alpha(1, 3) == doctest::Approx(8.0));      // row 1 continues 2, 4, 8
  CHECK(geo.alpha(3, 1) == doctest::Approx(4.5));      // column 1 continues 2, 3, 4.5
  CHECK(geo.alpha(3, 3) == doctest::Approx(91.125));   // 27 * 27/8 after both extensions
  CHECK_FALSE(geo.nu_extent().has_value());
  CHECK_FALSE(geo.j_extent().has_value());

  Eigen::MatrixXd t3(3, 2);
  t3 << 2, 4, 3, 9, 4, 16;
  const WeightFamily tail = WeightFamily::table(t3, TableExtension::ConstantTail);
  CHECK(tail.alpha(5, 1) == doctest::Approx(4.0));
  CHECK(tail.alpha(1, 7) == doctest::Approx(4.0));
}

TEST_CASE("gamma is the supremum of first-column to column-j ratios") {
  CHECK(gamma(poly_2j(), 2).value == doctest::Approx(0.25));
  CHECK(gamma(poly_2j(), 2).exact);
  CHECK(gamma(poly_2j(), 1).value == 1.0);
  CHECK(gamma(subexp_half(), 2).value == doctest::Approx(0.5));

  Eigen::MatrixXd t3(3, 2);
  t3 << 2, 4, 3, 9, 4, 16;
  const GammaResult g = gamma(WeightFamily::table(t3, TableExtension::ConstantTail), 2);
  CHECK(g.value == doctest::Approx(0.5));  // attained at nu = 1
  CHECK(g.exact);
}

TEST_CASE("rho comes from the declared log growth or a liminf estimate") {
  const WeightFamily f = WeightFamily::polynomial(builtin_a2(), affine_log_rule(3.0, 4.0));
  const RhoResult rr = rho(f);
  CHECK(rr.value == doctest::Approx(4.0));
  CHECK_FALSE(rr.estimated);

  const WeightFamily est = WeightFamily::polynomial(
      builtin_a2(),
      custom_rule([](Index j) { return 3.0 + 4.0 * std::log(static_cast<double>(j)); },
                  std::nullopt, "r"));
  const RhoResult re = rho(est);
  CHECK(re.estimated);
  // the window minimum of (3 + 4 ln j)/ln j approaches 4 from above, with a
  // bias of at most 3/ln(probe/2) at the default probe 2^21
  CHECK(re.value >= 4.0);
  CHECK(re.value <= 4.0 + 3.0 / (20.0 * std::log(2.0)));

  CHECK_THROWS_AS(rho(WeightFamily::table(small_table(), TableExtension::None)), RhoUnavailable);
}

TEST_CASE("decay parameters of the driving sequences") {
  const WeightFamily f = WeightFamily::polynomial(builtin_a2(), affine_log_rule(3.0, 4.0));
  const DecayParams d = decay_params(f);
  CHECK(d.rho == doctest::Approx(4.0));
  CHECK_FALSE(d.rho_estimated);
  CHECK(d.decay_alpha_nu1 == doctest::Approx(3.0));
  CHECK(d.decay_alpha_1j == doctest::Approx(4.0 * std::log(2.0)));
  CHECK(d.decay_gamma == doctest::Approx(4.0 * std::log(2.0)));

  const DecayParams ds = decay_params(subexp_half());
  CHECK(std::isinf(ds.decay_alpha_nu1));
  CHECK(std::isinf(ds.decay_alpha_1j));  // rho = +inf for linear exponents
}

TEST_CASE("validation accepts the standard families and flags violations") {
  CHECK(validate(poly_2j()).ok());
  CHECK(validate(subexp_half()).ok());
  CHECK(validate(poly_2j()).bivariate_growth == 1);

  const ValidationReport flat =
      validate(WeightFamily::polynomial(constant_rule(1.0), linear_rule(0.0, 2.0)));
  CHECK_FALSE(flat.c2_ok);
  CHECK_FALSE(flat.ok());

  const ValidationReport dec =
      validate(WeightFamily::polynomial(builtin_a2(), list_rule({3.0, 2.0})));
  CHECK_FALSE(dec.monotone_r);
  CHECK_FALSE(dec.ok());
}

TEST_CASE("embedding norms across the smoothness scale") {
  const WeightFamily f = poly_2j();
  CHECK(embedding_norm(f, 1, 2).value == 1.0);
  CHECK(embedding_norm(f, 1, 2).exact);
  CHECK(embedding_norm(f, 0, 1).value == 1.0);
  CHECK(std::isinf(embedding_norm(f, 2, 1).value));
  CHECK(embedding_norm(f, 3, 3).value == 1.0);

  CHECK(embedding_norm(subexp_half(), 1, 2).value == 1.0);
  CHECK(std::isinf(embedding_norm(subexp_half(), 2, 1).value));

  Eigen::MatrixXd t3(3, 2);
  t3 << 2, 4, 3, 9, 4, 16;
  const WeightFamily tail = WeightFamily::table(t3, TableExtension::ConstantTail);
  const NormBound nb = embedding_norm(tail, 2, 1);
  CHECK(nb.value == doctest::Approx(2.0));  // sup of sqrt(alpha(nu,2)/alpha(nu,1))
  CHECK(nb.exact);
}
