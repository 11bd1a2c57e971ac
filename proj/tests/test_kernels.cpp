#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "incsmooth/kernels.hpp"

namespace {

using namespace incsmooth;

WeightFamily poly_2j() {
  return WeightFamily::polynomial(builtin_a2(), linear_rule(0.0, 2.0));
}

SpaceSpec uni_h(Index nu_max) {
  SpaceSpec s;
  s.weights = poly_2j();
  s.nu_max = nu_max;
  return s;
}

// kernel section k(., x) as a coefficient expansion
CoefVector section(const SpaceSpec& s, double x) {
  CoefVector k;
  for (Index nu = 0; nu <= s.nu_max; ++nu)
    k.terms.emplace_back(nu, std::exp(-s.log_weight(nu, s.j)) * std::conj(s.basis.eval(nu, x)));
  return k;
}

CoefVector combine(const CoefVector& f, std::complex<double> lambda, const CoefVector& g) {
  CoefVector h = f;
  for (const auto& [nu, coef] : g.terms) {
    bool found = false;
    for (auto& [mu, c] : h.terms)
      if (mu == nu) {
        c += lambda * coef;
        found = true;
      }
    if (!found) h.terms.emplace_back(nu, lambda * coef);
  }
  return h;
}

// scalar product from the norm via polarization
std::complex<double> inner(const SpaceSpec& s, const CoefVector& f, const CoefVector& g) {
  const std::complex<double> i{0.0, 1.0};
  double re = 0.0, im = 0.0;
  re += std::pow(norm(s, combine(f, 1.0, g)), 2) / 4.0;
  re -= std::pow(norm(s, combine(f, -1.0, g)), 2) / 4.0;
  im += std::pow(norm(s, combine(f, i, g)), 2) / 4.0;
  im -= std::pow(norm(s, combine(f, -i, g)), 2) / 4.0;
  return {re, im};
}

std::complex<double> eval_expansion(const SpaceSpec& s, const CoefVector& f, double x) {
  std::complex<double> v = 0.0;
  for (const auto& [nu, coef] : f.terms) v += coef * s.basis.eval(nu, x);
  return v;
}

}  // namespace

TEST_CASE("truncated kernel values for the first member") {
  const SpaceSpec s = uni_h(2);
  CHECK(kernel_eval(s, 0.37, 0.37).value.real() == doctest::Approx(1.5));  // 1 + 1/4 + 1/4
  CHECK(kernel_eval(s, 0.37, 0.37).value.imag() == doctest::Approx(0.0));
  CHECK(kernel_eval(s, 0.25, 0.0).value.real() == doctest::Approx(1.0));  // frequencies cancel
  const KernelValue a = kernel_eval(s, 0.2, 0.7), b = kernel_eval(s, 0.7, 0.2);
  CHECK(a.value.real() == doctest::Approx(b.value.real()));
  CHECK(a.value.imag() == doctest::Approx(-b.value.imag()));

  // a single unpaired frequency leaves a genuinely complex value
  const SpaceSpec s1 = uni_h(1);
  const KernelValue c = kernel_eval(s1, 0.2, 0.45);
  CHECK(c.value.real() == doctest::Approx(1.0));
  CHECK(c.value.imag() == doctest::Approx(0.25));  // exp(-2 pi i (x - y)) / 4 = i / 4
  const KernelValue d = kernel_eval(s1, 0.45, 0.2);
  CHECK(d.value.imag() == doctest::Approx(-0.25));
}

TEST_CASE("tail bounds cover the truncation error honestly") {
  const SpaceSpec small = uni_h(8), big = uni_h(256);
  for (const double x : {0.0, 0.31, 0.5, 0.93}) {
    for (const double y : {0.11, 0.62, 1.0}) {
      const KernelValue ks = kernel_eval(small, x, y), kb = kernel_eval(big, x, y);
      CHECK(std::abs(kb.value - ks.value) <= ks.tail_bound + 1e-15);
      CHECK(kb.tail_bound < ks.tail_bound);
    }
  }

  SpaceSpec hs = uni_h(8);
  hs.basis = BasisFamily::haar();
  SpaceSpec hb = hs;
  hb.nu_max = 512;
  for (const double x : {0.07, 0.5, 0.99}) {
    const KernelValue ks = kernel_eval(hs, x, x), kb = kernel_eval(hb, x, x);
    CHECK(std::abs(kb.value - ks.value) <= ks.tail_bound + 1e-15);
  }
}

TEST_CASE("kernel sections reproduce point evaluation") {
  const SpaceSpec s = uni_h(16);
  CoefVector f;
  f.terms = {{0, {0.3, 0.0}}, {1, {-0.2, 0.5}}, {4, {0.0, 1.1}}, {9, {0.7, -0.4}}};
  for (const double x : {0.0, 0.21, 0.77}) {
    const CoefVector kx = section(s, x);
    const std::complex<double> by_inner = inner(s, f, kx);
    const std::complex<double> by_eval = eval_expansion(s, f, x);
    CHECK(std::abs(by_inner - by_eval) < 1e-10);
    // the section's squared norm is the diagonal kernel value
    CHECK(std::pow(norm(s, kx), 2) ==
          doctest::Approx(kernel_eval(s, x, x).value.real()).epsilon(1e-12));
  }
}

TEST_CASE("anchored members measure the anchor value plus rescaled energy") {
  SpaceSpec s;
  s.weights = poly_2j();
  s.family = SpaceFamilyKind::UniGc;
  s.j = 2;
  CoefVector f;
  f.terms = {{0, {-1.0, 0.0}}, {1, {1.0, 0.0}}};  // e_1 - e_1(0) e_0 vanishes at the anchor
  CHECK(norm(s, f) == doctest::Approx(4.0));      // alpha(1,1) / gamma_2 = 16
  s.c = 2.0;
  CHECK(norm(s, f) == doctest::Approx(std::sqrt(8.0)));
  CHECK_THROWS_AS(kernel_eval(s, 0.1, 0.2), DomainError);

  // the constant term carries weight one in every member
  SpaceSpec g = s;
  g.family = SpaceFamilyKind::UniG;
  g.c = 1.0;
  CoefVector one;
  one.terms = {{0, {1.0, 0.0}}};
  CHECK(norm(g, one) == doctest::Approx(1.0));
  g.family = SpaceFamilyKind::UniF;
  CHECK(norm(g, one) == doctest::Approx(1.0));

  CoefVector bad;
  bad.terms = {{2, {1.0, 0.0}}};
  CHECK_THROWS_AS(norm(g, bad), DomainError);  // two-dimensional member
}

TEST_CASE("point evaluation guard rejects non-reproducing members") {
  SpaceSpec s;
  s.basis = BasisFamily::haar();
  s.weights = WeightFamily::polynomial(builtin_a2(), constant_rule(0.8));
  CHECK_THROWS_AS(kernel_eval(s, 0.1, 0.2), NotRkhs);
  s.weights = WeightFamily::polynomial(builtin_a2(), constant_rule(1.0));
  CHECK_THROWS_AS(kernel_eval(s, 0.1, 0.2), NotRkhs);  // boundary case is not reproducing
  s.weights = poly_2j();
  CHECK_NOTHROW(kernel_eval(s, 0.1, 0.2));
}

TEST_CASE("norm chain between plain and anchored members") {
  SpaceSpec base;
  base.weights = poly_2j();
  base.family = SpaceFamilyKind::UniG;
  base.j = 3;
  std::vector<CoefVector> fs;
  for (int k = 0; k < 4; ++k) {
    CoefVector f;
    for (Index nu = 0; nu <= 12; ++nu)
      f.terms.emplace_back(nu, std::complex<double>(std::cos(1.7 * k + 0.3 * nu),
                                                    std::sin(0.9 * k - 0.5 * nu)));
    fs.push_back(std::move(f));
  }
  for (const double c0 : {0.9, 0.5, 0.25, 0.1}) {
    const Lw2Report rep = verify_lw2(base, c0, fs);
    CHECK(rep.all_ok);
    CHECK(rep.checks.size() == 3 * fs.size());
  }
  CHECK(verify_lw2(base, 0.5, fs).theta == doctest::Approx(1.0 / 16.0));  // gamma_3

  SpaceSpec fbase = base;
  fbase.family = SpaceFamilyKind::UniF;
  std::vector<CoefVector> two;
  CoefVector f0;
  f0.terms = {{0, {0.4, -0.3}}, {1, {1.2, 0.8}}};
  two.push_back(f0);
  const Lw2Report frep = verify_lw2(fbase, 0.5, two);
  CHECK(frep.all_ok);
  CHECK(frep.theta == doctest::Approx(1.0 / 64.0));  // alpha(1,3)^-1

  CHECK_THROWS_AS(verify_lw2(uni_h(8), 0.5, fs), DomainError);
  CHECK_THROWS_AS(verify_lw2(base, 1.5, fs), DomainError);
}

TEST_CASE("kernel Gram matrices are positive semidefinite") {
  const SpaceSpec s = uni_h(32);
  const PsdReport rep = gram_psd_check(s, std::vector<double>{0.1, 0.25, 0.4, 0.77, 0.9});
  CHECK(rep.psd);
  CHECK(rep.min_eigenvalue >= -1e-10);
  CHECK(rep.max_eigenvalue > 1.0);

  // a repeated point makes the Gram singular but not indefinite
  const PsdReport rep2 = gram_psd_check(s, std::vector<double>{0.3, 0.3, 0.6});
  CHECK(rep2.psd);
}

TEST_CASE("product kernels multiply factor kernels and bound the rest") {
  SpaceSpec p;
  p.weights = poly_2j();
  p.family = SpaceFamilyKind::ProdH;
  p.j_max = 3;
  p.nu_max = 16;
  Eigen::VectorXd x(3), y(3);
  x << 0.1, 0.6, 0.35;
  y << 0.8, 0.27, 0.51;

  std::complex<double> direct = 1.0;
  for (Index jj = 1; jj <= 3; ++jj) {
    SpaceSpec u = p;
    u.family = SpaceFamilyKind::UniH;
    u.j = jj;
    direct *= kernel_eval(u, x(jj - 1), y(jj - 1)).value;
  }
  const KernelValue kv = kernel_eval(p, x, y);
  CHECK(std::abs(kv.value - direct) < 1e-12);

  // enlarging both truncations stays within the reported tail bound
  SpaceSpec pb = p;
  pb.j_max = 8;
  pb.nu_max = 128;
  Eigen::VectorXd xb(8), yb(8);
  xb << 0.1, 0.6, 0.35, 0.9, 0.2, 0.4, 0.55, 0.7;
  yb << 0.8, 0.27, 0.51, 0.05, 0.33, 0.66, 0.12, 0.98;
  const KernelValue kvb = kernel_eval(pb, xb, yb);
  CHECK(std::abs(kvb.value - kernel_eval(p, xb.head(3), yb.head(3)).value) <=
        kv.tail_bound + 1e-15);

  const PsdReport rep = gram_psd_check(
      p, std::vector<Eigen::VectorXd>{x, y, 0.5 * (x + y), Eigen::VectorXd::Zero(3)});
  CHECK(rep.psd);

  // product norms multiply the factor weights
  ProductCoefVector pf;
  pf.terms.emplace_back(MultiIndex{}, std::complex<double>{1.0, 0.0});
  pf.terms.emplace_back(MultiIndex{{{1, 1}, {2, 1}}}, std::complex<double>{0.0, 0.5});
  CHECK(norm(p, pf) == doctest::Approx(std::sqrt(1.0 + 0.25 * 4.0 * 16.0)));
}
