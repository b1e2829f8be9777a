#include <gtest/gtest.h>

#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "beurling/analysis.hpp"
#include "beurling/sampler.hpp"
#include "beurling/semigroup.hpp"
#include "beurling/sieve.hpp"

using namespace beurling;

namespace {

const auto zero = [](double) { return 0.0; };

// Dense step table with cumulative f(x) at ~2000 log-spaced points.
StepTable planted(const std::function<double(double)>& f, double X = 1e6) {
  std::vector<double> xs, cum;
  for (double x : log_grid(1.0, X, 300)) {
    xs.push_back(x);
    cum.push_back(f(x));
  }
  return StepTable::from_cumulative(xs, cum, X);
}

PrescriptionSpec cor33() {
  PrescriptionSpec s;
  s.S = {0.6};
  s.R = {0.8};
  s.delta = 0.3;
  s.M = 0;
  s.x_max = 1e6;
  return s;
}

StepTable naturals(double X) {
  std::vector<StepTable::Event> e;
  for (double n = 1; n <= X; ++n) e.push_back({n, 1.0});
  return StepTable::from_events(std::move(e), X);
}

}  // namespace

TEST(ResidualFit, RecoversPlantedExponent) {
  const auto f = residual_exponent(planted([](double x) { return std::sqrt(x); }), zero);
  EXPECT_NEAR(f.exponent, 0.5, 0.02);
  const auto g = residual_exponent(planted([](double x) { return 3 + std::sin(x); }), zero);
  EXPECT_LE(g.exponent, 0.05);
}

TEST(ResidualFit, RandomPlantedExponents) {
  std::mt19937_64 rng(5);
  // at least a few oscillation periods inside the fit window [1e3, 1e6]
  std::uniform_real_distribution<double> e(0.1, 0.9), c(0.2, 5.0), w(3.0, 12.0);
  for (int i = 0; i < 100; ++i) {
    const double a = e(rng), k = c(rng), om = w(rng);
    const auto t = planted([=](double x) { return k * std::pow(x, a) * (1 + 0.25 * std::sin(om * std::log(x))); });
    ASSERT_NEAR(residual_exponent(t, zero).exponent, a, 0.02) << a << ' ' << om;
  }
}

TEST(ResidualFit, ModelIsSubtracted) {
  // events at the integers so floor(x) - x stays O(1)
  std::vector<StepTable::Event> e;
  for (double n = 1; n <= 1e6; ++n) e.push_back({n, 1 + std::pow(n, 0.3) - std::pow(n - 1, 0.3)});
  const auto t = StepTable::from_events(std::move(e), 1e6);
  EXPECT_NEAR(residual_exponent(t, [](double x) { return x; }).exponent, 0.3, 0.02);
  EXPECT_LE(residual_exponent(naturals(1e6), [](double x) { return x; }).exponent, 0.05);
}

TEST(ResidualFit, DegenerateAndShortTables) {
  const auto f = residual_exponent(planted(zero), zero);
  EXPECT_TRUE(f.degenerate());
  EXPECT_EQ(f.exponent, -std::numeric_limits<double>::infinity());
  EXPECT_THROW(residual_exponent(planted(zero, 50.0), zero), DomainError);
}

TEST(EulerProduct, FiniteSystem) {
  const auto P = GenPrimes::from_values({2, 3});
  const auto v = euler_log_zeta(P, 2.0, 1e9);
  EXPECT_NEAR(v.value.real(), std::log(1.5), 1e-15);
  EXPECT_EQ(v.truncation_bound, 0);
  const cplx s(1.5, 4.0);
  EXPECT_LE(std::abs(euler_log_zeta(P, std::conj(s), 1e9).value - std::conj(euler_log_zeta(P, s, 1e9).value)), 1e-15);
  EXPECT_THROW(euler_log_zeta(sieve_classical(1e4), 0.9, 1e4), DomainError);
}

TEST(DirichletSum, FiniteSystemLimit) {
  const double X = 1e12;
  const auto N = enumerate(GenPrimes::from_values({2, 3}), X, WeightKind::Unit);
  const auto d = dirichlet_sum(N, 2.0);
  EXPECT_LE(std::abs(d.value - 1.5), d.truncation_bound + 1e-14);
  EXPECT_LE(d.truncation_bound, 1e-8);
  EXPECT_EQ(dirichlet_sum(enumerate(GenPrimes{}, 10, WeightKind::Unit), 2.0).value, cplx(1.0));
}

TEST(DirichletSum, MatchesEulerProduct) {
  const auto P = sieve_classical(1e4);
  const auto N = enumerate(P, 1e4, WeightKind::Unit);
  for (cplx s : {cplx(3.0), cplx(3.0, 5.0), cplx(2.0, -1.0)}) {
    const auto e = euler_log_zeta(P, s, 1e4);
    const auto d = dirichlet_sum(N, s);
    EXPECT_LE(std::abs(std::exp(e.value) - d.value), std::abs(std::exp(e.value)) * std::expm1(e.truncation_bound) +
                                                         d.truncation_bound)
        << s;
    EXPECT_LE(std::abs(d.value - zeta_eval(s)), d.truncation_bound) << s;
  }
}

TEST(EFactor, Examples) {
  PrescriptionSpec s;
  EXPECT_NEAR(std::abs(E_factor(s, 0, 2.0) - 2.0), 0, 1e-15);
  const auto c = cor33();
  const cplx z(1.7, 2.5);
  EXPECT_LE(std::abs(E_factor(c, 0, z) - E_from_mellin(c, 0, z)), 1e-10);
  EXPECT_LE(std::abs(E_factor(c, 2, 2.0) - E_from_mellin(c, 2, 2.0)), 1e-10);
  EXPECT_LE(std::abs(E_factor(c, 0, std::conj(z)) - std::conj(E_factor(c, 0, z))), 1e-14);
  EXPECT_LE(std::abs(E_factor(c, 0, z) * E_reciprocal(c, 0, z) - 1.0), 1e-14);
  EXPECT_THROW(E_reciprocal(c, 0, 0.8), PoleError);
}

TEST(EFactor, ZeroPoleAudit) {
  PrescriptionSpec s;
  s.S = ComplexMultiset::symmetric({{cplx(0.4, 3.0), 2}});
  s.R = ComplexMultiset::symmetric({{cplx(0.7, 1.0), 1}, {cplx(0.2, 0.0), 1}});
  s.delta = 0.3;
  EXPECT_TRUE(audit_E(s, 3).passed(1e-10));
  EXPECT_TRUE(audit_E(cor33(), 0).passed(1e-10));
}

TEST(ZDeviation, BoundedAndConjugate) {
  const auto spec = cor33();
  const auto F = make_prescription_F(spec);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto P = sample_primes(F, 1e6, seed);
    const auto pts = Z_deviation(P, spec, 0, {cplx(2.0), cplx(0.6, 30.0), cplx(0.6, -30.0), cplx(0.55, 0.0)}, 1e6);
    for (const auto& p : pts) {
      EXPECT_TRUE(std::isfinite(std::abs(p.Z)));
      EXPECT_LE(p.bound_ratio, 10.0);
    }
    EXPECT_LE(std::abs(pts[1].Z - std::conj(pts[2].Z)), 1e-9);
    EXPECT_THROW(Z_deviation(P, spec, 0, {cplx(0.52)}, 1e6), DomainError);
  }
}

TEST(Density, ResidueAgreesWithTopDecade) {
  const auto spec = cor33();
  const auto F = make_prescription_F(spec);
  const auto P = sample_primes(F, 1e6, 8);
  const auto N = enumerate(P, 1e6, WeightKind::Unit);
  EXPECT_NEAR(density_by_residue(P, spec, 0, 1e6) / density_top_decade(N), 1.0, 0.05);
}

TEST(Oscillatory, EtaAgainstQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  auto spec = OscillatorySpec::desk(0.3, 0.7);
  spec.x_max = 1e6;
  for (std::size_t l = 1; l <= 2; ++l) {
    const double la = spec.log_A(l - 1), lb = spec.log_B(l - 1), tau = spec.tau[l - 1];
    const int panels = 1 + static_cast<int>(tau * (lb - la));
    double ref = 0;
    // int x^{-1} dR_l = int tau cos(tau v) e^{(beta-2) v} dv over [log A, log B]
    for (int i = 0; i < panels; ++i) {
      const double a = la + (lb - la) * i / panels, b = la + (lb - la) * (i + 1) / panels;
      ref += gauss_kronrod<double, 31>::integrate(
          [&](double v) { return tau * std::cos(tau * v) * std::exp((spec.beta - 2) * v); }, a, b, 8, 1e-14);
    }
    const cplx e = eta_l(spec, l, 1.0);
    EXPECT_NEAR(e.real(), ref, 1e-8) << l;
    EXPECT_NEAR(e.imag(), 0.0, 1e-15);
    EXPECT_EQ(eta_l(spec, l, 0.9).imag(), 0.0);
  }
  EXPECT_THROW(eta_l(spec, 0, 1.0), DomainError);
}

TEST(Oscillatory, ZetaCGrowth) {
  auto spec = OscillatorySpec::desk(0.3, 0.7);
  spec.x_max = 1e6;
  const double g = zeta_C_growth(spec, 0.35, 2);
  EXPECT_GE(g, 0.5);
  EXPECT_LE(g, 2.0);
  EXPECT_THROW(zeta_C_growth(spec, 0.7, 2), DomainError);
  // to the right of beta, log|zeta_C| stays bounded on the block frequencies
  for (std::size_t l = 0; l < 3; ++l) EXPECT_LE(std::abs(log_abs_zeta_C(spec, cplx(0.8, spec.tau[l]))), 5.0);
}

TEST(Subtractive, IBetaOfNaturals) {
  const auto N = naturals(1e6);
  for (double beta : {0.3, 0.4, 0.5, 0.7}) {
    // sum_n n^{-beta} - x^{1-beta}/(1-beta) -> zeta(beta)
    const auto r = I_beta(N, 1.0, beta);
    EXPECT_NEAR(r.value, boost::math::zeta(beta), 1e-4) << beta;
  }
}

TEST(Subtractive, HOneOfScaledNaturals) {
  std::vector<StepTable::Event> e;
  for (double m = 1; std::pow(m, 2.5) <= 1e6; ++m) e.push_back({std::pow(m, 2.5), 1.0});
  const auto L = StepTable::from_events(std::move(e), 1e6);
  EXPECT_NEAR(H_one(L).value, boost::math::zeta(2.5), 1e-5);
  EXPECT_EQ(H_one(StepTable::from_events({}, 1e3)).value, 0.0);
}

TEST(Subtractive, ZetaSChainStaysBounded) {
  const auto P = sieve_classical(1e5);
  const auto F = make_subtractive_F(0.6, P, true);
  const auto S = sample_primes(F, 1e5, 2);
  for (double sigma : {0.35, 0.5, 1.0, 2.0}) {
    const auto z = zeta_subtractive(S, P, 0.6, sigma);
    const double H = std::log(std::abs(z.value)) - std::log(std::abs(zeta_eval(sigma + 0.4)));
    EXPECT_LE(std::abs(H), 5.0) << sigma;
  }
  EXPECT_THROW(zeta_subtractive(S, P, 0.6, 0.3), DomainError);
}
