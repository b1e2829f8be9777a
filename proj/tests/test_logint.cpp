#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "beurling/logint.hpp"
#include "beurling/numeric.hpp"
#include "beurling/zeta.hpp"
#include "oracles.hpp"

using namespace beurling;

TEST(Li, VanishesAtOneAndForZeroExponent) {
  EXPECT_EQ(Li_pow(1.0, {0.3, 2.0}), cplx(0.0));
  EXPECT_EQ(Li_pow(50.0, 0.0), cplx(0.0));
  EXPECT_EQ(li_pow(1.0, {0.7, -1.0}), cplx(0.0));
}

TEST(Li, ClassicalValueAgainstQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  const double q = gauss_kronrod<double, 61>::integrate(
      [](double u) { return (1 - 1 / u) / std::log(u); }, 1.0, std::exp(1.0), 15, 1e-15);
  EXPECT_NEAR(Li(std::exp(1.0)), q, 1e-10);
  EXPECT_NEAR(Li(std::exp(1.0)), 1.3179021514544038, 1e-12);
}

TEST(Li, ComplexExponentAgainstQuadrature) {
  for (double x : {1.5, 10.0, 1e3, 1e6})
    for (cplx z : {cplx(1.0), cplx(0.6), cplx(0.5, 3.0), cplx(0.3, -7.0), cplx(0.9, 20.0)}) {
      const cplx ref = oracle::Li_pow_quad(x, z);
      EXPECT_LE(std::abs(Li_pow(x, z) - ref), 1e-9 * std::max(1.0, std::abs(ref))) << "x=" << x << " z=" << z;
    }
}

TEST(Li, EinMatchesDefinition) {
  using boost::math::quadrature::gauss_kronrod;
  for (cplx w : {cplx(0.5), cplx(-3.0, 2.0), cplx(12.0, -5.0), cplx(-20.0, 0.0)}) {
    auto part = [w](bool im) {
      return gauss_kronrod<double, 61>::integrate(
          [&](double t) {
            const cplx v = t == 0 ? w : (1.0 - std::exp(-w * t)) / t;
            return im ? v.imag() : v.real();
          },
          0.0, 1.0, 15, 1e-15);
    };
    const cplx ref(part(false), part(true));
    EXPECT_LE(std::abs(Ein(w) - ref), 1e-10 * std::max(1.0, std::abs(ref))) << w;
  }
}

TEST(li, MoebiusSumOracle) {
  for (double x : {1.01, 2.0, 100.0, 1e4, 1e6, 1e8})
    EXPECT_NEAR(li(x), oracle::li_moebius(x), 1e-10 * std::max(1.0, li(x))) << x;
}

TEST(li, InvertsToLiWithTail) {
  for (double x : {3.0, 50.0, 1e3, 1e5, 1e7}) {
    const auto K = static_cast<std::size_t>(std::ceil(std::log(x) / std::log(2.0)));
    double s = 0;
    for (std::size_t k = 1; k <= K; ++k) s += li(std::pow(x, 1.0 / k)) / k;
    s += oracle::li_tail_over_k(x, K);
    EXPECT_NEAR(s, Li(x), 1e-8) << x;
  }
}

namespace {
// li(x^z) = sum_n (z log x)^n / (n n! zeta(n+1)) in 50-digit arithmetic.
cplx li_pow_multiprecision(double x, cplx z) {
  using boost::multiprecision::cpp_bin_float_50;
  using boost::multiprecision::cpp_complex_50;
  const cpp_complex_50 w(cpp_bin_float_50(z.real()) * log(cpp_bin_float_50(x)),
                         cpp_bin_float_50(z.imag()) * log(cpp_bin_float_50(x)));
  cpp_complex_50 term(1), sum(0);
  for (int n = 1; n < 400; ++n) {
    term *= w / cpp_bin_float_50(n);
    sum += term / (cpp_bin_float_50(n) * boost::math::zeta(cpp_bin_float_50(n + 1)));
    if (n > 3 * abs(w) && abs(term) < 1e-40) break;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}
}  // namespace

TEST(li, ComplexExponentAgainstMultiprecisionSeries) {
  for (auto [x, z] : {std::pair{1e4, cplx(0.5, 4.0)}, std::pair{1e3, cplx(0.9, -3.0)}, std::pair{50.0, cplx(0.2, 8.0)},
                      std::pair{1e5, cplx(0.3, 1.0)}}) {
    const cplx ref = li_pow_multiprecision(x, z);
    EXPECT_LE(std::abs(li_pow(x, z) - ref), 1e-9 * std::max(1.0, std::abs(ref))) << x << ' ' << z;
  }
}

TEST(li, ConjugateSymmetry) {
  for (double x : {2.0, 1e3, 1e6})
    for (cplx z : {cplx(0.4, 2.0), cplx(0.8, -15.0)}) {
      EXPECT_LE(std::abs(li_pow(x, std::conj(z)) - std::conj(li_pow(x, z))), 1e-12 * std::abs(li_pow(x, z)));
      EXPECT_LE(std::abs(Li_pow(x, std::conj(z)) - std::conj(Li_pow(x, z))), 1e-12 * std::abs(Li_pow(x, z)));
    }
}

TEST(li, DerivativeMatchesFiniteDifference) {
  for (double x : geometric_grid(1.1, 1e6, 3.0))
    for (cplx z : {cplx(1.0), cplx(0.6), cplx(0.5, 3.0), cplx(0.3, -2.0), cplx(0.8, 1.0)}) {
      const double h = 1e-4 * x;
      const cplx fd = (li_pow(x + h, z) - li_pow(x - h, z)) / (2 * h);
      const cplx d = li_pow_deriv(x, z);
      EXPECT_LE(std::abs(d - fd), 1e-6 * std::abs(d)) << "x=" << x << " z=" << z;
    }
}

TEST(li, DerivativeLowerBound) {
  const auto grid = geometric_grid(1.001, 1e8, std::pow(1e8 / 1.001, 1.0 / 9999));
  ASSERT_GE(grid.size(), 10000u);
  for (double delta : {0.1, 0.3, 0.49})
    for (double x : grid) ASSERT_GT(li_pow_deriv(x, delta).real(), delta / (2 * x)) << delta << ' ' << x;
}

TEST(li, DerivativeUndefinedAtOne) { EXPECT_THROW(li_pow_deriv(1.0, 0.5), DomainError); }

TEST(li, GrowthBoundConstant) {
  double C = 0;
  for (double x : geometric_grid(10.0, 1e8, 2.0))
    for (double a : {0.1, 0.3, 0.5, 0.8, 1.0})
      for (double t : {0.0, 1.0, 5.0, 20.0}) {
        const double bound = std::pow(x, a) / (a * std::log(x));
        C = std::max(C, std::abs(li_pow(x, {a, t})) / bound);
      }
  EXPECT_LE(C, 10.0);
}

TEST(Mellin, ClosedForms) {
  EXPECT_EQ(mellin_dLi(2.0, 0.0), cplx(0.0));
  EXPECT_NEAR(mellin_dLi(2.0, 1.0).real(), std::log(2.0), 1e-15);
  EXPECT_THROW(mellin_dLi(0.5, 0.5), PoleError);
  EXPECT_THROW(mellin_dLi(0.3, 0.5), DomainError);
}

TEST(Mellin, AgainstQuadrature) {
  boost::math::quadrature::exp_sinh<double> q;
  for (double s : {3.0, 1.5, 1.1}) {
    const double ref = q.integrate([s](double t) { return std::exp(-(s - 1) * t) * -std::expm1(-t) / t; });
    EXPECT_NEAR(mellin_dLi(s, 1.0).real(), ref, 1e-8) << s;
  }
}

TEST(Mellin, TruncatedApproachesFull) {
  const cplx s(2.0, 3.0), z(0.6, 1.0);
  EXPECT_LE(std::abs(mellin_dLi_truncated(s, z, std::log(1e12)) - mellin_dLi(s, z)), 1e-9);
  EXPECT_EQ(mellin_dLi_truncated(s, z, 0.0), cplx(0.0));
}

TEST(Zeta, KnownValues) {
  EXPECT_NEAR(zeta_eval(2.0), kPi * kPi / 6, 1e-14);
  EXPECT_NEAR(zeta_eval(4.0), std::pow(kPi, 4) / 90, 1e-14);
  EXPECT_NEAR(zeta_eval(0.5), boost::math::zeta(0.5), 1e-9);
  EXPECT_NEAR(zeta_eval(0.3), boost::math::zeta(0.3), 1e-9);
  EXPECT_LT(std::abs(zeta_eval(cplx(0.5, 14.134725141734693))), 1e-8);
  EXPECT_THROW(zeta_eval(1.0), PoleError);
}

TEST(Zeta, Conjugation) {
  const cplx s(0.7, 23.0);
  EXPECT_LE(std::abs(zeta_eval(std::conj(s)) - std::conj(zeta_eval(s))), 1e-13);
}

TEST(Zeta, IntegerCacheMatchesBoost) {
  const auto& z = ZetaOracle::instance();
  for (std::size_t n : {2u, 3u, 7u, 40u, 100u}) EXPECT_NEAR(z.at_integer(n), boost::math::zeta(double(n)), 1e-15);
  EXPECT_THROW(z.at_integer(1), PoleError);
}
