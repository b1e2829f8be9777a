// Builds the region-I template, samples one system and prints the fitted
// exponents of psi and N.

#include <cstdio>

#include "beurling/beurling.hpp"

int main() {
  using namespace beurling;
  const double X = 1e6;

  PrescriptionSpec spec;
  spec.S = {0.6};
  spec.R = {0.8};
  spec.delta = 0.3;
  spec.x_max = X;

  PositivityCertificate cert;
  const TemplateFn F = make_prescription_F(spec, &cert);
  std::printf("M = %d, analytic bound positive beyond x0 = %.1f\n", cert.M, cert.x0);

  const GenPrimes P = sample_primes(F, X, /*seed=*/42);
  std::printf("%zu generalized primes below %.0f, max |pi - F| = %.3f\n", P.size(), X,
              counting_sandwich(P, F).max_deviation);

  const StepTable psi = enumerate(P, X, WeightKind::VonMangoldt);
  const StepTable N = enumerate(P, X, WeightKind::Unit);
  const double a = density_by_residue(P, spec, cert.M, X);

  std::printf("psi - main terms : exponent %.3f\n", residual_exponent(psi, psi_model(spec, cert.M)).exponent);
  std::printf("psi - x          : exponent %.3f\n", residual_exponent(psi, [](double x) { return x; }).exponent);
  std::printf("N - a x (a=%.4f) : exponent %.3f\n", a,
              residual_exponent(N, [a](double x) { return a * x; }).exponent);
}
