#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dwell/forcing.hpp"

namespace dwell {

// Distance of e_1 to span{T^n C : 0 <= n <= N} where T is the right shift on
// the coefficient sequence C_1, C_2, ...  The shift vectors are materialized
// on a family-specific window and orthogonalized by column-pivoted QR (the
// window problem is exact for finite families and carries a documented
// truncation for infinite tails; working with vectors instead of the Gram
// matrix squares down the condition number).
//
// Verdicts:
//   generic-exact      distance 0 at finite N (trigonometric polynomials)
//   fails              positive distance stable under three doublings of N
//   generic-asymptotic otherwise (evidence of decrease toward 0)
enum class GenericityVerdict { generic_exact, generic_asymptotic, fails };

struct GenericityReport {
  int N = 0;
  double distance = 0.0;
  GenericityVerdict verdict = GenericityVerdict::generic_asymptotic;
  bool ill_conditioned = false;
  int rank = 0;
};

std::string to_string(GenericityVerdict v);

// A coefficient family the checker can query: coef(n) = C_n for n >= 1.
// Finite families set `window_for` (the shifts fit in a finite window and
// the projection is exact); infinite-tail families provide the closed-form
// Gram <T^a C, T^b C> instead and go through the regularized Gram path.
struct CoefficientFamily {
  std::function<cplx(long)> coef;
  std::function<long(int)> window_for;          // rows to materialize given N
  std::function<cplx(long, long)> gram;         // exact infinite-tail Gram
  double norm = 1.0;
};

CoefficientFamily family_from_forcing(const ForcingSpec& spec);
CoefficientFamily family_finite(const std::vector<cplx>& c);   // C_1..C_m
CoefficientFamily family_geometric(double lambda);             // C_n = lambda^n
CoefficientFamily family_harmonic();                           // C_n = 1/n

GenericityReport genericity_distance(const CoefficientFamily& fam, int N,
                                     double rank_tol = 1e-12);
GenericityReport genericity_distance(const ForcingSpec& spec, int N,
                                     double rank_tol = 1e-12);

// Distance alone (the single-N computation behind the report).
double genericity_distance_value(const CoefficientFamily& fam, int N,
                                 double rank_tol, bool* ill_conditioned = nullptr,
                                 int* rank_out = nullptr);

}  // namespace dwell
