#pragma once

#include <map>
#include <string>
#include <vector>

#include "dwell/branch.hpp"

namespace dwell {

// Periodic zero-mean parametric drive eta(t) = sum_{j!=0} C_j e^{i j omega t},
// C_{-j} = conj(C_j) implied and never stored.
class ForcingSpec {
 public:
  enum class Form { harmonic_list, geometric };

  // harmonic-list form: coefficients C_1..C_m (trailing zeros allowed)
  static ForcingSpec harmonics(double omega, std::vector<cplx> c);
  // geometric family: C_n = -r lambda^n for n >= 1, closed-form eta
  static ForcingSpec geometric(double omega, double r, double lambda);

  Form form() const { return form_; }
  double omega() const { return omega_; }
  double r() const { return r_; }
  double lambda() const { return lambda_; }

  // C_j for any j (Hermitian symmetry applied; 0 beyond stored support).
  cplx coefficient(long j) const;
  // largest index with |C_j| above `tol` (geometric: tail cutoff)
  long max_index(double tol = 1e-16) const;
  // sup_t |eta(t)| upper bound (sum of |C_j|, doubled)
  double sup_norm() const;

  double eval_eta(double t) const;

  // flat key-value config (keys: omega, form, r, lambda, c_re_k, c_im_k)
  std::string to_config() const;
  static ForcingSpec from_config_text(const std::string& text);

  const std::vector<cplx>& stored_coefficients() const { return c_; }

 private:
  ForcingSpec() = default;
  Form form_ = Form::harmonic_list;
  double omega_ = 0.0;
  double r_ = 0.0;
  double lambda_ = 0.0;
  std::vector<cplx> c_;  // c_[k] = C_{k+1} for harmonic-list form
};

// Convenience: eta(t) = r sin(omega t), i.e. C_1 = -i r/2.
ForcingSpec sine_forcing(double omega, double r);

}  // namespace dwell
