#include "dwell/forcing.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dwell/config.hpp"

namespace dwell {

ForcingSpec ForcingSpec::harmonics(double omega, std::vector<cplx> c) {
  if (!(omega > 0.0)) throw std::invalid_argument("forcing: omega must be positive");
  bool any = false;
  for (const cplx& z : c)
    if (z != cplx(0.0, 0.0)) any = true;
  if (!any) throw std::invalid_argument("forcing: all coefficients zero (eta == 0)");
  while (!c.empty() && c.back() == cplx(0.0, 0.0)) c.pop_back();
  ForcingSpec s;
  s.form_ = Form::harmonic_list;
  s.omega_ = omega;
  s.c_ = std::move(c);
  return s;
}

ForcingSpec ForcingSpec::geometric(double omega, double r, double lambda) {
  if (!(omega > 0.0)) throw std::invalid_argument("forcing: omega must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("forcing: geometric form needs r > 0");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("forcing: geometric form needs lambda in (0,1)");
  ForcingSpec s;
  s.form_ = Form::geometric;
  s.omega_ = omega;
  s.r_ = r;
  s.lambda_ = lambda;
  return s;
}

ForcingSpec sine_forcing(double omega, double r) {
  return ForcingSpec::harmonics(omega, {cplx(0.0, -0.5 * r)});
}

cplx ForcingSpec::coefficient(long j) const {
  if (j == 0) return 0.0;
  const long a = std::labs(j);
  cplx c;
  if (form_ == Form::geometric) {
    c = -r_ * std::pow(lambda_, static_cast<double>(a));
  } else {
    if (a > static_cast<long>(c_.size())) return 0.0;
    c = c_[a - 1];
  }
  return j > 0 ? c : std::conj(c);
}

long ForcingSpec::max_index(double tol) const {
  if (form_ == Form::harmonic_list) return static_cast<long>(c_.size());
  // r lambda^n < tol
  const double n = std::log(tol / r_) / std::log(lambda_);
  return std::max(1L, static_cast<long>(std::ceil(n)));
}

double ForcingSpec::sup_norm() const {
  if (form_ == Form::geometric) return 2.0 * r_ * lambda_ / (1.0 - lambda_);
  double s = 0.0;
  for (const cplx& z : c_) s += std::abs(z);
  return 2.0 * s;
}

double ForcingSpec::eval_eta(double t) const {
  if (form_ == Form::geometric) {
    const double c = std::cos(omega_ * t);
    return 2.0 * r_ * lambda_ * (lambda_ - c) / (1.0 + lambda_ * lambda_ - 2.0 * lambda_ * c);
  }
  double s = 0.0;
  for (size_t k = 0; k < c_.size(); ++k) {
    const double ph = omega_ * t * static_cast<double>(k + 1);
    s += 2.0 * (c_[k].real() * std::cos(ph) - c_[k].imag() * std::sin(ph));
  }
  return s;
}

std::string ForcingSpec::to_config() const {
  std::ostringstream os;
  os.precision(17);
  os << "omega = " << omega_ << "\n";
  if (form_ == Form::geometric) {
    os << "form = geometric\n";
    os << "r = " << r_ << "\n";
    os << "lambda = " << lambda_ << "\n";
  } else {
    os << "form = harmonic-list\n";
    for (size_t k = 0; k < c_.size(); ++k) {
      os << "c_re_" << (k + 1) << " = " << c_[k].real() << "\n";
      os << "c_im_" << (k + 1) << " = " << c_[k].imag() << "\n";
    }
  }
  return os.str();
}

ForcingSpec ForcingSpec::from_config_text(const std::string& text) {
  return forcing_from_config(parse_flat_config(text));
}

}  // namespace dwell
