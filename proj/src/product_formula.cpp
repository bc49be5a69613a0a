#include "urnlab/product_formula.hpp"

#include <string>

#include "urnlab/error.hpp"
#include "urnlab/numeric.hpp"

namespace urnlab {

LogComplex::LogComplex(double log_mag, double arg)
    : log_mag_(log_mag), arg_(log_mag == -INFINITY ? 0.0 : wrap_angle(arg)) {}

LogComplex LogComplex::from_complex(std::complex<double> z) {
  if (z == 0.0) return zero();
  return {std::log(std::abs(z)), std::arg(z)};
}

LogComplex LogComplex::one_plus(std::complex<double> w) {
  const double re = 1.0 + w.real();
  if (re == 0.0 && w.imag() == 0.0) return zero();
  const double arg = std::atan2(w.imag(), re);
  if (std::abs(w) < 0.5) {
    return {0.5 * std::log1p(2.0 * w.real() + std::norm(w)), arg};
  }
  return {std::log(std::hypot(re, w.imag())), arg};
}

std::complex<double> LogComplex::value() const {
  if (is_zero()) return 0.0;
  return std::polar(std::exp(log_mag_), arg_);
}

LogComplex& LogComplex::operator*=(const LogComplex& other) {
  if (is_zero() || other.is_zero()) return *this = zero();
  log_mag_ += other.log_mag_;
  arg_ = wrap_angle(arg_ + other.arg_);
  return *this;
}

LogComplex& LogComplex::operator/=(const LogComplex& other) {
  if (other.is_zero()) throw UrnError(ErrorKind::DomainError, "division by zero LogComplex");
  if (is_zero()) return *this;
  log_mag_ -= other.log_mag_;
  arg_ = wrap_angle(arg_ - other.arg_);
  return *this;
}

LogComplex pi_n(std::complex<double> z, std::int64_t n) {
  CompensatedSum log_mag;
  CompensatedSum arg;
  for (std::int64_t j = 1; j <= n; ++j) {
    const LogComplex factor = LogComplex::one_plus(z / static_cast<double>(j));
    if (factor.is_zero()) return LogComplex::zero();
    log_mag += factor.log_mag();
    arg += factor.arg();
  }
  return {log_mag.value(), arg.value()};
}

double gamma_real(double x) {
  if (!(x > 0.0 && x <= 50.0)) {
    throw UrnError(ErrorKind::DomainError, "gamma_real needs 0 < x <= 50, got " + std::to_string(x));
  }
  return std::exp(log_gamma_lanczos(x));
}

std::complex<double> gauss_ratio(std::complex<double> z, std::int64_t n) {
  if (n < 2) throw UrnError(ErrorKind::DomainError, "gauss_ratio needs n >= 2");
  const std::complex<double> zp1 = z + 1.0;
  if (zp1.imag() == 0.0 && zp1.real() <= 0.0 && zp1.real() == std::floor(zp1.real())) {
    throw UrnError(ErrorKind::GammaPole, "Gamma(z + 1) has a pole");
  }
  const LogComplex product = pi_n(z, n);
  const std::complex<double> log_ratio =
      product.log() + log_gamma_lanczos(zp1) - z * std::log(static_cast<double>(n));
  return std::exp(log_ratio);
}

double log_mgf_zn(const IncrementModel& model, const InitialMgf& u0_mgf_at,
                  const Eigen::Ref<const Eigen::VectorXd>& lambda, std::int64_t n) {
  const double e = mgf(model, lambda);
  CompensatedSum acc;
  acc += std::log(u0_mgf_at(lambda));
  for (std::int64_t j = 1; j <= n; ++j) acc += std::log1p((e - 1.0) / static_cast<double>(j + 1));
  return acc.value();
}

double log_mgf_zn(const IncrementModel& model, const SparseLaw& u0,
                  const Eigen::Ref<const Eigen::VectorXd>& lambda, std::int64_t n) {
  return log_mgf_zn(
      model, [&](const Eigen::VectorXd& l) { return initial_mgf(u0, model.embedding(), l); }, lambda, n);
}

LogComplex cf_zn(const IncrementModel& model, const InitialCf& u0_cf_at,
                 const Eigen::Ref<const Eigen::VectorXd>& t, std::int64_t n) {
  const std::complex<double> e = cf(model, t);
  const LogComplex start = LogComplex::from_complex(u0_cf_at(t));
  if (start.is_zero()) return start;
  CompensatedSum log_mag;
  CompensatedSum arg;
  log_mag += start.log_mag();
  arg += start.arg();
  for (std::int64_t j = 1; j <= n; ++j) {
    const LogComplex factor = LogComplex::one_plus((e - 1.0) / static_cast<double>(j + 1));
    if (factor.is_zero()) return LogComplex::zero();
    log_mag += factor.log_mag();
    arg += factor.arg();
  }
  return {log_mag.value(), arg.value()};
}

LogComplex cf_zn(const IncrementModel& model, const SparseLaw& u0,
                 const Eigen::Ref<const Eigen::VectorXd>& t, std::int64_t n) {
  return cf_zn(
      model, [&](const Eigen::VectorXd& s) { return initial_cf(u0, model.embedding(), s); }, t, n);
}

}  // namespace urnlab
