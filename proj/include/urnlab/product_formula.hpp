#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>

#include <Eigen/Core>

#include "urnlab/colors.hpp"
#include "urnlab/sparse_law.hpp"

namespace urnlab {

/// Complex number held as (log|z|, arg z); zero is log_mag == -inf.
class LogComplex {
 public:
  LogComplex() = default;  // one
  LogComplex(double log_mag, double arg);

  static LogComplex zero() { return {-INFINITY, 0.0}; }
  static LogComplex from_complex(std::complex<double> z);
  /// 1 + w, accurate for small |w|.
  static LogComplex one_plus(std::complex<double> w);

  double log_mag() const { return log_mag_; }
  double arg() const { return arg_; }
  bool is_zero() const { return log_mag_ == -INFINITY; }
  double magnitude() const { return std::exp(log_mag_); }
  std::complex<double> value() const;
  /// Principal complex logarithm; undefined for zero.
  std::complex<double> log() const { return {log_mag_, arg_}; }

  LogComplex& operator*=(const LogComplex& other);
  LogComplex& operator/=(const LogComplex& other);
  friend LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
  friend LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }

 private:
  double log_mag_ = 0.0;
  double arg_ = 0.0;
};

/// Partial Euler product prod_{j=1}^n (1 + z/j). Poles z in {-1, ..., -n}
/// give the zero sentinel.
LogComplex pi_n(std::complex<double> z, std::int64_t n);

namespace detail {
// Lanczos coefficients, g = 7, nine terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace detail

/// log Gamma(z) by the Lanczos approximation, for real or complex scalars.
/// For real z only z > 0 is meaningful.
template <typename Scalar>
Scalar log_gamma_lanczos(Scalar z) {
  using std::log;
  using std::sin;
  constexpr double pi = std::numbers::pi;
  if (std::real(z) < 0.5) {
    return Scalar(std::log(pi)) - log(sin(pi * z)) - log_gamma_lanczos<Scalar>(Scalar(1.0) - z);
  }
  z -= Scalar(1.0);
  Scalar series = detail::kLanczosCoeffs[0];
  for (std::size_t i = 1; i < detail::kLanczosCoeffs.size(); ++i) {
    series += detail::kLanczosCoeffs[i] / (z + Scalar(static_cast<double>(i)));
  }
  const Scalar t = z + Scalar(detail::kLanczosG + 0.5);
  return Scalar(0.5 * std::log(2.0 * pi)) + (z + Scalar(0.5)) * log(t) - t + log(series);
}

/// Gamma(x) for 0 < x <= 50.
double gamma_real(double x);

/// Pi_n(z) Gamma(z + 1) / n^z, which tends to 1.
std::complex<double> gauss_ratio(std::complex<double> z, std::int64_t n);

/// Evaluates sum_v U_{0,v} exp(<lambda, v>) (or the characteristic analogue).
using InitialMgf = std::function<double(const Eigen::VectorXd&)>;
using InitialCf = std::function<std::complex<double>(const Eigen::VectorXd&)>;

/// log E exp(<lambda, Z_n>) = log M_0(lambda) + sum_j log(1 - 1/(j+1) + e(lambda)/(j+1)).
double log_mgf_zn(const IncrementModel& model, const InitialMgf& u0_mgf_at,
                  const Eigen::Ref<const Eigen::VectorXd>& lambda, std::int64_t n);
double log_mgf_zn(const IncrementModel& model, const SparseLaw& u0,
                  const Eigen::Ref<const Eigen::VectorXd>& lambda, std::int64_t n);

/// E exp(i <t, Z_n>) as a LogComplex.
LogComplex cf_zn(const IncrementModel& model, const InitialCf& u0_cf_at,
                 const Eigen::Ref<const Eigen::VectorXd>& t, std::int64_t n);
LogComplex cf_zn(const IncrementModel& model, const SparseLaw& u0,
                 const Eigen::Ref<const Eigen::VectorXd>& t, std::int64_t n);

}  // namespace urnlab
