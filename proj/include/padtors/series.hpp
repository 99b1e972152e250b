#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "padtors/padic.hpp"

namespace padtors {

/// Default number of series terms.
inline constexpr int kDefaultSeriesOrder = 64;

/// Truncated power (or Laurent) series in one variable with p-adic coefficients:
///
///   sum_{k = lead_offset}^{trunc - 1} c_k x^k + O(x^trunc)
///
/// A series whose trunc is kPolynomial is an exact polynomial. Each coefficient
/// carries its own absolute precision, so precision losses stay local.
class PadicSeries {
 public:
  static constexpr int kPolynomial = std::numeric_limits<int>::max();

  PadicSeries() = default;
  /// coeffs[i] is the coefficient of x^(lead_offset + i).
  PadicSeries(std::uint32_t p, std::vector<PadicNumber> coeffs, int trunc, int lead_offset = 0);

  static PadicSeries polynomial(std::uint32_t p, std::vector<PadicNumber> coeffs, int lead_offset = 0);
  /// Polynomial with exact-rational coefficients, each known to precision prec.
  static PadicSeries from_rationals(std::uint32_t p, int prec, const std::vector<mpq_class>& coeffs,
                                    int trunc = kPolynomial);
  /// The monomial x as an exact polynomial.
  static PadicSeries variable(std::uint32_t p, int prec);

  std::uint32_t prime() const noexcept { return p_; }
  int lead_offset() const noexcept { return offset_; }
  int trunc() const noexcept { return trunc_; }
  bool is_polynomial() const noexcept { return trunc_ == kPolynomial; }
  /// Index one past the last stored coefficient.
  int end_index() const noexcept { return offset_ + static_cast<int>(coeffs_.size()); }
  const std::vector<PadicNumber>& coeffs() const noexcept { return coeffs_; }

  /// Coefficient of x^k; exact zero below the offset or past a polynomial's degree.
  PadicNumber coeff(int k) const;
  /// Smallest absolute precision among the stored coefficients.
  int min_abs_prec() const;
  /// Smallest coefficient valuation (inexact zeros count with their precision).
  int min_valuation() const;
  /// All coefficients have valuation >= 0.
  bool is_integral() const;

  PadicSeries truncated(int trunc) const;
  /// Coefficients with their precision capped at prec.
  PadicSeries with_prec(int prec) const;

  PadicSeries operator-() const;
  friend PadicSeries operator+(const PadicSeries& f, const PadicSeries& g);
  friend PadicSeries operator-(const PadicSeries& f, const PadicSeries& g);
  friend PadicSeries operator*(const PadicSeries& f, const PadicSeries& g);
  PadicSeries scaled(const PadicNumber& c) const;
  PadicSeries pow(unsigned e) const;

  /// f(g(x)). Truncation T' = min(T_f, T_g, T_f * v) where v is the x-adic order of g.
  /// If g(0) != 0 it must have positive valuation; the unknown tail of f is then bounded
  /// through g(0)^T_f and coefficient precisions are capped accordingly.
  PadicSeries compose(const PadicSeries& g) const;
  /// 1/f for a leading coefficient that is a unit.
  PadicSeries reciprocal() const;
  /// Square root of a series with constant term 1 (the branch with constant term 1).
  PadicSeries sqrt() const;
  /// Compositional inverse of f with f(0) = 0 and f'(0) a unit; the result is checked to be
  /// integral and a two-sided inverse.
  PadicSeries comp_inverse() const;
  /// Formal antiderivative with zero constant term; coefficient k is divided by k + 1.
  PadicSeries integrate() const;
  PadicSeries derive() const;

  /// f(t) for val(t) >= 1 (any t for polynomials). The reported precision includes the
  /// truncation tail bound trunc * val(t) + min_valuation().
  PadicNumber eval(const PadicNumber& t) const;

 private:
  std::uint32_t p_ = 0;
  int offset_ = 0;
  int trunc_ = kPolynomial;
  std::vector<PadicNumber> coeffs_;
};

/// Certified lower bound on min_k val(f_k - g_k) over k < upto.
int series_agreement(const PadicSeries& f, const PadicSeries& g, int upto);

}  // namespace padtors
