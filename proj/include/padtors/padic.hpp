#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "padtors/errors.hpp"

namespace padtors {

/// Default working precision, in base-p digits.
inline constexpr int kDefaultPrecision = 60;

/// Throws DomainError unless p is a prime different from 2 and 3.
void check_prime(std::uint32_t p);

bool is_prime(std::uint32_t n);

/// p^k for k >= 0, cached per prime and thread; the reference stays valid in the calling thread.
const mpz_class& pow_p(std::uint32_t p, int k);

/// p-adic valuation of a nonzero integer.
int valuation_of(const mpz_class& n, std::uint32_t p);

/// An element of Q_p known modulo p^N (capped absolute precision).
///
/// Three states:
///   - exact zero (the only exact value; absolute precision is infinite),
///   - an inexact zero O(p^N), "zero to precision N",
///   - p^v * u + O(p^N) with v < N and u a unit stored in [0, p^(N-v)).
///
/// Every operation reports the absolute precision justified by its operands.
/// Values are immutable; all operations return new values.
class PadicNumber {
 public:
  static constexpr int kInfinitePrecision = std::numeric_limits<int>::max();

  /// Exact zero with no prime attached; adopts the prime of the other operand.
  PadicNumber() = default;

  static PadicNumber zero(std::uint32_t p);
  static PadicNumber zero_to_precision(std::uint32_t p, int prec);
  static PadicNumber from_integer(const mpz_class& n, std::uint32_t p, int prec);
  static PadicNumber from_rational(const mpz_class& num, const mpz_class& den, std::uint32_t p,
                                   int prec);
  /// p^val * raw + O(p^prec); raw may carry factors of p and may be negative.
  static PadicNumber from_scaled(std::uint32_t p, int val, const mpz_class& raw, int prec);
  /// Base-p digits d0 + d1 p + ... scaled by p^val. Digits must lie in [0, p).
  static PadicNumber from_digits(std::uint32_t p, int val, const std::vector<std::uint32_t>& digits,
                                 int prec);

  std::uint32_t prime() const noexcept { return p_; }
  bool is_exact_zero() const noexcept { return exact_zero_; }
  /// Zero modulo p^abs_prec() but not known to be exactly zero.
  bool is_indistinguishable_from_zero() const noexcept { return !exact_zero_ && unit_ == 0; }
  bool is_nonzero() const noexcept { return !exact_zero_ && unit_ != 0; }
  /// True for exact zero, false for certified nonzero; throws PrecisionError otherwise.
  bool is_zero() const;

  /// Valuation; for O(p^N) this is the lower bound N, for exact zero kInfinitePrecision.
  int valuation() const noexcept { return val_; }
  int abs_prec() const noexcept { return prec_; }
  /// Number of certified digits of the unit part (0 for any zero).
  int rel_prec() const noexcept;
  const mpz_class& unit() const noexcept { return unit_; }
  /// Digits of the unit part, least significant first; size rel_prec().
  std::vector<std::uint32_t> digits() const;
  std::uint32_t leading_digit() const;
  bool is_integral() const noexcept { return exact_zero_ || val_ >= 0; }
  bool is_unit() const noexcept { return is_nonzero() && val_ == 0; }

  /// Integer representative in [0, p^prec) of an integral value.
  mpz_class representative() const;
  /// Rational p^val * unit (the canonical representative of the class).
  mpq_class to_rational() const;

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);

  /// Multiplication by an exact integer; precision grows by its valuation.
  PadicNumber mul_int(const mpz_class& k) const;
  /// Division by an exact nonzero integer; precision is debited by its valuation.
  PadicNumber div_int(const mpz_class& k) const;
  PadicNumber inverse() const;
  PadicNumber pow(unsigned e) const;
  /// Exact multiplication by p^k.
  PadicNumber shifted(int k) const;

  /// Same value with absolute precision min(prec, abs_prec()).
  PadicNumber with_prec(int prec) const;
  /// Treat the current representative as exact and extend it to absolute precision prec.
  /// Only meaningful when the caller knows the representative is the intended value.
  PadicNumber lifted(int prec) const;

  bool is_square() const;
  /// Square root of a value of even valuation with square unit part.
  /// Sign convention: the root whose leading digit lies in [1, (p-1)/2].
  PadicNumber sqrt() const;

  /// Certified lower bound on val(*this - other); throws if the difference has no
  /// certified digits and the caller asks for more than is known.
  int agreement(const PadicNumber& other) const;
  /// val(*this - other) >= digits, certified. Throws PrecisionError when undecidable.
  bool agrees_with(const PadicNumber& other, int digits) const;

  /// Mathematical equality: (a - b).is_zero(); throws when undecidable.
  bool equals(const PadicNumber& other) const;
  /// Representation identity (same prime, valuation, unit and precision).
  friend bool operator==(const PadicNumber& a, const PadicNumber& b);

  /// "p^v * (d0 + d1*p + ...) + O(p^N)" with nonzero digits only.
  std::string to_string() const;
  /// Inverse of to_string; "0" gives an exact zero without a prime.
  static PadicNumber parse(const std::string& text);

 private:
  friend class ProductSum;
  static PadicNumber normalized(std::uint32_t p, int val, mpz_class raw, int prec);

  std::uint32_t p_ = 0;
  bool exact_zero_ = true;
  int val_ = kInfinitePrecision;
  int prec_ = kInfinitePrecision;
  mpz_class unit_ = 0;
};

/// Sum of products a_i b_i with a single normalization at the end; same value and
/// precision as adding the products one at a time.
class ProductSum {
 public:
  explicit ProductSum(std::uint32_t p) : p_(p) {}
  void add(const PadicNumber& a, const PadicNumber& b);
  PadicNumber result() const;

 private:
  std::uint32_t p_;
  bool any_ = false;
  int prec_ = PadicNumber::kInfinitePrecision;
  int val_ = PadicNumber::kInfinitePrecision;
  mpz_class raw_ = 0;
};

/// "num/den" or "num" as an exact rational.
mpq_class parse_rational(const std::string& text);

}  // namespace padtors
