#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "padtors/hensel.hpp"
#include "padtors/series.hpp"

namespace padtors {

/// Affine point or the point at infinity.
class CurvePoint {
 public:
  CurvePoint() = default;  // infinity
  CurvePoint(PadicNumber x, PadicNumber y) : inf_(false), x_(std::move(x)), y_(std::move(y)) {}
  static CurvePoint infinity() { return {}; }

  bool is_infinity() const noexcept { return inf_; }
  const PadicNumber& x() const;
  const PadicNumber& y() const;
  CurvePoint operator-() const;

 private:
  bool inf_ = true;
  PadicNumber x_, y_;
};

/// y^2 = x^3 + a4 x + a6 over Q_p with certified nonzero discriminant.
class WeierstrassCurve {
 public:
  /// Throws DomainError if the discriminant is not certified nonzero.
  WeierstrassCurve(PadicNumber a4, PadicNumber a6);
  static WeierstrassCurve from_rationals(const mpq_class& a4, const mpq_class& a6, std::uint32_t p, int prec);

  std::uint32_t prime() const noexcept { return p_; }
  const PadicNumber& a4() const noexcept { return a4_; }
  const PadicNumber& a6() const noexcept { return a6_; }
  /// -16 (4 a4^3 + 27 a6^2)
  const PadicNumber& disc() const noexcept { return disc_; }
  /// 6912 a4^3 / (4 a4^3 + 27 a6^2)
  const PadicNumber& j_invariant() const noexcept { return j_; }
  /// 1/j; throws DomainError when j = 0.
  PadicNumber j_inverse() const;
  /// Smallest coefficient precision.
  int precision() const;

  /// x^3 + a4 x + a6
  PadicNumber rhs(const PadicNumber& x) const;
  /// y^2 - x^3 - a4 x - a6 (exact zero at infinity).
  PadicNumber residual(const CurvePoint& P) const;
  /// Residual is zero to within slack digits of the point's precision.
  bool contains(const CurvePoint& P, int slack = 2) const;

 private:
  std::uint32_t p_;
  PadicNumber a4_, a6_, disc_, j_;
};

/// A cubic whose discriminant vanishes: the nodal or cuspidal fiber.
struct SingularCurve {
  PadicNumber a4, a6;
  std::string description;
};

using CurveOrSingular = std::variant<WeierstrassCurve, SingularCurve>;

/// Singular record when the discriminant is not certified nonzero.
CurveOrSingular make_curve(const PadicNumber& a4, const PadicNumber& a6);

CurvePoint ec_add(const WeierstrassCurve& E, const CurvePoint& P, const CurvePoint& Q);
CurvePoint ec_double(const WeierstrassCurve& E, const CurvePoint& P);
CurvePoint ec_smul(const WeierstrassCurve& E, long k, const CurvePoint& P);

/// Valuation of the difference of P and Q as points (exact zero difference gives
/// kInfinitePrecision; an undecided difference gives its precision).
struct PointDistance {
  int val = 0;
  bool certified_nonzero = false;
};
PointDistance point_distance(const CurvePoint& P, const CurvePoint& Q);

struct OrderCertificate {
  /// Valuation of (n-1)P - (-P), i.e. how close nP is to infinity.
  int residual_val = 0;
  /// (n / l, valuation of the certified nonzero difference) for each prime l | n.
  std::vector<std::pair<int, int>> nonvanishing;
};

struct OrderResult {
  std::optional<int> order;
  OrderCertificate certificate;
};

/// Least n <= bound with nP = infinity. nP counts as infinity when (n-1)P agrees with -P
/// to min_residual digits (min_residual <= 0: when the difference is not certified nonzero).
/// Every (n/l)P for l | n prime must differ from infinity by a certified digit, otherwise a
/// PrecisionError is thrown. Without an order the certificate holds the residual at n = bound.
OrderResult ec_exact_order(const WeierstrassCurve& E, const CurvePoint& P, int bound, int min_residual = 0);

/// psi_n = (2y)^(y_factor) * x_part(x).
struct DivisionPolynomial {
  Polynomial x_part;
  bool y_factor = false;
};
DivisionPolynomial ec_division_poly(const WeierstrassCurve& E, int n);

/// Formal logarithm u(tau) = tau + O(tau^2) in the parameter tau = -x/y, with T terms.
class FormalLog {
 public:
  FormalLog(const WeierstrassCurve& E, int terms);
  const PadicSeries& series() const noexcept { return log_; }
  /// w(tau) = -1/y as a series in tau.
  const PadicSeries& w_series() const noexcept { return w_; }
  /// Requires val(x) <= -2.
  PadicNumber operator()(const CurvePoint& P) const;

 private:
  PadicSeries w_, log_;
};

/// Terms needed so that the log series is accurate to prec digits on val(tau) >= 1.
int formal_log_terms(std::uint32_t p, int prec);

PadicNumber ec_log(const WeierstrassCurve& E, const CurvePoint& P);
PadicNumber local_parameter(const CurvePoint& P);
bool in_kernel_of_reduction(const CurvePoint& P);

struct KernelMultiple {
  int m = 0;
  CurvePoint point;
};
/// Smallest m <= bound with mP in the kernel of reduction. Throws DomainError if P is torsion
/// or no multiple is found.
KernelMultiple ec_multiple_into_kernel(const WeierstrassCurve& E, const CurvePoint& P, int bound = 64);

struct TorsionPoint {
  CurvePoint point;
  int order = 0;
  OrderCertificate certificate;
};

struct TorsionScan {
  std::vector<TorsionPoint> points;
  /// Roots of a division polynomial whose y-coordinate is not in Q_p: (x, n).
  std::vector<std::pair<PadicNumber, int>> x_only;
  std::vector<UnresolvedClass> unresolved;
};

/// All Q_p-rational torsion points with x in p^disk_val Z_p and order <= max_order,
/// each with a certified exact order, in deterministic order (by order, then residue).
TorsionScan ec_torsion_scan(const WeierstrassCurve& E, int max_order, int disk_val,
                            const RootScanOptions& opts = {});

/// Order of p-adic numbers by valuation, then digits from the least significant up.
bool residue_less(const PadicNumber& a, const PadicNumber& b);

}  // namespace padtors
