#pragma once

#include <optional>

#include "padtors/elliptic.hpp"
#include "padtors/hensel.hpp"
#include "padtors/series.hpp"

namespace padtors {

/// The Tate curve in short Weierstrass form y^2 = x^3 + a4(q) x + a6(q) with
/// a4 = -1/48 - 5 s3(q), a6 = 1/864 - (7/12) s5(q), s_k = sum n^k q^n / (1 - q^n).
struct TateModel {
  std::uint32_t p = 0;
  int prec = 0;
  int order = 0;
  PadicSeries a4;
  PadicSeries a6;
  /// 1/j as a q-series: q - 744 q^2 + ...
  PadicSeries jinv;
  /// Compositional inverse of jinv.
  PadicSeries q_of_jinv;
  /// Exact rational coefficients of a4 and a6 (first `order` terms).
  std::vector<mpq_class> a4_exact;
  std::vector<mpq_class> a6_exact;
};

/// Builds the Silverman model y^2 + xy = x^3 + A(q) x + B(q) and moves it to short form.
/// Both readings of the coordinate change (X, Y) -> (X + 1/12, Y + X/2) are tried; the one
/// with the expected leading terms is kept, otherwise DomainError lists both.
TateModel tate_build(std::uint32_t p, int prec, int order);

/// Smooth Tate curve for val(q) >= 1, or the nodal cubic y^2 = (x - 1/12)^2 (x + 1/6) at q = 0.
CurveOrSingular tate_curve_at(const TateModel& M, const PadicNumber& q);

/// eta_q(z) = (X(q, z), Y(q, z)). z is first moved into val(q) > val(z) >= 0 by a power of q.
/// q = 0 gives the point z/(1-z)^2 + 1/12 of the nodal cubic. Throws DomainError at z in q^Z.
CurvePoint tate_unif(const TateModel& M, const PadicNumber& q, const PadicNumber& z);

/// dX/dz at (q, z).
PadicNumber tate_dxdz(const TateModel& M, const PadicNumber& q, const PadicNumber& z);

struct TateTorsion {
  /// Least n <= max_n with z^n in q^Z.
  std::optional<int> order;
  /// Least n0 with n0 val(z) = 0 mod val(q), and the unit z^n0 q^(-k).
  int n0 = 0;
  PadicNumber unit;
  /// Exact order of eta_q(z) from the Weierstrass group law (when order > 1).
  std::optional<int> weierstrass_order;
};

/// z is torsion in G_m / q^Z iff z = zeta q^r; here zeta must be a (p-1)-st root of unity.
/// The answer is cross-checked against ec_exact_order on the curve.
TateTorsion tate_is_torsion(const TateModel& M, const PadicNumber& q, const PadicNumber& z, int max_n);

/// Solves X(q, z) = X_target by Newton from z = p with the exact derivative dX/dz.
/// target_prec <= 0 picks the precision of the inputs.
NewtonResult tate_solve_z(const TateModel& M, const PadicNumber& x_target, const PadicNumber& q,
                          int target_prec = 0);

/// X(0, p) = p/(1-p)^2 + 1/12 and Y(0, p) = p(1+p)/(2(1-p)^3) as exact rationals.
mpq_class section_x_rational(std::uint32_t p);
mpq_class section_y_rational(std::uint32_t p);

}  // namespace padtors
