#pragma once

#include <optional>
#include <vector>

#include "padtors/elliptic.hpp"
#include "padtors/tate.hpp"

namespace padtors {

/// The family E_t: y^2 = (x - 1/12)^2 (x + 1/6) + t (x - c), c = p/(1-p)^2 + 1/12, and
/// its comparison with the Tate curve through phi = q(1/j) o (1/j(E_t)).
struct FamilyModel {
  std::uint32_t p = 0;
  int prec = 0;
  int order = 0;
  TateModel tate;
  /// A2(t) = A2_exact[0] + A2_exact[1] t, likewise B2; from the exact expansion of E_t.
  std::vector<mpq_class> A2_exact, B2_exact;
  PadicSeries A2, B2;
  PadicSeries jinvE;
  PadicSeries phi;
  PadicSeries alpha, beta, lambda;
  /// Constant section (c, p(1+p)/(2(1-p)^3)).
  mpq_class section_x, section_y;
};

FamilyModel fam_build(std::uint32_t p, int prec, int order);

/// y^2 = x^3 + A2(t) x + B2(t); the nodal cubic at t = 0. Requires val(t) >= 2.
CurveOrSingular fam_curve_at(const FamilyModel& F, const PadicNumber& t);

struct ShatValue {
  PadicNumber z;
  PadicNumber q;
  PadicNumber lambda;
  /// True when the section was matched with -lambda instead of lambda.
  bool negated_lambda = false;
  NewtonResult newton;
};

/// s-hat(t): the z with eta_{phi(t)}(z) mapped by (x, y) -> (lambda^2 x, lambda^3 y) onto the
/// constant section. Round-trips both coordinates.
ShatValue fam_shat_eval(const FamilyModel& F, const PadicNumber& t);

/// F_n(t) = phi(t) - s-hat(t)^n.
PadicNumber fam_torsion_equation(const FamilyModel& F, int n, const PadicNumber& t);

struct TorsionRecord {
  int n = 0;
  PadicNumber t;
  int val_t = 0;
  std::uint32_t leading_digit = 0;
  /// Residual of F_n at t.
  int val_equation = 0;
  /// Order certificate on E_{t~} for the exact integer t~ = representative of t.
  OrderCertificate certificate;
  int certification_prec = 0;
  std::vector<NewtonStep> newton_trace;
};

struct SolveOptions {
  /// nP counts as infinity once (n-1)P and -P agree to this many digits (<= 0: 2 prec / 3).
  int min_residual = 0;
  int certification_retries = 3;
};

struct CertifiedOrder {
  OrderCertificate certificate;
  int prec = 0;
};

/// Certifies that the section has exact order n on E_{t~}, t~ the integer representative of t,
/// using exact rational coefficients. CertificationError when the group law gives another
/// order; PrecisionError when n s comes close to infinity but t is too coarse to decide.
CertifiedOrder fam_certify_order(const FamilyModel& F, int n, const PadicNumber& t, const SolveOptions& opts = {});

/// t_n with phi(t_n) = s-hat(t_n)^n by Newton from t0 = p^n / phi'(0); the exact order n of
/// the section on E_{t_n} is then certified with the group law. Throws CertificationError when
/// the group law disagrees.
TorsionRecord fam_solve_tn(const FamilyModel& F, int n, const SolveOptions& opts = {});

struct Normalization {
  std::string name;
  std::string description;
  bool holds = false;
};

struct AccumulationReport {
  std::vector<TorsionRecord> records;
  std::vector<int> valuations;
  bool strictly_increasing = false;
  bool orders_distinct = false;
  std::optional<int> smallest_certified_n;
  std::vector<Normalization> normalizations;
};

/// Runs fam_solve_tn for n_min..n_max (concurrently) and merges by n.
AccumulationReport fam_accumulation_report(const FamilyModel& F, int n_min, int n_max,
                                           const SolveOptions& opts = {});

struct UniquenessScan {
  int n = 0;
  int classes = 0;
  /// val(F_n') at the seed; a class t0 + p^(n+3) Z_p holds a root iff val(F_n(t0)) >= n + 3 + this.
  int val_derivative = 0;
  std::vector<PadicNumber> root_classes;
};

/// Evaluates F_n on every class of p^(n-1) Z_p / p^(n+3).
UniquenessScan fam_uniqueness_scan(const FamilyModel& F, int n);

struct SeparationPair {
  std::size_t i = 0, j = 0;
  int val = 0;
};

struct SeparationReport {
  TorsionScan scan;
  std::vector<SeparationPair> distances;
  /// Largest val(x_i - x_j) over pairs of different exact orders (epsilon = p^-val); empty when
  /// no such pair exists.
  std::optional<int> min_separation_val;
  int depth = 0;
  bool separated = false;
  bool stable = false;
  std::vector<std::string> warnings;
};

/// Torsion x-coordinates of a good-reduction curve, their pairwise distances and the minimum
/// distance between points of different orders; rescans at depth + 2 for stability.
SeparationReport fam_separation_check(const WeierstrassCurve& E, int max_order, int disk_val,
                                      const RootScanOptions& opts = {});

}  // namespace padtors
