#include "padtors/elliptic.hpp"

#include <algorithm>
#include <map>

namespace padtors {

namespace {

int val_or_inf(const PadicNumber& a) {
  return a.is_exact_zero() ? PadicNumber::kInfinitePrecision : a.valuation();
}

PadicNumber integer(long n, std::uint32_t p, int prec) { return PadicNumber::from_integer(n, p, prec); }

}  // namespace

const PadicNumber& CurvePoint::x() const {
  if (inf_) throw DomainError("the point at infinity has no affine coordinates");
  return x_;
}

const PadicNumber& CurvePoint::y() const {
  if (inf_) throw DomainError("the point at infinity has no affine coordinates");
  return y_;
}

CurvePoint CurvePoint::operator-() const { return inf_ ? *this : CurvePoint(x_, -y_); }

WeierstrassCurve::WeierstrassCurve(PadicNumber a4, PadicNumber a6)
    : p_(std::max(a4.prime(), a6.prime())), a4_(std::move(a4)), a6_(std::move(a6)) {
  check_prime(p_);
  const auto a43 = a4_.pow(3);
  const auto d = a43.mul_int(4) + a6_.pow(2).mul_int(27);
  disc_ = d.mul_int(-16);
  if (!disc_.is_nonzero()) throw DomainError("singular curve: discriminant vanishes to working precision");
  j_ = a43.mul_int(6912) / d;
  const auto lhs = j_ * disc_;
  const auto rhs = a43.mul_int(-110592);
  if (!lhs.agrees_with(rhs, std::min(lhs.abs_prec(), rhs.abs_prec()))) {
    throw CertificationError("j * disc relation failed");
  }
}

WeierstrassCurve WeierstrassCurve::from_rationals(const mpq_class& a4, const mpq_class& a6, std::uint32_t p,
                                                  int prec) {
  auto conv = [&](const mpq_class& q) {
    return q == 0 ? PadicNumber::zero(p) : PadicNumber::from_rational(q.get_num(), q.get_den(), p, prec);
  };
  return WeierstrassCurve(conv(a4), conv(a6));
}

PadicNumber WeierstrassCurve::j_inverse() const {
  if (!j_.is_nonzero()) throw DomainError("j = 0 has no inverse");
  return j_.inverse();
}

int WeierstrassCurve::precision() const { return std::min(a4_.abs_prec(), a6_.abs_prec()); }

PadicNumber WeierstrassCurve::rhs(const PadicNumber& x) const { return (x * x + a4_) * x + a6_; }

PadicNumber WeierstrassCurve::residual(const CurvePoint& P) const {
  if (P.is_infinity()) return PadicNumber::zero(p_);
  return P.y() * P.y() - rhs(P.x());
}

bool WeierstrassCurve::contains(const CurvePoint& P, int slack) const {
  if (P.is_infinity()) return true;
  const auto r = residual(P);
  if (!r.is_nonzero()) return true;
  // scale-free: compare against the size of y^2
  const int scale = std::min(2 * P.y().valuation(), 3 * std::min(P.x().valuation(), 0));
  return r.valuation() >= r.abs_prec() - slack || r.valuation() - scale >= precision() - slack;
}

CurveOrSingular make_curve(const PadicNumber& a4, const PadicNumber& a6) {
  try {
    return WeierstrassCurve(a4, a6);
  } catch (const DomainError&) {
    const bool cusp = !a4.is_nonzero() && !a6.is_nonzero();
    return SingularCurve{a4, a6, cusp ? "cuspidal cubic" : "nodal cubic"};
  }
}

CurvePoint ec_double(const WeierstrassCurve& E, const CurvePoint& P) {
  if (P.is_infinity()) return P;
  const auto& y = P.y();
  if (y.is_exact_zero()) return CurvePoint::infinity();
  if (!y.is_nonzero()) throw PrecisionError("cannot decide whether 2P is infinity: y indistinguishable from 0");
  const auto& x = P.x();
  const auto lam = ((x * x).mul_int(3) + E.a4()) / y.mul_int(2);
  const auto x3 = lam * lam - x.mul_int(2);
  const auto y3 = lam * (x - x3) - y;
  return {x3, y3};
}

CurvePoint ec_add(const WeierstrassCurve& E, const CurvePoint& P, const CurvePoint& Q) {
  if (P.is_infinity()) return Q;
  if (Q.is_infinity()) return P;
  const auto dx = Q.x() - P.x();
  if (!dx.is_nonzero()) {
    const auto s = P.y() + Q.y();
    if (s.is_nonzero()) return ec_double(E, P);
    // Q = -P unless P is also indistinguishable from a 2-torsion point
    if (P.y().is_nonzero() || (P.y().is_exact_zero() && Q.y().is_exact_zero())) return CurvePoint::infinity();
    throw PrecisionError("cannot tell P + Q from 2P at working precision: y is indistinguishable from 0");
  }
  const auto lam = (Q.y() - P.y()) / dx;
  const auto x3 = lam * lam - P.x() - Q.x();
  const auto y3 = lam * (P.x() - x3) - P.y();
  return {x3, y3};
}

CurvePoint ec_smul(const WeierstrassCurve& E, long k, const CurvePoint& P) {
  if (k < 0) return ec_smul(E, -k, -P);
  CurvePoint acc;
  for (int bit = 62; bit >= 0; --bit) {
    acc = ec_double(E, acc);
    if ((k >> bit) & 1) acc = ec_add(E, acc, P);
  }
  return acc;
}

PointDistance point_distance(const CurvePoint& P, const CurvePoint& Q) {
  if (P.is_infinity() && Q.is_infinity()) return {PadicNumber::kInfinitePrecision, false};
  if (P.is_infinity() || Q.is_infinity()) {
    const auto& A = P.is_infinity() ? Q : P;
    return {A.y().is_nonzero() ? val_or_inf(local_parameter(A)) : 0, true};
  }
  const auto dx = P.x() - Q.x();
  const auto dy = P.y() - Q.y();
  return {std::min(val_or_inf(dx), val_or_inf(dy)), dx.is_nonzero() || dy.is_nonzero()};
}

OrderResult ec_exact_order(const WeierstrassCurve& E, const CurvePoint& P, int bound, int min_residual) {
  if (bound < 1) throw DomainError("order bound must be at least 1");
  OrderResult res;
  if (P.is_infinity()) {
    res.order = 1;
    res.certificate.residual_val = PadicNumber::kInfinitePrecision;
    return res;
  }
  const auto neg = -P;
  std::vector<PointDistance> dist{{0, true}, point_distance(P, CurvePoint::infinity())};
  CurvePoint multiple = P;  // (n-1) P
  for (int n = 2; n <= bound; ++n) {
    const auto d = point_distance(multiple, neg);
    dist.push_back(d);
    const bool at_infinity = min_residual > 0 ? d.val >= min_residual : !d.certified_nonzero;
    if (!at_infinity && !d.certified_nonzero) {
      throw PrecisionError("precision insufficient to decide whether " + std::to_string(n) + "P is infinity");
    }
    if (!at_infinity) {
      multiple = ec_add(E, multiple, P);
      continue;
    }
    res.order = n;
    res.certificate.residual_val = d.val;
    int rest = n;
    for (int l = 2; l <= rest; ++l) {
      if (rest % l) continue;
      while (rest % l == 0) rest /= l;
      const int m = n / l;
      if (!dist[m].certified_nonzero) {
        throw PrecisionError("no certified digit separates " + std::to_string(m) + "P from infinity");
      }
      res.certificate.nonvanishing.emplace_back(m, dist[m].val);
    }
    return res;
  }
  res.certificate.residual_val = dist.back().val;
  return res;
}

DivisionPolynomial ec_division_poly(const WeierstrassCurve& E, int n) {
  if (n < 1) throw DomainError("division polynomial index must be positive");
  const std::uint32_t p = E.prime();
  const auto a4 = E.a4(), a6 = E.a6();
  const auto c = [&](long k) { return integer(k, p, E.precision()); };
  const Polynomial f{a6, a4, PadicNumber::zero(p), c(1)};
  const auto f2x16 = poly_scale(poly_mul(f, f), c(16));

  std::map<int, Polynomial> memo;
  memo[0] = {};
  memo[1] = {c(1)};
  memo[2] = {c(1)};
  memo[3] = {-(a4 * a4), (a6).mul_int(12), a4.mul_int(6), PadicNumber::zero(p), c(3)};
  memo[4] = poly_scale({-(a6 * a6).mul_int(8) - a4.pow(3), -(a4 * a6).mul_int(4), -(a4 * a4).mul_int(5),
                        a6.mul_int(20), a4.mul_int(5), PadicNumber::zero(p), c(1)},
                       c(2));
  auto sub = [](const Polynomial& x, const Polynomial& y) {
    Polynomial ny;
    for (const auto& t : y) ny.push_back(-t);
    return poly_add(x, ny);
  };
  std::function<const Polynomial&(int)> g = [&](int k) -> const Polynomial& {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    Polynomial r;
    if (k % 2 == 1) {
      const int m = (k - 1) / 2;
      auto t1 = poly_mul(g(m + 2), poly_mul(g(m), poly_mul(g(m), g(m))));
      auto t2 = poly_mul(g(m - 1), poly_mul(g(m + 1), poly_mul(g(m + 1), g(m + 1))));
      if (m % 2 == 0) {
        t1 = poly_mul(f2x16, t1);
      } else {
        t2 = poly_mul(f2x16, t2);
      }
      r = sub(t1, t2);
    } else {
      const int m = k / 2;
      const auto t1 = poly_mul(g(m + 2), poly_mul(g(m - 1), g(m - 1)));
      const auto t2 = poly_mul(g(m - 2), poly_mul(g(m + 1), g(m + 1)));
      r = poly_mul(g(m), sub(t1, t2));
    }
    while (!r.empty() && r.back().is_exact_zero()) r.pop_back();
    return memo[k] = std::move(r);
  };
  return {g(n), n % 2 == 0};
}

PadicNumber local_parameter(const CurvePoint& P) {
  if (P.is_infinity()) return PadicNumber::zero(0);
  return -(P.x() / P.y());
}

bool in_kernel_of_reduction(const CurvePoint& P) {
  if (P.is_infinity()) return true;
  return P.x().is_nonzero() && P.x().valuation() <= -2;
}

int formal_log_terms(std::uint32_t p, int prec) {
  int digits = 1;
  for (long long pk = p; pk <= prec + 8; pk *= p) ++digits;
  return prec + digits + 2;
}

FormalLog::FormalLog(const WeierstrassCurve& E, int terms) {
  const std::uint32_t p = E.prime();
  const int T = terms + 3;
  const int prec = E.precision();
  const auto tau = PadicSeries::variable(p, prec);
  const auto tau3 = tau.pow(3);
  // w = tau^3 + a4 tau w^2 + a6 w^3, each pass fixes at least four more terms
  PadicSeries w = tau3.truncated(T);
  for (int pass = 0; pass <= T / 4 + 1; ++pass) {
    const auto w2 = (w * w).truncated(T);
    w = (tau3 + (tau * w2).scaled(E.a4()) + (w2 * w).scaled(E.a6())).truncated(T);
  }
  w_ = w;
  std::vector<PadicNumber> vc;
  for (int k = 3; k < T; ++k) vc.push_back(w.coeff(k));
  const PadicSeries v(p, vc, T - 3);
  const auto ratio = (v.derive() * v.reciprocal()).truncated(T - 4);
  const auto half = PadicNumber::from_rational(1, 2, p, prec);
  const auto omega = PadicSeries::polynomial(p, {integer(1, p, prec)}) + (tau * ratio).scaled(half);
  log_ = omega.integrate();
}

PadicNumber FormalLog::operator()(const CurvePoint& P) const {
  if (P.is_infinity()) return PadicNumber::zero(log_.prime());
  if (!in_kernel_of_reduction(P)) throw DomainError("point is not in the kernel of reduction (need val(x) <= -2)");
  const auto t = local_parameter(P);
  if (!t.is_nonzero() || t.valuation() < 1) throw DomainError("local parameter must have positive valuation");
  return log_.eval(t);
}

PadicNumber ec_log(const WeierstrassCurve& E, const CurvePoint& P) {
  if (P.is_infinity()) return PadicNumber::zero(E.prime());
  return FormalLog(E, formal_log_terms(E.prime(), E.precision()))(P);
}

KernelMultiple ec_multiple_into_kernel(const WeierstrassCurve& E, const CurvePoint& P, int bound) {
  CurvePoint Q = P;
  for (int m = 1; m <= bound; ++m) {
    if (Q.is_infinity()) {
      throw DomainError("point is torsion of order " + std::to_string(m - 1) +
                        "; no multiple enters the kernel of reduction");
    }
    if (in_kernel_of_reduction(Q)) return {m, Q};
    Q = ec_add(E, Q, P);
  }
  throw DomainError("no multiple within bound " + std::to_string(bound) + " lies in the kernel of reduction");
}

bool residue_less(const PadicNumber& a, const PadicNumber& b) {
  if (a.is_exact_zero() != b.is_exact_zero()) return a.is_exact_zero();
  if (a.valuation() != b.valuation()) return a.valuation() > b.valuation();
  const auto da = a.digits(), db = b.digits();
  return std::lexicographical_compare(da.begin(), da.end(), db.begin(), db.end());
}

TorsionScan ec_torsion_scan(const WeierstrassCurve& E, int max_order, int disk_val, const RootScanOptions& opts) {
  TorsionScan scan;
  if (max_order < 2) return scan;
  const std::uint32_t p = E.prime();
  const int prec = E.precision();
  const Polynomial f{E.a6(), E.a4(), PadicNumber::zero(p), integer(1, p, prec)};
  std::vector<PadicNumber> seen;
  auto known = [&](const PadicNumber& x) {
    for (const auto& s : seen) {
      const auto d = s - x;
      if (!d.is_nonzero() || d.valuation() > prec / 2) return true;
    }
    return false;
  };
  for (int n = 2; n <= max_order; ++n) {
    const auto poly = n == 2 ? f : ec_division_poly(E, n).x_part;
    if (poly.size() < 2) continue;
    const auto iso = poly_roots_in_disk(poly, disk_val, prec, opts);
    scan.unresolved.insert(scan.unresolved.end(), iso.unresolved.begin(), iso.unresolved.end());
    for (const auto& r : iso.roots) {
      const auto& x = r.root;
      if (known(x)) continue;
      seen.push_back(x);
      const auto y2 = E.rhs(x);
      PadicNumber y;
      if (n == 2 || !y2.is_nonzero()) {
        y = PadicNumber::zero(p);
      } else if (y2.is_square()) {
        y = y2.sqrt();
      } else {
        scan.x_only.emplace_back(x, n);
        continue;
      }
      const CurvePoint P(x, y);
      const auto ord = ec_exact_order(E, P, max_order);
      if (!ord.order || n % *ord.order != 0) {
        throw CertificationError("root of psi_" + std::to_string(n) + " is not certified n-torsion");
      }
      scan.points.push_back({P, *ord.order, ord.certificate});
    }
  }
  std::sort(scan.points.begin(), scan.points.end(), [](const TorsionPoint& a, const TorsionPoint& b) {
    if (a.order != b.order) return a.order < b.order;
    return residue_less(a.point.x(), b.point.x());
  });
  std::sort(scan.x_only.begin(), scan.x_only.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return residue_less(a.first, b.first);
  });
  return scan;
}

}  // namespace padtors
