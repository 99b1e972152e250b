#include <random>

#include "doctest.h"
#include "padtors/elliptic.hpp"

using padtors::CurvePoint;
using padtors::PadicNumber;
using padtors::WeierstrassCurve;

namespace {

constexpr std::uint32_t kP = 5;
constexpr int kPrec = 40;

PadicNumber num(long n, int prec = kPrec) {
  return n == 0 ? PadicNumber::zero(kP) : PadicNumber::from_integer(n, kP, prec);
}

WeierstrassCurve x3_minus_x(int prec = kPrec) { return WeierstrassCurve::from_rationals(-1, 0, kP, prec); }

// Random affine point with integral x.
CurvePoint random_point(const WeierstrassCurve& E, std::mt19937_64& rng) {
  for (;;) {
    const auto x = num(static_cast<long>(rng() % 1000000), E.precision());
    const auto r = E.rhs(x);
    if (r.is_nonzero() && r.is_square()) return {x, r.sqrt()};
  }
}

// Random point in the kernel of reduction: x = u / p^2 with u a square unit.
CurvePoint random_kernel_point(const WeierstrassCurve& E, std::mt19937_64& rng) {
  for (;;) {
    long w = static_cast<long>(rng() % 100000);
    if (w % 5 == 0) continue;
    const auto x = num(w * w, E.precision()).shifted(-2);
    const auto r = E.rhs(x);
    if (r.is_square()) return {x, r.sqrt()};
  }
}

bool same_point(const CurvePoint& P, const CurvePoint& Q, int digits) {
  if (P.is_infinity() || Q.is_infinity()) return P.is_infinity() == Q.is_infinity();
  return P.x().agrees_with(Q.x(), digits) && P.y().agrees_with(Q.y(), digits);
}

PadicNumber psi_at(const WeierstrassCurve& E, int n, const CurvePoint& P) {
  const auto d = padtors::ec_division_poly(E, n);
  auto v = padtors::poly_eval(d.x_part, P.x());
  if (d.y_factor) v = v * P.y().mul_int(2);
  return v;
}

}  // namespace

TEST_CASE("curve construction") {
  const auto E = x3_minus_x();
  CHECK(E.disc().agrees_with(num(64), kPrec));
  CHECK(E.j_invariant().agrees_with(num(1728), kPrec - 2));
  CHECK_THROWS_AS(WeierstrassCurve::from_rationals(0, 0, kP, 20), padtors::DomainError);
  // (x - 1/12)^2 (x + 1/6) = x^3 - x/48 + 1/864 is the nodal cubic
  const auto a4 = PadicNumber::from_rational(-1, 48, kP, 20);
  const auto a6 = PadicNumber::from_rational(1, 864, kP, 20);
  const auto rec = padtors::make_curve(a4, a6);
  REQUIRE(std::holds_alternative<padtors::SingularCurve>(rec));
  CHECK(std::get<padtors::SingularCurve>(rec).description == "nodal cubic");
  CHECK(std::holds_alternative<WeierstrassCurve>(padtors::make_curve(num(-1), num(0))));
  CHECK_THROWS_AS(WeierstrassCurve::from_rationals(-1, 0, 3, 20), padtors::DomainError);
}

TEST_CASE("group law examples") {
  const auto E = x3_minus_x();
  const CurvePoint P(num(0), num(0)), Q(num(1), num(0));
  CHECK(same_point(padtors::ec_add(E, P, CurvePoint::infinity()), P, kPrec));
  CHECK(padtors::ec_double(E, P).is_infinity());
  CHECK(padtors::ec_smul(E, 2, P).is_infinity());
  const auto R = padtors::ec_add(E, P, Q);
  CHECK(R.x().agrees_with(num(-1), kPrec));
  CHECK_FALSE(R.y().is_nonzero());
  CHECK(padtors::ec_smul(E, 0, Q).is_infinity());
  CHECK(padtors::ec_add(E, Q, -Q).is_infinity());
}

TEST_CASE("group laws on random points") {
  const auto E = WeierstrassCurve::from_rationals(3, 7, kP, kPrec);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 30; ++i) {
    const auto P = random_point(E, rng), Q = random_point(E, rng), R = random_point(E, rng);
    const auto pq = padtors::ec_add(E, P, Q);
    CHECK(same_point(pq, padtors::ec_add(E, Q, P), kPrec - 4));
    CHECK(E.contains(pq));
    const auto l = padtors::ec_add(E, pq, R);
    const auto r = padtors::ec_add(E, P, padtors::ec_add(E, Q, R));
    const int digits = std::min({l.x().abs_prec(), r.x().abs_prec(), l.y().abs_prec(), r.y().abs_prec()});
    CHECK(same_point(l, r, digits));
    CHECK(digits >= kPrec - 12);
    CHECK(same_point(padtors::ec_smul(E, 5, P), padtors::ec_add(E, padtors::ec_smul(E, 2, P), padtors::ec_smul(E, 3, P)),
                     kPrec - 16));
    CHECK(same_point(padtors::ec_smul(E, -3, P), -padtors::ec_smul(E, 3, P), kPrec - 16));
  }
}

TEST_CASE("exact order") {
  const auto E = x3_minus_x();
  CHECK(padtors::ec_exact_order(E, CurvePoint::infinity(), 5).order == 1);
  const auto two = padtors::ec_exact_order(E, CurvePoint(num(1), num(0)), 5);
  CHECK(two.order == 2);
  REQUIRE(two.certificate.nonvanishing.size() == 1);
  CHECK(two.certificate.nonvanishing[0].first == 1);

  // x = sqrt(-1), y^2 = x^3 - x = -2x
  const auto i = num(-1).sqrt();
  const auto y = i.mul_int(-2).sqrt();
  const CurvePoint P(i, y);
  CHECK(E.contains(P));
  const auto four = padtors::ec_exact_order(E, P, 10);
  CHECK(four.order == 4);
  REQUIRE(four.certificate.nonvanishing.size() == 1);
  CHECK(four.certificate.nonvanishing[0].first == 2);
  CHECK(four.certificate.residual_val >= kPrec - 4);

  // a point of infinite order: none within the bound
  std::mt19937_64 rng(5);
  const auto Q = random_kernel_point(E, rng);
  CHECK_FALSE(padtors::ec_exact_order(E, Q, 12).order.has_value());
}

TEST_CASE("division polynomials") {
  const auto E = WeierstrassCurve::from_rationals(2, 3, kP, kPrec);
  const auto d1 = padtors::ec_division_poly(E, 1);
  CHECK(d1.x_part.size() == 1);
  CHECK_FALSE(d1.y_factor);
  const auto d2 = padtors::ec_division_poly(E, 2);
  CHECK(d2.y_factor);
  CHECK(d2.x_part.size() == 1);
  const auto d3 = padtors::ec_division_poly(E, 3);
  REQUIRE(d3.x_part.size() == 5);
  CHECK(d3.x_part[4].agrees_with(num(3), kPrec));
  CHECK(d3.x_part[3].is_exact_zero());
  CHECK(d3.x_part[2].agrees_with(num(12), kPrec));
  CHECK(d3.x_part[1].agrees_with(num(36), kPrec));
  CHECK(d3.x_part[0].agrees_with(num(-4), kPrec));
  CHECK(padtors::ec_division_poly(E, 7).x_part.size() == 25);
  CHECK(padtors::ec_division_poly(E, 8).x_part.size() == 31);
}

TEST_CASE("division polynomials give x(nP) on random points") {
  // x(nP) = x - psi_{n-1} psi_{n+1} / psi_n^2
  const auto E = WeierstrassCurve::from_rationals(3, 7, kP, 60);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5; ++i) {
    const auto P = random_point(E, rng);
    for (int n = 2; n <= 7; ++n) {
      const auto nP = padtors::ec_smul(E, n, P);
      const auto pn = psi_at(E, n, P);
      const auto x = P.x() - psi_at(E, n - 1, P) * psi_at(E, n + 1, P) / (pn * pn);
      const int digits = std::min(x.abs_prec(), nP.x().abs_prec());
      CHECK(digits >= 30);
      CHECK(x.agrees_with(nP.x(), digits));
    }
  }
}

TEST_CASE("formal group and logarithm coefficients") {
  const auto E = WeierstrassCurve::from_rationals(3, 7, kP, kPrec);
  const padtors::FormalLog L(E, 20);
  const auto& w = L.w_series();
  CHECK(w.coeff(3).agrees_with(num(1), kPrec));
  CHECK(w.coeff(7).agrees_with(num(3), kPrec));
  CHECK(w.coeff(9).agrees_with(num(7), kPrec));
  CHECK(w.coeff(11).agrees_with(num(18), kPrec));  // 2 a4^2
  for (int k : {4, 5, 6, 8, 10}) CHECK_FALSE(w.coeff(k).is_nonzero());
  const auto& u = L.series();
  CHECK(u.coeff(1).agrees_with(num(1), kPrec));
  CHECK_FALSE(u.coeff(2).is_nonzero());
  CHECK_FALSE(u.coeff(3).is_nonzero());
  // omega = (1 + 2 a4 t^4 + 3 a6 t^6 + ...) dt
  CHECK(u.coeff(5).agrees_with(PadicNumber::from_rational(6, 5, kP, kPrec), kPrec - 2));
  CHECK(u.coeff(7).agrees_with(PadicNumber::from_rational(21, 7, kP, kPrec), kPrec - 2));
}

TEST_CASE("elliptic logarithm properties") {
  const auto E = x3_minus_x();
  const padtors::FormalLog L(E, padtors::formal_log_terms(kP, kPrec));
  CHECK(L(CurvePoint::infinity()).is_exact_zero());
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    const auto P = random_kernel_point(E, rng), Q = random_kernel_point(E, rng);
    const auto lp = L(P), lq = L(Q);
    const auto pq = padtors::ec_add(E, P, Q);
    if (pq.is_infinity()) continue;
    CHECK((L(pq) - lp - lq).valuation() >= kPrec - 6);
    const auto l2 = L(padtors::ec_double(E, P));
    CHECK(l2.agrees_with(lp.mul_int(2), 20));
    // u = tau + O(tau^5): same leading behaviour
    const auto t = padtors::local_parameter(P);
    CHECK((lp - t).valuation() >= 5 * t.valuation() - 1);
    const auto tq = padtors::local_parameter(Q);
    if ((t - tq).is_nonzero() && t.valuation() == tq.valuation()) {
      CHECK((lp - lq).valuation() == (t - tq).valuation());
    }
  }
  CHECK(padtors::ec_log(E, CurvePoint::infinity()).is_exact_zero());
  CHECK_THROWS_AS(L(CurvePoint(num(0), num(0))), padtors::DomainError);
}

TEST_CASE("multiples into the kernel of reduction") {
  const auto E = x3_minus_x();
  std::mt19937_64 rng(77);
  const auto K = random_kernel_point(E, rng);
  CHECK(padtors::ec_multiple_into_kernel(E, K).m == 1);
  for (int i = 0; i < 20; ++i) {
    const auto P = random_point(E, rng);
    const auto km = padtors::ec_multiple_into_kernel(E, P, 40);
    CHECK(km.m <= 40);
    CHECK(40 % km.m == 0);  // m | 8 * 5
    CHECK(padtors::in_kernel_of_reduction(km.point));
  }
  CHECK_THROWS_AS(padtors::ec_multiple_into_kernel(E, CurvePoint(num(1), num(0))), padtors::DomainError);
}

TEST_CASE("torsion scan of y^2 = x^3 - x") {
  const auto E = x3_minus_x();
  CHECK(padtors::ec_torsion_scan(E, 1, 0).points.empty());
  const auto scan = padtors::ec_torsion_scan(E, 4, 0);
  CHECK(scan.unresolved.empty());
  REQUIRE(scan.points.size() == 5);
  for (int k = 0; k < 3; ++k) CHECK(scan.points[k].order == 2);
  CHECK(scan.points[0].point.x().agrees_with(num(0), kPrec - 2));
  CHECK(scan.points[1].point.x().agrees_with(num(1), kPrec - 2));
  CHECK(scan.points[2].point.x().agrees_with(num(-1), kPrec - 2));
  // the 4-torsion x are the square roots of -1: brute force mod 5^6
  const long m6 = 15625;
  std::vector<long> brute;
  for (long r = 0; r < m6; ++r) {
    if ((r * r + 1) % m6 == 0) brute.push_back(r);
  }
  REQUIRE(brute.size() == 2);
  for (int k = 3; k < 5; ++k) {
    CHECK(scan.points[k].order == 4);
    mpz_class rep = scan.points[k].point.x().representative();
    mpz_class rm;
    mpz_mod_ui(rm.get_mpz_t(), rep.get_mpz_t(), m6);
    CHECK(std::find(brute.begin(), brute.end(), rm.get_si()) != brute.end());
  }
  for (const auto& t : scan.points) {
    CHECK_FALSE(padtors::in_kernel_of_reduction(t.point));
    const auto d = padtors::point_distance(padtors::ec_smul(E, t.order - 1, t.point), -t.point);
    CHECK_FALSE(d.certified_nonzero);
  }

  const auto scan8 = padtors::ec_torsion_scan(E, 8, 0);
  CHECK(scan8.points.size() == 5);
  CHECK(scan8.unresolved.empty());
}
