#include "padtors/tate.hpp"

#include <numeric>
#include <sstream>

namespace padtors {

namespace {

struct Coefficients {
  mpq_class a1, a2, a3;
  std::vector<mpq_class> a4, a6;
};

// Silverman III.1 with u = 1: x = x' + r, y = y' + s x' + t.
Coefficients change_coordinates(const Coefficients& c, const mpq_class& r, const mpq_class& s, const mpq_class& t) {
  Coefficients o;
  o.a1 = c.a1 + 2 * s;
  o.a2 = c.a2 - s * c.a1 + 3 * r - s * s;
  o.a3 = c.a3 + r * c.a1 + 2 * t;
  o.a4 = c.a4;
  o.a6 = c.a6;
  o.a4[0] += -s * c.a3 + 2 * r * c.a2 - (t + r * s) * c.a1 + 3 * r * r - 2 * s * t;
  for (std::size_t i = 0; i < o.a6.size(); ++i) o.a6[i] += r * c.a4[i];
  o.a6[0] += r * r * c.a2 + r * r * r - t * c.a3 - t * t - r * t * c.a1;
  return o;
}

std::string describe(const Coefficients& c) {
  std::ostringstream out;
  out << "a1=" << c.a1 << " a2=" << c.a2 << " a3=" << c.a3 << " a4(0)=" << c.a4[0] << " a6(0)=" << c.a6[0];
  return out.str();
}

mpz_class sigma(long m, unsigned k) {
  mpz_class s = 0;
  for (long d = 1; d <= m; ++d) {
    if (m % d == 0) {
      mpz_class dk;
      mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d), k);
      s += dk;
    }
  }
  return s;
}

// z q^(-k) with val(q) > val(z q^(-k)) >= 0.
struct Reduced {
  PadicNumber z;
  int k = 0;
};

Reduced reduce_to_annulus(const PadicNumber& q, const PadicNumber& z) {
  if (!z.is_nonzero()) throw DomainError("z must be a nonzero element of Q_p");
  if (q.is_exact_zero()) return {z, 0};
  const int vq = q.valuation(), vz = z.valuation();
  int k = vz >= 0 ? vz / vq : -((-vz + vq - 1) / vq);
  Reduced r{z, k};
  if (k > 0) r.z = z / q.pow(static_cast<unsigned>(k));
  if (k < 0) r.z = z * q.pow(static_cast<unsigned>(-k));
  return r;
}

void check_q(const PadicNumber& q) {
  if (q.is_exact_zero()) return;
  if (!q.is_nonzero()) throw PrecisionError("q is indistinguishable from zero");
  if (q.valuation() < 1) throw DomainError("q must lie in the open unit disk (val(q) >= 1)");
}

struct Summation {
  std::uint32_t p;
  int stop;
  PadicNumber one;

  PadicNumber f(const PadicNumber& w) const {
    const auto d = one - w;
    return w / (d * d);
  }
  PadicNumber g(const PadicNumber& w) const {
    const auto d = one - w;
    return (w * (one + w)) / (d * d * d).mul_int(2);
  }
  PadicNumber fprime(const PadicNumber& w) const {
    const auto d = one - w;
    return (one + w) / (d * d * d);
  }
};

Summation summation(const TateModel& M) {
  const int stop = M.prec + 4;
  return {M.p, stop, PadicNumber::from_integer(1, M.p, stop + 16)};
}

void check_pole(const PadicNumber& z, const Summation& S) {
  if (!(S.one - z).is_nonzero()) throw DomainError("z lies in q^Z: eta_q(z) is the point at infinity");
}

}  // namespace

mpq_class section_x_rational(std::uint32_t p) {
  const mpq_class P = p;
  return P / ((1 - P) * (1 - P)) + mpq_class(1, 12);
}

mpq_class section_y_rational(std::uint32_t p) {
  const mpq_class P = p;
  return P * (1 + P) / (2 * (1 - P) * (1 - P) * (1 - P));
}

TateModel tate_build(std::uint32_t p, int prec, int order) {
  check_prime(p);
  if (order < 3) throw DomainError("series order must be at least 3");
  Coefficients silverman{1, 0, 0, std::vector<mpq_class>(order), std::vector<mpq_class>(order)};
  for (long m = 1; m < order; ++m) {
    const mpz_class s3 = sigma(m, 3), s5 = sigma(m, 5);
    silverman.a4[m] = -5 * mpq_class(s3);
    silverman.a6[m] = -mpq_class(5 * s3 + 7 * s5) / 12;
  }
  const Coefficients forward = change_coordinates(silverman, mpq_class(-1, 12), mpq_class(-1, 2), mpq_class(1, 24));
  const Coefficients backward = change_coordinates(silverman, mpq_class(1, 12), mpq_class(1, 2), 0);
  auto expected = [](const Coefficients& c) {
    return c.a1 == 0 && c.a2 == 0 && c.a3 == 0 && c.a4[0] == mpq_class(-1, 48) && c.a6[0] == mpq_class(1, 864);
  };
  const Coefficients* chosen = expected(forward) ? &forward : expected(backward) ? &backward : nullptr;
  if (!chosen) {
    throw DomainError("coordinate change gives wrong leading terms; x' = x - 1/12: " + describe(forward) +
                      "; x' = x + 1/12: " + describe(backward));
  }

  TateModel M;
  M.p = p;
  M.prec = prec;
  M.order = order;
  M.a4_exact = chosen->a4;
  M.a6_exact = chosen->a6;
  M.a4 = PadicSeries::from_rationals(p, prec, M.a4_exact, order);
  M.a6 = PadicSeries::from_rationals(p, prec, M.a6_exact, order);

  const auto A3 = M.a4.pow(3);
  const auto num = A3.scaled(PadicNumber::from_integer(4, p, prec)) + (M.a6 * M.a6).scaled(PadicNumber::from_integer(27, p, prec));
  M.jinv = (num * A3.scaled(PadicNumber::from_integer(6912, p, prec)).reciprocal()).truncated(order);
  if (M.jinv.coeff(0).is_nonzero() || !M.jinv.coeff(1).is_unit()) {
    throw CertificationError("1/j(T_q) must have zero constant term and unit linear coefficient");
  }
  // q j = 1 + 744 q + O(q^2)
  std::vector<PadicNumber> shifted(M.jinv.coeffs().begin() + 1, M.jinv.coeffs().end());
  const auto qj = PadicSeries(p, shifted, order - 1).reciprocal();
  if (!qj.coeff(0).agrees_with(PadicNumber::from_integer(1, p, prec), prec) ||
      !qj.coeff(1).agrees_with(PadicNumber::from_integer(744, p, prec), prec)) {
    throw CertificationError("q j(T_q) does not start 1 + 744 q");
  }
  M.q_of_jinv = M.jinv.comp_inverse();
  return M;
}

CurveOrSingular tate_curve_at(const TateModel& M, const PadicNumber& q) {
  check_q(q);
  if (q.is_exact_zero()) {
    return SingularCurve{PadicNumber::from_rational(-1, 48, M.p, M.prec), PadicNumber::from_rational(1, 864, M.p, M.prec),
                         "nodal cubic y^2 = (x - 1/12)^2 (x + 1/6)"};
  }
  return make_curve(M.a4.eval(q), M.a6.eval(q));
}

CurvePoint tate_unif(const TateModel& M, const PadicNumber& q, const PadicNumber& z) {
  check_q(q);
  const auto S = summation(M);
  const auto r = reduce_to_annulus(q, z);
  const auto& w = r.z;
  check_pole(w, S);
  PadicNumber X = S.f(w) + PadicNumber::from_rational(1, 12, M.p, S.stop);
  PadicNumber Y = S.g(w);
  if (!q.is_exact_zero()) {
    const int vq = q.valuation(), vz = w.valuation();
    const auto winv = w.inverse();
    PadicNumber qn = q;
    for (int n = 1; n * vq - vz < S.stop; ++n) {
      const auto a = qn * w, b = qn * winv;
      X = X + S.f(a) + S.f(b) - (qn / (S.one - qn)).mul_int(2L * n);
      Y = Y + S.g(a) - S.g(b);
      qn = qn * q;
    }
  }
  return {X.with_prec(S.stop), Y.with_prec(S.stop)};
}

PadicNumber tate_dxdz(const TateModel& M, const PadicNumber& q, const PadicNumber& z) {
  check_q(q);
  const auto S = summation(M);
  const auto r = reduce_to_annulus(q, z);
  const auto& w = r.z;
  check_pole(w, S);
  PadicNumber D = S.fprime(w);
  if (!q.is_exact_zero()) {
    const int vq = q.valuation(), vz = w.valuation();
    const auto winv = w.inverse();
    const auto winv2 = winv * winv;
    PadicNumber qn = q;
    for (int n = 1; n * vq - 2 * vz < S.stop; ++n) {
      D = D + qn * S.fprime(qn * w) - qn * winv2 * S.fprime(qn * winv);
      qn = qn * q;
    }
  }
  if (r.k > 0) D = D / q.pow(static_cast<unsigned>(r.k));
  if (r.k < 0) D = D * q.pow(static_cast<unsigned>(-r.k));
  return D.with_prec(S.stop);
}

TateTorsion tate_is_torsion(const TateModel& M, const PadicNumber& q, const PadicNumber& z, int max_n) {
  check_q(q);
  if (q.is_exact_zero()) throw DomainError("the torsion criterion needs q != 0");
  if (!z.is_nonzero()) throw DomainError("z must be a nonzero element of Q_p");
  TateTorsion res;
  const int vq = q.valuation(), vz = z.valuation();
  res.n0 = vq / std::gcd(vq, std::abs(vz));
  const int k = res.n0 * vz / vq;
  auto u = z.pow(static_cast<unsigned>(res.n0));
  if (k > 0) u = u / q.pow(static_cast<unsigned>(k));
  if (k < 0) u = u * q.pow(static_cast<unsigned>(-k));
  res.unit = u;
  const auto one = PadicNumber::from_integer(1, M.p, u.abs_prec() + 1);
  auto is_one = [&](const PadicNumber& x) {
    const auto d = x - one;
    if (!d.is_nonzero() && d.abs_prec() < 1) throw PrecisionError("root-of-unity test has no certified digit");
    return !d.is_nonzero();
  };
  const unsigned pm1 = M.p - 1;
  if (!is_one(u.pow(pm1))) return res;
  for (unsigned d = 1; d <= pm1; ++d) {
    if (pm1 % d == 0 && is_one(u.pow(d))) {
      const int n = res.n0 * static_cast<int>(d);
      if (n <= max_n) res.order = n;
      break;
    }
  }
  if (res.order && *res.order > 1) {
    const auto curve = tate_curve_at(M, q);
    const auto& E = std::get<WeierstrassCurve>(curve);
    const auto P = tate_unif(M, q, z);
    res.weierstrass_order = ec_exact_order(E, P, *res.order).order;
    if (res.weierstrass_order != res.order) {
      throw CertificationError("Tate criterion and group law disagree on the order of eta_q(z)");
    }
  }
  return res;
}

NewtonResult tate_solve_z(const TateModel& M, const PadicNumber& x_target, const PadicNumber& q, int target_prec) {
  check_q(q);
  if (target_prec <= 0) target_prec = std::min(x_target.abs_prec(), M.prec) - 2;
  NewtonProblem prob;
  prob.eval = [&](const PadicNumber& z) { return tate_unif(M, q, z).x() - x_target; };
  prob.deriv = [&](const PadicNumber& z) { return tate_dxdz(M, q, z); };
  prob.seed = PadicNumber::from_integer(M.p, M.p, M.prec + 4);
  prob.target_prec = target_prec;
  try {
    return newton_solve(prob);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string("X(q, z) = X_target is outside the Hensel disk of z = p: ") + e.what(),
                           e.transcript());
  }
}

}  // namespace padtors
