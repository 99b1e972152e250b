#include "padtors/family.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <thread>

namespace padtors {

namespace {

using RationalPoly = std::vector<mpq_class>;

RationalPoly rmul(const RationalPoly& f, const RationalPoly& g) {
  RationalPoly h(f.size() + g.size() - 1);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
  return h;
}

PadicNumber exact_zero_constant(const PadicNumber& c, const char* what) {
  if (c.is_nonzero()) throw CertificationError(std::string(what) + " has a nonzero constant term");
  return PadicNumber::zero(c.prime());
}

PadicSeries with_zero_constant(const PadicSeries& f, const char* what) {
  auto c = f.coeffs();
  c[0] = exact_zero_constant(c[0], what);
  return PadicSeries(f.prime(), std::move(c), f.trunc(), f.lead_offset());
}

void require_agreement(const PadicSeries& f, const PadicSeries& g, int upto, int digits, const std::string& what) {
  const int got = series_agreement(f, g, upto);
  if (got < digits) {
    throw CertificationError(what + " holds only to " + std::to_string(got) + " digits");
  }
}

PadicNumber rational(const mpq_class& x, std::uint32_t p, int prec) {
  return PadicNumber::from_rational(x.get_num(), x.get_den(), p, prec);
}

void check_parameter(const PadicNumber& t) {
  if (t.is_exact_zero()) return;
  if (!t.is_nonzero()) throw PrecisionError("t is indistinguishable from zero");
  if (t.valuation() < 2) throw DomainError("the family is only modelled on val(t) >= 2");
}

}  // namespace

FamilyModel fam_build(std::uint32_t p, int prec, int order) {
  FamilyModel F;
  F.p = p;
  F.prec = prec;
  F.order = order;
  F.tate = tate_build(p, prec, order);
  F.section_x = section_x_rational(p);
  F.section_y = section_y_rational(p);

  // (x - 1/12)^2 (x + 1/6) + t (x - c), coefficients in x listed from x^0.
  const RationalPoly node = rmul(rmul({mpq_class(-1, 12), 1}, {mpq_class(-1, 12), 1}), {mpq_class(1, 6), 1});
  const RationalPoly slope = {-F.section_x, 1, 0, 0};
  if (node[3] != 1 || node[2] != 0 || slope[2] != 0) throw CertificationError("E_t is not in short form");
  F.A2_exact = {node[1], slope[1]};
  F.B2_exact = {node[0], slope[0]};
  if (F.A2_exact[0] != mpq_class(-1, 48) || F.B2_exact[0] != mpq_class(1, 864)) {
    throw CertificationError("E_0 is not the nodal cubic of the Tate curve");
  }
  F.A2 = PadicSeries::from_rationals(p, prec, F.A2_exact);
  F.B2 = PadicSeries::from_rationals(p, prec, F.B2_exact);

  const auto A3 = F.A2.pow(3).truncated(order);
  const auto B = F.B2.truncated(order);
  const auto num = A3.scaled(PadicNumber::from_integer(4, p, prec)) + (B * B).scaled(PadicNumber::from_integer(27, p, prec));
  const auto den = A3.scaled(PadicNumber::from_integer(6912, p, prec));
  F.jinvE = with_zero_constant((num * den.reciprocal()).truncated(order), "1/j(E_t)");
  const mpq_class phi1 = mpq_class(p) / ((1 - mpq_class(p)) * (1 - mpq_class(p)));
  if (!F.jinvE.coeff(1).agrees_with(rational(phi1, p, prec), prec - 2)) {
    throw CertificationError("linear coefficient of 1/j(E_t) is " + F.jinvE.coeff(1).to_string() +
                             ", expected p/(1-p)^2");
  }

  F.phi = with_zero_constant(F.tate.q_of_jinv.compose(F.jinvE), "phi");
  const auto a4phi = F.tate.a4.compose(F.phi);
  const auto a6phi = F.tate.a6.compose(F.phi);
  const auto A2 = F.A2.truncated(order);
  F.alpha = A2 * a4phi.reciprocal();
  F.beta = B * a6phi.reciprocal();
  const int digits = prec - 8;
  require_agreement(F.alpha.pow(3), F.beta.pow(2), order, digits, "alpha^3 = beta^2");
  F.lambda = (F.beta * F.alpha.reciprocal()).sqrt();
  const auto l2 = F.lambda * F.lambda;
  const auto l4 = l2 * l2;
  require_agreement(l4 * a4phi, A2, order, digits, "lambda^4 a4(phi) = A2");
  require_agreement(l4 * l2 * a6phi, B, order, digits, "lambda^6 a6(phi) = B2");
  if (!F.lambda.is_integral()) throw CertificationError("lambda(t) is not integral");
  return F;
}

CurveOrSingular fam_curve_at(const FamilyModel& F, const PadicNumber& t) {
  check_parameter(t);
  if (t.is_exact_zero()) {
    return SingularCurve{rational(F.A2_exact[0], F.p, F.prec), rational(F.B2_exact[0], F.p, F.prec),
                         "nodal cubic y^2 = (x - 1/12)^2 (x + 1/6)"};
  }
  const auto tt = t.with_prec(std::max(F.prec, t.valuation() + 1));
  return make_curve(F.A2.eval(tt).with_prec(F.prec), F.B2.eval(tt).with_prec(F.prec));
}

ShatValue fam_shat_eval(const FamilyModel& F, const PadicNumber& t) {
  check_parameter(t);
  ShatValue s;
  s.q = t.is_exact_zero() ? PadicNumber::zero(F.p) : F.phi.eval(t);
  s.lambda = F.lambda.eval(t.is_exact_zero() ? PadicNumber::zero(F.p) : t);
  const auto sx = rational(F.section_x, F.p, F.prec + 8);
  const auto sy = rational(F.section_y, F.p, F.prec + 8);
  const auto l2 = s.lambda * s.lambda;
  s.newton = tate_solve_z(F.tate, sx / l2, s.q);
  s.z = s.newton.root;

  const auto P = tate_unif(F.tate, s.q, s.z);
  const int need = std::min(s.z.abs_prec(), P.y().abs_prec()) - 4;
  const auto X = P.x() * l2;
  const auto Y = P.y() * l2 * s.lambda;
  if (X.agreement(sx) < need) {
    throw CertificationError("X(q, s-hat) lambda^2 misses the section by " + (X - sx).to_string());
  }
  if (Y.agreement(sy) >= need) return s;
  if ((-Y).agreement(sy) >= need) {
    s.lambda = -s.lambda;
    s.negated_lambda = true;
    return s;
  }
  throw CertificationError("Y(q, s-hat) lambda^3 matches neither branch of the section");
}

PadicNumber fam_torsion_equation(const FamilyModel& F, int n, const PadicNumber& t) {
  const auto s = fam_shat_eval(F, t);
  return s.q - s.z.pow(static_cast<unsigned>(n));
}

namespace {

NewtonProblem torsion_problem(const FamilyModel& F, int n, const PadicNumber& seed) {
  NewtonProblem prob;
  prob.eval = [&F, n](const PadicNumber& t) {
    try {
      return fam_torsion_equation(F, n, t);
    } catch (const DomainError& e) {
      throw ConvergenceError(std::string("Newton left the domain of F_n: ") + e.what());
    }
  };
  prob.seed = seed;
  prob.target_prec = F.prec - 4;
  return prob;
}

NewtonResult solve_with_fallback(const FamilyModel& F, int n) {
  const auto phi1 = F.phi.coeff(1);
  const auto seed = PadicNumber::from_integer(1, F.p, F.prec).shifted(n) / phi1;
  try {
    return newton_solve(torsion_problem(F, n, seed));
  } catch (const ConvergenceError&) {
  }
  // Residue classes of p^(n-1) Z_p / p^(n+2).
  std::vector<NewtonResult> found;
  const long classes = static_cast<long>(F.p) * F.p * F.p;
  for (long k = 1; k < classes; ++k) {
    const auto t0 = PadicNumber::from_integer(k, F.p, F.prec).shifted(n - 1);
    try {
      auto r = newton_solve(torsion_problem(F, n, t0));
      const bool dup = std::any_of(found.begin(), found.end(), [&](const NewtonResult& o) {
        return (o.root - r.root).valuation() >= n + 2;
      });
      if (!dup) found.push_back(std::move(r));
    } catch (const ConvergenceError&) {
    }
  }
  if (found.size() != 1) {
    throw ConvergenceError("F_" + std::to_string(n) + " has " + std::to_string(found.size()) +
                           " Hensel roots in p^(n-1) Z_p, expected one");
  }
  return found.front();
}

}  // namespace

CertifiedOrder fam_certify_order(const FamilyModel& F, int n, const PadicNumber& t, const SolveOptions& opts) {
  if (!t.is_integral()) throw DomainError("t must be integral");
  const mpq_class t_exact(t.representative());
  const mpq_class A = F.A2_exact[0] + F.A2_exact[1] * t_exact;
  const mpq_class B = F.B2_exact[0] + F.B2_exact[1] * t_exact;
  const int min_residual = opts.min_residual > 0 ? opts.min_residual : 2 * F.prec / 3;
  int prec = 2 * F.prec;
  OrderResult res;
  for (int attempt = 0;; ++attempt, prec *= 2) {
    try {
      const auto E = WeierstrassCurve::from_rationals(A, B, F.p, prec);
      const CurvePoint S(rational(F.section_x, F.p, prec), rational(F.section_y, F.p, prec));
      res = ec_exact_order(E, S, n, min_residual);
      break;
    } catch (const PrecisionError&) {
      if (attempt >= opts.certification_retries) throw;
    }
  }
  // A residual this close to the precision of t~ means t_n is not known well enough.
  if (!res.order && res.certificate.residual_val >= t.abs_prec() / 2) {
    throw PrecisionError(std::to_string(n) + " s is within p^-" + std::to_string(res.certificate.residual_val) +
                         " of infinity on E_t, short of the required " +
                         std::to_string(min_residual) + " digits");
  }
  if (res.order != n) {
    throw CertificationError("the section has order " + (res.order ? std::to_string(*res.order) : "> " + std::to_string(n)) +
                             " on E_t, not " + std::to_string(n));
  }
  return {res.certificate, prec};
}

TorsionRecord fam_solve_tn(const FamilyModel& F, int n, const SolveOptions& opts) {
  if (n < 2) throw DomainError("n must be at least 2");
  const auto nr = solve_with_fallback(F, n);
  TorsionRecord rec;
  rec.n = n;
  rec.t = nr.root;
  rec.val_t = nr.root.valuation();
  rec.leading_digit = nr.root.leading_digit();
  rec.val_equation = nr.val_residual;
  rec.newton_trace = nr.transcript;

  const auto cert = fam_certify_order(F, n, rec.t, opts);
  rec.certificate = cert.certificate;
  rec.certification_prec = cert.prec;
  return rec;
}

AccumulationReport fam_accumulation_report(const FamilyModel& F, int n_min, int n_max, const SolveOptions& opts) {
  if (n_min > n_max) throw DomainError("n_min exceeds n_max");
  std::vector<std::future<TorsionRecord>> jobs;
  for (int n = n_min; n <= n_max; ++n) {
    jobs.push_back(std::async(std::launch::async, [&F, n, &opts] { return fam_solve_tn(F, n, opts); }));
  }
  AccumulationReport rep;
  for (auto& j : jobs) rep.records.push_back(j.get());

  for (const auto& r : rep.records) rep.valuations.push_back(r.val_t);
  rep.strictly_increasing = std::adjacent_find(rep.valuations.begin(), rep.valuations.end(),
                                               std::greater_equal<int>()) == rep.valuations.end();
  std::vector<int> orders;
  for (const auto& r : rep.records) orders.push_back(r.n);
  std::sort(orders.begin(), orders.end());
  rep.orders_distinct = std::adjacent_find(orders.begin(), orders.end()) == orders.end();
  if (!rep.records.empty()) rep.smallest_certified_n = rep.records.front().n;

  const auto u = (PadicNumber::from_integer(1, F.p, F.prec) - PadicNumber::from_integer(F.p, F.p, F.prec)).pow(2);
  const std::uint32_t first_order_digit = u.leading_digit();
  auto all = [&](auto pred) {
    return !rep.records.empty() && std::all_of(rep.records.begin(), rep.records.end(), pred);
  };
  rep.normalizations.push_back({"pn_plus", "t_n in p^n + p^(n+1) Z_p",
                                all([](const TorsionRecord& r) { return r.val_t == r.n && r.leading_digit == 1; })});
  rep.normalizations.push_back({"first_order_minus", "t_n = -(1-p)^2 p^(n-1) + O(p^n)",
                                all([&](const TorsionRecord& r) {
                                  return r.val_t == r.n - 1 && r.leading_digit == (F.p - first_order_digit) % F.p;
                                })});
  rep.normalizations.push_back({"first_order_plus", "t_n = (1-p)^2 p^(n-1) + O(p^n)",
                                all([&](const TorsionRecord& r) {
                                  return r.val_t == r.n - 1 && r.leading_digit == first_order_digit;
                                })});
  return rep;
}

UniquenessScan fam_uniqueness_scan(const FamilyModel& F, int n) {
  if (n < 2) throw DomainError("n must be at least 2");
  UniquenessScan scan;
  scan.n = n;
  const auto seed = PadicNumber::from_integer(1, F.p, F.prec).shifted(n) / F.phi.coeff(1);
  const int m = F.prec / 3;
  const auto h = PadicNumber::from_integer(1, F.p, F.prec).shifted(m);
  const auto d = (fam_torsion_equation(F, n, seed + h) - fam_torsion_equation(F, n, seed - h)).div_int(2);
  if (!d.is_nonzero()) throw PrecisionError("F_n' at the seed has no certified digit");
  scan.val_derivative = d.valuation() - m;

  const long count = static_cast<long>(pow_p(F.p, 4).get_si());
  scan.classes = static_cast<int>(count);
  const int threshold = n + 3 + scan.val_derivative;
  const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::future<std::vector<long>>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      std::vector<long> hits;
      for (long k = w; k < count; k += workers) {
        const auto t = k == 0 ? PadicNumber::zero(F.p) : PadicNumber::from_integer(k, F.p, F.prec).shifted(n - 1);
        const auto v = fam_torsion_equation(F, n, t);
        if (!v.is_nonzero() || v.valuation() >= threshold) hits.push_back(k);
      }
      return hits;
    }));
  }
  std::vector<long> hits;
  for (auto& j : jobs) {
    const auto part = j.get();
    hits.insert(hits.end(), part.begin(), part.end());
  }
  std::sort(hits.begin(), hits.end());
  for (long k : hits) scan.root_classes.push_back(PadicNumber::from_integer(k, F.p, 4).shifted(n - 1));
  return scan;
}

namespace {

struct Separation {
  std::vector<SeparationPair> distances;
  std::optional<int> worst;
};

Separation separation(const TorsionScan& scan) {
  Separation s;
  const auto& pts = scan.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const auto d = pts[i].point.x() - pts[j].point.x();
      const int v = d.is_nonzero() ? d.valuation() : std::min(d.abs_prec(), PadicNumber::kInfinitePrecision);
      s.distances.push_back({i, j, v});
      if (pts[i].order != pts[j].order) s.worst = std::max(s.worst.value_or(v), v);
    }
  }
  return s;
}

bool same_points(const TorsionScan& a, const TorsionScan& b) {
  if (a.points.size() != b.points.size() || a.x_only.size() != b.x_only.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto& P = a.points[i];
    const auto& Q = b.points[i];
    if (P.order != Q.order) return false;
    const int digits = std::min(P.point.x().abs_prec(), Q.point.x().abs_prec()) / 2;
    if (P.point.x().agreement(Q.point.x()) < digits) return false;
  }
  return true;
}

}  // namespace

SeparationReport fam_separation_check(const WeierstrassCurve& E, int max_order, int disk_val,
                                      const RootScanOptions& opts) {
  if (max_order < 1) throw DomainError("max_order must be at least 1");
  SeparationReport rep;
  rep.depth = opts.scan_depth;
  rep.scan = ec_torsion_scan(E, max_order, disk_val, opts);
  const auto s = separation(rep.scan);
  rep.distances = s.distances;
  rep.min_separation_val = s.worst;
  rep.separated = !s.worst || *s.worst <= rep.depth;

  RootScanOptions deeper = opts;
  deeper.scan_depth = opts.scan_depth + 2;
  deeper.depth_cap = std::max(opts.depth_cap, deeper.scan_depth);
  const auto rescan = ec_torsion_scan(E, max_order, disk_val, deeper);
  const auto s2 = separation(rescan);
  rep.stable = same_points(rep.scan, rescan) && s2.worst == s.worst;

  if (!rep.scan.unresolved.empty()) {
    rep.warnings.push_back(std::to_string(rep.scan.unresolved.size()) + " residue classes left unresolved");
  }
  if (!rep.scan.x_only.empty()) {
    rep.warnings.push_back(std::to_string(rep.scan.x_only.size()) + " division-polynomial roots have y outside Q_p");
  }
  if (!rep.separated) rep.warnings.push_back("points of different orders are closer than p^-depth");
  if (!rep.stable) rep.warnings.push_back("rescan at depth + 2 changed the torsion set");
  return rep;
}

}  // namespace padtors
