#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "padtors/json_io.hpp"

using namespace padtors;

namespace {

constexpr std::uint32_t kP = 5;

struct Outcome {
  bool pass = true;
  std::string detail;
  Json json;
};

struct Criterion {
  int id;
  std::string title;
  double bound_seconds;
  std::function<Outcome()> run;
};

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

PadicNumber rat(const mpq_class& x, int prec) {
  if (x == 0) return PadicNumber::zero(kP);
  return PadicNumber::from_rational(x.get_num(), x.get_den(), kP, prec);
}

PadicNumber integer(long n, int prec) { return n == 0 ? PadicNumber::zero(kP) : PadicNumber::from_integer(n, kP, prec); }

mpz_class random_mpz(std::mt19937_64& rng, int digits) {
  mpz_class r = 0;
  for (int i = 0; i < digits; ++i) r = r * kP + static_cast<unsigned long>(rng() % kP);
  return r;
}

// 1.
Outcome tate_constants() {
  Outcome o;
  const int prec = 40;
  const auto M = tate_build(kP, prec, 32);
  std::vector<PadicNumber> shifted(M.jinv.coeffs().begin() + 1, M.jinv.coeffs().end());
  const auto qj = PadicSeries(kP, shifted, M.order - 1).reciprocal();
  require(o, M.a4_exact[0] == mpq_class(-1, 48) && M.a4.coeff(0).agrees_with(rat(mpq_class(-1, 48), prec), prec),
          "a4(0) != -1/48");
  require(o, M.a6_exact[0] == mpq_class(1, 864) && M.a6.coeff(0).agrees_with(rat(mpq_class(1, 864), prec), prec),
          "a6(0) != 1/864");
  require(o, qj.coeff(0).agrees_with(integer(1, prec), prec), "q j(q) does not start with 1");
  require(o, qj.coeff(1).agrees_with(integer(744, prec), prec), "coefficient of q in q j(q) is not 744");
  o.json["a4"] = {to_json(M.a4.coeff(0)), to_json(M.a4.coeff(1))};
  o.json["a6"] = {to_json(M.a6.coeff(0)), to_json(M.a6.coeff(1))};
  o.json["qj"] = {to_json(qj.coeff(0)), to_json(qj.coeff(1))};
  if (o.pass) o.detail = "a4(0) = -1/48, a6(0) = 1/864, q j = 1 + 744 q + O(q^2) to 40 digits";
  return o;
}

// t_n mod 5^(n+15), computed independently with plain modular arithmetic.
const std::map<int, mpz_class>& tn_oracle() {
  static const std::map<int, mpz_class> m{{4, mpz_class("2940256698875")},
                                          {5, mpz_class("78239685478750")},
                                          {6, mpz_class("403130332081250")},
                                          {7, mpz_class("580974658453125")},
                                          {8, mpz_class("1396474610625000")}};
  return m;
}

struct PipelineState {
  std::unique_ptr<FamilyModel> model;
  std::optional<PadicNumber> t5;
};

// 2.
Outcome pipeline(PipelineState& st) {
  Outcome o;
  st.model = std::make_unique<FamilyModel>(fam_build(kP, 60, 64));
  const auto rep = fam_accumulation_report(*st.model, 4, 12);
  require(o, rep.records.size() == 9, "expected 9 records");
  int worst_residual = PadicNumber::kInfinitePrecision;
  for (const auto& r : rep.records) {
    const auto tag = "n = " + std::to_string(r.n) + ": ";
    worst_residual = std::min(worst_residual, r.certificate.residual_val);
    require(o, r.certificate.residual_val >= 40, tag + "residual below 40 digits");
    int rest = r.n;
    for (int l = 2; l <= rest; ++l) {
      if (rest % l) continue;
      while (rest % l == 0) rest /= l;
      bool found = false;
      for (const auto& [m, v] : r.certificate.nonvanishing) found = found || (m == r.n / l && v < PadicNumber::kInfinitePrecision);
      require(o, found, tag + "no certified digit for (n/" + std::to_string(l) + ") s");
    }
    const auto it = tn_oracle().find(r.n);
    if (it != tn_oracle().end()) {
      const mpz_class got = r.t.representative() % pow_p(kP, r.n + 15);
      require(o, r.t.abs_prec() >= r.n + 15 && got == it->second, tag + "t_n disagrees with the modular oracle");
    }
    if (r.n == 5) st.t5 = r.t;
  }
  require(o, rep.strictly_increasing, "val(t_n) not strictly increasing");
  o.json = to_json(rep, false);
  if (o.pass) {
    std::ostringstream d;
    d << "orders 4..12 certified, min residual " << worst_residual << " >= 40, val(t_n) =";
    for (int v : rep.valuations) d << " " << v;
    d << "; normalizations:";
    for (const auto& nz : rep.normalizations) d << " " << nz.name << "=" << (nz.holds ? "holds" : "fails");
    o.detail = d.str();
  }
  return o;
}

// 3.
Outcome uniqueness(PipelineState& st) {
  Outcome o;
  if (!st.model) st.model = std::make_unique<FamilyModel>(fam_build(kP, 60, 64));
  const auto scan = fam_uniqueness_scan(*st.model, 5);
  require(o, scan.classes == 625, "expected 625 classes");
  require(o, scan.root_classes.size() == 1, std::to_string(scan.root_classes.size()) + " root classes, expected 1");
  if (o.pass && st.t5) {
    require(o, (*st.t5 - scan.root_classes[0].lifted(60)).valuation() >= 8, "the root class does not contain t_5");
  }
  o.json = to_json(scan);
  if (o.pass) o.detail = "625 classes of p^4 Z_p / p^8, exactly one holds a root of F_5 (the class of t_5)";
  return o;
}

// 4.
Outcome compositional_inverses() {
  Outcome o;
  const int prec = 40, T = 32;
  std::mt19937_64 rng(4);
  const auto x = PadicSeries(kP, {PadicNumber::zero(kP), integer(1, prec)}, T);
  int worst = PadicNumber::kInfinitePrecision;
  Json digest = Json::array();
  for (int i = 0; i < 100; ++i) {
    std::vector<PadicNumber> c{PadicNumber::zero(kP)};
    mpz_class c1;
    do c1 = random_mpz(rng, prec); while (c1 % kP == 0);
    c.push_back(PadicNumber::from_integer(c1, kP, prec));
    for (int k = 2; k < T; ++k) c.push_back(PadicNumber::from_integer(random_mpz(rng, prec), kP, prec));
    const PadicSeries f(kP, c, T);
    const auto g = f.comp_inverse();
    require(o, g.trunc() >= T && g.is_integral(), "inverse not integral to O(x^32)");
    const int a = std::min(series_agreement(f.compose(g), x, T), series_agreement(g.compose(f), x, T));
    worst = std::min(worst, a);
    require(o, a >= prec, "two-sided inverse holds only to " + std::to_string(a) + " digits");
    // Lagrange inversion: g2 = -c2/c1^3, g3 = (2 c2^2 - c1 c3)/c1^5.
    const auto& a1 = c[1];
    const auto& a2 = c[2];
    const auto& a3 = c[3];
    const auto g2 = -a2 / a1.pow(3);
    const auto g3 = (a2 * a2).mul_int(2) - a1 * a3;
    require(o, g.coeff(2).agrees_with(g2, prec) && g.coeff(3).agrees_with(g3 / a1.pow(5), prec),
            "low coefficients disagree with Lagrange inversion");
    if (i < 3) digest.push_back(to_json(g.coeff(2)));
  }
  o.json["worst_agreement"] = worst;
  o.json["sample_g2"] = digest;
  if (o.pass) o.detail = "100 inverses integral, f(g) = g(f) = x + O(x^32) to " + std::to_string(worst) + " digits";
  return o;
}

// 5.
Outcome elliptic_log() {
  Outcome o;
  const int prec = 40;
  const auto E = WeierstrassCurve::from_rationals(-1, 0, kP, prec);
  const FormalLog L(E, formal_log_terms(kP, prec));
  std::mt19937_64 rng(5);
  auto kernel_point = [&] {
    for (;;) {
      const long w = static_cast<long>(rng() % 100000);
      if (w % 5 == 0) continue;
      const auto xk = integer(w * w, prec).shifted(-2 * (1 + static_cast<int>(rng() % 2)));
      const auto r = E.rhs(xk);
      if (r.is_square()) return CurvePoint(xk, r.sqrt());
    }
  };
  int worst = PadicNumber::kInfinitePrecision, pairs = 0;
  while (pairs < 50) {
    const auto P = kernel_point(), Q = kernel_point();
    const auto S = ec_add(E, P, Q);
    if (S.is_infinity()) continue;
    ++pairs;
    const int a = L(S).agreement(L(P) + L(Q));
    worst = std::min(worst, a);
    require(o, a >= 34, "log(P + Q) = log P + log Q only to " + std::to_string(a) + " digits");
    const auto tau = local_parameter(P);
    require(o, (L(P) - tau).valuation() >= 2 * tau.valuation(), "log P - tau is not O(tau^2)");
  }
  const auto& u = L.series();
  require(o, u.coeff(0).is_exact_zero() && u.coeff(1).agrees_with(integer(1, prec), prec), "u is not tau + O(tau^2)");

  int max_m = 0;
  for (int i = 0; i < 50;) {
    const long xi = static_cast<long>(rng() % 1000000);
    if (xi == 0 || xi == 1) continue;
    const auto xp = integer(xi, prec);
    const auto r = E.rhs(xp);
    if (!r.is_nonzero() || !r.is_square()) continue;
    ++i;
    const auto km = ec_multiple_into_kernel(E, CurvePoint(xp, r.sqrt()), 40);
    max_m = std::max(max_m, km.m);
    require(o, km.m <= 40 && in_kernel_of_reduction(km.point), "no multiple m <= 40 in the kernel");
  }
  o.json["worst_agreement"] = worst;
  o.json["max_kernel_multiple"] = max_m;
  o.json["log_coeffs"] = {to_json(u.coeff(1)), to_json(u.coeff(3)), to_json(u.coeff(5))};
  if (o.pass) {
    o.detail = "50 kernel pairs agree to >= " + std::to_string(worst) + " digits (need 34), u = tau + O(tau^2), " +
               "50 random points reach the kernel with m <= " + std::to_string(max_m);
  }
  return o;
}

// 6.
Outcome tate_uniformization() {
  Outcome o;
  const int prec = 40;
  const auto M = tate_build(kP, prec, 32);
  std::mt19937_64 rng(6);
  auto unit = [&] {
    for (;;) {
      const long u = static_cast<long>(rng() % 1000000);
      if (u % 5 != 0) return u;
    }
  };
  // z with val(z) in [0, val(q)); units are kept away from 1 mod p.
  auto random_z = [&](int vq) {
    const int v = static_cast<int>(rng() % vq);
    long u = unit();
    if (v == 0 && u % 5 == 1) u += 1;
    return integer(u, prec + 8).shifted(v);
  };
  int worst_curve = PadicNumber::kInfinitePrecision, worst_hom = worst_curve, worst_period = worst_curve;
  int pairs = 0;
  const std::vector<int> vals{4, 6, 8};
  for (std::size_t k = 0; k < vals.size(); ++k) {
    const int vq = vals[k];
    const int quota = k + 1 < vals.size() ? 17 : 50 - pairs;
    for (int i = 0; i < quota;) {
      const auto q = integer(unit(), prec + 8).shifted(vq);
      const auto E = std::get<WeierstrassCurve>(tate_curve_at(M, q));
      const auto z1 = random_z(vq), z2 = random_z(vq);
      const auto z12 = z1 * z2;
      if (z12.valuation() % vq == 0 && (z12.valuation() > 0 || z12.unit() % kP == 1)) continue;
      ++i;
      ++pairs;
      const auto P1 = tate_unif(M, q, z1), P2 = tate_unif(M, q, z2);
      for (const auto& P : {P1, P2}) {
        const auto res = E.residual(P);
        const int v = res.valuation();
        worst_curve = std::min(worst_curve, v);
        require(o, v >= 35, "on-curve residual only p^-" + std::to_string(v));
      }
      const auto S = tate_unif(M, q, z12);
      const auto T = ec_add(E, P1, P2);
      const int h = std::min(S.x().agreement(T.x()), S.y().agreement(T.y()));
      worst_hom = std::min(worst_hom, h);
      require(o, h >= 30, "eta(z1 z2) = eta(z1) + eta(z2) only to " + std::to_string(h) + " digits");
      const auto Pq = tate_unif(M, q, q * z1);
      const int per = std::min(Pq.x().agreement(P1.x()), Pq.y().agreement(P1.y()));
      worst_period = std::min(worst_period, per);
      require(o, per >= 34, "eta(q z) = eta(z) only to " + std::to_string(per) + " digits");
    }
  }
  o.json["pairs"] = pairs;
  o.json["worst_on_curve"] = worst_curve;
  o.json["worst_homomorphism"] = worst_hom;
  o.json["worst_periodicity"] = worst_period;
  if (o.pass) {
    o.detail = std::to_string(pairs) + " pairs over val(q) in {4,6,8}: residual <= p^-" + std::to_string(worst_curve) +
               ", homomorphism >= " + std::to_string(worst_hom) + " digits, periodicity >= " +
               std::to_string(worst_period) + " digits";
  }
  return o;
}

// 7.
Outcome separation() {
  Outcome o;
  const auto E = WeierstrassCurve::from_rationals(-1, 0, kP, 40);
  const auto rep = fam_separation_check(E, 8, 0);
  // Prime-to-p torsion injects into E(F_5); count E(F_5) by brute force.
  int points_mod_p = 1;
  for (long x = 0; x < 5; ++x)
    for (long y = 0; y < 5; ++y) points_mod_p += ((y * y - (x * x * x - x)) % 5 + 5) % 5 == 0;
  int with_signs = 1;
  for (const auto& tp : rep.scan.points) with_signs += tp.point.y().is_exact_zero() ? 1 : 2;
  require(o, with_signs == points_mod_p, "scan finds " + std::to_string(with_signs) + " points, E(F_5) has " +
                                             std::to_string(points_mod_p));
  require(o, rep.scan.unresolved.empty(), "unresolved residue classes remain");
  require(o, rep.min_separation_val.has_value() && *rep.min_separation_val < PadicNumber::kInfinitePrecision,
          "no finite separation between different orders");
  require(o, rep.separated, "points of different orders closer than p^-depth");
  require(o, rep.stable, "rescan at depth + 2 changed the record set");
  o.json = to_json(rep);
  if (o.pass) {
    o.detail = std::to_string(rep.scan.points.size()) + " records (" + std::to_string(with_signs) +
               " points = #E(F_5)), epsilon = p^-" + std::to_string(*rep.min_separation_val) +
               ", identical at depth " + std::to_string(rep.depth + 2);
  }
  return o;
}

struct Result {
  Outcome outcome;
  double seconds = 0;
};

Result timed(const std::function<Outcome()>& f) {
  const auto start = std::chrono::steady_clock::now();
  Result r;
  try {
    r.outcome = f();
  } catch (const std::exception& e) {
    r.outcome.pass = false;
    r.outcome.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<std::string, std::string>> runs(2);
  bool all = true;
  std::string json_path = argc > 1 ? argv[1] : "";

  for (int round = 0; round < 2; ++round) {
    PipelineState st;
    const std::vector<Criterion> criteria{
        {1, "Tate constants", 1.0, tate_constants},
        {2, "counterexample pipeline n = 4..12", 120.0, [&] { return pipeline(st); }},
        {3, "uniqueness of t_5", 60.0, [&] { return uniqueness(st); }},
        {4, "compositional inverses", 10.0, compositional_inverses},
        {5, "elliptic logarithm", 10.0, elliptic_log},
        {6, "Tate uniformization", 30.0, tate_uniformization},
        {7, "torsion separation", 60.0, separation},
    };
    Json doc = Json::object();
    for (const auto& c : criteria) {
      const auto r = timed(c.run);
      doc[std::to_string(c.id)] = r.outcome.json;
      if (round > 0) continue;
      const bool ok = r.outcome.pass && r.seconds < c.bound_seconds;
      all = all && ok;
      std::string detail = r.outcome.detail;
      if (r.outcome.pass && !ok) detail = "too slow: " + detail;
      std::printf("criterion %d %s  %s: %s (%.2f s, limit %.0f s)\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(),
                  detail.c_str(), r.seconds, c.bound_seconds);
      std::fflush(stdout);
    }
    runs[round].first = dump(doc);
  }

  const bool same = runs[0].first == runs[1].first;
  all = all && same;
  std::printf("criterion 8 %s  determinism: %s\n", same ? "PASS" : "FAIL",
              same ? ("criteria 1-7 JSON byte-identical across two runs (" + std::to_string(runs[0].first.size()) + " bytes)").c_str()
                   : "JSON differs between runs");
  if (!json_path.empty()) std::ofstream(json_path) << runs[0].first << "\n";
  return all ? 0 : 1;
}
