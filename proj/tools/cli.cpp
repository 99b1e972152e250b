#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>

namespace padtors::cli {

namespace {

void validate(const RunConfig& cfg) {
  check_prime(cfg.p);
  if (cfg.prec < 8) throw DomainError("--prec must be at least 8");
  if (cfg.series_order < 3) throw DomainError("--series-order must be at least 3");
}

WeierstrassCurve parse_curve(const RunConfig& cfg) {
  if (cfg.a4.empty() || cfg.a6.empty()) throw DomainError("--a4 and --a6 are required");
  const auto a4 = parse_rational(cfg.a4), a6 = parse_rational(cfg.a6);
  if (4 * a4 * a4 * a4 + 27 * a6 * a6 == 0) {
    throw DomainError("singular curve: 4 a4^3 + 27 a6^2 = 0");
  }
  return WeierstrassCurve::from_rationals(a4, a6, cfg.p, cfg.prec);
}

PadicNumber parse_coordinate(const std::string& s, const RunConfig& cfg) {
  const auto q = parse_rational(s);
  if (q == 0) return PadicNumber::zero(cfg.p);
  return PadicNumber::from_rational(q.get_num(), q.get_den(), cfg.p, cfg.prec);
}

Json exact_list(const std::vector<mpq_class>& v, int k) {
  Json j = Json::array();
  for (int i = 0; i < k && i < static_cast<int>(v.size()); ++i) j.push_back(v[i].get_str());
  return j;
}

Json leading(const PadicSeries& f, int k) {
  Json j = Json::array();
  for (int i = 0; i < k; ++i) j.push_back(to_json(f.coeff(i)));
  return j;
}

}  // namespace

Json error_json(const std::string& kind, const std::string& message, int exit_code) {
  Json e;
  e["kind"] = kind;
  e["message"] = message;
  e["exit_code"] = exit_code;
  return Json{{"error", e}};
}

Json cmd_counterexample(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.n_min < 2) throw DomainError("--n-min must be at least 2");
  if (cfg.n_min > cfg.n_max) throw DomainError("--n-min exceeds --n-max");
  const auto F = fam_build(cfg.p, cfg.prec, cfg.series_order);
  const auto rep = fam_accumulation_report(F, cfg.n_min, cfg.n_max);
  Json j;
  j["p"] = cfg.p;
  j["prec"] = cfg.prec;
  j["series_order"] = cfg.series_order;
  j["phi_linear"] = to_json(F.phi.coeff(1));
  j["report"] = to_json(rep, cfg.trace);
  if (cfg.scan_n > 0) j["uniqueness"] = to_json(fam_uniqueness_scan(F, cfg.scan_n));
  return j;
}

Json cmd_tate(const RunConfig& cfg) {
  validate(cfg);
  const auto M = tate_build(cfg.p, cfg.prec, cfg.series_order);
  const int k = std::min(cfg.terms, cfg.series_order);
  Json j;
  j["p"] = cfg.p;
  j["prec"] = cfg.prec;
  j["series_order"] = cfg.series_order;
  j["a4_exact"] = exact_list(M.a4_exact, k);
  j["a6_exact"] = exact_list(M.a6_exact, k);
  j["a4"] = leading(M.a4, k);
  j["a6"] = leading(M.a6, k);
  j["jinv"] = leading(M.jinv, k);
  j["q_of_jinv"] = leading(M.q_of_jinv, k);
  // q j(q) = 1 + 744 q + ...
  std::vector<PadicNumber> shifted(M.jinv.coeffs().begin() + 1, M.jinv.coeffs().end());
  j["qj"] = leading(PadicSeries(cfg.p, shifted, M.order - 1).reciprocal(), std::min(k, M.order - 1));
  return j;
}

Json cmd_torsion_scan(const RunConfig& cfg) {
  validate(cfg);
  const auto E = parse_curve(cfg);
  RootScanOptions opts;
  opts.scan_depth = cfg.scan_depth;
  Json j;
  j["curve"] = to_json(E);
  j["max_order"] = cfg.max_order;
  j["disk_val"] = cfg.disk_val;
  j["scan"] = to_json(ec_torsion_scan(E, cfg.max_order, cfg.disk_val, opts));
  return j;
}

Json cmd_separation(const RunConfig& cfg) {
  validate(cfg);
  const auto E = parse_curve(cfg);
  RootScanOptions opts;
  opts.scan_depth = cfg.scan_depth;
  Json j;
  j["curve"] = to_json(E);
  j["max_order"] = cfg.max_order;
  j["disk_val"] = cfg.disk_val;
  j["separation"] = to_json(fam_separation_check(E, cfg.max_order, cfg.disk_val, opts));
  return j;
}

Json cmd_ell_log(const RunConfig& cfg) {
  validate(cfg);
  const auto E = parse_curve(cfg);
  CurvePoint P;
  if (cfg.x != "inf") {
    if (cfg.x.empty() || cfg.y.empty()) throw DomainError("--x and --y are required (or --x inf)");
    P = CurvePoint(parse_coordinate(cfg.x, cfg), parse_coordinate(cfg.y, cfg));
    if (!E.contains(P)) throw DomainError("the point is not on the curve");
  }
  if (!P.is_infinity() && !in_kernel_of_reduction(P)) {
    throw DomainError("the point is outside the kernel of reduction (val(x) > -2)");
  }
  const FormalLog L(E, formal_log_terms(cfg.p, cfg.prec));
  const auto lp = L(P);
  const auto l2 = L(ec_double(E, P));
  const auto twice = lp.mul_int(2);
  Json j;
  j["curve"] = to_json(E);
  j["point"] = to_json(P);
  j["log"] = to_json(lp);
  Json self;
  self["log_2P"] = to_json(l2);
  self["two_log_P"] = to_json(twice);
  self["agreement"] = l2.agreement(twice) == PadicNumber::kInfinitePrecision ? Json(nullptr) : Json(l2.agreement(twice));
  self["passed"] = l2.agrees_with(twice, std::min(l2.abs_prec(), twice.abs_prec()));
  j["doubling_check"] = self;
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic torsion toolkit", "padtors"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  if (const char* env = std::getenv("PADTORS_PREC")) {
    try {
      cfg.prec = std::stoi(env);
    } catch (const std::exception&) {
      out << dump(error_json("usage", "PADTORS_PREC must be an integer", kUsage)) << "\n";
      return kUsage;
    }
  }
  app.add_option("--p", cfg.p, "prime (>= 5)");
  app.add_option("--prec", cfg.prec, "working precision in base-p digits (default $PADTORS_PREC or 60)");
  app.add_option("--series-order", cfg.series_order, "number of series terms");
  app.add_flag("--trace", cfg.trace, "include Newton transcripts");
  app.add_option("-o,--output", cfg.output, "write JSON here instead of stdout");

  auto* counter = app.add_subcommand("counterexample", "torsion parameters t_n of the family E_t");
  counter->add_option("--n-min", cfg.n_min);
  counter->add_option("--n-max", cfg.n_max);
  counter->add_option("--scan-n", cfg.scan_n, "also run the residue-class uniqueness scan for this n");

  auto* tate = app.add_subcommand("tate", "leading coefficients of the Tate curve series");
  tate->add_option("--terms", cfg.terms);

  auto add_curve = [&](CLI::App* sub) {
    sub->add_option("--a4", cfg.a4, "rational, e.g. -1 or 3/7")->required();
    sub->add_option("--a6", cfg.a6)->required();
  };
  auto* scan = app.add_subcommand("torsion-scan", "torsion points of y^2 = x^3 + a4 x + a6");
  auto* sep = app.add_subcommand("separation", "distances between torsion points of different orders");
  for (auto* sub : {scan, sep}) {
    add_curve(sub);
    sub->add_option("--max-order", cfg.max_order);
    sub->add_option("--disk-val", cfg.disk_val);
    sub->add_option("--scan-depth", cfg.scan_depth);
  }
  auto* ell = app.add_subcommand("ell-log", "elliptic logarithm of a point in the kernel of reduction");
  add_curve(ell);
  ell->add_option("--x", cfg.x, "rational, or inf");
  ell->add_option("--y", cfg.y);

  // CLI11 consumes the vector from the back.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    out << dump(error_json("usage", e.what(), kUsage)) << "\n";
    return kUsage;
  }

  Json result;
  int code = kOk;
  try {
    if (*counter) result = cmd_counterexample(cfg);
    if (*tate) result = cmd_tate(cfg);
    if (*scan) result = cmd_torsion_scan(cfg);
    if (*sep) result = cmd_separation(cfg);
    if (*ell) result = cmd_ell_log(cfg);
  } catch (const DomainError& e) {
    result = error_json("domain", e.what(), code = kUsage);
  } catch (const CertificationError& e) {
    result = error_json("certification", e.what(), code = kCertification);
  } catch (const ConvergenceError& e) {
    result = error_json("convergence", e.what(), code = kPrecision);
    if (cfg.trace && !e.transcript().empty()) result["error"]["transcript"] = Json::parse(e.transcript());
  } catch (const PrecisionError& e) {
    result = error_json("precision", e.what(), code = kPrecision);
  }

  if (cfg.output.empty()) {
    out << dump(result) << "\n";
  } else {
    std::ofstream f(cfg.output);
    if (!f) {
      err << "cannot write " << cfg.output << "\n";
      out << dump(error_json("usage", "cannot write " + cfg.output, kUsage)) << "\n";
      return kUsage;
    }
    f << dump(result) << "\n";
  }
  return code;
}

}  // namespace padtors::cli
