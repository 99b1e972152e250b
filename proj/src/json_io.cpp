#include "padtors/json_io.hpp"

namespace padtors {

Json to_json(const PadicNumber& x) {
  Json j;
  j["p"] = x.prime();
  if (x.is_exact_zero()) {
    j["val"] = nullptr;
    j["digits"] = Json::array();
    j["prec"] = nullptr;
    return j;
  }
  j["val"] = x.valuation();
  j["digits"] = x.digits();
  j["prec"] = x.abs_prec();
  return j;
}

PadicNumber padic_from_json(const Json& j) {
  const auto p = j.at("p").get<std::uint32_t>();
  if (j.at("prec").is_null()) return PadicNumber::zero(p);
  const int prec = j.at("prec").get<int>();
  const auto digits = j.at("digits").get<std::vector<std::uint32_t>>();
  if (digits.empty()) return PadicNumber::zero_to_precision(p, prec);
  for (auto d : digits) {
    if (d >= p) throw DomainError("digit " + std::to_string(d) + " is not below p");
  }
  const auto x = PadicNumber::from_digits(p, j.at("val").get<int>(), digits, prec);
  if (x.valuation() != j.at("val").get<int>()) throw DomainError("leading digit must be nonzero");
  return x;
}

Json to_json(const PadicSeries& f) {
  Json j;
  j["lead_offset"] = f.lead_offset();
  if (f.is_polynomial()) {
    j["trunc"] = nullptr;
  } else {
    j["trunc"] = f.trunc();
  }
  j["coeffs"] = Json::array();
  for (const auto& c : f.coeffs()) j["coeffs"].push_back(to_json(c));
  return j;
}

PadicSeries series_from_json(const Json& j) {
  std::vector<PadicNumber> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(padic_from_json(c));
  if (coeffs.empty()) throw DomainError("series JSON needs at least one coefficient");
  const auto p = j.at("coeffs")[0].at("p").get<std::uint32_t>();
  const int trunc = j.at("trunc").is_null() ? PadicSeries::kPolynomial : j.at("trunc").get<int>();
  return PadicSeries(p, std::move(coeffs), trunc, j.at("lead_offset").get<int>());
}

Json to_json(const WeierstrassCurve& E) {
  Json j;
  j["a4"] = to_json(E.a4());
  j["a6"] = to_json(E.a6());
  j["p"] = E.prime();
  j["prec"] = E.precision();
  return j;
}

Json to_json(const CurvePoint& P) {
  if (P.is_infinity()) return "inf";
  Json j;
  j["x"] = to_json(P.x());
  j["y"] = to_json(P.y());
  return j;
}

Json to_json(const std::vector<NewtonStep>& transcript) {
  return Json::parse(transcript_json(transcript));
}

Json to_json(const OrderCertificate& c) {
  Json j;
  j["residual_val"] = c.residual_val;
  j["nonvanishing"] = Json::array();
  for (const auto& [m, v] : c.nonvanishing) j["nonvanishing"].push_back({{"multiple", m}, {"val", v}});
  return j;
}

Json to_json(const TorsionRecord& r, bool trace) {
  Json j;
  j["n"] = r.n;
  j["t"] = to_json(r.t);
  j["val_t"] = r.val_t;
  j["leading_digit"] = r.leading_digit;
  j["val_equation"] = r.val_equation;
  j["certification_prec"] = r.certification_prec;
  j["order_certificate"] = to_json(r.certificate);
  if (trace) j["newton_trace"] = to_json(r.newton_trace);
  return j;
}

Json to_json(const AccumulationReport& rep, bool trace) {
  Json j;
  j["records"] = Json::array();
  for (const auto& r : rep.records) j["records"].push_back(to_json(r, trace));
  j["valuations"] = rep.valuations;
  j["strictly_increasing"] = rep.strictly_increasing;
  j["orders_distinct"] = rep.orders_distinct;
  if (rep.smallest_certified_n) {
    j["smallest_certified_n"] = *rep.smallest_certified_n;
  } else {
    j["smallest_certified_n"] = nullptr;
  }
  // Largest val(t_i - t_j): how close two parameters of different order come.
  std::optional<int> worst;
  for (std::size_t a = 0; a < rep.records.size(); ++a) {
    for (std::size_t b = a + 1; b < rep.records.size(); ++b) {
      const auto d = rep.records[a].t - rep.records[b].t;
      const int v = d.valuation();
      worst = std::max(worst.value_or(v), v);
    }
  }
  if (worst) {
    j["min_separation_val"] = *worst;
  } else {
    j["min_separation_val"] = nullptr;
  }
  j["normalizations"] = Json::array();
  for (const auto& nz : rep.normalizations) {
    j["normalizations"].push_back({{"name", nz.name}, {"description", nz.description}, {"holds", nz.holds}});
  }
  return j;
}

Json to_json(const UniquenessScan& scan) {
  Json j;
  j["n"] = scan.n;
  j["classes"] = scan.classes;
  j["val_derivative"] = scan.val_derivative;
  j["root_classes"] = Json::array();
  for (const auto& c : scan.root_classes) j["root_classes"].push_back(to_json(c));
  return j;
}

Json to_json(const TorsionScan& scan) {
  Json j;
  j["points"] = Json::array();
  for (const auto& tp : scan.points) {
    j["points"].push_back({{"point", to_json(tp.point)}, {"order", tp.order}, {"order_certificate", to_json(tp.certificate)}});
  }
  j["x_only"] = Json::array();
  for (const auto& [x, n] : scan.x_only) j["x_only"].push_back({{"x", to_json(x)}, {"n", n}});
  j["unresolved"] = Json::array();
  for (const auto& u : scan.unresolved) {
    j["unresolved"].push_back({{"center", to_json(u.center)}, {"depth", u.depth}, {"root_bound", u.root_bound}});
  }
  return j;
}

Json to_json(const SeparationReport& rep) {
  Json j;
  j["scan"] = to_json(rep.scan);
  j["distances"] = Json::array();
  for (const auto& d : rep.distances) j["distances"].push_back({{"i", d.i}, {"j", d.j}, {"val", d.val}});
  if (rep.min_separation_val) {
    j["min_separation_val"] = *rep.min_separation_val;
  } else {
    j["min_separation_val"] = nullptr;
  }
  j["depth"] = rep.depth;
  j["separated"] = rep.separated;
  j["stable"] = rep.stable;
  j["warnings"] = rep.warnings;
  return j;
}

std::string dump(const Json& j) { return j.dump(); }

}  // namespace padtors
