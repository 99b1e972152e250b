#pragma once

#include <json.hpp>

#include "padtors/family.hpp"

namespace padtors {

using Json = nlohmann::ordered_json;

/// {"p":5,"val":v,"digits":[d0,...],"prec":N}; exact zero has val and prec null.
Json to_json(const PadicNumber& x);
PadicNumber padic_from_json(const Json& j);

/// {"lead_offset":k,"trunc":T,"coeffs":[...]}; trunc is null for polynomials.
Json to_json(const PadicSeries& f);
PadicSeries series_from_json(const Json& j);

Json to_json(const WeierstrassCurve& E);
/// {"x":...,"y":...} or "inf".
Json to_json(const CurvePoint& P);
Json to_json(const std::vector<NewtonStep>& transcript);
Json to_json(const OrderCertificate& c);
Json to_json(const TorsionRecord& r, bool trace);
Json to_json(const AccumulationReport& rep, bool trace);
Json to_json(const UniquenessScan& scan);
Json to_json(const TorsionScan& scan);
Json to_json(const SeparationReport& rep);

/// The compact encoding, with keys in insertion order.
std::string dump(const Json& j);

}  // namespace padtors
