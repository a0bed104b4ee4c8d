#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "gphi/contraction.hpp"
#include "gphi/gauges.hpp"
#include "gphi/solver.hpp"
#include "gphi/spaces.hpp"

namespace gphi {

struct FuzzReport;

using Json = nlohmann::json;

/// Pretty JSON with sorted keys and every double printed with %.17g, so
/// output round-trips exactly and is byte-stable across runs. Non-finite
/// doubles become the strings "inf", "-inf" and "nan".
std::string canonical_dump(const Json& j);

// Input. All parsers throw Error(MalformedInput) on a bad shape and let
// domain errors (ConstantTooSmall, NotSelfMap, ...) through unchanged.

Space space_from_json(const Json& j);
OperatorSpec operator_from_json(const Json& j);
Form form_from_json(const Json& j);
GaugeSpec gauge_from_json(const Json& j);
PhiSpec phi_from_json(const Json& j);
Point point_from_json(const Space& space, const Json& j);
/// Parses a command-line point: an index for finite spaces, a real otherwise.
Point point_from_text(const Space& space, const std::string& text);

struct Instance {
  Space space;
  OperatorSpec op;
  std::optional<GaugeSpec> g;
  std::optional<PhiSpec> phi;
};

/// {"space": ..., "operator": ..., "G": ..., "phi": ...}; G and phi may be absent.
Instance instance_from_json(const Json& j);

// Output.

Json to_json(const Space& space);
Json to_json(const OperatorSpec& op);
Json to_json(const Form& f);
Json to_json(const GaugeSpec& g);
Json to_json(const PhiSpec& phi);
Json to_json(const Point& p);
Json to_json(const ContractionCertificate& c);
Json to_json(const PhiCertificate& c);
Json to_json(const ClassCertificate& c);
Json to_json(const PicardTrace& t);
Json to_json(const BallCheck& b);
Json to_json(const StepChaining& s);
Json to_json(const CauchyDiagnostics& c);
Json to_json(const G2Diagnostics& d);
Json to_json(const FuzzReport& r);

}  // namespace gphi
