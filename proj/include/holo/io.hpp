#pragma once

// JSON readers and writers for every input and report type. Complex numbers
// are [re, im] arrays; unknown fields are rejected with ParseError.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "holo/deformation.hpp"
#include "holo/localsys.hpp"
#include "holo/residues.hpp"
#include "holo/surface.hpp"

namespace holo {

using Json = nlohmann::ordered_json;

/// Parses text; throws ParseError with the parser's message.
Json parse_json(const std::string& text);
Json read_json_file(const std::filesystem::path& path);

/// Deterministic rendering: fixed field order, doubles as %.17g (with a
/// trailing ".0" when the result looks like an integer), no whitespace.
std::string dump(const Json& j);

Json to_json(cplx z);
cplx cplx_from_json(const Json& j);

Json to_json(const AffineSurfaceSpec& spec);
AffineSurfaceSpec spec_from_json(const Json& j);

Json to_json(const LoopPath& loop);
LoopPath loop_from_json(const Json& j);

Json to_json(const ArcTree& tree);
ArcTree tree_from_json(const Json& j);

Json to_json(const Direction& d);
Direction direction_from_json(const Json& j);
/// Base spec fields plus "directions".
Json to_json(const SpecFamily& family);
SpecFamily family_from_json(const Json& j);

Json to_json(const SurfaceComplex& k);
SurfaceComplex complex_from_json(const Json& j);

/// {"edge_values":{"e<k>":[re,im],...}} with k the lexicographic edge index,
/// or {"generators":{"a":[re,im],...}} for the complex's named generators.
Json to_json(const Character& chi);
Character character_from_json(const SurfaceComplex& k, const Json& j);

Json to_json(const Eigen::MatrixXcd& m);  // row-major nested arrays
Json to_json(const Eigen::VectorXd& v);
Json to_json(const RankReport& r);

/// {"error": code name, "message": text}.
Json error_json(ErrorCode code, const std::string& message);

}  // namespace holo
