#pragma once

#include <string>

#include <json.hpp>

#include "starcalc/kernel.hpp"
#include "starcalc/phase_space.hpp"
#include "starcalc/set_function.hpp"

namespace starcalc {

using Json = nlohmann::json;

/// {"dim": d, "box": [[a,b],...], "z": z, "density": "<expr>"}; density is optional.
PhaseSpace phase_space_from_json(const Json& j);
Json to_json(const PhaseSpace& space);

/// {"type": "...", params...}; see the README for the list of families.
Kernel kernel_from_json(const Json& j);
/// Throws InvalidArgument for custom kernels.
Json to_json(const Kernel& k);

Box box_from_json(const Json& j);
Json to_json(const Box& box);

/// A point is a coordinate array; a bare number is read as a 1-d point.
PhasePoint point_from_json(const Json& j);
Json to_json(const PhasePoint& p);

GroundConfiguration ground_from_json(const Json& j);
Json to_json(const GroundConfiguration& g);

/// {"ground": [...], "values": [...]} with values ordered by mask.
SetFunction set_function_from_json(const Json& j);
Json to_json(const SetFunction& f);

/// Columns mask,cardinality,value; 17 significant digits.
std::string to_csv(const SetFunction& f);

/// Formats with 17 significant digits.
std::string format_double(double v);

/// Parses a JSON document, mapping syntax errors to ParseError.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

}  // namespace starcalc
