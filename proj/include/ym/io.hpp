#pragma once

// JSON and CSV for piecewise functions, measures and reports.
//
// Function documents look like
//   { "omega": [0, 1],
//     "pieces": [ { "interval": [0, 0.5], "expr": "2*x", "monotone": "inc" },
//                 { "interval": [0.5, 1], "const": "2/3" } ] }
// where any number may also be written as a constant expression string.

#include <cstddef>
#include <string>
#include <string_view>

#include "json.hpp"

#include "ym/measure.hpp"
#include "ym/oracle.hpp"
#include "ym/piecewise.hpp"

namespace ym {

/// Throws ParseError for malformed JSON (offset = byte position), for schema
/// violations and for bad expressions; ValidationError for bad intervals.
/// The result is not validated.
PiecewiseFunction load_function(std::string_view json_text);
PiecewiseFunction function_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const PiecewiseFunction& pf);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const OracleReport& report);

/// "location,weight" header, one row per atom.
std::string atoms_csv(const YoungMeasure& ym);

/// "y,density,cdf" over `grid` equally spaced points of k_range. An end of
/// the range where the density is singular is pulled in by 1e-9·|K|.
std::string density_csv(const YoungMeasure& ym, std::size_t grid);

}  // namespace ym
