#pragma once

#include <string>
#include <vector>

#include "lgrowth/conformal.hpp"
#include "lgrowth/curve_n1.hpp"
#include "lgrowth/family.hpp"
#include "lgrowth/schwarz.hpp"

namespace lgrowth {

// 17 significant digits, the text form used by every writer.
std::string format_real(double x);

// {"r": r, "a0": [re, im], "u": [[re, im], ...]} with an optional
// "poles": [{"coefficient": [re, im], "location": [re, im]}] extension.
// The reader names the offending field and rejects r <= 0.
std::string map_to_json(const LaurentMap& m);
LaurentMap map_from_json(const std::string& text);
LaurentMap read_map_json(const std::string& path);
void write_map_json(const LaurentMap& m, const std::string& path);

// {"poles": [{"z": [re, im], "order": n, "residue": [re, im]}]}
std::string poles_to_json(const PoleData& poles);
PoleData poles_from_json(const std::string& text);

// {"p", "q", "mu", "nu": [re, im], "h": h, "E": [[re, im] x 3]} plus
// "q_pole_sheet". h and E are null before the double point is known.
std::string curve_to_json(const CurveN1& c);

// {"mu", "T", "status", "E1", "E2", "h", "area_over_pi", "residual"} with
// null for unavailable numbers; "message" is added for failed rows.
std::string family_row_to_json(const FamilyRow& row);

// Writes text to a file, throwing an io error on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace lgrowth
