#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tropmirror/cosheaves.hpp"
#include "tropmirror/patchwork.hpp"

namespace tropmirror {

using Json = nlohmann::json;

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

struct LoadedJson {
    std::string path;
    std::string hash;  // fnv1a_hex of the raw file
    Json value;
};
/// Throws InvalidInput for unreadable files and malformed JSON.
LoadedJson load_json_file(const std::string& path);

// Every *_from_json throws InvalidInput on shape errors; geometric errors keep their own codes.

Json polytope_to_json(const LatticePolytope& P);
LatticePolytope polytope_from_json(const Json& j);

/// Polytope plus coordinate simplices, before any validation.
struct TriangulationInput {
    LatticePolytope polytope;
    std::vector<CoordinateSimplex> boundary;
};
bool is_triangulation_json(const Json& j);
TriangulationInput triangulation_input_from_json(const Json& j);
Json triangulation_to_json(const CentralTriangulation& T);
CentralTriangulation triangulation_from_json(const Json& j);

Json divisor_to_json(const CentralTriangulation& T, const DivisorF2& D);
DivisorF2 divisor_from_json(const CentralTriangulation& T, const Json& j);

Json signs_to_json(const CentralTriangulation& T, const SignDistribution& signs);
/// Every lattice point of the polytope must appear exactly once.
SignDistribution signs_from_json(const CentralTriangulation& T, const Json& j);

Json validation_to_json(const ValidationReport& report);
Json homology_to_json(const HomologySummary& h);
Json hodge_table_to_json(const HodgeTable& table);

/// Cells with tau and sigma as coordinate lists, dimension and flag names, plus signed covers.
Json poset_dump(const CellPoset& P);
/// Nonzero cells of a chain, keyed by "tau|sigma" coordinate strings.
Json cycle_dump(const CellPoset& P, const ChainComplex& C, int q, const IntVector& chain);

}  // namespace tropmirror
