#include "tropmirror/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tropmirror {

namespace {

LatticeVector vector_from_json(const Json& j, int rank, const char* what) {
    require(j.is_array() && int(j.size()) == rank, ErrorCode::InvalidInput,
            std::string(what) + " must be an array of " + std::to_string(rank) + " integers");
    LatticeVector v;
    for (const Json& x : j) {
        require(x.is_number_integer(), ErrorCode::InvalidInput, std::string(what) + " must hold integers");
        v.push_back(x.get<Int>());
    }
    return v;
}

const Json& field(const Json& j, const char* key) {
    require(j.is_object() && j.contains(key), ErrorCode::InvalidInput, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

Json simplex_coords(const CentralTriangulation& T, const Simplex& s) {
    Json out = Json::array();
    for (int i : s) out.push_back(T.point(i));
    return out;
}

std::string simplex_key(const CentralTriangulation& T, const Simplex& s) {
    std::string out = "[";
    for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + format_vector(T.point(s[k]));
    return out + "]";
}

Json flag_names(unsigned flags) {
    static const std::pair<CellFlag, const char*> names[] = {{kP1, "P1"},   {kPinf, "Pinf"}, {kJS, "JS"},
                                                             {kJinf, "Jinf"}, {kJ0, "J0"},   {kJub, "Jub"},
                                                             {kJ0ub, "J0ub"}, {kSphere, "sphere"}};
    Json out = Json::array();
    for (const auto& [f, name] : names)
        if (flags & f) out.push_back(name);
    return out;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

LoadedJson load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(bool(in), ErrorCode::InvalidInput, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    LoadedJson out{path, fnv1a_hex(text), Json()};
    try {
        out.value = Json::parse(text);
    } catch (const Json::exception& e) {
        fail(ErrorCode::InvalidInput, path + ": " + e.what());
    }
    return out;
}

Json polytope_to_json(const LatticePolytope& P) { return Json{{"rank", P.rank()}, {"vertices", P.vertices()}}; }

LatticePolytope polytope_from_json(const Json& j) {
    const Json& rank = field(j, "rank");
    require(rank.is_number_integer() && rank.get<Int>() >= 1, ErrorCode::InvalidInput, "rank must be a positive integer");
    const int r = rank.get<int>();
    const Json& verts = field(j, "vertices");
    require(verts.is_array() && !verts.empty(), ErrorCode::InvalidInput, "vertices must be a nonempty array");
    std::vector<LatticeVector> pts;
    for (const Json& v : verts) pts.push_back(vector_from_json(v, r, "vertex"));
    return LatticePolytope::from_points(r, pts);
}

bool is_triangulation_json(const Json& j) { return j.is_object() && j.contains("boundary_simplices"); }

TriangulationInput triangulation_input_from_json(const Json& j) {
    TriangulationInput out;
    out.polytope = polytope_from_json(field(j, "polytope"));
    const Json& simplices = field(j, "boundary_simplices");
    require(simplices.is_array(), ErrorCode::InvalidInput, "boundary_simplices must be an array");
    for (const Json& s : simplices) {
        require(s.is_array(), ErrorCode::InvalidInput, "a boundary simplex must be an array of points");
        CoordinateSimplex cs;
        for (const Json& v : s) cs.push_back(vector_from_json(v, out.polytope.rank(), "simplex vertex"));
        out.boundary.push_back(std::move(cs));
    }
    return out;
}

Json triangulation_to_json(const CentralTriangulation& T) {
    Json simplices = Json::array();
    for (const Simplex& s : T.boundary_simplices()) simplices.push_back(simplex_coords(T, s));
    return Json{{"polytope", polytope_to_json(T.polytope())}, {"boundary_simplices", simplices}};
}

CentralTriangulation triangulation_from_json(const Json& j) {
    TriangulationInput in = triangulation_input_from_json(j);
    return CentralTriangulation::from_boundary(in.polytope, in.boundary);
}

Json divisor_to_json(const CentralTriangulation& T, const DivisorF2& D) {
    Json rays = Json::array();
    for (int i : D.support()) rays.push_back(T.point(i));
    return Json{{"rays", rays}};
}

DivisorF2 divisor_from_json(const CentralTriangulation& T, const Json& j) {
    const Json& rays = field(j, "rays");
    require(rays.is_array(), ErrorCode::InvalidInput, "rays must be an array");
    std::vector<IntVector> pts;
    for (const Json& r : rays) pts.push_back(vector_from_json(r, T.rank(), "ray"));
    std::set<IntVector> seen(pts.begin(), pts.end());
    require(seen.size() == pts.size(), ErrorCode::InvalidInput, "a ray is listed twice");
    return DivisorF2::from_rays(T, pts);
}

Json signs_to_json(const CentralTriangulation& T, const SignDistribution& signs) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < signs.sign.size(); ++i) rows.push_back(Json::array({T.point(int(i)), int(signs.sign[i])}));
    return Json{{"signs", rows}};
}

SignDistribution signs_from_json(const CentralTriangulation& T, const Json& j) {
    const Json& rows = field(j, "signs");
    require(rows.is_array(), ErrorCode::InvalidInput, "signs must be an array");
    SignDistribution out;
    out.sign.assign(T.points().size(), 2);
    for (const Json& row : rows) {
        require(row.is_array() && row.size() == 2, ErrorCode::InvalidInput, "a sign entry is [point, 0|1]");
        const LatticeVector x = vector_from_json(row[0], T.rank(), "sign point");
        const int i = T.point_index(x);
        require(i >= 0, ErrorCode::InvalidInput, "sign given at " + format_vector(x) + ", not a lattice point");
        require(out.sign[i] == 2, ErrorCode::InvalidInput, "sign given twice at " + format_vector(x));
        require(row[1].is_number_integer() && (row[1].get<Int>() == 0 || row[1].get<Int>() == 1), ErrorCode::InvalidInput,
                "sign values are 0 or 1");
        out.sign[i] = std::uint8_t(row[1].get<int>());
    }
    for (std::size_t i = 0; i < out.sign.size(); ++i)
        require(out.sign[i] != 2, ErrorCode::InvalidInput, "no sign at " + format_vector(T.point(int(i))));
    return out;
}

Json validation_to_json(const ValidationReport& report) {
    Json v = Json::array();
    for (const Violation& x : report.violations) v.push_back(Json{{"kind", violation_name(x.kind)}, {"detail", x.detail}});
    return Json{{"valid", report.valid()}, {"violations", v}};
}

Json homology_to_json(const HomologySummary& h) {
    Json out{{"ring", ring_name(h.ring)}, {"ranks", h.ranks}};
    if (h.ring == Ring::Z) out["torsion"] = h.torsion;
    return out;
}

Json hodge_table_to_json(const HodgeTable& table) {
    Json rows = Json::array();
    for (const HomologySummary& h : table.rows) rows.push_back(homology_to_json(h));
    return Json{{"ring", ring_name(table.ring)}, {"n", table.n}, {"rows", rows}, {"has_torsion", table.has_torsion()}};
}

Json poset_dump(const CellPoset& P) {
    Json cells = Json::array();
    for (int i = 0; i < P.size(); ++i) {
        cells.push_back(Json{{"tau", simplex_coords(P.tau_side(), P.tau(i))},
                             {"sigma", simplex_coords(P.sigma_side(), P.sigma(i))},
                             {"dim", P.cell(i).dim},
                             {"flags", flag_names(P.cell(i).flags)}});
    }
    Json covers = Json::array();
    for (const Cover& c : P.covers()) covers.push_back(Json{{"lower", c.lower}, {"upper", c.upper}, {"sign", c.sign}});
    return Json{{"kind", P.kind() == PosetKind::P ? "P" : "J"},
                {"n", P.n()},
                {"signature_seed", P.signature_seed()},
                {"cells", cells},
                {"covers", covers}};
}

Json cycle_dump(const CellPoset& P, const ChainComplex& C, int q, const IntVector& chain) {
    Json out = Json::object();
    for (const ChainBlock& b : C.blocks(q)) {
        IntVector coeffs = C.cell_coeffs(q, chain, b.cell);
        bool any = false;
        for (Int x : coeffs) any = any || x != 0;
        if (any) out[simplex_key(P.tau_side(), P.tau(b.cell)) + "|" + simplex_key(P.sigma_side(), P.sigma(b.cell))] = coeffs;
    }
    return out;
}

}  // namespace tropmirror
