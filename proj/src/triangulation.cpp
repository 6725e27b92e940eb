#include "tropmirror/triangulation.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace tropmirror {

const char* violation_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::NotCentral: return "NotCentral";
        case ViolationKind::NotUnimodular: return "NotUnimodular";
        case ViolationKind::UnusedLatticePoint: return "UnusedLatticePoint";
        case ViolationKind::NotCovering: return "NotCovering";
        case ViolationKind::BadIntersection: return "BadIntersection";
        case ViolationKind::NonLatticeVertex: return "NonLatticeVertex";
    }
    return "Unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

namespace {

std::string format_simplex(const CoordinateSimplex& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + format_vector(s[i]);
    return out + "]";
}

}  // namespace

ValidationReport validate_boundary(const LatticePolytope& P, const std::vector<CoordinateSimplex>& boundary) {
    ValidationReport report;
    auto add = [&](ViolationKind k, std::string detail) { report.violations.push_back({k, std::move(detail)}); };
    const int rank = P.rank();
    const LatticeVector origin(rank, 0);
    std::set<LatticeVector> lattice(P.lattice_points().begin(), P.lattice_points().end());
    std::set<LatticeVector> used;
    Int volume = 0;
    bool volumes_known = true;
    std::map<CoordinateSimplex, std::vector<int>> ridge_signs;

    for (const auto& raw : boundary) {
        CoordinateSimplex s = raw;
        std::sort(s.begin(), s.end());
        const std::string name = format_simplex(s);
        bool shape_ok = int(s.size()) == rank;
        for (const auto& x : s) {
            if (int(x.size()) != rank) {
                shape_ok = false;
                continue;
            }
            if (!lattice.count(x)) add(ViolationKind::NonLatticeVertex, name + " uses " + format_vector(x));
            used.insert(x);
            if (x == origin) add(ViolationKind::NotCentral, name + " contains the origin");
        }
        if (!shape_ok) {
            add(ViolationKind::NotCentral, name + " is not a boundary simplex of the right dimension");
            volumes_known = false;
            continue;
        }
        bool in_facet = std::any_of(P.facets().begin(), P.facets().end(), [&](const Facet& f) {
            return std::all_of(s.begin(), s.end(), [&](const LatticeVector& x) { return dot(f.normal, x) == f.rhs; });
        });
        if (!in_facet) add(ViolationKind::NotCentral, name + " does not lie in a facet");

        Int det = determinant(IntMatrix::from_rows(s, rank));
        if (det == 0) {
            add(ViolationKind::NotUnimodular, name + " is degenerate");
            volumes_known = false;
            continue;
        }
        if (det != 1 && det != -1) add(ViolationKind::NotUnimodular, name + " has lattice volume " + std::to_string(std::abs(det)));
        volume += std::abs(det);
        const int sign = det > 0 ? 1 : -1;
        for (int i = 0; i < rank; ++i) {
            CoordinateSimplex ridge = s;
            ridge.erase(ridge.begin() + i);
            ridge_signs[ridge].push_back((i % 2) ? -sign : sign);
        }
    }
    for (const auto& x : P.lattice_points())
        if (x != origin && !used.count(x)) add(ViolationKind::UnusedLatticePoint, format_vector(x) + " is not a vertex");
    if (volumes_known && volume != P.normalized_volume())
        add(ViolationKind::NotCovering,
            "total volume " + std::to_string(volume) + " differs from " + std::to_string(P.normalized_volume()));
    for (const auto& [ridge, signs] : ridge_signs) {
        if (signs.size() != 2)
            add(ViolationKind::BadIntersection, format_simplex(ridge) + " is shared by " + std::to_string(signs.size()) + " simplices");
        else if (signs[0] == signs[1])
            add(ViolationKind::BadIntersection, format_simplex(ridge) + " has overlapping neighbours");
    }
    return report;
}

CentralTriangulation CentralTriangulation::from_boundary(const LatticePolytope& P, const std::vector<CoordinateSimplex>& boundary) {
    ValidationReport report = validate_boundary(P, boundary);
    if (!report.valid()) {
        std::string msg = "invalid triangulation:";
        for (const auto& v : report.violations) msg += std::string(" ") + violation_name(v.kind) + "(" + v.detail + ")";
        fail(ErrorCode::InvalidInput, msg);
    }
    CentralTriangulation T;
    T.polytope_ = P;
    T.raw_ = boundary;
    const LatticeVector origin(P.rank(), 0);
    T.points_.push_back(origin);
    for (const auto& x : P.lattice_points())
        if (x != origin) T.points_.push_back(x);
    for (std::size_t i = 0; i < T.points_.size(); ++i) T.point_lookup_[T.points_[i]] = int(i);

    std::set<Simplex> all;
    for (const auto& raw : boundary) {
        Simplex b;
        for (const auto& x : raw) b.push_back(T.point_lookup_.at(x));
        std::sort(b.begin(), b.end());
        T.maximal_boundary_.push_back(b);
        Simplex full = sigma_hat(b);
        const int k = int(full.size());
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            Simplex face;
            for (int i = 0; i < k; ++i)
                if (mask & (1u << i)) face.push_back(full[i]);
            all.insert(face);
        }
    }
    std::sort(T.maximal_boundary_.begin(), T.maximal_boundary_.end());
    T.simplices_.assign(all.begin(), all.end());
    std::stable_sort(T.simplices_.begin(), T.simplices_.end(), [](const Simplex& a, const Simplex& b) { return a.size() < b.size(); });
    for (std::size_t i = 0; i < T.simplices_.size(); ++i) T.simplex_lookup_[T.simplices_[i]] = int(i);
    T.cofacets_.assign(T.simplices_.size(), {});
    T.min_face_.assign(T.simplices_.size(), -1);
    const int whole = P.face_index(P.whole_face().vertices);
    for (std::size_t i = 0; i < T.simplices_.size(); ++i) {
        const Simplex& s = T.simplices_[i];
        for (const auto& f : facets_of(s)) T.cofacets_[T.simplex_lookup_.at(f)].push_back(int(i));
        Simplex inf = sigma_infty(s);
        T.min_face_[i] = inf.empty() ? whole : P.face_index(P.min_face_containing(T.coords(inf)).vertices);
    }
    return T;
}

int CentralTriangulation::point_index(const LatticeVector& x) const {
    auto it = point_lookup_.find(x);
    return it == point_lookup_.end() ? -1 : it->second;
}

int CentralTriangulation::simplex_index(const Simplex& s) const {
    auto it = simplex_lookup_.find(s);
    return it == simplex_lookup_.end() ? -1 : it->second;
}

Simplex CentralTriangulation::sigma_hat(const Simplex& s) {
    if (has_origin(s)) return s;
    Simplex out{0};
    out.insert(out.end(), s.begin(), s.end());
    return out;
}

Simplex CentralTriangulation::sigma_infty(const Simplex& s) {
    if (!has_origin(s)) return s;
    return Simplex(s.begin() + 1, s.end());
}

std::vector<Simplex> CentralTriangulation::facets_of(const Simplex& s) {
    std::vector<Simplex> out;
    if (s.size() <= 1) return out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f = s;
        f.erase(f.begin() + i);
        out.push_back(f);
    }
    return out;
}

bool CentralTriangulation::is_face(const Simplex& face, const Simplex& s) {
    return std::includes(s.begin(), s.end(), face.begin(), face.end());
}

std::vector<LatticeVector> CentralTriangulation::coords(const Simplex& s) const {
    std::vector<LatticeVector> out;
    for (int i : s) out.push_back(points_.at(i));
    return out;
}

Cone CentralTriangulation::cone_over(const Simplex& s) const {
    require(contains(s), ErrorCode::NotInTriangulation, "simplex is not in the triangulation");
    return Cone::from_generators(rank(), coords(sigma_infty(s)));
}

Simplex CentralTriangulation::simplex_of_cone(const Cone& rho) const {
    Simplex s{0};
    for (const auto& g : rho.generators) {
        int i = point_index(g);
        require(i > 0, ErrorCode::NotInTriangulation, "ray " + format_vector(g) + " is not a vertex of the triangulation");
        s.push_back(i);
    }
    std::sort(s.begin(), s.end());
    require(contains(s), ErrorCode::NotInTriangulation, "cone is not in the fan of the triangulation");
    return s;
}

Fan CentralTriangulation::fan() const {
    Fan f;
    f.complete = true;
    for (const auto& s : simplices_)
        if (has_origin(s)) f.add(cone_over(s));
    return f;
}

int CentralTriangulation::min_face(const Simplex& s) const {
    int i = simplex_index(s);
    require(i >= 0, ErrorCode::NotInTriangulation, "simplex is not in the triangulation");
    return min_face_[i];
}

namespace {

using Point2 = std::array<Int, 2>;

Int orient(const Point2& a, const Point2& b, const Point2& c) {
    return checked_sub(checked_mul(b[0] - a[0], c[1] - a[1]), checked_mul(b[1] - a[1], c[0] - a[0]));
}

// Incremental pulling of the given points (already in pulling order) inside their convex hull.
std::vector<std::array<int, 3>> pull_polygon(const std::vector<Point2>& pts) {
    std::vector<LatticeVector> as_vectors;
    for (const auto& p : pts) as_vectors.push_back({p[0], p[1]});
    LatticePolytope hull = LatticePolytope::from_points(2, as_vectors);
    std::vector<std::array<int, 3>> tris;
    for (const auto& edge : hull.facets()) {
        if (dot(edge.normal, as_vectors[0]) == edge.rhs) continue;
        std::vector<int> ends;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            bool is_vertex = std::find(hull.vertices().begin(), hull.vertices().end(), as_vectors[i]) != hull.vertices().end();
            if (is_vertex && dot(edge.normal, as_vectors[i]) == edge.rhs) ends.push_back(int(i));
        }
        tris.push_back({0, ends[0], ends[1]});
    }
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const Point2& p = pts[k];
        std::vector<std::array<int, 3>> next;
        for (const auto& t : tris) {
            if (t[0] == int(k) || t[1] == int(k) || t[2] == int(k)) {
                next.push_back(t);
                continue;
            }
            Int s = orient(pts[t[0]], pts[t[1]], pts[t[2]]);
            Int o[3] = {orient(pts[t[1]], pts[t[2]], p), orient(pts[t[2]], pts[t[0]], p), orient(pts[t[0]], pts[t[1]], p)};
            bool inside = std::all_of(std::begin(o), std::end(o), [&](Int v) { return v == 0 || (v > 0) == (s > 0); });
            if (!inside) {
                next.push_back(t);
                continue;
            }
            // cone from p over the edges of t that do not contain it
            for (int e = 0; e < 3; ++e) {
                if (o[e] == 0) continue;
                next.push_back({int(k), t[(e + 1) % 3], t[(e + 2) % 3]});
            }
        }
        tris = std::move(next);
    }
    return tris;
}

}  // namespace

CentralTriangulation generate_central(const LatticePolytope& P) {
    const int rank = P.rank();
    require(rank == 2 || rank == 3, ErrorCode::RankUnsupported, "automatic triangulation supports rank 2 and 3 only");
    require(is_reflexive(P), ErrorCode::NotReflexive, "central triangulations need a reflexive polytope");
    std::vector<CoordinateSimplex> boundary;
    for (const auto& f : P.facets()) {
        std::vector<LatticeVector> pts;
        for (const auto& x : P.lattice_points())
            if (dot(f.normal, x) == f.rhs) pts.push_back(x);
        std::sort(pts.begin(), pts.end());
        if (rank == 2) {
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) boundary.push_back({pts[i], pts[i + 1]});
            continue;
        }
        // Local lattice coordinates on the facet hyperplane.
        IntMatrix basis = integral_kernel(IntMatrix::from_rows({f.normal}, rank));
        IntegralSolver solver(basis.transpose());
        std::vector<Point2> local;
        for (const auto& x : pts) {
            auto c = solver.solve(sub(x, pts[0]));
            require(c.has_value(), ErrorCode::Internal, "facet lattice coordinates failed");
            local.push_back({(*c)[0], (*c)[1]});
        }
        for (const auto& t : pull_polygon(local)) boundary.push_back({pts[t[0]], pts[t[1]], pts[t[2]]});
    }
    return CentralTriangulation::from_boundary(P, boundary);
}

}  // namespace tropmirror
