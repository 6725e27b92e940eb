#pragma once

#include <map>
#include <string>
#include <vector>

#include "tropmirror/lattice.hpp"

namespace tropmirror {

/// Sorted indices into CentralTriangulation::points(); index 0 is the origin.
using Simplex = std::vector<int>;

enum class ViolationKind { NotCentral, NotUnimodular, UnusedLatticePoint, NotCovering, BadIntersection, NonLatticeVertex };

const char* violation_name(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
    bool has(ViolationKind kind) const;
};

using CoordinateSimplex = std::vector<LatticeVector>;

/// Checks a list of maximal boundary simplices against the central-unimodular conditions.
ValidationReport validate_boundary(const LatticePolytope& P, const std::vector<CoordinateSimplex>& boundary);

class CentralTriangulation {
public:
    CentralTriangulation() = default;
    /// Throws InvalidInput listing the violations unless the input validates.
    static CentralTriangulation from_boundary(const LatticePolytope& P, const std::vector<CoordinateSimplex>& boundary);

    const LatticePolytope& polytope() const { return polytope_; }
    int n() const { return polytope_.rank() - 1; }
    int rank() const { return polytope_.rank(); }

    const std::vector<LatticeVector>& points() const { return points_; }
    const LatticeVector& point(int i) const { return points_[i]; }
    int point_index(const LatticeVector& x) const;
    /// Boundary lattice points, i.e. the rays of the fan; indices 1..points().size()-1.
    int ray_count() const { return int(points_.size()) - 1; }

    const std::vector<Simplex>& boundary_simplices() const { return maximal_boundary_; }
    /// Every simplex of T, grouped by dimension then lexicographic.
    const std::vector<Simplex>& simplices() const { return simplices_; }
    int simplex_index(const Simplex& s) const;  // -1 if absent
    bool contains(const Simplex& s) const { return simplex_index(s) >= 0; }
    /// Simplices having s as a facet.
    const std::vector<int>& cofacets(int simplex) const { return cofacets_[simplex]; }

    static int dim(const Simplex& s) { return int(s.size()) - 1; }
    static bool has_origin(const Simplex& s) { return !s.empty() && s[0] == 0; }
    static bool in_boundary(const Simplex& s) { return !s.empty() && s[0] != 0; }
    static Simplex sigma_hat(const Simplex& s);
    /// s minus the origin; empty for the origin itself.
    static Simplex sigma_infty(const Simplex& s);
    /// Facets of s that are nonempty.
    static std::vector<Simplex> facets_of(const Simplex& s);
    static bool is_face(const Simplex& face, const Simplex& s);

    std::vector<LatticeVector> coords(const Simplex& s) const;
    Cone cone_over(const Simplex& s) const;
    /// S(rho): the simplex conv(0, rays of rho); throws NotInTriangulation.
    Simplex simplex_of_cone(const Cone& rho) const;
    Fan fan() const;
    /// Index into polytope().faces() of the smallest face containing sigma_infty(s).
    int min_face(const Simplex& s) const;

    ValidationReport validate() const { return validate_boundary(polytope_, raw_); }
    const std::vector<CoordinateSimplex>& raw_boundary() const { return raw_; }

private:
    LatticePolytope polytope_;
    std::vector<LatticeVector> points_;
    std::map<LatticeVector, int> point_lookup_;
    std::vector<CoordinateSimplex> raw_;
    std::vector<Simplex> maximal_boundary_;
    std::vector<Simplex> simplices_;
    std::map<Simplex, int> simplex_lookup_;
    std::vector<std::vector<int>> cofacets_;
    std::vector<int> min_face_;
};

/// Pulling triangulation of every facet in lexicographic order, coned to the origin; rank <= 3.
CentralTriangulation generate_central(const LatticePolytope& P);

}  // namespace tropmirror
