#pragma once

#include <map>
#include <string>
#include <vector>

#include "tropmirror/linalg.hpp"

namespace tropmirror {

using LatticeVector = IntVector;

std::string format_vector(const LatticeVector& v);

/// Supporting inequality <normal, x> <= rhs with primitive normal.
struct Facet {
    LatticeVector normal;
    Int rhs = 0;
};

struct Face {
    std::vector<int> vertices;  // indices into LatticePolytope::vertices(), sorted
    std::vector<int> facets;    // facets containing the face, sorted
    int dim = 0;
};

class LatticePolytope {
public:
    LatticePolytope() = default;
    /// Convex hull of the given points; throws DimensionMismatch unless full-dimensional.
    static LatticePolytope from_points(int rank, const std::vector<LatticeVector>& points);

    int rank() const { return rank_; }
    const std::vector<LatticeVector>& vertices() const { return vertices_; }
    const std::vector<Facet>& facets() const { return facets_; }
    const std::vector<Face>& faces() const { return faces_; }
    const std::vector<LatticeVector>& lattice_points() const { return lattice_points_; }

    bool contains(const LatticeVector& x) const;
    bool on_boundary(const LatticeVector& x) const;
    /// x satisfies every facet equality of the face.
    bool face_contains(const Face& f, const LatticeVector& x) const;
    /// Smallest face containing all points (the polytope itself for interior points).
    const Face& min_face_containing(const std::vector<LatticeVector>& points) const;
    int face_index(const std::vector<int>& vertex_set) const;
    const Face& whole_face() const;
    /// Normalized volume (rank! times Euclidean volume), via the cones from an interior point.
    Int normalized_volume() const;

    bool operator==(const LatticePolytope& o) const { return rank_ == o.rank_ && vertices_ == o.vertices_; }

private:
    void build_faces();

    int rank_ = 0;
    std::vector<LatticeVector> vertices_;
    std::vector<Facet> facets_;
    std::vector<Face> faces_;
    std::map<std::vector<int>, int> face_lookup_;
    std::vector<LatticeVector> lattice_points_;
};

bool is_reflexive(const LatticePolytope& P);
LatticePolytope dual_polytope(const LatticePolytope& P);

struct Cone {
    std::vector<LatticeVector> generators;  // primitive, sorted
    int dimension = 0;
    int ambient = 0;
    // Optional H-description: <e, w> = 0 for equalities, <g, w> >= 0 for inequalities.
    std::vector<LatticeVector> equalities;
    std::vector<LatticeVector> inequalities;
    bool has_h_description = false;

    static Cone from_generators(int ambient, const std::vector<LatticeVector>& gens);
    bool contains(const LatticeVector& w) const;
    bool contains(const Cone& other) const;
    bool operator==(const Cone& o) const { return generators == o.generators && ambient == o.ambient; }
};

class Fan {
public:
    void add(Cone c);
    const std::vector<Cone>& cones() const { return cones_; }
    int find(const std::vector<LatticeVector>& generators) const;  // -1 if absent
    bool complete = false;
    /// Equality of canonical cone sets.
    bool same_cones(const Fan& o) const;

private:
    std::vector<Cone> cones_;
    std::map<std::vector<LatticeVector>, int> lookup_;
};

Fan normal_fan(const LatticePolytope& P);
Fan face_fan(const LatticePolytope& P);
Cone min_cone(const Cone& rho, const Fan& coarse);
/// Face of P on which <v,.> is maximal for v in the relative interior of rho; rho must be a cone of normal_fan(P).
const Face& normal_face(const Cone& rho, const LatticePolytope& P);

}  // namespace tropmirror
