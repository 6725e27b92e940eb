#include "tropmirror/lattice.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace tropmirror {

std::string format_vector(const LatticeVector& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

namespace {

int affine_rank(const std::vector<LatticeVector>& pts) {
    if (pts.size() <= 1) return 0;
    IntMatrix D(0, int(pts[0].size()));
    for (std::size_t i = 1; i < pts.size(); ++i) D.append_row(sub(pts[i], pts[0]));
    return smith_form(D).rank;
}

// All k-subsets of {0..n-1}, visited in lexicographic order.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
    if (k > n || k <= 0) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<Facet> hull_facets(int rank, const std::vector<LatticeVector>& pts) {
    std::set<std::pair<LatticeVector, Int>> found;
    for_each_subset(int(pts.size()), rank, [&](const std::vector<int>& idx) {
        IntMatrix D(0, rank);
        for (std::size_t i = 1; i < idx.size(); ++i) D.append_row(sub(pts[idx[i]], pts[idx[0]]));
        IntMatrix K = integral_kernel(D);
        if (K.rows() != 1) return;
        LatticeVector n = primitive(K.row(0));
        Int b = dot(n, pts[idx[0]]);
        bool pos = false, neg = false;
        for (const auto& x : pts) {
            Int s = dot(n, x) - b;
            if (s > 0) pos = true;
            if (s < 0) neg = true;
        }
        if (pos && neg) return;
        if (pos) {
            n = scale(-1, n);
            b = -b;
        }
        found.insert({n, b});
    });
    std::vector<Facet> out;
    for (const auto& [n, b] : found) out.push_back({n, b});
    return out;
}

}  // namespace

LatticePolytope LatticePolytope::from_points(int rank, const std::vector<LatticeVector>& points) {
    require(rank >= 1, ErrorCode::InvalidInput, "polytope rank must be positive");
    std::vector<LatticeVector> pts = points;
    for (const auto& p : pts)
        require(int(p.size()) == rank, ErrorCode::DimensionMismatch, "point " + format_vector(p) + " has wrong rank");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    require(affine_rank(pts) == rank, ErrorCode::DimensionMismatch, "polytope is not full-dimensional");

    LatticePolytope P;
    P.rank_ = rank;
    P.facets_ = hull_facets(rank, pts);
    for (const auto& x : pts) {
        IntMatrix normals(0, rank);
        for (const auto& f : P.facets_)
            if (dot(f.normal, x) == f.rhs) normals.append_row(f.normal);
        if (normals.rows() >= rank && smith_form(normals).rank == rank) P.vertices_.push_back(x);
    }
    P.build_faces();

    LatticeVector lo = P.vertices_[0], hi = P.vertices_[0];
    for (const auto& v : P.vertices_)
        for (int i = 0; i < rank; ++i) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
    LatticeVector x = lo;
    for (;;) {
        if (P.contains(x)) P.lattice_points_.push_back(x);
        int i = rank - 1;
        while (i >= 0 && x[i] == hi[i]) {
            x[i] = lo[i];
            --i;
        }
        if (i < 0) break;
        ++x[i];
    }
    std::sort(P.lattice_points_.begin(), P.lattice_points_.end());
    return P;
}

void LatticePolytope::build_faces() {
    std::set<std::vector<int>> sets;
    std::vector<int> all(vertices_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = int(i);
    sets.insert(all);
    for (const auto& f : facets_) {
        std::vector<int> s;
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (dot(f.normal, vertices_[i]) == f.rhs) s.push_back(int(i));
        sets.insert(s);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<int>> cur(sets.begin(), sets.end());
        for (std::size_t a = 0; a < cur.size(); ++a)
            for (std::size_t b = a + 1; b < cur.size(); ++b) {
                std::vector<int> c;
                std::set_intersection(cur[a].begin(), cur[a].end(), cur[b].begin(), cur[b].end(), std::back_inserter(c));
                if (!c.empty() && sets.insert(c).second) grew = true;
            }
    }
    faces_.clear();
    face_lookup_.clear();
    for (const auto& s : sets) {
        Face f;
        f.vertices = s;
        std::vector<LatticeVector> pts;
        for (int i : s) pts.push_back(vertices_[i]);
        f.dim = affine_rank(pts);
        for (std::size_t k = 0; k < facets_.size(); ++k) {
            bool all_on = std::all_of(s.begin(), s.end(), [&](int i) { return dot(facets_[k].normal, vertices_[i]) == facets_[k].rhs; });
            if (all_on) f.facets.push_back(int(k));
        }
        face_lookup_[s] = int(faces_.size());
        faces_.push_back(f);
    }
}

bool LatticePolytope::contains(const LatticeVector& x) const {
    return std::all_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return dot(f.normal, x) <= f.rhs; });
}

bool LatticePolytope::on_boundary(const LatticeVector& x) const {
    return contains(x) && std::any_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return dot(f.normal, x) == f.rhs; });
}

bool LatticePolytope::face_contains(const Face& f, const LatticeVector& x) const {
    if (!contains(x)) return false;
    return std::all_of(f.facets.begin(), f.facets.end(), [&](int k) { return dot(facets_[k].normal, x) == facets_[k].rhs; });
}

const Face& LatticePolytope::min_face_containing(const std::vector<LatticeVector>& points) const {
    for (const auto& x : points)
        require(contains(x), ErrorCode::FaceNotFound, "point " + format_vector(x) + " lies outside the polytope");
    std::vector<int> verts;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        bool keep = true;
        for (const auto& f : facets_) {
            bool all_on = std::all_of(points.begin(), points.end(), [&](const LatticeVector& x) { return dot(f.normal, x) == f.rhs; });
            if (all_on && dot(f.normal, vertices_[i]) != f.rhs) {
                keep = false;
                break;
            }
        }
        if (keep) verts.push_back(int(i));
    }
    int idx = face_index(verts);
    require(idx >= 0, ErrorCode::FaceNotFound, "no face contains the given points");
    return faces_[idx];
}

int LatticePolytope::face_index(const std::vector<int>& vertex_set) const {
    auto it = face_lookup_.find(vertex_set);
    return it == face_lookup_.end() ? -1 : it->second;
}

const Face& LatticePolytope::whole_face() const {
    std::vector<int> all(vertices_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = int(i);
    return faces_[face_index(all)];
}

Int LatticePolytope::normalized_volume() const {
    // Pulling from the first vertex: vol(P) = sum over facets F of height(v0, F) * vol(F).
    std::function<Int(const std::vector<LatticeVector>&, int)> vol;
    vol = [&](const std::vector<LatticeVector>& pts, int dim) -> Int {
        if (dim == 0) return 1;
        // Work in the affine lattice of pts: project to coordinates of a lattice basis.
        const int amb = int(pts[0].size());
        IntMatrix D(0, amb);
        for (std::size_t i = 1; i < pts.size(); ++i) D.append_row(sub(pts[i], pts[0]));
        // basis of the saturated lattice spanned by the differences
        IntMatrix K = integral_kernel(integral_kernel(D));
        std::vector<LatticeVector> local;
        IntegralSolver solver(K.transpose());
        for (const auto& p : pts) {
            auto c = solver.solve(sub(p, pts[0]));
            require(c.has_value(), ErrorCode::Internal, "volume projection failed");
            local.push_back(*c);
        }
        if (dim == 1) {
            Int lo = local[0][0], hi = local[0][0];
            for (const auto& c : local) {
                lo = std::min(lo, c[0]);
                hi = std::max(hi, c[0]);
            }
            return hi - lo;
        }
        LatticePolytope Q = LatticePolytope::from_points(dim, local);
        const LatticeVector& v0 = Q.vertices()[0];
        Int total = 0;
        for (const auto& f : Q.facets()) {
            Int h = f.rhs - dot(f.normal, v0);
            if (h == 0) continue;
            std::vector<LatticeVector> fp;
            for (const auto& v : Q.vertices())
                if (dot(f.normal, v) == f.rhs) fp.push_back(v);
            total = checked_add(total, checked_mul(h, vol(fp, dim - 1)));
        }
        return total;
    };
    return vol(vertices_, rank_);
}

bool is_reflexive(const LatticePolytope& P) {
    if (!P.contains(LatticeVector(P.rank(), 0))) return false;
    return std::all_of(P.facets().begin(), P.facets().end(), [](const Facet& f) { return f.rhs == 1; });
}

LatticePolytope dual_polytope(const LatticePolytope& P) {
    require(is_reflexive(P), ErrorCode::NotReflexive, "polytope is not reflexive");
    std::vector<LatticeVector> pts;
    for (const auto& f : P.facets()) pts.push_back(f.normal);
    return LatticePolytope::from_points(P.rank(), pts);
}

// ---------------------------------------------------------------- cones and fans

Cone Cone::from_generators(int ambient, const std::vector<LatticeVector>& gens) {
    Cone c;
    c.ambient = ambient;
    for (const auto& g : gens) {
        require(int(g.size()) == ambient, ErrorCode::DimensionMismatch, "cone generator has wrong rank");
        if (!tropmirror::is_zero(g)) c.generators.push_back(primitive(g));
    }
    std::sort(c.generators.begin(), c.generators.end());
    c.generators.erase(std::unique(c.generators.begin(), c.generators.end()), c.generators.end());
    c.dimension = c.generators.empty() ? 0 : smith_form(IntMatrix::from_rows(c.generators, ambient)).rank;
    return c;
}

bool Cone::contains(const LatticeVector& w) const {
    if (tropmirror::is_zero(w)) return true;
    if (has_h_description) {
        for (const auto& e : equalities)
            if (dot(e, w) != 0) return false;
        for (const auto& g : inequalities)
            if (dot(g, w) < 0) return false;
        return true;
    }
    if (generators.empty()) return false;
    require(int(generators.size()) == dimension, ErrorCode::Internal, "membership in a non-simplicial cone needs an H-description");
    auto x = solve(IntMatrix::from_rows(generators, ambient).transpose(), w, Ring::Q);
    if (!x) return false;
    return std::all_of(x->numerators.begin(), x->numerators.end(), [](Int c) { return c >= 0; });
}

bool Cone::contains(const Cone& other) const {
    return std::all_of(other.generators.begin(), other.generators.end(), [&](const LatticeVector& g) { return contains(g); });
}

void Fan::add(Cone c) {
    auto [it, inserted] = lookup_.emplace(c.generators, int(cones_.size()));
    if (inserted) cones_.push_back(std::move(c));
}

int Fan::find(const std::vector<LatticeVector>& generators) const {
    auto it = lookup_.find(generators);
    return it == lookup_.end() ? -1 : it->second;
}

bool Fan::same_cones(const Fan& o) const {
    if (cones_.size() != o.cones_.size()) return false;
    for (const auto& c : cones_)
        if (o.find(c.generators) < 0) return false;
    return true;
}

Fan normal_fan(const LatticePolytope& P) {
    Fan fan;
    fan.complete = true;
    const int n = P.rank();
    for (const auto& F : P.faces()) {
        std::vector<LatticeVector> gens;
        for (int k : F.facets) gens.push_back(P.facets()[k].normal);
        Cone c = Cone::from_generators(n, gens);
        c.has_h_description = true;
        const LatticeVector& v0 = P.vertices()[F.vertices[0]];
        for (int i : F.vertices) c.equalities.push_back(sub(P.vertices()[i], v0));
        for (const auto& w : P.vertices()) c.inequalities.push_back(sub(v0, w));
        if (F.facets.empty())
            for (int i = 0; i < n; ++i) {
                LatticeVector e(n, 0);
                e[i] = 1;
                c.equalities.push_back(e);
            }
        fan.add(std::move(c));
    }
    return fan;
}

Fan face_fan(const LatticePolytope& P) {
    require(P.contains(LatticeVector(P.rank(), 0)) && !P.on_boundary(LatticeVector(P.rank(), 0)), ErrorCode::NotReflexive,
            "face fan needs the origin in the interior");
    Fan fan;
    fan.complete = true;
    const int n = P.rank();
    for (const auto& F : P.faces()) {
        Cone c;
        if (F.facets.empty()) {
            c = Cone::from_generators(n, {});
            c.has_h_description = true;
            for (int i = 0; i < n; ++i) {
                LatticeVector e(n, 0);
                e[i] = 1;
                c.equalities.push_back(e);
            }
        } else {
            std::vector<LatticeVector> gens;
            for (int i : F.vertices) gens.push_back(P.vertices()[i]);
            c = Cone::from_generators(n, gens);
            c.has_h_description = true;
            // w lies in cone(F) iff the facet functionals of F attain max_j <a_j/b_j, w>.
            const Facet& f0 = P.facets()[F.facets[0]];
            for (int k : F.facets) {
                const Facet& f = P.facets()[k];
                c.equalities.push_back(sub(scale(f0.rhs, f.normal), scale(f.rhs, f0.normal)));
            }
            for (const auto& f : P.facets()) c.inequalities.push_back(sub(scale(f.rhs, f0.normal), scale(f0.rhs, f.normal)));
        }
        fan.add(std::move(c));
    }
    return fan;
}

Cone min_cone(const Cone& rho, const Fan& coarse) {
    int best = -1;
    for (std::size_t i = 0; i < coarse.cones().size(); ++i) {
        const Cone& c = coarse.cones()[i];
        if (!c.contains(rho)) continue;
        if (best < 0 || c.dimension < coarse.cones()[best].dimension) best = int(i);
    }
    require(best >= 0, ErrorCode::NotContained, "no cone of the coarse fan contains the given cone");
    return coarse.cones()[best];
}

const Face& normal_face(const Cone& rho, const LatticePolytope& P) {
    Fan fan = normal_fan(P);
    require(fan.find(rho.generators) >= 0, ErrorCode::NotInFan, "cone is not in the normal fan");
    LatticeVector v(P.rank(), 0);
    for (const auto& g : rho.generators) v = add(v, g);
    Int best = 0;
    bool first = true;
    for (const auto& x : P.vertices()) {
        Int s = dot(v, x);
        if (first || s > best) best = s;
        first = false;
    }
    std::vector<int> verts;
    for (std::size_t i = 0; i < P.vertices().size(); ++i)
        if (dot(v, P.vertices()[i]) == best) verts.push_back(int(i));
    int idx = P.face_index(verts);
    require(idx >= 0, ErrorCode::FaceNotFound, "normal face not found");
    return P.faces()[idx];
}

}  // namespace tropmirror
