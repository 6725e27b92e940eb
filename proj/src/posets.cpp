#include "tropmirror/posets.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace tropmirror {

DualPair DualPair::make(CentralTriangulation primal, CentralTriangulation dual) {
    require(primal.rank() == dual.rank(), ErrorCode::NotDualPair, "triangulated polytopes have different ranks");
    require(dual_polytope(primal.polytope()) == dual.polytope(), ErrorCode::NotDualPair, "polytopes are not mutually dual");
    return {std::make_shared<const CentralTriangulation>(std::move(primal)), std::make_shared<const CentralTriangulation>(std::move(dual))};
}

void CellPoset::init_common(TriangulationPtr tau_side, TriangulationPtr sigma_side) {
    require(tau_side && sigma_side, ErrorCode::InvalidInput, "missing triangulation");
    require(dual_polytope(sigma_side->polytope()) == tau_side->polytope(), ErrorCode::NotDualPair,
            "polytopes are not mutually dual");
    tau_side_ = std::move(tau_side);
    sigma_side_ = std::move(sigma_side);
    const LatticePolytope& outer = tau_side_->polytope();
    const LatticePolytope& inner = sigma_side_->polytope();
    // The face fan of the tau-side polytope is the normal fan of the sigma-side polytope.
    const Fan coarse = face_fan(outer);
    const int whole = inner.face_index(inner.whole_face().vertices);
    membership_face_.assign(tau_side_->simplices().size(), whole);
    for (std::size_t t = 0; t < tau_side_->simplices().size(); ++t) {
        const Simplex& tau = tau_side_->simplices()[t];
        if (CentralTriangulation::sigma_infty(tau).empty()) continue;
        Cone m = min_cone(tau_side_->cone_over(tau), coarse);
        const Face& f = normal_face(m, inner);
        membership_face_[t] = inner.face_index(f.vertices);
    }
}

bool CellPoset::compatible(int tau, const Simplex& sigma) const {
    const Simplex& t = tau_side_->simplices()[tau];
    const Simplex t_inf = CentralTriangulation::sigma_infty(t);
    if (t_inf.empty()) return true;
    if (CentralTriangulation::has_origin(sigma)) return false;
    const LatticePolytope& inner = sigma_side_->polytope();
    const Face& face = inner.faces()[membership_face_[tau]];
    for (int x : sigma)
        if (!inner.face_contains(face, sigma_side_->point(x))) return false;
    // Pairing identity: every ray of tau pairs to one with every vertex of sigma.
    for (int u : t_inf)
        for (int x : sigma)
            require(dot(tau_side_->point(u), sigma_side_->point(x)) == 1, ErrorCode::Internal,
                    "pairing identity fails for " + format_vector(tau_side_->point(u)) + " and " + format_vector(sigma_side_->point(x)));
    return true;
}

void CellPoset::add_cell(int tau, int sigma, unsigned flags) {
    const Simplex& t = tau_side_->simplices()[tau];
    const Simplex& s = sigma_side_->simplices()[sigma];
    Cell c;
    c.tau = tau;
    c.sigma = sigma;
    c.dim = (n() + 1) - CentralTriangulation::dim(t) - CentralTriangulation::dim(s);
    c.flags = flags;
    if (CentralTriangulation::dim(s) >= 1) c.flags |= kP1;
    lookup_[{tau, sigma}] = int(cells_.size());
    cells_.push_back(c);
}

CellPoset CellPoset::build_P(TriangulationPtr tau_side, TriangulationPtr sigma_side) {
    CellPoset P;
    P.kind_ = PosetKind::P;
    P.init_common(std::move(tau_side), std::move(sigma_side));
    const auto& taus = P.tau_side_->simplices();
    const auto& sigmas = P.sigma_side_->simplices();
    for (std::size_t t = 0; t < taus.size(); ++t) {
        if (!CentralTriangulation::has_origin(taus[t])) continue;
        const bool at_infinity = taus[t].size() > 1;
        for (std::size_t s = 0; s < sigmas.size(); ++s) {
            if (!P.compatible(int(t), sigmas[s])) continue;
            unsigned flags = at_infinity ? kPinf : 0u;
            if (!at_infinity && CentralTriangulation::has_origin(sigmas[s]) && sigmas[s].size() > 1) flags |= kSphere;
            P.add_cell(int(t), int(s), flags);
        }
    }
    P.finish();
    return P;
}

CellPoset CellPoset::build_J(TriangulationPtr tau_side, TriangulationPtr sigma_side) {
    CellPoset J;
    J.kind_ = PosetKind::J;
    J.init_common(std::move(tau_side), std::move(sigma_side));
    const auto& taus = J.tau_side_->simplices();
    const auto& sigmas = J.sigma_side_->simplices();
    for (std::size_t t = 0; t < taus.size(); ++t) {
        const Simplex& tau = taus[t];
        if (tau.size() == 1 && tau[0] == 0) continue;
        const bool tau_boundary = CentralTriangulation::in_boundary(tau);
        for (std::size_t s = 0; s < sigmas.size(); ++s) {
            const Simplex& sigma = sigmas[s];
            unsigned flags = 0;
            if (CentralTriangulation::has_origin(sigma)) {
                if (sigma.size() == 1 || !tau_boundary) continue;
                if (!J.compatible(int(t), CentralTriangulation::sigma_infty(sigma))) continue;
                flags = kJS | kJ0;
            } else {
                if (!J.compatible(int(t), sigma)) continue;
                flags = kJub | (tau_boundary ? (kJ0 | kJ0ub) : kJinf);
            }
            J.add_cell(int(t), int(s), flags);
        }
    }
    J.finish();
    return J;
}

int CellPoset::find(int tau, int sigma) const {
    auto it = lookup_.find({tau, sigma});
    return it == lookup_.end() ? -1 : it->second;
}

int CellPoset::find(const Simplex& tau, const Simplex& sigma) const {
    int t = tau_side_->simplex_index(tau), s = sigma_side_->simplex_index(sigma);
    if (t < 0 || s < 0) return -1;
    return find(t, s);
}

int CellPoset::cover_index(int lower, int upper) const {
    auto it = cover_lookup_.find({lower, upper});
    return it == cover_lookup_.end() ? -1 : it->second;
}

void CellPoset::finish() {
    down_.assign(cells_.size(), {});
    up_.assign(cells_.size(), {});
    max_dim_ = 0;
    for (std::size_t x = 0; x < cells_.size(); ++x) {
        const Cell& c = cells_[x];
        max_dim_ = std::max(max_dim_, c.dim);
        // Lower neighbours grow exactly one coordinate by one vertex.
        auto link = [&](int lower) {
            require(cells_[lower].dim + 1 == c.dim, ErrorCode::InvalidInput, "poset is not graded");
            int idx = int(covers_.size());
            covers_.push_back({lower, int(x), 1});
            cover_lookup_[{lower, int(x)}] = idx;
            down_[x].push_back(idx);
            up_[lower].push_back(idx);
        };
        for (int t : tau_side_->cofacets(c.tau)) {
            int y = find(t, c.sigma);
            if (y >= 0) link(y);
        }
        for (int s : sigma_side_->cofacets(c.sigma)) {
            int y = find(c.tau, s);
            if (y >= 0) link(y);
        }
    }
    // Thinness: every length-2 interval [z, x] has exactly two middle elements.
    interval_count_ = 0;
    for (std::size_t x = 0; x < cells_.size(); ++x) {
        std::map<int, int> middles;
        for (int cy : down_[x])
            for (int cz : down_[covers_[cy].lower]) ++middles[covers_[cz].lower];
        for (const auto& [z, count] : middles) {
            require(count == 2, ErrorCode::InvalidInput,
                    "poset is not thin: interval between cells " + std::to_string(z) + " and " + std::to_string(x) + " has " +
                        std::to_string(count + 2) + " elements");
            ++interval_count_;
        }
    }
    assign_signature(0);
}

void CellPoset::assign_signature(std::uint64_t seed) {
    seed_ = seed;
    std::mt19937_64 rng(seed);
    // t = 1 encodes sign -1; each length-2 interval needs an odd number of 1's.
    std::vector<int> t(covers_.size(), -1);
    std::vector<int> order(cells_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cells_[a].dim < cells_[b].dim; });
    for (int x : order) {
        const auto& dc = down_[x];
        if (dc.empty()) continue;
        // constraint graph on the down covers of x, one edge per shared lower cell z
        std::map<int, std::vector<std::pair<int, int>>> via;  // z -> (position in dc, t(y,z))
        for (std::size_t i = 0; i < dc.size(); ++i) {
            int y = covers_[dc[i]].lower;
            for (int cz : down_[y]) via[covers_[cz].lower].push_back({int(i), t[cz]});
            // 1-cells: the virtual bottom element sits below both endpoints
            if (cells_[x].dim == 1) via[-1].push_back({int(i), 0});
        }
        std::vector<std::vector<std::pair<int, int>>> adj(dc.size());
        for (const auto& [z, pair] : via) {
            require(pair.size() == 2, ErrorCode::InvalidInput, "poset is not thin below cell " + std::to_string(x));
            int parity = (1 + pair[0].second + pair[1].second) & 1;
            adj[pair[0].first].push_back({pair[1].first, parity});
            adj[pair[1].first].push_back({pair[0].first, parity});
        }
        std::vector<int> value(dc.size(), -1);
        for (std::size_t root = 0; root < dc.size(); ++root) {
            if (value[root] >= 0) continue;
            value[root] = seed == 0 ? 0 : int(rng() & 1);
            std::deque<int> queue{int(root)};
            while (!queue.empty()) {
                int a = queue.front();
                queue.pop_front();
                for (auto [b, parity] : adj[a]) {
                    int want = value[a] ^ parity;
                    if (value[b] < 0) {
                        value[b] = want;
                        queue.push_back(b);
                    } else if (value[b] != want) {
                        fail(ErrorCode::Unsolvable, "no balanced signature around cell " + std::to_string(x));
                    }
                }
            }
        }
        for (std::size_t i = 0; i < dc.size(); ++i) t[dc[i]] = value[i];
    }
    for (std::size_t c = 0; c < covers_.size(); ++c) covers_[c].sign = t[c] ? -1 : 1;
}

int iso_p(const CellPoset& src, const CellPoset& tgt, int cell) {
    require(src.kind() == PosetKind::P && tgt.kind() == PosetKind::P, ErrorCode::InvalidInput, "iso_p acts on P posets");
    require(src.cell(cell).has(kPinf), ErrorCode::NotAtInfinity, "cell is not at infinity");
    int image = tgt.find(CentralTriangulation::sigma_hat(src.sigma(cell)), CentralTriangulation::sigma_infty(src.tau(cell)));
    require(image >= 0, ErrorCode::Internal, "iso_p image is not a cell");
    return image;
}

int iso_j(const CellPoset& src, const CellPoset& tgt, int cell) {
    require(src.kind() == PosetKind::J && tgt.kind() == PosetKind::J, ErrorCode::InvalidInput, "iso_j acts on J posets");
    require(cell >= 0 && cell < src.size(), ErrorCode::NotInJ, "cell is not in J");
    const Simplex& tau = src.tau(cell);
    const Simplex& sigma = src.sigma(cell);
    int image = -1;
    if (CentralTriangulation::has_origin(tau))
        image = tgt.find(CentralTriangulation::sigma_hat(sigma), CentralTriangulation::sigma_infty(tau));
    else if (CentralTriangulation::has_origin(sigma))
        image = tgt.find(CentralTriangulation::sigma_infty(sigma), CentralTriangulation::sigma_hat(tau));
    else
        image = tgt.find(sigma, tau);
    require(image >= 0, ErrorCode::Internal, "iso_j image is not a cell");
    return image;
}

int refine_to_p(const CellPoset& J, const CellPoset& P, int cell) {
    const Simplex& tau = J.tau(cell);
    int image = CentralTriangulation::has_origin(tau) ? P.find(tau, J.sigma(cell)) : P.find(Simplex{0}, J.sigma(cell));
    require(image >= 0, ErrorCode::Internal, "refinement image is not a cell");
    return image;
}

}  // namespace tropmirror
