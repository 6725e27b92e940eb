#include "tropmirror/mirror.hpp"

#include <deque>
#include <numeric>

#include "tropmirror/exterior.hpp"

namespace tropmirror {

namespace {

IntVector reduce(const IntVector& v, Ring ring) { return ring == Ring::F2 ? mod2(v) : v; }

bool vanishes(const IntVector& v, Ring ring) { return is_zero(reduce(v, ring)); }

void require_ring(Ring ring) {
    require(ring == Ring::Z || ring == Ring::F2, ErrorCode::InvalidInput, "chain-level transfers run over Z or F2");
}

// Solves A c = b over the ring for a cellwise split injection A.
IntVector solve_cellwise(const IntMatrix& A, const IntVector& b, Ring ring, const char* what) {
    std::optional<IntVector> c = ring == Ring::F2 ? solve_f2(A, mod2(b)) : solve_z(A, b);
    require(c.has_value(), ErrorCode::MembershipViolation, std::string(what) + " is not in the image");
    return *c;
}

// Parity union-find: value(a) xor value(b) = parity along every recorded relation.
class ParityForest {
public:
    explicit ParityForest(int n) : parent_(n), parity_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::pair<int, int> find(int a) {
        int par = 0, root = a;
        while (parent_[root] != root) {
            par ^= parity_[root];
            root = parent_[root];
        }
        // path compression
        int cur = a, acc = par;
        while (parent_[cur] != cur) {
            int next = parent_[cur], step = parity_[cur];
            parent_[cur] = root;
            parity_[cur] = acc;
            acc ^= step;
            cur = next;
        }
        return {root, par};
    }
    bool relate(int a, int b, int parity) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == parity;
        parent_[ra] = rb;
        parity_[ra] = pa ^ pb ^ parity;
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<int> parity_;
};

}  // namespace

int l_partner(const CellPoset& J, int cell, LSide side) {
    require(J.cell(cell).has(kJ0ub), ErrorCode::SupportViolation, "L partners are defined on J0^ub");
    int image = side == LSide::Infinity ? J.find(CentralTriangulation::sigma_hat(J.tau(cell)), J.sigma(cell))
                                        : J.find(J.tau(cell), CentralTriangulation::sigma_hat(J.sigma(cell)));
    require(image >= 0, ErrorCode::Internal, "J0^ub cell without partner");
    return image;
}

IntVector l_operator(const Cosheaf& S, const ChainComplex& C, int q, const IntVector& chain, LSide side, Ring ring) {
    require_ring(ring);
    const CellPoset& J = S.poset();
    require(J.kind() == PosetKind::J, ErrorCode::InvalidInput, "L operators act on J posets");
    require(int(chain.size()) == C.dim(q), ErrorCode::DimensionMismatch, "chain has wrong length");
    const CellFlag flag = side == LSide::Infinity ? kJinf : kJS;
    for (const ChainBlock& b : C.blocks(q))
        if (!J.cell(b.cell).has(flag))
            require(vanishes(C.cell_coeffs(q, chain, b.cell), ring), ErrorCode::SupportViolation,
                    "L operator input leaves its side");
    IntVector out = C.zero_chain(q + 1);
    if (q + 1 > C.top_degree()) {
        require(vanishes(chain, ring), ErrorCode::SupportViolation, "L operator input has no preimage degree");
        return out;
    }
    for (const ChainBlock& b : C.blocks(q + 1)) {
        if (!J.cell(b.cell).has(kJ0ub)) continue;
        const int partner = l_partner(J, b.cell, side);
        IntVector target = C.cell_coeffs(q, chain, partner);
        if (target.empty() || vanishes(target, ring)) continue;
        const int cover = J.cover_index(partner, b.cell);
        const IntMatrix& A = S.map(cover);
        require(A.rows() == A.cols(), ErrorCode::Internal, "partner map is not square");
        IntVector x = inverse_unimodular(A) * target;
        x = reduce(scale(J.covers()[cover].sign, x), ring);
        C.set_cell_coeffs(q + 1, out, b.cell, x);
    }
    return out;
}

IntVector restrict_chain(const ChainComplex& C, int q, const IntVector& chain, CellFlag flag, const CellPoset& poset) {
    IntVector out = C.zero_chain(q);
    for (const ChainBlock& b : C.blocks(q))
        if (poset.cell(b.cell).has(flag)) C.set_cell_coeffs(q, out, b.cell, C.cell_coeffs(q, chain, b.cell));
    return out;
}

int contraction_vertex(const CellPoset& J, int cell) {
    const Simplex& tau = J.tau(cell);
    require(!tau.empty() && !CentralTriangulation::has_origin(tau), ErrorCode::SupportViolation, "contraction needs 0 outside tau");
    return tau.front();
}

IntMatrix contraction_matrix(const Cosheaf& src_m, const Cosheaf& tgt_m, int cell, int vertex) {
    const CellPoset& src = src_m.poset();
    const CellPoset& tgt = tgt_m.poset();
    require(src_m.kind() == CosheafKind::M && tgt_m.kind() == CosheafKind::M, ErrorCode::InvalidInput,
            "contraction acts between mirror cosheaves");
    const int n = src.n();
    require(tgt_m.degree() == n - src_m.degree(), ErrorCode::DimensionMismatch, "contraction degrees do not add to n");
    require(src.cell(cell).has(kJS), ErrorCode::SupportViolation, "contraction is defined on J^S");
    if (vertex < 0) vertex = contraction_vertex(src, cell);
    const Simplex& tau = src.tau(cell);
    require(std::find(tau.begin(), tau.end(), vertex) != tau.end(), ErrorCode::InvalidInput, "vertex is not in tau");
    const int image = iso_j(src, tgt, cell);
    const PresentedModule& from = src_m.value(cell);
    const PresentedModule& to = tgt_m.value(image);
    require(from.rank() == to.rank(), ErrorCode::Internal, "mirror values have different ranks");
    const Multivector omega = volume_form(n + 1);
    const Multivector v = Multivector::vector(src.tau_side().point(vertex));
    IntMatrix out(to.rank(), from.rank());
    for (int j = 0; j < from.rank(); ++j) {
        Multivector z = Multivector::from_coords(n + 1, src_m.degree(), from.basis_vector(j));
        IntVector coords = to.coords(contract(wedge(v, z), omega).to_coords());
        for (int i = 0; i < to.rank(); ++i) out(i, j) = coords[i];
    }
    return out;
}

std::vector<int> mirror_gauge(const CellPoset& src, const CellPoset& tgt) {
    require(src.size() == tgt.size(), ErrorCode::NotDualPair, "J posets have different sizes");
    std::vector<int> image(src.size());
    for (int x = 0; x < src.size(); ++x) image[x] = iso_j(src, tgt, x);
    std::vector<std::vector<std::pair<int, int>>> adj(src.size());
    for (const Cover& c : src.covers()) {
        int mirrored = tgt.cover_index(image[c.lower], image[c.upper]);
        require(mirrored >= 0, ErrorCode::Internal, "mirror map does not preserve a cover");
        int parity = (c.sign * tgt.covers()[mirrored].sign) < 0 ? 1 : 0;
        adj[c.lower].push_back({c.upper, parity});
        adj[c.upper].push_back({c.lower, parity});
    }
    std::vector<int> value(src.size(), -1);
    for (int root = 0; root < src.size(); ++root) {
        if (value[root] >= 0) continue;
        value[root] = 0;
        std::deque<int> queue{root};
        while (!queue.empty()) {
            int a = queue.front();
            queue.pop_front();
            for (auto [b, parity] : adj[a]) {
                int want = value[a] ^ parity;
                if (value[b] < 0) {
                    value[b] = want;
                    queue.push_back(b);
                } else {
                    require(value[b] == want, ErrorCode::Unsolvable, "signatures are not gauge equivalent under the mirror map");
                }
            }
        }
    }
    std::vector<int> g(src.size());
    for (int x = 0; x < src.size(); ++x) g[x] = value[x] ? -1 : 1;
    return g;
}

int round_trip_sign(int n) { return ((n * (n + 5) / 2) % 2) ? -1 : 1; }

MirrorTransfer::MirrorTransfer(const CellPoset& src, const CellPoset& tgt, int p)
    : src_(&src),
      tgt_(&tgt),
      p_(p),
      src_f_(src, CosheafKind::F, p),
      src_md_(src, CosheafKind::MDelta, p),
      src_m_(src, CosheafKind::M, p),
      tgt_f_(tgt, CosheafKind::F, src.n() - p),
      tgt_m_(tgt, CosheafKind::M, src.n() - p),
      tgt_r_(tgt, CosheafKind::R, src.n() - p) {
    require(src.kind() == PosetKind::J && tgt.kind() == PosetKind::J, ErrorCode::InvalidInput, "transfers act on J posets");
    require(&src.tau_side() == &tgt.sigma_side() && &src.sigma_side() == &tgt.tau_side(), ErrorCode::NotDualPair,
            "target poset must swap the sides of the source");
    src_f_complex_ = src_f_.chain_complex();
    src_md_complex_ = src_md_.chain_complex();
    tgt_f_complex_ = tgt_f_.chain_complex();
    tgt_r_complex_ = tgt_r_.chain_complex();
    gauge_ = mirror_gauge(src, tgt);
}

IntVector MirrorTransfer::to_sphere(int q, const IntVector& cycle, Ring ring) const {
    require_ring(ring);
    const CellPoset& J = *src_;
    require(int(cycle.size()) == src_f_complex_.dim(q), ErrorCode::DimensionMismatch, "cycle has wrong length");
    require(src_f_complex_.is_cycle(q, cycle, ring), ErrorCode::NotAClosedChain, "transfer input is not closed");
    // push to MDelta
    IntVector alpha = reduce(map_chain(src_f_complex_, src_md_complex_, q, cycle,
                                       [&](int c) { return sequence_map(src_f_, src_md_, c); }),
                             ring);
    // cancel the part at infinity and, with it, the whole unbounded part
    IntVector at_infinity = restrict_chain(src_md_complex_, q, alpha, kJinf, J);
    IntVector beta = l_operator(src_md_, src_md_complex_, q, at_infinity, LSide::Infinity, ring);
    IntVector sphere = alpha;
    if (q + 1 <= src_md_complex_.top_degree()) sphere = sub(alpha, src_md_complex_.apply_boundary(q + 1, beta));
    sphere = reduce(sphere, ring);
    for (const ChainBlock& b : src_md_complex_.blocks(q))
        if (!J.cell(b.cell).has(kJS))
            require(vanishes(src_md_complex_.cell_coeffs(q, sphere, b.cell), ring), ErrorCode::Internal,
                    "corrected cycle leaves J^S");
    return sphere;
}

IntVector MirrorTransfer::transfer(int q, const IntVector& cycle, Ring ring) const {
    const IntVector sphere = to_sphere(q, cycle, ring);
    const CellPoset& J = *src_;
    const CellPoset& Jm = *tgt_;
    // contract cellwise into M_{n-p} on the mirror sphere, then lift to F_{n-p}
    IntVector phi = tgt_f_complex_.zero_chain(q);
    for (const ChainBlock& b : src_md_complex_.blocks(q)) {
        if (!J.cell(b.cell).has(kJS)) continue;
        IntVector z = src_md_complex_.cell_coeffs(q, sphere, b.cell);
        if (vanishes(z, ring)) continue;
        const int image = iso_j(J, Jm, b.cell);
        IntVector w = scale(gauge_[b.cell], contraction_matrix(src_m_, tgt_m_, b.cell) * z);
        IntVector lifted = tgt_f_.value(image).coords(tgt_m_.value(image).lift(w));
        tgt_f_complex_.set_cell_coeffs(q, phi, image, reduce(lifted, ring));
    }
    if (q == 0) return phi;
    // the boundary of the lift lies in R; cancel it through the sphere-side L operator
    IntVector r = reduce(tgt_f_complex_.apply_boundary(q, phi), ring);
    IntVector r_chain = tgt_r_complex_.zero_chain(q - 1);
    for (const ChainBlock& b : tgt_f_complex_.blocks(q - 1)) {
        IntVector coeffs = tgt_f_complex_.cell_coeffs(q - 1, r, b.cell);
        if (vanishes(coeffs, ring)) continue;
        require(tgt_r_complex_.block(q - 1, b.cell) != nullptr, ErrorCode::Internal, "lift boundary escapes R");
        tgt_r_complex_.set_cell_coeffs(q - 1, r_chain, b.cell,
                                       solve_cellwise(sequence_map(tgt_r_, tgt_f_, b.cell), coeffs, ring, "lift boundary"));
    }
    IntVector rho = l_operator(tgt_r_, tgt_r_complex_, q - 1, restrict_chain(tgt_r_complex_, q - 1, r_chain, kJS, Jm),
                               LSide::Sphere, ring);
    IntVector correction = map_chain(tgt_r_complex_, tgt_f_complex_, q, rho,
                                     [&](int c) { return sequence_map(tgt_r_, tgt_f_, c); });
    IntVector out = reduce(sub(phi, correction), ring);
    require(tgt_f_complex_.is_cycle(q, out, ring), ErrorCode::Internal, "transferred chain is not closed");
    return out;
}

Subdivision::Subdivision(const CellPoset& P, const CellPoset& J) : P_(&P), J_(&J), pieces_(P.size()) {
    require(P.kind() == PosetKind::P && J.kind() == PosetKind::J, ErrorCode::InvalidInput, "subdivision maps P to J");
    require(&P.tau_side() == &J.tau_side() && &P.sigma_side() == &J.sigma_side(), ErrorCode::InvalidInput,
            "subdivision needs posets on the same sides");
    // owner P cell of every top-dimensional J piece
    std::vector<int> owner(J.size(), -1);
    for (int a = 0; a < J.size(); ++a) {
        const Simplex& tau = J.tau(a);
        if (!CentralTriangulation::has_origin(tau) && tau.size() != 1) continue;
        const int x = refine_to_p(J, P, a);
        if (!P.cell(x).has(kP1)) continue;
        owner[a] = x;
    }
    ParityForest forest(J.size());
    for (int x = 0; x < P.size(); ++x) {
        if (!P.cell(x).has(kP1)) continue;
        std::vector<int> mine;
        for (int a = 0; a < J.size(); ++a)
            if (owner[a] == x) mine.push_back(a);
        // coefficient of each J cell b in the boundary of the pieces of x
        std::map<int, std::vector<std::pair<int, int>>> hits;  // b -> (a, sign)
        for (int a : mine)
            for (int cv : J.down(a)) hits[J.covers()[cv].lower].push_back({a, J.covers()[cv].sign});
        for (const auto& [b, terms] : hits) {
            const int y = owner[b];
            bool ok = true;
            if (y >= 0 && y != x) {
                const int pc = P.cover_index(y, x);
                require(pc >= 0 && terms.size() == 1, ErrorCode::Internal, "subdivision piece below a non-cover");
                ok = forest.relate(terms[0].first, b, terms[0].second * P.covers()[pc].sign < 0 ? 1 : 0);
            } else {
                require(terms.size() == 2, ErrorCode::Internal, "interior subdivision cell is not shared by two pieces");
                ok = forest.relate(terms[0].first, terms[1].first, terms[0].second * terms[1].second > 0 ? 1 : 0);
            }
            require(ok, ErrorCode::Unsolvable, "no consistent orientation of the subdivision");
        }
        for (int a : mine) pieces_[x].push_back({a, 0});
    }
    for (auto& list : pieces_)
        for (auto& [a, sign] : list) sign = forest.find(a).second ? -1 : 1;
}

IntVector Subdivision::apply(const Cosheaf& fp, const ChainComplex& cp, const Cosheaf& fj, const ChainComplex& cj, int q,
                             const IntVector& chain) const {
    require(&fp.poset() == P_ && &fj.poset() == J_, ErrorCode::InvalidInput, "cosheaves live on other posets");
    require(fp.kind() == CosheafKind::F && fj.kind() == CosheafKind::F && fp.degree() == fj.degree(), ErrorCode::InvalidInput,
            "subdivision acts on matching multitangent cosheaves");
    IntVector out = cj.zero_chain(q);
    for (const ChainBlock& b : cp.blocks(q)) {
        IntVector coeffs = cp.cell_coeffs(q, chain, b.cell);
        if (is_zero(coeffs)) continue;
        for (auto [a, sign] : pieces_[b.cell]) {
            require(fj.value(a).sub_basis() == fp.value(b.cell).sub_basis(), ErrorCode::Internal, "refined value differs");
            IntVector cur = cj.cell_coeffs(q, out, a);
            cj.set_cell_coeffs(q, out, a, add(cur, scale(sign, coeffs)));
        }
    }
    return out;
}

DivisorF2 DivisorF2::zero(const CentralTriangulation& T) { return {std::vector<std::uint8_t>(T.points().size(), 0)}; }

DivisorF2 DivisorF2::from_rays(const CentralTriangulation& T, const std::vector<IntVector>& rays) {
    DivisorF2 D = zero(T);
    for (const IntVector& r : rays) {
        int idx = T.point_index(r);
        require(idx > 0, ErrorCode::RayNotInFan, format_vector(r) + " is not a ray of the fan");
        D.on_point[idx] ^= 1;
    }
    return D;
}

std::vector<int> DivisorF2::support() const {
    std::vector<int> s;
    for (std::size_t i = 1; i < on_point.size(); ++i)
        if (on_point[i]) s.push_back(int(i));
    return s;
}

IntVector divisor_restriction(const CellPoset& P, const ChainComplex& f_top, const DivisorF2& D) {
    const CentralTriangulation& T = P.tau_side();
    const CentralTriangulation& Tdual = P.sigma_side();
    require(P.kind() == PosetKind::P, ErrorCode::InvalidInput, "divisor restriction lives on a P poset");
    require(D.on_point.size() == T.points().size() && D.on_point[0] == 0, ErrorCode::InvalidInput,
            "divisor does not match the triangulation");
    const int q = P.n() - 1;
    IntVector chain = f_top.zero_chain(q);
    for (int r : D.support()) {
        const int tau = T.simplex_index(Simplex{0, r});
        require(tau >= 0, ErrorCode::RayNotInFan, "ray segment missing from the triangulation");
        for (std::size_t s = 0; s < Tdual.simplices().size(); ++s) {
            const Simplex& delta = Tdual.simplices()[s];
            if (delta.size() != 2 || CentralTriangulation::has_origin(delta)) continue;
            const int cell = P.find(tau, int(s));
            if (cell < 0) continue;
            const ChainBlock* b = f_top.block(q, cell);
            require(b && b->rank == 1, ErrorCode::Internal, "restriction cell does not carry a rank-one value");
            chain[b->offset] ^= 1;
        }
    }
    require(f_top.is_cycle(q, chain, Ring::F2), ErrorCode::Internal, "divisor restriction is not closed");
    return chain;
}

bool is_null_class(const ChainComplex& C, int q, const IntVector& cycle, Ring ring) {
    require(C.is_cycle(q, cycle, ring), ErrorCode::NotAClosedChain, "class representative is not closed");
    return C.solve_boundary(q, ring == Ring::F2 ? mod2(cycle) : cycle, ring).has_value();
}

}  // namespace tropmirror
