#include "tropmirror/patchwork.hpp"

#include <bit>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

#include "tropmirror/exterior.hpp"

namespace tropmirror {

namespace {

int parity(std::uint32_t x) { return std::popcount(x) & 1; }

std::uint32_t mask_of(const IntVector& v) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] % 2 != 0) m |= 1u << i;
    return m;
}

IntVector vector_of(std::uint32_t mask, int m) {
    IntVector v(m, 0);
    for (int i = 0; i < m; ++i) v[i] = (mask >> i) & 1u;
    return v;
}

// Image of a bit vector under a matrix taken mod 2.
std::uint32_t apply_mod2(const IntMatrix& A, std::uint32_t x) {
    std::uint32_t out = 0;
    for (int i = 0; i < A.rows(); ++i) {
        Int acc = 0;
        for (int j = 0; j < A.cols(); ++j)
            if ((x >> j) & 1u) acc += A(i, j);
        if (acc % 2 != 0) out |= 1u << i;
    }
    return out;
}

IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix out(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        for (int j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
}

IntMatrix vconcat(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix out(a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) out(a.rows() + i, j) = b(i, j);
    return out;
}

int f2rank(const IntMatrix& A) { return A.rows() == 0 || A.cols() == 0 ? 0 : rank_over(A, Ring::F2); }

// Rays x (n+1) coordinate matrix mod 2: the image of N ⊗ F2 in the toric divisors.
std::vector<std::uint64_t> principal_echelon(const CentralTriangulation& T) {
    const int rays = T.ray_count();
    require(rays <= 63, ErrorCode::InvalidInput, "too many rays for divisor bit patterns");
    std::vector<std::uint64_t> rows;
    for (int j = 0; j < T.rank(); ++j) {
        std::uint64_t v = 0;
        for (int r = 1; r <= rays; ++r)
            if (T.point(r)[j] % 2 != 0) v |= std::uint64_t(1) << (r - 1);
        rows.push_back(v);
    }
    // fully reduced echelon form keyed by the highest set bit
    std::vector<std::uint64_t> basis;
    for (std::uint64_t v : rows) {
        for (std::uint64_t b : basis)
            if (v & (std::uint64_t(1) << (63 - std::countl_zero(b)))) v ^= b;
        if (!v) continue;
        const std::uint64_t lead = std::uint64_t(1) << (63 - std::countl_zero(v));
        for (std::uint64_t& b : basis)
            if (b & lead) b ^= v;
        basis.push_back(v);
    }
    std::sort(basis.begin(), basis.end(), std::greater<>());
    return basis;
}

std::uint64_t reduce_bits(const std::vector<std::uint64_t>& basis, std::uint64_t v) {
    for (std::uint64_t b : basis)
        if (v & (std::uint64_t(1) << (63 - std::countl_zero(b)))) v ^= b;
    return v;
}

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int a) {
        while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
        return a;
    }
    void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
    std::vector<int> parent_;
};

}  // namespace

SignDistribution signs_from_divisor(const CentralTriangulation& T, const DivisorF2& D) {
    require(D.on_point.size() == T.points().size(), ErrorCode::InvalidInput, "divisor does not match the triangulation");
    SignDistribution s;
    s.sign.assign(T.points().size(), 0);
    s.sign[0] = 1;
    for (std::size_t i = 1; i < s.sign.size(); ++i) s.sign[i] = D.on_point[i] & 1u;
    return s;
}

DivisorF2 divisor_from_signs(const CentralTriangulation& T, const SignDistribution& signs) {
    require(signs.sign.size() == T.points().size(), ErrorCode::InvalidInput, "signs must cover every lattice point");
    DivisorF2 D = DivisorF2::zero(T);
    for (std::size_t i = 1; i < signs.sign.size(); ++i) D.on_point[i] = signs.sign[i] == signs.sign[0];
    return D;
}

RealPhaseStructure phase_from_signs(const CentralTriangulation& T, const SignDistribution& signs) {
    require(signs.sign.size() == T.points().size(), ErrorCode::InvalidInput, "signs must cover every lattice point");
    RealPhaseStructure phase;
    for (const Simplex& s : T.simplices())
        if (s.size() == 2) phase.on_edge[s] = signs.sign[s[0]] == signs.sign[s[1]];
    return phase;
}

void validate_phase(const CentralTriangulation& T, const RealPhaseStructure& phase) {
    for (const Simplex& s : T.simplices()) {
        if (s.size() == 2)
            require(phase.on_edge.count(s) && phase.on_edge.at(s) <= 1, ErrorCode::InvalidPhaseStructure,
                    "phase structure misses an edge");
        if (s.size() != 3) continue;
        int zeros = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) zeros += phase.on_edge.at(Simplex{s[a], s[b]}) == 0;
        require(zeros == 0 || zeros == 2, ErrorCode::InvalidPhaseStructure, "a triangle has an odd number of sign changes");
    }
    require(phase.on_edge.size() == std::size_t(std::count_if(T.simplices().begin(), T.simplices().end(),
                                                              [](const Simplex& s) { return s.size() == 2; })),
            ErrorCode::InvalidPhaseStructure, "phase structure names a non-edge");
}

SignDistribution signs_from_phase(const CentralTriangulation& T, const RealPhaseStructure& phase, std::uint8_t origin_sign) {
    validate_phase(T, phase);
    const int count = int(T.points().size());
    std::vector<std::vector<std::pair<int, int>>> adj(count);
    for (const auto& [edge, value] : phase.on_edge) {
        adj[edge[0]].push_back({edge[1], value});
        adj[edge[1]].push_back({edge[0], value});
    }
    std::vector<int> sign(count, -1);
    sign[0] = origin_sign & 1u;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int a = queue.front();
        queue.pop_front();
        for (auto [b, value] : adj[a]) {
            int want = value ? sign[a] : 1 - sign[a];
            if (sign[b] < 0) {
                sign[b] = want;
                queue.push_back(b);
            }
            require(sign[b] == want, ErrorCode::InvalidPhaseStructure, "phase structure is not induced by signs");
        }
    }
    SignDistribution out;
    for (int s : sign) {
        require(s >= 0, ErrorCode::InvalidPhaseStructure, "phase structure leaves a point unreached");
        out.sign.push_back(std::uint8_t(s));
    }
    return out;
}

std::uint64_t divisor_bits(const DivisorF2& D) {
    std::uint64_t bits = 0;
    for (std::size_t i = 1; i < D.on_point.size(); ++i)
        if (D.on_point[i]) bits |= std::uint64_t(1) << (i - 1);
    return bits;
}

DivisorF2 divisor_from_bits(const CentralTriangulation& T, std::uint64_t bits) {
    DivisorF2 D = DivisorF2::zero(T);
    for (int r = 1; r <= T.ray_count(); ++r) D.on_point[r] = (bits >> (r - 1)) & 1u;
    return D;
}

bool divisors_equivalent(const CentralTriangulation& T, const DivisorF2& a, const DivisorF2& b) {
    return reduce_bits(principal_echelon(T), divisor_bits(a) ^ divisor_bits(b)) == 0;
}

DivisorF2 canonical_divisor(const CentralTriangulation& T, const DivisorF2& D) {
    return divisor_from_bits(T, reduce_bits(principal_echelon(T), divisor_bits(D)));
}

int divisor_class_dimension(const CentralTriangulation& T) { return T.ray_count() - int(principal_echelon(T).size()); }

std::vector<DivisorF2> divisor_classes(const CentralTriangulation& T) {
    const std::vector<std::uint64_t> basis = principal_echelon(T);
    std::uint64_t pivots = 0;
    for (std::uint64_t b : basis) pivots |= std::uint64_t(1) << (63 - std::countl_zero(b));
    std::vector<int> free_bits;
    for (int r = 0; r < T.ray_count(); ++r)
        if (!((pivots >> r) & 1u)) free_bits.push_back(r);
    require(free_bits.size() <= 20, ErrorCode::InvalidInput, "too many divisor classes to enumerate");
    std::vector<DivisorF2> out;
    for (std::uint64_t k = 0; k < (std::uint64_t(1) << free_bits.size()); ++k) {
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < free_bits.size(); ++i)
            if ((k >> i) & 1u) bits |= std::uint64_t(1) << free_bits[i];
        out.push_back(divisor_from_bits(T, bits));
    }
    return out;
}

SignCosheaf::SignCosheaf(const CellPoset& P, const RealPhaseStructure& phase, Multitangents multitangent)
    : poset_(&P), phase_(phase), multitangent_(std::move(multitangent)) {
    require(P.kind() == PosetKind::P, ErrorCode::InvalidInput, "sign cosheaves live on P posets");
    validate_phase(P.sigma_side(), phase_);
    require(P.n() + 1 <= 5, ErrorCode::RankUnsupported, "real points are enumerated for rank at most 5");
    if (!multitangent_) {
        auto fresh = std::make_shared<std::vector<Cosheaf>>();
        for (int p = 0; p <= P.n(); ++p) fresh->emplace_back(P, CosheafKind::F, p);
        multitangent_ = fresh;
    }
    require(int(multitangent_->size()) == P.n() + 1, ErrorCode::InvalidInput, "multitangent cosheaves missing");
    for (const Cosheaf& F : *multitangent_)
        require(&F.poset() == poset_ && F.kind() == CosheafKind::F, ErrorCode::InvalidInput, "multitangent on another poset");
    build_points();
    build_maps();
    build_filtration();
}

void SignCosheaf::build_points() {
    const CellPoset& P = *poset_;
    points_.assign(P.size(), {});
    point_index_.assign(P.size(), {});
    for (int x = 0; x < P.size(); ++x) {
        const Simplex& sigma = P.sigma(x);
        if (sigma.size() < 2) continue;
        const Stratum& st = multitangent(0).stratum(x);
        const int m = st.rank;
        std::vector<std::pair<std::uint32_t, int>> hyperplanes;
        for (std::size_t a = 0; a < sigma.size(); ++a)
            for (std::size_t b = a + 1; b < sigma.size(); ++b) {
                IntVector functional = st.section.transpose() * edge_direction(P.sigma_side(), sigma[a], sigma[b]);
                hyperplanes.push_back({mask_of(functional), phase_.on_edge.at(Simplex{sigma[a], sigma[b]})});
            }
        for (std::uint32_t s = 0; s < (1u << m); ++s)
            for (auto [c, e] : hyperplanes)
                if (parity(s & c) == e) {
                    point_index_[x][s] = int(points_[x].size());
                    points_[x].push_back(s);
                    break;
                }
    }
}

void SignCosheaf::build_maps() {
    const CellPoset& P = *poset_;
    map_.assign(P.covers().size(), IntMatrix());
    for (std::size_t k = 0; k < P.covers().size(); ++k) {
        const Cover& cv = P.covers()[k];
        IntMatrix& A = map_[k];
        A = IntMatrix(size(cv.lower), size(cv.upper));
        if (size(cv.upper) == 0) continue;
        const IntMatrix pi = multitangent(0).stratum(cv.lower).projection * multitangent(0).stratum(cv.upper).section;
        for (int j = 0; j < size(cv.upper); ++j) {
            const std::uint32_t image = apply_mod2(pi, points_[cv.upper][j]);
            auto it = point_index_[cv.lower].find(image);
            require(it != point_index_[cv.lower].end(), ErrorCode::Internal, "real point leaves its face");
            A(it->second, j) = 1;
        }
    }
}

void SignCosheaf::build_filtration() {
    const CellPoset& P = *poset_;
    const int n = P.n();
    generators_.assign(P.size(), std::vector<IntMatrix>(n + 2));
    images_.assign(P.size(), std::vector<IntMatrix>(n + 2));
    for (int x = 0; x < P.size(); ++x) {
        const int count = size(x);
        for (int p = 0; p <= n + 1; ++p) {
            const int fr = p <= n ? multitangent(p).rank(x) : 0;
            generators_[x][p] = IntMatrix(count, 0);
            images_[x][p] = IntMatrix(fr, 0);
        }
        if (count == 0) continue;
        const Simplex& sigma = P.sigma(x);
        const Stratum& st = multitangent(0).stratum(x);
        const int m = st.rank;
        for (std::size_t a = 0; a < sigma.size(); ++a)
            for (std::size_t b = a + 1; b < sigma.size(); ++b) {
                const IntVector functional = st.section.transpose() * edge_direction(P.sigma_side(), sigma[a], sigma[b]);
                const std::uint32_t c = mask_of(functional);
                const int e = phase_.on_edge.at(Simplex{sigma[a], sigma[b]});
                // integral basis of the edge's perpendicular lattice, to lift F2 directions
                IntMatrix perp_rows = integral_kernel(IntMatrix::from_rows({functional}, m));
                const IntMatrix perp = perp_rows.transpose();  // m x (m-1)
                std::vector<std::uint32_t> directions;
                for (std::uint32_t u = 1; u < (1u << m); ++u)
                    if (parity(u & c) == 0) directions.push_back(u);
                for (int p = 0; p <= std::min(n, m - 1); ++p) {
                    // each p-dimensional linear subspace once, with a spanning tuple
                    std::map<std::uint64_t, std::vector<std::uint32_t>> subspaces;
                    std::function<void(int, int, std::vector<std::uint32_t>&, std::uint64_t)> walk =
                        [&](int from, int depth, std::vector<std::uint32_t>& chosen, std::uint64_t span) {
                            if (depth == p) {
                                subspaces.emplace(span, chosen);
                                return;
                            }
                            for (int i = from; i < int(directions.size()); ++i) {
                                const std::uint32_t u = directions[i];
                                if ((span >> u) & 1u) continue;
                                std::uint64_t grown = span;
                                for (std::uint32_t s = 0; s < (1u << m); ++s)
                                    if ((span >> s) & 1u) grown |= std::uint64_t(1) << (s ^ u);
                                chosen.push_back(u);
                                walk(i + 1, depth + 1, chosen, grown);
                                chosen.pop_back();
                            }
                        };
                    std::vector<std::uint32_t> chosen;
                    walk(0, 0, chosen, 1u);
                    for (const auto& [span, basis] : subspaces) {
                        std::vector<IntVector> lifts;
                        for (std::uint32_t u : basis) {
                            std::optional<IntVector> coeffs = solve_f2(perp, vector_of(u, m));
                            require(coeffs.has_value(), ErrorCode::Internal, "direction outside the edge perpendicular");
                            lifts.push_back(perp * *coeffs);
                        }
                        IntVector image = mod2(multitangent(p).value(x).coords(wedge_coords(lifts, m)));
                        std::set<std::uint32_t> seen;
                        for (std::uint32_t s0 = 0; s0 < (1u << m); ++s0) {
                            if (parity(s0 & c) != e) continue;
                            std::uint32_t rep = s0;
                            for (std::uint32_t s = 0; s < (1u << m); ++s)
                                if ((span >> s) & 1u) rep = std::min(rep, s0 ^ s);
                            if (!seen.insert(rep).second) continue;
                            IntVector indicator(count, 0);
                            for (std::uint32_t s = 0; s < (1u << m); ++s)
                                if ((span >> s) & 1u) indicator[point_index_[x].at(s0 ^ s)] = 1;
                            IntMatrix& G = generators_[x][p];
                            IntMatrix& F = images_[x][p];
                            IntMatrix g2(G.rows(), G.cols() + 1), f2(F.rows(), F.cols() + 1);
                            for (int i = 0; i < G.rows(); ++i) {
                                for (int j = 0; j < G.cols(); ++j) g2(i, j) = G(i, j);
                                g2(i, G.cols()) = indicator[i];
                            }
                            for (int i = 0; i < F.rows(); ++i) {
                                for (int j = 0; j < F.cols(); ++j) f2(i, j) = F(i, j);
                                f2(i, F.cols()) = image[i];
                            }
                            G = std::move(g2);
                            F = std::move(f2);
                        }
                    }
                }
            }
    }
}

int SignCosheaf::filtration_rank(int cell, int p) const {
    if (p > n()) return 0;
    return f2rank(generators_[cell][p]);
}

std::optional<IntVector> SignCosheaf::to_graded(int cell, int p, const IntVector& k) const {
    const IntMatrix& G = generators_[cell][p];
    const IntMatrix& F = images_[cell][p];
    if (is_zero(mod2(k))) return IntVector(F.rows(), 0);
    if (G.cols() == 0) return std::nullopt;
    std::optional<IntVector> c = solve_f2(G, mod2(k));
    if (!c) return std::nullopt;
    return mod2(F * *c);
}

IntVector SignCosheaf::from_graded(int cell, int p, const IntVector& f) const {
    const IntMatrix& G = generators_[cell][p];
    const IntMatrix& F = images_[cell][p];
    if (is_zero(mod2(f))) return IntVector(G.rows(), 0);
    std::optional<IntVector> c = F.cols() == 0 ? std::nullopt : solve_f2(F, mod2(f));
    require(c.has_value(), ErrorCode::Internal, "graded class has no lift to the filtration");
    return mod2(G * *c);
}

ChainComplex SignCosheaf::chain_complex() const {
    const CellPoset& P = *poset_;
    ChainComplex C(P.max_dim());
    for (int x = 0; x < P.size(); ++x)
        if (size(x) > 0) C.add_block(P.cell(x).dim, x, size(x));
    C.finalize_blocks();
    for (std::size_t k = 0; k < P.covers().size(); ++k) {
        const Cover& cv = P.covers()[k];
        const int q = P.cell(cv.upper).dim;
        const ChainBlock* bx = C.block(q, cv.upper);
        const ChainBlock* by = C.block(q - 1, cv.lower);
        if (!bx || !by) continue;
        const IntMatrix& A = map_[k];
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < A.cols(); ++j)
                if (A(i, j)) C.boundary_mut(q).add(by->offset + i, bx->offset + j, cv.sign);
    }
    C.verify(Ring::F2);
    return C;
}

int count_components(const SignCosheaf& S) {
    const CellPoset& P = S.poset();
    const int n = P.n();
    std::vector<int> offset(P.size() + 1, 0);
    for (int x = 0; x < P.size(); ++x) {
        const int d = P.cell(x).dim;
        offset[x + 1] = offset[x] + ((d == n || d == n - 1) ? S.size(x) : 0);
    }
    UnionFind uf(offset.back());
    for (std::size_t k = 0; k < P.covers().size(); ++k) {
        const Cover& cv = P.covers()[k];
        if (P.cell(cv.upper).dim != n || S.size(cv.upper) == 0) continue;
        const IntMatrix& A = S.map(int(k));
        for (int j = 0; j < A.cols(); ++j)
            for (int i = 0; i < A.rows(); ++i)
                if (A(i, j)) uf.unite(offset[cv.upper] + j, offset[cv.lower] + i);
    }
    std::set<int> roots;
    for (int x = 0; x < P.size(); ++x)
        if (P.cell(x).dim == n)
            for (int j = 0; j < S.size(x); ++j) roots.insert(uf.find(offset[x] + j));
    return int(roots.size());
}

RealBetti real_betti(const SignCosheaf& S) {
    RealBetti out;
    out.betti = homology(S.chain_complex(), Ring::F2).ranks;
    out.b0_union_find = count_components(S);
    return out;
}

FiltrationReport check_filtration(const SignCosheaf& S) {
    FiltrationReport rep;
    const CellPoset& P = S.poset();
    const int n = P.n();
    auto fail = [&](int cell, int p, const std::string& what) {
        rep.failures.push_back("cell " + std::to_string(cell) + " p=" + std::to_string(p) + ": " + what);
    };
    for (int x = 0; x < P.size(); ++x) {
        if (S.size(x) == 0) continue;
        ++rep.cells_checked;
        if (S.filtration_rank(x, 0) != S.size(x)) fail(x, 0, "K_0 is not the whole value");
        if (f2rank(S.filtration_generators(x, n + 1)) != 0) fail(x, n + 1, "K_{n+1} is not zero");
        for (int p = 0; p <= n; ++p) {
            const IntMatrix& G = S.filtration_generators(x, p);
            const IntMatrix& Gn = S.filtration_generators(x, p + 1);
            const IntMatrix& F = S.graded_images(x, p);
            const int r = S.multitangent(p).rank(x);
            const IntMatrix both = hconcat(G, Gn);
            if (f2rank(both) != f2rank(G)) fail(x, p, "K_{p+1} is not inside K_p");
            if (f2rank(G) - f2rank(Gn) != r) fail(x, p, "graded rank differs from F_p");
            if (f2rank(F) != r) fail(x, p, "graded map is not onto F_p");
            const IntMatrix stacked = vconcat(both, hconcat(F, IntMatrix(F.rows(), Gn.cols())));
            if (f2rank(stacked) != f2rank(both)) fail(x, p, "graded map is not well defined");
        }
    }
    for (std::size_t k = 0; k < P.covers().size(); ++k) {
        const Cover& cv = P.covers()[k];
        if (S.size(cv.upper) == 0) continue;
        const IntMatrix& A = S.map(int(k));
        for (int p = 0; p <= n; ++p) {
            const IntMatrix& G = S.filtration_generators(cv.upper, p);
            const IntMatrix& F = S.graded_images(cv.upper, p);
            const IntMatrix& Fmap = S.multitangent(p).map(int(k));
            for (int j = 0; j < G.cols(); ++j) {
                IntVector image = mod2(A * G.col(j));
                std::optional<IntVector> graded = S.to_graded(cv.lower, p, image);
                if (!graded) {
                    fail(cv.lower, p, "cover map leaves K_p");
                    break;
                }
                IntVector expected = Fmap.rows() == 0 ? IntVector() : mod2(Fmap * F.col(j));
                if (*graded != expected) {
                    fail(cv.lower, p, "graded identification is not natural");
                    break;
                }
            }
        }
    }
    return rep;
}

IntVector fundamental_chain(const CellPoset& P, const ChainComplex& f0) {
    const int q = P.n();
    IntVector out = f0.zero_chain(q);
    for (const ChainBlock& b : f0.blocks(q))
        if (P.cell(b.cell).has(kSphere))
            for (int k = 0; k < b.rank; ++k) out[b.offset + k] = 1;
    return out;
}

IntVector delta1(const SignCosheaf& S, const ChainComplex& fp, const ChainComplex& fp1, int p, int q, const IntVector& cycle) {
    require(q >= 1 && p + 1 <= S.n(), ErrorCode::InvalidInput, "first differential needs q >= 1 and p < n");
    require(fp.is_cycle(q, cycle, Ring::F2), ErrorCode::NotAClosedChain, "first differential input is not closed");
    const ChainComplex C = S.chain_complex();
    IntVector lifted = C.zero_chain(q);
    for (const ChainBlock& b : fp.blocks(q)) {
        IntVector f = mod2(fp.cell_coeffs(q, cycle, b.cell));
        if (is_zero(f)) continue;
        C.set_cell_coeffs(q, lifted, b.cell, S.from_graded(b.cell, p, f));
    }
    const IntVector boundary = mod2(C.apply_boundary(q, lifted));
    IntVector out = fp1.zero_chain(q - 1);
    for (const ChainBlock& b : C.blocks(q - 1)) {
        IntVector k = C.cell_coeffs(q - 1, boundary, b.cell);
        if (is_zero(k)) continue;
        std::optional<IntVector> low = S.to_graded(b.cell, p, k);
        require(low.has_value() && is_zero(*low), ErrorCode::Internal, "boundary of the lift leaves K_{p+1}");
        std::optional<IntVector> graded = S.to_graded(b.cell, p + 1, k);
        require(graded.has_value(), ErrorCode::Internal, "boundary of the lift leaves K_{p+1}");
        if (is_zero(*graded)) continue;
        require(fp1.block(q - 1, b.cell) != nullptr, ErrorCode::Internal, "graded class on a cell without F_{p+1}");
        fp1.set_cell_coeffs(q - 1, out, b.cell, *graded);
    }
    require(fp1.is_cycle(q - 1, out, Ring::F2), ErrorCode::Internal, "first differential output is not closed");
    return out;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Connected: return "Connected";
        case Verdict::TwoComponents: return "TwoComponents";
        case Verdict::HypothesisFails: return "HypothesisFails";
    }
    return "?";
}

struct PatchworkContext::MirrorMachinery {
    CellPoset source;  // J(T°,T)
    CellPoset target;  // J(T,T°)
    Subdivision to_source;
    Subdivision to_target;
    Cosheaf restriction_f;  // F_{n-1} on P(T,T°)
    MirrorTransfer transfer;

    MirrorMachinery(const DualPair& pair, const CellPoset& patch, const CellPoset& mirror)
        : source(CellPoset::build_J(pair.dual, pair.primal)),
          target(CellPoset::build_J(pair.primal, pair.dual)),
          to_source(patch, source),
          to_target(mirror, target),
          restriction_f(mirror, CosheafKind::F, pair.n() - 1),
          transfer(source, target, 1) {}
};

PatchworkContext::PatchworkContext(const DualPair& pair)
    : pair_(pair), patch_(CellPoset::build_P(pair.dual, pair.primal)), mirror_(CellPoset::build_P(pair.primal, pair.dual)) {
    require(pair.n() >= 1, ErrorCode::RankUnsupported, "patchworking needs n >= 1");
    auto cosheaves = std::make_shared<std::vector<Cosheaf>>();
    for (int p = 0; p <= n(); ++p) {
        cosheaves->emplace_back(patch_, CosheafKind::F, p);
        patch_f_.push_back(cosheaves->back().chain_complex());
    }
    multitangent_ = cosheaves;
    mirror_top_ = Cosheaf(mirror_, CosheafKind::F, n() - 1).chain_complex();
    for (int k = 1; k < n(); ++k) hypothesis_[k] = homology(patch_f_[k], Ring::F2).ranks[n()];
}

bool PatchworkContext::hypothesis_holds() const {
    for (const auto& [k, dim] : hypothesis_)
        if (dim != 0) return false;
    return true;
}

SignCosheaf PatchworkContext::sign_cosheaf(const DivisorF2& D) const {
    const CentralTriangulation& T = *pair_.primal;
    return SignCosheaf(patch_, phase_from_signs(T, signs_from_divisor(T, D)), multitangent_);
}

SignCosheaf PatchworkContext::sign_cosheaf(const SignDistribution& signs) const {
    return SignCosheaf(patch_, phase_from_signs(*pair_.primal, signs), multitangent_);
}

IntVector PatchworkContext::restriction(const DivisorF2& D) const { return divisor_restriction(mirror_, mirror_top_, D); }

bool PatchworkContext::restriction_nonzero(const DivisorF2& D) const {
    return !is_null_class(mirror_top_, n() - 1, restriction(D), Ring::F2);
}

ConnectednessReport PatchworkContext::verdict(const DivisorF2& D) const {
    ConnectednessReport rep;
    rep.class_nonzero = restriction_nonzero(D);
    for (const auto& [k, dim] : hypothesis_)
        if (dim != 0) {
            rep.verdict = Verdict::HypothesisFails;
            rep.failing_k = k;
            rep.failing_dim = dim;
            return rep;
        }
    rep.verdict = rep.class_nonzero ? Verdict::Connected : Verdict::TwoComponents;
    return rep;
}

IntVector PatchworkContext::delta1_of_fundamental(const SignCosheaf& S) const {
    require(&S.poset() == &patch_, ErrorCode::InvalidInput, "sign cosheaf belongs to another context");
    return delta1(S, patch_f_[0], patch_f_[1], 0, n(), fundamental_chain(patch_, patch_f_[0]));
}

void PatchworkContext::ensure_mirror_machinery() const {
    std::lock_guard<std::mutex> lock(*machinery_mutex_);
    if (!machinery_) machinery_ = std::make_shared<const MirrorMachinery>(pair_, patch_, mirror_);
}

bool PatchworkContext::delta1_is_mirror_of_restriction(const DivisorF2& D) const {
    ensure_mirror_machinery();
    const MirrorMachinery& mm = *machinery_;
    const int q = n() - 1;
    const IntVector d1 = delta1_of_fundamental(sign_cosheaf(D));
    const MirrorTransfer& t = mm.transfer;
    const IntVector refined = mod2(mm.to_source.apply((*multitangent_)[1], patch_f_[1], t.source_f(), t.source_complex(), q, d1));
    const IntVector transferred = t.transfer(q, refined, Ring::F2);
    const IntVector restricted =
        mod2(mm.to_target.apply(mm.restriction_f, mirror_top_, t.target_f(), t.target_complex(), q, restriction(D)));
    return is_null_class(t.target_complex(), q, mod2(add(transferred, restricted)), Ring::F2);
}

}  // namespace tropmirror
