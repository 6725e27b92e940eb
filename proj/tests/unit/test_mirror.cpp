#include <random>

#include "doctest.h"
#include "support/corpus.hpp"
#include "tropmirror/mirror.hpp"

using namespace tropmirror;

namespace {

struct MirrorPosets {
    CellPoset a, b;  // J(T°,T) and J(T,T°)
    explicit MirrorPosets(const DualPair& d) : a(CellPoset::build_J(d.dual, d.primal)), b(CellPoset::build_J(d.primal, d.dual)) {}
};

IntMatrix signed_identity(int n, int sign) {
    IntMatrix m = IntMatrix::identity(n);
    for (int i = 0; i < n; ++i) m(i, i) = sign;
    return m;
}

// F2 rank of the degree-q boundaries together with extra chains.
int f2_rank_with(const ChainComplex& C, int q, const std::vector<IntVector>& extra) {
    IntMatrix rows(0, C.dim(q));
    if (q + 1 <= C.top_degree()) {
        IntMatrix bd = C.boundary(q + 1).to_dense().transpose();
        for (int i = 0; i < bd.rows(); ++i) rows.append_row(bd.row(i));
    }
    for (const IntVector& v : extra) rows.append_row(v);
    return rank_over(rows, Ring::F2);
}

IntVector random_side_chain(const ChainComplex& C, const CellPoset& J, int q, CellFlag flag, std::mt19937& rng) {
    std::uniform_int_distribution<int> coeff(-2, 2);
    IntVector out = C.zero_chain(q);
    for (const ChainBlock& b : C.blocks(q))
        if (J.cell(b.cell).has(flag))
            for (int k = 0; k < b.rank; ++k) out[b.offset + k] = coeff(rng);
    return out;
}

}  // namespace

TEST_CASE("L operators invert the projected boundary") {
    MirrorPosets m(corpus::cubic_pair());
    const CellPoset& J = m.a;
    std::mt19937 rng(2024);
    for (int p = 0; p <= J.n(); ++p)
        for (CosheafKind kind : {CosheafKind::Q, CosheafKind::MDelta}) {
            Cosheaf S(J, kind, p);
            ChainComplex C = S.chain_complex();
            for (int q = 0; q < C.top_degree(); ++q) {
                CHECK(is_zero(l_operator(S, C, q, C.zero_chain(q), LSide::Infinity, Ring::Z)));
                for (int trial = 0; trial < 20; ++trial) {
                    IntVector gamma = random_side_chain(C, J, q, kJinf, rng);
                    IntVector lifted = l_operator(S, C, q, gamma, LSide::Infinity, Ring::Z);
                    for (const ChainBlock& b : C.blocks(q + 1))
                        if (!J.cell(b.cell).has(kJ0ub)) CHECK(is_zero(C.cell_coeffs(q + 1, lifted, b.cell)));
                    CHECK(restrict_chain(C, q, C.apply_boundary(q + 1, lifted), kJinf, J) == gamma);
                }
            }
            // chains off the side are rejected
            for (const ChainBlock& b : C.blocks(0))
                if (J.cell(b.cell).has(kJS)) {
                    IntVector off = C.zero_chain(0);
                    off[b.offset] = 1;
                    CHECK_THROWS_AS(l_operator(S, C, 0, off, LSide::Infinity, Ring::Z), TropError);
                    break;
                }
        }
}

TEST_CASE("closed chains at infinity bound onto the sphere") {
    MirrorPosets m(corpus::cubic_pair());
    const CellPoset& J = m.a;
    Cosheaf S(J, CosheafKind::MDelta, 0);
    ChainComplex C = S.chain_complex();
    // the chains at infinity are isolated points; their cycles are all degree-0 chains
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        IntVector gamma = random_side_chain(C, J, 0, kJinf, rng);
        IntVector rest = sub(C.apply_boundary(1, l_operator(S, C, 0, gamma, LSide::Infinity, Ring::Z)), gamma);
        for (const ChainBlock& b : C.blocks(0))
            if (!J.cell(b.cell).has(kJS)) CHECK(is_zero(C.cell_coeffs(0, rest, b.cell)));
    }
}

TEST_CASE("contraction isomorphisms") {
    for (const DualPair* d : {&corpus::cubic_pair(), &corpus::k3_pair()}) {
        MirrorPosets m(*d);
        const int n = m.a.n();
        for (int p = 0; p <= n; ++p) {
            Cosheaf Ma(m.a, CosheafKind::M, p), Mb(m.b, CosheafKind::M, n - p);
            for (int x = 0; x < m.a.size(); ++x) {
                if (!m.a.cell(x).has(kJS)) continue;
                IntMatrix forward = contraction_matrix(Ma, Mb, x);
                IntMatrix back = contraction_matrix(Mb, Ma, iso_j(m.a, m.b, x));
                CHECK(back * forward == signed_identity(forward.cols(), round_trip_sign(n)));
                for (int v : m.a.tau(x)) CHECK(contraction_matrix(Ma, Mb, x, v) == forward);
            }
        }
    }
    CHECK(round_trip_sign(1) == -1);
    CHECK(round_trip_sign(2) == -1);
    CHECK(round_trip_sign(3) == 1);
}

TEST_CASE("contraction is natural on the sphere") {
    MirrorPosets m(corpus::cubic_pair());
    const int n = m.a.n();
    for (int p = 0; p <= n; ++p) {
        Cosheaf Ma(m.a, CosheafKind::M, p), Mb(m.b, CosheafKind::M, n - p);
        int squares = 0;
        for (int c = 0; c < int(m.a.covers().size()); ++c) {
            const Cover& cv = m.a.covers()[c];
            if (!m.a.cell(cv.lower).has(kJS) || !m.a.cell(cv.upper).has(kJS)) continue;
            int mc = m.b.cover_index(iso_j(m.a, m.b, cv.lower), iso_j(m.a, m.b, cv.upper));
            REQUIRE(mc >= 0);
            CHECK(contraction_matrix(Ma, Mb, cv.lower) * Ma.map(c) == Mb.map(mc) * contraction_matrix(Ma, Mb, cv.upper));
            ++squares;
        }
        CHECK(squares > 0);
    }
}

TEST_CASE("mirror gauge exists and is a sign vector") {
    for (const DualPair* d : {&corpus::cubic_pair(), &corpus::k3_pair()}) {
        MirrorPosets m(*d);
        for (std::uint64_t seed : {0u, 11u}) {
            m.b.assign_signature(seed);
            std::vector<int> g = mirror_gauge(m.a, m.b);
            for (const Cover& c : m.a.covers()) {
                int mc = m.b.cover_index(iso_j(m.a, m.b, c.lower), iso_j(m.a, m.b, c.upper));
                CHECK(g[c.lower] * g[c.upper] == c.sign * m.b.covers()[mc].sign);
            }
        }
    }
}

TEST_CASE("mirror transfer over F2 is a class-level involution") {
    for (const DualPair* d : {&corpus::cubic_pair(), &corpus::k3_pair()}) {
        MirrorPosets m(*d);
        const int n = m.a.n();
        for (int p = 0; p <= n; ++p) {
            MirrorTransfer there(m.a, m.b, p), back(m.b, m.a, n - p);
            const ChainComplex& C = there.source_complex();
            for (int q = 0; q <= n; ++q) {
                std::vector<IntVector> basis = C.f2_homology_basis(q), images;
                for (const IntVector& g : basis) {
                    IntVector t = there.transfer(q, g, Ring::F2);
                    CHECK(there.target_complex().is_cycle(q, t, Ring::F2));
                    images.push_back(t);
                    IntVector round = back.transfer(q, t, Ring::F2);
                    CHECK(is_null_class(C, q, mod2(add(round, g)), Ring::F2));
                }
                // injective on classes, so ranks match on both sides
                const ChainComplex& T = there.target_complex();
                CHECK(f2_rank_with(T, q, images) - f2_rank_with(T, q, {}) == int(basis.size()));
            }
        }
    }
}

TEST_CASE("mirror transfer over Z squares to the contraction sign") {
    MirrorPosets m(corpus::k3_pair());
    const int n = m.a.n();
    for (int p = 0; p <= n; ++p) {
        MirrorTransfer there(m.a, m.b, p), back(m.b, m.a, n - p);
        const ChainComplex& C = there.source_complex();
        for (int q = 0; q <= n; ++q) {
            IntMatrix K = q == 0 ? IntMatrix::identity(C.dim(0)) : integral_kernel(C.boundary(q).to_dense());
            for (int j = 0; j < std::min(K.rows(), 6); ++j) {
                IntVector g = K.row(j);
                IntVector round = back.transfer(q, there.transfer(q, g, Ring::Z), Ring::Z);
                CHECK(C.solve_boundary(q, sub(round, scale(round_trip_sign(n), g)), Ring::Z).has_value());
            }
        }
    }
}

TEST_CASE("mirror transfer respects boundaries and rejects open chains") {
    MirrorPosets m(corpus::cubic_pair());
    MirrorTransfer t(m.a, m.b, 0);
    const ChainComplex& C = t.source_complex();
    std::mt19937 rng(17);
    std::bernoulli_distribution coin(0.5);
    IntVector g = C.f2_homology_basis(1).front();
    IntVector base = t.transfer(1, g, Ring::F2);
    for (int trial = 0; trial < 10; ++trial) {
        IntVector x(C.dim(2), 0);
        for (auto& v : x) v = coin(rng);
        IntVector shifted = mod2(add(g, C.apply_boundary(2, x)));
        CHECK(is_null_class(t.target_complex(), 1, mod2(add(t.transfer(1, shifted, Ring::F2), base)), Ring::F2));
    }
    IntVector open = C.zero_chain(1);
    open[0] = 1;
    CHECK_THROWS_AS(t.transfer(1, open, Ring::F2), TropError);
}

TEST_CASE("tropical Hodge numbers are mirror symmetric") {
    const DualPair& d = corpus::k3_pair();
    CellPoset pa = CellPoset::build_P(d.dual, d.primal), pb = CellPoset::build_P(d.primal, d.dual);
    for (Ring r : {Ring::Q, Ring::F2, Ring::Z}) {
        HodgeTable ta = hodge_table(pa, r), tb = hodge_table(pb, r);
        for (int p = 0; p <= 2; ++p) {
            CHECK(ta.rows[p].ranks == tb.rows[2 - p].ranks);
            CHECK(ta.rows[p].torsion == tb.rows[2 - p].torsion);
        }
    }
}

TEST_CASE("subdivision is a chain map and a homology isomorphism") {
    for (const DualPair* d : {&corpus::cubic_pair(), &corpus::k3_pair()}) {
        CellPoset P = CellPoset::build_P(d->dual, d->primal), J = CellPoset::build_J(d->dual, d->primal);
        Subdivision sd(P, J);
        for (int p = 0; p <= P.n(); ++p) {
            Cosheaf fp(P, CosheafKind::F, p), fj(J, CosheafKind::F, p);
            ChainComplex cp = fp.chain_complex(), cj = fj.chain_complex();
            for (int q = 1; q <= cp.top_degree(); ++q) {
                IntMatrix unit = IntMatrix::identity(cp.dim(q));
                for (int i = 0; i < cp.dim(q); ++i) {
                    IntVector e = unit.row(i);
                    CHECK(cj.apply_boundary(q, sd.apply(fp, cp, fj, cj, q, e)) ==
                          sd.apply(fp, cp, fj, cj, q - 1, cp.apply_boundary(q, e)));
                }
            }
            for (int q = 0; q <= cp.top_degree(); ++q) {
                std::vector<IntVector> images;
                auto basis = cp.f2_homology_basis(q);
                for (const IntVector& g : basis) images.push_back(mod2(sd.apply(fp, cp, fj, cj, q, g)));
                CHECK(f2_rank_with(cj, q, images) - f2_rank_with(cj, q, {}) == int(basis.size()));
            }
        }
    }
}

TEST_CASE("divisor restriction on the cubic") {
    const DualPair& d = corpus::cubic_pair();
    CellPoset P = CellPoset::build_P(d.primal, d.dual);
    ChainComplex C = Cosheaf(P, CosheafKind::F, P.n() - 1).chain_complex();
    const int q = P.n() - 1;
    auto cells = [&](const IntVector& chain) {
        int k = 0;
        for (Int v : chain) k += v != 0;
        return k;
    };
    // a vertex of the triangle and the boundary point next to it
    DivisorF2 d78 = DivisorF2::from_rays(*d.primal, {{-1, 2}, {-1, 1}});
    DivisorF2 d8 = DivisorF2::from_rays(*d.primal, {{-1, 1}});
    IntVector r78 = divisor_restriction(P, C, d78), r8 = divisor_restriction(P, C, d8);
    CHECK(cells(r78) == 1);
    CHECK_FALSE(is_null_class(C, q, r78, Ring::F2));
    CHECK(cells(r8) == 0);
    CHECK(is_null_class(C, q, r8, Ring::F2));
    // rays interior to facets contribute nothing
    DivisorF2 interior = DivisorF2::from_rays(*d.primal, {{-1, 0}, {-1, 1}, {0, -1}, {1, -1}, {0, 1}, {1, 0}});
    CHECK(cells(divisor_restriction(P, C, interior)) == 0);
    CHECK(is_null_class(C, q, C.zero_chain(q), Ring::F2));
    CHECK(is_null_class(C, q, mod2(add(r78, r78)), Ring::F2));
    CHECK_THROWS_AS(DivisorF2::from_rays(*d.primal, {{0, 0}}), TropError);
    CHECK_THROWS_AS(DivisorF2::from_rays(*d.primal, {{5, 5}}), TropError);
}

TEST_CASE("divisor class on a curve is the parity of incidences") {
    const DualPair& d = corpus::cubic_pair();
    const CentralTriangulation& T = *d.primal;
    const CentralTriangulation& Td = *d.dual;
    CellPoset P = CellPoset::build_P(d.primal, d.dual);
    ChainComplex C = Cosheaf(P, CosheafKind::F, 0).chain_complex();
    // oracle: boundary edges of the dual lying on the face where the ray's pairing is extremal
    auto incidences = [&](int ray) {
        const IntVector& r = T.point(ray);
        Int lo = 0, hi = 0;
        for (std::size_t w = 1; w < Td.points().size(); ++w) {
            Int v = dot(r, Td.point(int(w)));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const Int face = lo == -1 ? -1 : 1;
        REQUIRE((lo == -1 || hi == 1));
        int k = 0;
        for (const Simplex& s : Td.simplices())
            if (s.size() == 2 && !CentralTriangulation::has_origin(s) && dot(r, Td.point(s[0])) == face &&
                dot(r, Td.point(s[1])) == face)
                ++k;
        return k;
    };
    const int rays = int(T.points().size()) - 1;
    for (int mask = 0; mask < (1 << rays); ++mask) {
        DivisorF2 D = DivisorF2::zero(T);
        int parity = 0;
        for (int i = 0; i < rays; ++i)
            if (mask >> i & 1) {
                D.on_point[i + 1] = 1;
                parity ^= incidences(i + 1) & 1;
            }
        CHECK(is_null_class(C, 0, divisor_restriction(P, C, D), Ring::F2) == (parity == 0));
    }
}
