#include <set>

#include "doctest.h"
#include "support/corpus.hpp"

using namespace tropmirror;

namespace {

bool is_subset(const Simplex& a, const Simplex& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

// Reverse inclusion on both coordinates.
bool leq(const CellPoset& P, int x, int y) { return is_subset(P.tau(y), P.tau(x)) && is_subset(P.sigma(y), P.sigma(x)); }

// Brute-force compatibility: every point of sigma pairs to one with every vertex of the
// minimal face of the tau-side polytope containing tau minus the origin.
bool oracle_compatible(const CentralTriangulation& tau_side, const CentralTriangulation& sigma_side, const Simplex& tau,
                       const Simplex& sigma) {
    Simplex t_inf = CentralTriangulation::sigma_infty(tau);
    if (t_inf.empty()) return true;
    const LatticePolytope& P = tau_side.polytope();
    const Face& f = P.min_face_containing(tau_side.coords(t_inf));
    for (int x : sigma) {
        if (x == 0) return false;
        for (int v : f.vertices)
            if (dot(P.vertices()[v], sigma_side.point(x)) != 1) return false;
    }
    return true;
}

std::set<std::pair<Simplex, Simplex>> cell_set(const CellPoset& P) {
    std::set<std::pair<Simplex, Simplex>> out;
    for (int i = 0; i < P.size(); ++i) out.insert({P.tau(i), P.sigma(i)});
    return out;
}

void check_balanced(const CellPoset& P) {
    for (int x = 0; x < P.size(); ++x) {
        std::map<int, std::vector<int>> paths;  // z -> signs along both paths
        for (int cy : P.down(x)) {
            int y = P.covers()[cy].lower;
            for (int cz : P.down(y)) paths[P.covers()[cz].lower].push_back(P.covers()[cy].sign * P.covers()[cz].sign);
        }
        for (const auto& [z, s] : paths) {
            REQUIRE(s.size() == 2);
            CHECK(s[0] + s[1] == 0);
        }
    }
}

}  // namespace

TEST_CASE("cubic P: sphere, grading and dimension formula") {
    const DualPair& d = corpus::cubic_pair();
    CellPoset P = CellPoset::build_P(d.dual, d.primal);
    int sphere_edges = 0, top_p1 = -1;
    for (int i = 0; i < P.size(); ++i) {
        const Cell& c = P.cell(i);
        if (c.has(kSphere) && CentralTriangulation::dim(P.sigma(i)) == 1) ++sphere_edges;
        if (c.has(kP1)) top_p1 = std::max(top_p1, c.dim);
        if (P.tau(i) == Simplex{0} && P.sigma(i).size() == 3) CHECK(c.dim == 0);
    }
    CHECK(sphere_edges == 9);
    CHECK(top_p1 == 1);
    CHECK(P.find(Simplex{0}, Simplex{0}) >= 0);
    CHECK(P.cell(P.find(Simplex{0}, Simplex{0})).dim == 2);
}

TEST_CASE("posets match the enumeration oracle") {
    for (const DualPair* d : {&corpus::cubic_pair(), &corpus::k3_pair()}) {
        for (bool swap : {false, true}) {
            const CentralTriangulation& ts = swap ? *d->primal : *d->dual;
            const CentralTriangulation& ss = swap ? *d->dual : *d->primal;
            CellPoset P = swap ? CellPoset::build_P(d->primal, d->dual) : CellPoset::build_P(d->dual, d->primal);
            CellPoset J = swap ? CellPoset::build_J(d->primal, d->dual) : CellPoset::build_J(d->dual, d->primal);
            std::set<std::pair<Simplex, Simplex>> expect_p, expect_j;
            for (const Simplex& tau : ts.simplices())
                for (const Simplex& sigma : ss.simplices()) {
                    if (CentralTriangulation::has_origin(tau) && oracle_compatible(ts, ss, tau, sigma)) expect_p.insert({tau, sigma});
                    if (CentralTriangulation::has_origin(sigma)) {
                        if (sigma.size() > 1 && CentralTriangulation::in_boundary(tau) &&
                            oracle_compatible(ts, ss, tau, CentralTriangulation::sigma_infty(sigma)))
                            expect_j.insert({tau, sigma});
                    } else if (tau != Simplex{0} && oracle_compatible(ts, ss, tau, sigma)) {
                        expect_j.insert({tau, sigma});
                    }
                }
            CHECK(cell_set(P) == expect_p);
            CHECK(cell_set(J) == expect_j);
            CHECK(J.find(Simplex{0}, Simplex{0}) < 0);
        }
    }
}

TEST_CASE("covers are graded, thin and carry a balanced signature") {
    for (const DualPair* d : {&corpus::cubic_pair(), &corpus::k3_pair()}) {
        CellPoset P = CellPoset::build_P(d->dual, d->primal);
        CellPoset J = CellPoset::build_J(d->dual, d->primal);
        for (CellPoset* X : {&P, &J}) {
            for (const Cover& c : X->covers()) {
                CHECK(X->cell(c.upper).dim == X->cell(c.lower).dim + 1);
                CHECK(leq(*X, c.lower, c.upper));
            }
            check_balanced(*X);
            X->assign_signature(12345);
            check_balanced(*X);
        }
        // exhaustive cover check on the cubic pair: x < y with dim difference 1 is a cover
        if (d == &corpus::cubic_pair()) {
            for (int x = 0; x < J.size(); ++x)
                for (int y = 0; y < J.size(); ++y)
                    if (x != y && leq(J, x, y) && J.cell(y).dim == J.cell(x).dim + 1) CHECK(J.cover_index(x, y) >= 0);
        }
    }
}

TEST_CASE("J at infinity equals P at infinity; J^S sigmas biject with boundary points") {
    const DualPair& d = corpus::cubic_pair();
    CellPoset P = CellPoset::build_P(d.dual, d.primal);
    CellPoset J = CellPoset::build_J(d.dual, d.primal);
    std::set<std::pair<Simplex, Simplex>> pinf, jinf;
    for (int i = 0; i < P.size(); ++i)
        if (P.cell(i).has(kPinf)) pinf.insert({P.tau(i), P.sigma(i)});
    for (int i = 0; i < J.size(); ++i)
        if (J.cell(i).has(kJinf)) jinf.insert({J.tau(i), J.sigma(i)});
    CHECK(pinf == jinf);

    std::set<Simplex> edges;
    std::set<int> points;
    for (int i = 0; i < J.size(); ++i)
        if (J.cell(i).has(kJS) && J.sigma(i).size() == 2) {
            edges.insert(J.sigma(i));
            points.insert(J.sigma(i)[1]);
        }
    CHECK(edges.size() == 9);
    CHECK(int(points.size()) == d.primal->ray_count());

    // J^ub = J0^ub ⊔ J^inf via (tau, sigma) -> (tau_hat, sigma)
    int j0ub = 0;
    for (int i = 0; i < J.size(); ++i) {
        const Cell& c = J.cell(i);
        CHECK(c.has(kJS) != c.has(kJub));
        if (c.has(kJub)) CHECK(c.has(kJ0ub) != c.has(kJinf));
        if (c.has(kJ0ub)) {
            ++j0ub;
            int image = J.find(CentralTriangulation::sigma_hat(J.tau(i)), J.sigma(i));
            REQUIRE(image >= 0);
            CHECK(J.cell(image).has(kJinf));
        }
    }
    CHECK(j0ub == int(jinf.size()));
}

TEST_CASE("mirror poset isomorphisms") {
    for (const DualPair* d : {&corpus::cubic_pair(), &corpus::k3_pair()}) {
        CellPoset P = CellPoset::build_P(d->dual, d->primal);
        CellPoset Pm = CellPoset::build_P(d->primal, d->dual);
        CellPoset J = CellPoset::build_J(d->dual, d->primal);
        CellPoset Jm = CellPoset::build_J(d->primal, d->dual);
        CHECK(J.size() == Jm.size());
        std::vector<int> inf;
        for (int i = 0; i < P.size(); ++i) {
            if (!P.cell(i).has(kPinf)) {
                CHECK_THROWS_AS(iso_p(P, Pm, i), TropError);
                continue;
            }
            inf.push_back(i);
            int image = iso_p(P, Pm, i);
            CHECK(Pm.cell(image).dim == P.cell(i).dim);
            CHECK(iso_p(Pm, P, image) == i);
        }
        for (int i = 0; i < J.size(); ++i) {
            int image = iso_j(J, Jm, i);
            CHECK(Jm.cell(image).dim == J.cell(i).dim);
            CHECK(iso_j(Jm, J, image) == i);
            CHECK(Jm.cell(image).has(kJS) == J.cell(i).has(kJS));
            CHECK(Jm.cell(image).has(kJinf) == J.cell(i).has(kJinf));
            if (CentralTriangulation::in_boundary(J.tau(i)) && CentralTriangulation::in_boundary(J.sigma(i))) {
                CHECK(Jm.tau(image) == J.sigma(i));
                CHECK(Jm.sigma(image) == J.tau(i));
            }
        }
        if (d == &corpus::cubic_pair()) {
            for (int a : inf)
                for (int b : inf)
                    if (leq(P, a, b)) CHECK(leq(Pm, iso_p(P, Pm, a), iso_p(P, Pm, b)));
            for (int a = 0; a < J.size(); ++a)
                for (int b = 0; b < J.size(); ++b)
                    if (leq(J, a, b)) CHECK(leq(Jm, iso_j(J, Jm, a), iso_j(J, Jm, b)));
        } else {
            for (const Cover& c : J.covers()) CHECK(Jm.cover_index(iso_j(J, Jm, c.lower), iso_j(J, Jm, c.upper)) >= 0);
        }
    }
}

TEST_CASE("refinement map J -> P is order preserving and onto P minus (0,0)") {
    for (const DualPair* d : {&corpus::cubic_pair(), &corpus::k3_pair()}) {
        CellPoset P = CellPoset::build_P(d->dual, d->primal);
        CellPoset J = CellPoset::build_J(d->dual, d->primal);
        std::set<int> hit;
        for (int i = 0; i < J.size(); ++i) hit.insert(refine_to_p(J, P, i));
        CHECK(int(hit.size()) == P.size() - 1);
        CHECK(!hit.count(P.find(Simplex{0}, Simplex{0})));
        for (const Cover& c : J.covers()) CHECK(leq(P, refine_to_p(J, P, c.lower), refine_to_p(J, P, c.upper)));
    }
}

TEST_CASE("mismatched polytopes are rejected") {
    const DualPair& c = corpus::cubic_pair();
    CHECK_THROWS_AS(CellPoset::build_P(c.primal, c.primal), TropError);
    CHECK_THROWS_AS(DualPair::make(generate_central(corpus::cubic()), generate_central(corpus::cubic())), TropError);
}
