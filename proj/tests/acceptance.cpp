// One pass/fail line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tropmirror/io.hpp"
#include "tropmirror/mirror.hpp"
#include "tropmirror/patchwork.hpp"

using namespace tropmirror;

namespace {

// Wall-clock limits in seconds, one per criterion.
constexpr double kLimitCubicHodge = 5;
constexpr double kLimitK3Hodge = 300;
constexpr double kLimitFigure = 5;  // per figure
constexpr double kLimitCubicSweep = 120;
constexpr double kLimitK3Sweep = 1800;
constexpr int kK3SweepClasses = 200;
constexpr int kK3MirrorClasses = 50;
constexpr double kLimitUnbounded = 3600;

std::string data(const std::string& name) { return std::string(TROPMIRROR_DATA_DIR) + "/" + name; }

DualPair load_pair(const std::string& primal, const std::string& dual) {
    return DualPair::make(triangulation_from_json(load_json_file(data(primal)).value),
                          triangulation_from_json(load_json_file(data(dual)).value));
}

const DualPair& cubic() {
    static const DualPair p = load_pair("cubic_triangulation.json", "cubic_dual_triangulation.json");
    return p;
}
const DualPair& k3() {
    static const DualPair p = load_pair("cube_triangulation.json", "octahedron_triangulation.json");
    return p;
}
const DualPair& diamond() {
    static const DualPair p = load_pair("diamond_triangulation.json", "square_triangulation.json");
    return p;
}

struct Check {
    bool pass = true;
    std::ostringstream note;
    void expect(bool ok, const std::string& what) {
        if (!ok && pass) note << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

int failures = 0;

void run(int number, double limit, const std::function<void(Check&)>& body) {
    Check c;
    auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.note << "exception: " << e.what() << "; ";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > limit) {
        c.pass = false;
        c.note << "over the time limit; ";
    }
    std::string note = c.note.str();
    if (note.size() >= 2) note.resize(note.size() - 2);
    std::cout << "criterion " << number << ": " << (c.pass ? "PASS" : "FAIL") << "  " << note << "  [" << secs << " s, limit "
              << limit << " s]" << std::endl;
    failures += !c.pass;
}

CellPoset side_P(const DualPair& d, bool primal) {
    return primal ? CellPoset::build_P(d.dual, d.primal) : CellPoset::build_P(d.primal, d.dual);
}
CellPoset side_J(const DualPair& d, bool primal) {
    return primal ? CellPoset::build_J(d.dual, d.primal) : CellPoset::build_J(d.primal, d.dual);
}

bool mirror_equal(const HodgeTable& a, const HodgeTable& b) {
    for (int p = 0; p <= a.n; ++p)
        if (!(a.rows[p] == b.rows[a.n - p])) return false;
    return true;
}

// Transferred F2 homology bases stay independent modulo boundaries.
bool transfer_injective(const CellPoset& src, const CellPoset& tgt, int p) {
    MirrorTransfer t(src, tgt, p);
    for (int q = 0; q <= src.n(); ++q) {
        const ChainComplex& C = t.target_complex();
        F2Reducer red(C.dim(q));
        if (q + 1 <= C.top_degree())
            for (int c = 0; c < C.boundary(q + 1).cols(); ++c) {
                Bits col(C.dim(q));
                for (const auto& [row, v] : C.boundary(q + 1).column(c))
                    if (v % 2 != 0) col.set(row, true);
                red.add(col);
            }
        for (const IntVector& g : t.source_complex().f2_homology_basis(q))
            if (!red.add(Bits::from_int(mod2(t.transfer(q, g, Ring::F2))))) return false;
    }
    return true;
}

void hodge_criterion(Check& c, const DualPair& d, const std::vector<std::vector<int>>& expect) {
    const int n = d.n();
    CellPoset a = side_P(d, true), b = side_P(d, false);
    for (Ring r : {Ring::Q, Ring::F2, Ring::Z}) {
        HodgeTable ta = hodge_table(a, r), tb = hodge_table(b, r);
        for (int p = 0; p <= n; ++p)
            for (int q = 0; q <= n; ++q) {
                c.expect(ta.at(p, q) == expect[p][q], std::string("primal H over ") + ring_name(r));
                c.expect(tb.at(p, q) == expect[p][q], std::string("dual H over ") + ring_name(r));
            }
        c.expect(!ta.has_torsion() && !tb.has_torsion(), "torsion");
        c.expect(mirror_equal(ta, tb), std::string("mirror equality over ") + ring_name(r));
    }
    CellPoset ja = side_J(d, true), jb = side_J(d, false);
    for (int p = 0; p <= n; ++p) c.expect(transfer_injective(ja, jb, p), "transfer injective, p=" + std::to_string(p));
    c.note << "tables match over q, f2, z; transfers injective; ";
}

std::vector<DivisorF2> random_classes(const CentralTriangulation& T, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::uint64_t mask = (std::uint64_t(1) << T.ray_count()) - 1;
    std::set<std::uint64_t> seen;
    std::vector<DivisorF2> out;
    // the zero class always appears
    out.push_back(DivisorF2::zero(T));
    seen.insert(0);
    while (int(out.size()) < count) {
        DivisorF2 D = canonical_divisor(T, divisor_from_bits(T, rng() & mask));
        if (seen.insert(divisor_bits(D)).second) out.push_back(D);
    }
    return out;
}

int alternating(const std::vector<int>& ranks) {
    int s = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) s += (i % 2 ? -1 : 1) * ranks[i];
    return s;
}

}  // namespace

int main() {
    std::cout.setf(std::ios::fixed);
    std::cout.precision(2);

    run(1, kLimitCubicHodge, [](Check& c) { hodge_criterion(c, cubic(), {{1, 1}, {1, 1}}); });

    run(2, kLimitK3Hodge, [](Check& c) { hodge_criterion(c, k3(), {{1, 0, 1}, {0, 20, 0}, {1, 0, 1}}); });

    run(3, kLimitUnbounded, [](Check& c) {
        int complexes = 0;
        for (const DualPair* d : {&cubic(), &k3()})
            for (bool side : {true, false}) {
                CellPoset J = side_J(*d, side);
                for (int p = 0; p <= J.n(); ++p)
                    for (CosheafKind k : {CosheafKind::Q, CosheafKind::R}) {
                        ChainComplex C = Cosheaf(J, k, p).chain_complex();
                        for (Ring r : {Ring::Z, Ring::F2}) {
                            HomologySummary h = homology(C, r);
                            bool zero = h.total_rank() == 0;
                            for (const auto& t : h.torsion) zero = zero && t.empty();
                            c.expect(zero, std::string(cosheaf_name(k)) + " not acyclic");
                            ++complexes;
                        }
                    }
            }
        c.note << complexes << " complexes acyclic; ";
    });

    run(4, kLimitUnbounded, [](Check& c) {
        int cells = 0;
        for (const DualPair* d : {&cubic(), &k3()})
            for (bool side : {true, false}) {
                CellPoset J = side_J(*d, side);
                for (int p = 0; p <= J.n(); ++p) {
                    ExactnessReport rep = check_exact_sequences(J, p);
                    c.expect(rep.cells_checked == J.size(), "not every cell checked");
                    c.expect(rep.ok(), rep.ok() ? "" : rep.failures.front());
                    cells += rep.cells_checked;
                }
            }
        c.note << cells << " cell checks; ";
    });

    run(5, kLimitUnbounded, [](Check& c) {
        int cells = 0;
        for (const DualPair* d : {&cubic(), &k3()}) {
            CellPoset a = side_J(*d, true), b = side_J(*d, false);
            const int n = a.n();
            const int eps = (n * (n + 5) / 2) % 2 ? -1 : 1;
            for (int p = 0; p <= n; ++p) {
                Cosheaf Ma(a, CosheafKind::M, p), Mb(b, CosheafKind::M, n - p);
                for (int x = 0; x < a.size(); ++x) {
                    if (!a.cell(x).has(kJS)) continue;
                    IntMatrix forward = contraction_matrix(Ma, Mb, x);
                    IntMatrix back = contraction_matrix(Mb, Ma, iso_j(a, b, x));
                    IntMatrix expect = IntMatrix::identity(forward.cols());
                    for (int i = 0; i < forward.cols(); ++i) expect(i, i) = eps;
                    c.expect(back * forward == expect, "round trip");
                    for (int v : a.tau(x)) c.expect(contraction_matrix(Ma, Mb, x, v) == forward, "vertex dependence");
                    ++cells;
                }
            }
        }
        c.note << cells << " sphere cells; ";
    });

    run(6, 3 * kLimitFigure, [](Check& c) {
        auto figure = [&](const std::function<void()>& f) {
            auto start = std::chrono::steady_clock::now();
            f();
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            c.expect(secs < kLimitFigure, "figure over its time limit");
        };
        const CentralTriangulation& T = *cubic().primal;
        figure([&] {
            PatchworkContext ctx(cubic());
            DivisorF2 d78 = divisor_from_json(T, load_json_file(data("cubic_divisor_d7_d8.json")).value);
            RealBetti b = real_betti(ctx.sign_cosheaf(d78));
            c.expect(b.consistent() && b.betti[0] == 1, "D7+D8 connected");
            c.expect(ctx.verdict(d78).verdict == Verdict::Connected, "D7+D8 verdict");
        });
        figure([&] {
            PatchworkContext ctx(cubic());
            DivisorF2 d8 = divisor_from_json(T, load_json_file(data("cubic_divisor_d8.json")).value);
            RealBetti b = real_betti(ctx.sign_cosheaf(d8));
            c.expect(b.consistent() && b.betti[0] == 2, "D8 two components");
            c.expect(ctx.verdict(d8).verdict == Verdict::TwoComponents, "D8 verdict");
        });
        figure([&] {
            // every sign choice on the diamond, since any pictured one is among them
            PatchworkContext ctx(diamond());
            const CentralTriangulation& TD = *diamond().primal;
            for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << TD.ray_count()); ++bits) {
                DivisorF2 D = divisor_from_bits(TD, bits);
                RealBetti b = real_betti(ctx.sign_cosheaf(D));
                c.expect(b.consistent() && b.betti[0] == 2, "diamond divisor not split");
            }
        });
        c.note << "D7+D8: b0=1, D8: b0=2, diamond: b0=2 for all 16 sign patterns; ";
    });

    run(7, kLimitCubicSweep + kLimitK3Sweep, [](Check& c) {
        auto sweep = [&](const DualPair& d, const std::vector<DivisorF2>& classes, double limit, const char* name) {
            auto start = std::chrono::steady_clock::now();
            PatchworkContext ctx(d);
            c.expect(ctx.hypothesis_holds(), std::string(name) + " hypothesis");
            int agree = 0, connected = 0;
            for (const DivisorF2& D : classes) {
                RealBetti b = real_betti(ctx.sign_cosheaf(D));
                ConnectednessReport v = ctx.verdict(D);
                c.expect(b.b0_union_find == 1 || b.b0_union_find == 2, "b0 outside {1,2}");
                bool ok = b.consistent() && v.verdict != Verdict::HypothesisFails &&
                          (v.verdict == Verdict::Connected) == (b.b0_union_find == 1);
                agree += ok;
                connected += b.b0_union_find == 1;
            }
            c.expect(agree == int(classes.size()), std::string(name) + " verdict disagreement");
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            c.expect(secs < limit, std::string(name) + " over its time limit");
            c.note << name << " " << agree << "/" << classes.size() << " agree (" << connected << " connected); ";
        };
        sweep(cubic(), divisor_classes(*cubic().primal), kLimitCubicSweep, "cubic");
        sweep(k3(), random_classes(*k3().primal, kK3SweepClasses, 2026), kLimitK3Sweep, "cube");
    });

    run(8, kLimitUnbounded, [](Check& c) {
        auto check = [&](const DualPair& d, const std::vector<DivisorF2>& classes, const char* name) {
            PatchworkContext ctx(d);
            int ok = 0;
            for (const DivisorF2& D : classes) ok += ctx.delta1_is_mirror_of_restriction(D);
            c.expect(ok == int(classes.size()), std::string(name) + " transfer mismatch");
            c.note << name << " " << ok << "/" << classes.size() << "; ";
        };
        check(cubic(), divisor_classes(*cubic().primal), "cubic");
        check(k3(), random_classes(*k3().primal, kK3MirrorClasses, 77), "cube");
    });

    run(9, kLimitUnbounded, [](Check& c) {
        const CentralTriangulation& T = *cubic().primal;
        PatchworkContext ctx(cubic());
        const int points = int(T.points().size());
        std::map<std::uint64_t, std::vector<int>> by_class;
        int rows = 0;
        for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << points); ++bits) {
            SignDistribution s;
            for (int k = 0; k < points; ++k) s.sign.push_back(std::uint8_t((bits >> k) & 1));
            std::vector<int> betti = real_betti(ctx.sign_cosheaf(s)).betti;
            auto [it, fresh] = by_class.emplace(divisor_bits(canonical_divisor(T, divisor_from_signs(T, s))), betti);
            c.expect(fresh || it->second == betti, "Betti vector differs inside a class");
            ++rows;
        }
        c.expect(by_class.size() == 128, "class count");
        c.note << rows << " distributions in " << by_class.size() << " classes; ";
    });

    run(10, kLimitUnbounded, [](Check& c) {
        int complexes = 0;
        for (const DualPair* d : {&cubic(), &k3()}) {
            for (bool side : {true, false}) {
                CellPoset P = side_P(*d, side), J = side_J(*d, side);
                for (int p = 0; p <= P.n(); ++p) {
                    ChainComplex fp = Cosheaf(P, CosheafKind::F, p).chain_complex();
                    fp.verify(Ring::Z);
                    ++complexes;
                    for (CosheafKind k : {CosheafKind::F, CosheafKind::M, CosheafKind::MDelta, CosheafKind::Q, CosheafKind::R}) {
                        Cosheaf(J, k, p).chain_complex().verify(Ring::Z);
                        ++complexes;
                    }
                    // signature independence and Euler identities
                    HomologySummary ref = homology(fp, Ring::Z);
                    for (std::uint64_t seed : {3u, 41u}) {
                        P.assign_signature(seed);
                        ChainComplex again = Cosheaf(P, CosheafKind::F, p).chain_complex();
                        again.verify(Ring::Z);
                        c.expect(homology(again, Ring::Z) == ref, "signature dependence");
                    }
                    P.assign_signature(0);
                    for (Ring r : {Ring::Q, Ring::F2})
                        c.expect(euler_from_chains(fp) == euler_from_homology(homology(fp, r)), "Euler identity");
                }
            }
            PatchworkContext ctx(*d);
            int graded = 0;
            for (int p = 0; p <= ctx.n(); ++p) graded += alternating(homology(ctx.patch_complex(p), Ring::F2).ranks);
            std::vector<DivisorF2> classes =
                d == &cubic() ? divisor_classes(*d->primal) : random_classes(*d->primal, 6, 5);
            for (const DivisorF2& D : classes) {
                SignCosheaf S = ctx.sign_cosheaf(D);
                S.chain_complex().verify(Ring::F2);
                ++complexes;
                FiltrationReport rep = check_filtration(S);
                c.expect(rep.ok(), rep.ok() ? "" : rep.failures.front());
                c.expect(alternating(real_betti(S).betti) == graded, "real Euler characteristic");
            }
        }
        c.note << complexes << " complexes with zero square; ";
    });

    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures;
}
