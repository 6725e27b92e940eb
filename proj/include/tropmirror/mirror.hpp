#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tropmirror/cosheaves.hpp"

namespace tropmirror {

/// Which half of J0^ub's partner bijection an L operator inverts.
enum class LSide {
    Infinity,  // (tau, sigma) -> (tau_hat, sigma), J^inf targets
    Sphere     // (tau, sigma) -> (tau, sigma_hat), J^S targets
};

/// Partner of a J0^ub cell on the given side.
int l_partner(const CellPoset& J, int cell, LSide side);

/// Inverse of (projection to the side) ∘ ∂ restricted to chains on J0^ub.
/// chain has degree q and lives on the side's cells; the result has degree q+1 on J0^ub.
IntVector l_operator(const Cosheaf& S, const ChainComplex& C, int q, const IntVector& chain, LSide side, Ring ring);

/// Keeps only the coefficients on cells with the flag.
IntVector restrict_chain(const ChainComplex& C, int q, const IntVector& chain, CellFlag flag, const CellPoset& poset);

/// Lexicographically smallest vertex of tau (a point index of the tau side).
int contraction_vertex(const CellPoset& J, int cell);

/// Matrix of [z] -> [iota_{v ^ z} Omega] from M_p(cell) to M_{n-p}(j(cell)).
/// src_m is M_p on J(A,B), tgt_m is M_{n-p} on J(B,A); vertex defaults to contraction_vertex.
IntMatrix contraction_matrix(const Cosheaf& src_m, const Cosheaf& tgt_m, int cell, int vertex = -1);

/// Signs g with g(x) g(y) = s(y ⋖ x) s'(j(y) ⋖ j(x)) on every cover of J; throws Unsolvable if none exist.
std::vector<int> mirror_gauge(const CellPoset& src, const CellPoset& tgt);

/// (-1)^{n(n+5)/2}.
int round_trip_sign(int n);

/// Chain-level realization of H_q(J(A,B); F_p) -> H_q(J(B,A); F_{n-p}).
class MirrorTransfer {
public:
    MirrorTransfer(const CellPoset& src, const CellPoset& tgt, int p);

    int p() const { return p_; }
    const CellPoset& source() const { return *src_; }
    const CellPoset& target() const { return *tgt_; }
    const Cosheaf& source_f() const { return src_f_; }
    const Cosheaf& target_f() const { return tgt_f_; }
    const ChainComplex& source_complex() const { return src_f_complex_; }
    const ChainComplex& target_complex() const { return tgt_f_complex_; }

    /// Homologous M_p cycle on J^S, in MDelta complex coordinates of the source.
    IntVector to_sphere(int q, const IntVector& cycle, Ring ring) const;
    /// Full transfer of an F_p cycle to an F_{n-p} cycle; throws NotAClosedChain on non-cycles.
    IntVector transfer(int q, const IntVector& cycle, Ring ring) const;

private:
    const CellPoset* src_;
    const CellPoset* tgt_;
    int p_;
    Cosheaf src_f_, src_md_, src_m_;
    Cosheaf tgt_f_, tgt_m_, tgt_r_;
    ChainComplex src_f_complex_, src_md_complex_;
    ChainComplex tgt_f_complex_, tgt_r_complex_;
    std::vector<int> gauge_;
};

/// Subdivision chain map C(P; F_p) -> C(J; F_p) for P and J built on the same sides.
class Subdivision {
public:
    Subdivision(const CellPoset& P, const CellPoset& J);
    /// Signed J cells refining a P cell (empty outside P^1).
    const std::vector<std::pair<int, int>>& pieces(int p_cell) const { return pieces_[p_cell]; }
    IntVector apply(const Cosheaf& fp, const ChainComplex& cp, const Cosheaf& fj, const ChainComplex& cj, int q,
                    const IntVector& chain) const;

private:
    const CellPoset* P_;
    const CellPoset* J_;
    std::vector<std::vector<std::pair<int, int>>> pieces_;  // (J cell, sign)
};

/// F2 toric divisor on the fan of a triangulation: one coefficient per point, zero at the origin.
struct DivisorF2 {
    std::vector<std::uint8_t> on_point;

    static DivisorF2 zero(const CentralTriangulation& T);
    /// Throws RayNotInFan for a coordinate that is not a boundary point of T.
    static DivisorF2 from_rays(const CentralTriangulation& T, const std::vector<IntVector>& rays);
    std::vector<int> support() const;
    bool operator==(const DivisorF2& o) const = default;
};

/// Cycle D|X of degree n-1 in C(P(T, T°); F_{n-1} ⊗ F2); P must be built with T on the tau side.
IntVector divisor_restriction(const CellPoset& P, const ChainComplex& f_top, const DivisorF2& D);

/// True iff the cycle bounds over the ring; throws NotAClosedChain for non-cycles.
bool is_null_class(const ChainComplex& C, int q, const IntVector& cycle, Ring ring);

}  // namespace tropmirror
