#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tropmirror/cosheaves.hpp"
#include "tropmirror/mirror.hpp"

namespace tropmirror {

/// Viro signs on the lattice points of the triangulated polytope, indexed by point index (origin first).
struct SignDistribution {
    std::vector<std::uint8_t> sign;
    bool operator==(const SignDistribution& o) const = default;
};

/// Real phase structure: for every edge of T the class in N⊗F2 / edge^⊥ ≅ F2, read through the edge direction.
struct RealPhaseStructure {
    std::map<Simplex, std::uint8_t> on_edge;
    bool operator==(const RealPhaseStructure& o) const = default;
};

/// Signs with the origin fixed to 1 and every ray sign equal to its divisor coefficient.
SignDistribution signs_from_divisor(const CentralTriangulation& T, const DivisorF2& D);
/// Rays whose sign agrees with the origin's.
DivisorF2 divisor_from_signs(const CentralTriangulation& T, const SignDistribution& signs);
/// An edge gets 1 exactly when its endpoints carry equal signs.
RealPhaseStructure phase_from_signs(const CentralTriangulation& T, const SignDistribution& signs);
/// Throws InvalidPhaseStructure unless every 2-simplex has zero or two edges with value 0.
void validate_phase(const CentralTriangulation& T, const RealPhaseStructure& phase);
/// Signs realizing the phase structure with the given origin sign; throws InvalidPhaseStructure if none exist.
SignDistribution signs_from_phase(const CentralTriangulation& T, const RealPhaseStructure& phase, std::uint8_t origin_sign = 1);

/// D - D' lies in the image of N⊗F2 under n ↦ Σ ⟨n, v⟩ D_v.
bool divisors_equivalent(const CentralTriangulation& T, const DivisorF2& a, const DivisorF2& b);
/// Smallest member of the class, comparing coefficient vectors lexicographically from the last ray.
DivisorF2 canonical_divisor(const CentralTriangulation& T, const DivisorF2& D);
/// One canonical representative per class of Pic ⊗ F2, in increasing order of their bit patterns.
std::vector<DivisorF2> divisor_classes(const CentralTriangulation& T);
/// log2 of the number of divisor classes.
int divisor_class_dimension(const CentralTriangulation& T);
/// Ray bit pattern: bit i-1 set when ray i is in the support.
std::uint64_t divisor_bits(const DivisorF2& D);
DivisorF2 divisor_from_bits(const CentralTriangulation& T, std::uint64_t bits);

/// Sign cosheaf of a real phase structure on a P poset whose sigma side carries the phase, with its filtration.
///
/// Values are the F2 spans of the real points E(τ,σ) ⊂ F2^m, stored as bit masks in the stratum coordinates
/// of the multitangent cosheaves on the same poset.
class SignCosheaf {
public:
    using Multitangents = std::shared_ptr<const std::vector<Cosheaf>>;
    /// multitangent, when given, must hold F_0..F_n on P.
    SignCosheaf(const CellPoset& P, const RealPhaseStructure& phase, Multitangents multitangent = nullptr);

    const CellPoset& poset() const { return *poset_; }
    int n() const { return poset_->n(); }
    const std::vector<std::uint32_t>& real_points(int cell) const { return points_[cell]; }
    int size(int cell) const { return int(points_[cell].size()); }
    /// 0/1 matrix of value(upper) -> value(lower).
    const IntMatrix& map(int cover) const { return map_[cover]; }
    ChainComplex chain_complex() const;

    /// F_p on the same poset; the filtration quotients are identified with these values.
    const Cosheaf& multitangent(int p) const { return (*multitangent_)[p]; }
    /// Columns are indicator vectors spanning K_p(cell).
    const IntMatrix& filtration_generators(int cell, int p) const { return generators_[cell][p]; }
    /// F_p coordinates (mod 2) of the wedge of each generator's directions.
    const IntMatrix& graded_images(int cell, int p) const { return images_[cell][p]; }
    int filtration_rank(int cell, int p) const;
    /// Class of k in K_p/K_{p+1} as F_p coordinates; nullopt when k ∉ K_p.
    std::optional<IntVector> to_graded(int cell, int p, const IntVector& k) const;
    /// Some element of K_p with the given class.
    IntVector from_graded(int cell, int p, const IntVector& f) const;

private:
    void build_points();
    void build_maps();
    void build_filtration();

    const CellPoset* poset_;
    RealPhaseStructure phase_;
    Multitangents multitangent_;
    std::vector<std::vector<std::uint32_t>> points_;
    std::vector<std::map<std::uint32_t, int>> point_index_;
    std::vector<IntMatrix> map_;
    std::vector<std::vector<IntMatrix>> generators_;  // [cell][p]
    std::vector<std::vector<IntMatrix>> images_;      // [cell][p]
};

/// Component count of the real hypersurface: union-find of top real cells through shared facet real cells.
int count_components(const SignCosheaf& S);

struct RealBetti {
    std::vector<int> betti;  // from the sign-cosheaf complex, degrees 0..n
    int b0_union_find = 0;
    bool consistent() const { return !betti.empty() && betti[0] == b0_union_find; }
};
RealBetti real_betti(const SignCosheaf& S);

/// Failure descriptions for the filtration properties, empty when all hold.
struct FiltrationReport {
    int cells_checked = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};
/// Nesting, K_0 = S, K_{n+1} = 0, graded ranks equal to F_p ⊗ F2, well-defined graded maps,
/// cover maps preserving every K_p and commuting with the graded identification.
FiltrationReport check_filtration(const SignCosheaf& S);

/// Sum of the sphere cells of degree n in the F_0 complex of a P poset.
IntVector fundamental_chain(const CellPoset& P, const ChainComplex& f0);
/// First differential of the filtration spectral sequence on an F_p ⊗ F2 cycle of degree q.
IntVector delta1(const SignCosheaf& S, const ChainComplex& fp, const ChainComplex& fp1, int p, int q, const IntVector& cycle);

enum class Verdict { Connected, TwoComponents, HypothesisFails };
const char* verdict_name(Verdict v);

struct ConnectednessReport {
    Verdict verdict = Verdict::TwoComponents;
    bool class_nonzero = false;
    int failing_k = -1;    // set when the vanishing hypothesis fails
    int failing_dim = 0;
};

/// Shared posets and complexes for patchworking a dual pair: signs live on T = pair.primal,
/// the real hypersurface on P(T°,T), divisor restrictions on P(T,T°).
class PatchworkContext {
public:
    explicit PatchworkContext(const DualPair& pair);
    PatchworkContext(const PatchworkContext&) = delete;
    PatchworkContext& operator=(const PatchworkContext&) = delete;

    const DualPair& pair() const { return pair_; }
    int n() const { return pair_.n(); }
    const CellPoset& patch_poset() const { return patch_; }
    const CellPoset& mirror_poset() const { return mirror_; }
    const ChainComplex& patch_complex(int p) const { return patch_f_[p]; }
    const ChainComplex& restriction_complex() const { return mirror_top_; }

    /// dim H_n(P(T°,T); F_k ⊗ F2) for 0 < k < n, indexed by k.
    const std::map<int, int>& hypothesis_dims() const { return hypothesis_; }
    bool hypothesis_holds() const;

    SignCosheaf sign_cosheaf(const DivisorF2& D) const;
    SignCosheaf sign_cosheaf(const SignDistribution& signs) const;
    IntVector restriction(const DivisorF2& D) const;
    bool restriction_nonzero(const DivisorF2& D) const;
    ConnectednessReport verdict(const DivisorF2& D) const;

    /// δ¹ of the fundamental class, an F_1 ⊗ F2 cycle of degree n-1 on P(T°,T).
    IntVector delta1_of_fundamental(const SignCosheaf& S) const;
    /// Mirror transfer of δ¹(S) differs from D|X by a boundary in C(J(T,T°); F_{n-1} ⊗ F2).
    bool delta1_is_mirror_of_restriction(const DivisorF2& D) const;

private:
    void ensure_mirror_machinery() const;

    DualPair pair_;
    CellPoset patch_;
    CellPoset mirror_;
    SignCosheaf::Multitangents multitangent_;  // F_p on P(T°,T), p = 0..n
    std::vector<ChainComplex> patch_f_;
    ChainComplex mirror_top_;            // F_{n-1} on P(T,T°)
    std::map<int, int> hypothesis_;

    struct MirrorMachinery;
    mutable std::shared_ptr<const MirrorMachinery> machinery_;
    mutable std::shared_ptr<std::mutex> machinery_mutex_ = std::make_shared<std::mutex>();
};

}  // namespace tropmirror
