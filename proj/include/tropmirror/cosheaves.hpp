#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tropmirror/complex.hpp"
#include "tropmirror/module.hpp"
#include "tropmirror/posets.hpp"

namespace tropmirror {

/// Coordinates on the quotient of the tau-side lattice by the span of some rays.
struct Stratum {
    Simplex rays;           // point indices spanning the killed sublattice
    int rank = 0;           // rank of the quotient lattice
    IntMatrix projection;   // rank x (n+1)
    IntMatrix section;      // (n+1) x rank, projection * section = identity
};

/// Builds a stratum; the rays must be part of a lattice basis.
Stratum make_stratum(const CentralTriangulation& side, const Simplex& rays);

enum class CosheafKind { F, M, MDelta, Q, R };
const char* cosheaf_name(CosheafKind kind);

/// One of the five cosheaves on a P or J poset, with every value and cover map precomputed.
///
/// Values on a cell live in Lambda^p of its stratum lattice: the quotient by the rays of tau
/// when the origin lies in tau, the whole lattice otherwise. The poset must outlive the
/// cosheaf; cover signs are read when a complex is assembled.
class Cosheaf {
public:
    Cosheaf(const CellPoset& poset, CosheafKind kind, int p);

    const CellPoset& poset() const { return *poset_; }
    CosheafKind kind() const { return kind_; }
    int degree() const { return p_; }
    std::string label() const;

    const Stratum& stratum(int cell) const { return strata_.at(stratum_key_[cell]); }
    /// Rank of the ambient Lambda^p of the cell's stratum.
    int ambient_rank(int cell) const { return value_[cell].ambient_rank(); }
    const PresentedModule& value(int cell) const { return value_[cell]; }
    int rank(int cell) const { return value_[cell].rank(); }
    /// Matrix of the cosheaf map value(upper) -> value(lower) of a cover.
    const IntMatrix& map(int cover) const { return map_[cover]; }

    /// Cellular chain complex; cells rejected by keep are dropped.
    ChainComplex chain_complex(const std::function<bool(int)>& keep = {}) const;

private:
    PresentedModule compute_value(int cell) const;
    PresentedModule multitangent(int stratum_key, const Simplex& sigma, int degree) const;
    PresentedModule mirror_quotient(int cell) const;
    std::vector<IntVector> killed_generators(int cell) const;
    int stratum_for(const Simplex& tau);

    const CellPoset* poset_;
    CosheafKind kind_;
    int p_;
    std::vector<Stratum> strata_;
    std::map<Simplex, int> stratum_lookup_;
    std::vector<int> stratum_key_;
    std::vector<PresentedModule> value_;
    std::vector<IntMatrix> map_;
};

/// Ambient coordinates of the edge direction of a sigma-side pair of points.
IntVector edge_direction(const CentralTriangulation& side, int a, int b);

/// Cellwise natural map between two cosheaves with equal ambients: class of each source basis lift.
IntMatrix sequence_map(const Cosheaf& from, const Cosheaf& to, int cell);

/// Applies cellwise matrices to a chain of degree q.
IntVector map_chain(const ChainComplex& from, const ChainComplex& to, int q, const IntVector& chain,
                    const std::function<IntMatrix(int)>& cell_matrix);

/// Failure description for the two short exact sequences, empty when every check passes.
struct ExactnessReport {
    int cells_checked = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};
/// Checks 0 -> M -> MDelta -> Q -> 0 and 0 -> R -> F -> MDelta -> 0 on every J cell.
ExactnessReport check_exact_sequences(const CellPoset& J, int p);

/// Tropical homology table H_q(F_p) for 0 <= p, q <= n over the P poset.
struct HodgeTable {
    Ring ring = Ring::Q;
    int n = 0;
    std::vector<HomologySummary> rows;  // indexed by p
    int at(int p, int q) const { return rows[p].ranks[q]; }
    bool has_torsion() const;
    std::string to_text() const;
};
HodgeTable hodge_table(const CellPoset& P, Ring ring);

}  // namespace tropmirror
