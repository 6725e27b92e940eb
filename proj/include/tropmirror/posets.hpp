#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "tropmirror/triangulation.hpp"

namespace tropmirror {

using TriangulationPtr = std::shared_ptr<const CentralTriangulation>;

/// A reflexive polytope and its dual with central unimodular triangulations of both.
struct DualPair {
    TriangulationPtr primal;  // T on Delta, points in M
    TriangulationPtr dual;    // T° on the dual polytope, points in N

    /// Throws NotDualPair unless the polytopes are mutually dual.
    static DualPair make(CentralTriangulation primal, CentralTriangulation dual);
    int n() const { return primal->n(); }
    /// The same pair with the roles of the two sides exchanged.
    DualPair swapped() const { return {dual, primal}; }
};

enum class PosetKind { P, J };

enum CellFlag : unsigned {
    kP1 = 1u << 0,    // dim sigma >= 1
    kPinf = 1u << 1,  // P: tau != 0
    kJS = 1u << 2,    // J: first kind
    kJinf = 1u << 3,  // J: 0 in tau
    kJ0 = 1u << 4,    // J: 0 not in tau
    kJub = 1u << 5,   // J: not first kind
    kJ0ub = 1u << 6,  // J: tau in boundary, sigma in boundary
    kSphere = 1u << 7 // P: tau = 0, 0 in sigma, dim sigma >= 1
};

struct Cell {
    int tau = 0;    // index into tau_side().simplices()
    int sigma = 0;  // index into sigma_side().simplices()
    int dim = 0;
    unsigned flags = 0;
    bool has(CellFlag f) const { return (flags & f) != 0; }
};

/// lower ⋖ upper in the reverse-inclusion order.
struct Cover {
    int lower = 0;
    int upper = 0;
    int sign = 1;
};

/// Graded thin poset of pairs (tau, sigma), tau from the side carrying cosheaf values.
class CellPoset {
public:
    /// P(tau_side, sigma_side).
    static CellPoset build_P(TriangulationPtr tau_side, TriangulationPtr sigma_side);
    /// J(tau_side, sigma_side).
    static CellPoset build_J(TriangulationPtr tau_side, TriangulationPtr sigma_side);

    PosetKind kind() const { return kind_; }
    const CentralTriangulation& tau_side() const { return *tau_side_; }
    const CentralTriangulation& sigma_side() const { return *sigma_side_; }
    TriangulationPtr tau_side_ptr() const { return tau_side_; }
    TriangulationPtr sigma_side_ptr() const { return sigma_side_; }
    int n() const { return tau_side_->n(); }
    int max_dim() const { return max_dim_; }

    int size() const { return int(cells_.size()); }
    const std::vector<Cell>& cells() const { return cells_; }
    const Cell& cell(int i) const { return cells_[i]; }
    const Simplex& tau(int i) const { return tau_side_->simplices()[cells_[i].tau]; }
    const Simplex& sigma(int i) const { return sigma_side_->simplices()[cells_[i].sigma]; }
    int find(int tau, int sigma) const;
    int find(const Simplex& tau, const Simplex& sigma) const;

    const std::vector<Cover>& covers() const { return covers_; }
    /// Cover indices with the given cell as upper (resp. lower) element.
    const std::vector<int>& down(int cell) const { return down_[cell]; }
    const std::vector<int>& up(int cell) const { return up_[cell]; }
    int cover_index(int lower, int upper) const;  // -1 if not a cover

    /// Recomputes the balanced signature; seed 0 fixes every free choice to +1.
    void assign_signature(std::uint64_t seed);
    std::uint64_t signature_seed() const { return seed_; }
    /// Number of length-2 intervals checked (each has exactly 4 elements).
    int interval_count() const { return interval_count_; }

    /// Face of sigma_side().polytope() equal to min(C(tau))^vee; whole polytope for tau = 0.
    int membership_face(int tau) const { return membership_face_[tau]; }
    /// sigma ⊂ min(C(tau))^vee for sigma avoiding the origin (or tau = 0).
    bool compatible(int tau, const Simplex& sigma) const;

private:
    void init_common(TriangulationPtr tau_side, TriangulationPtr sigma_side);
    void add_cell(int tau, int sigma, unsigned flags);
    void finish();

    PosetKind kind_ = PosetKind::P;
    TriangulationPtr tau_side_;
    TriangulationPtr sigma_side_;
    std::vector<int> membership_face_;
    std::vector<Cell> cells_;
    std::map<std::pair<int, int>, int> lookup_;
    std::vector<Cover> covers_;
    std::map<std::pair<int, int>, int> cover_lookup_;
    std::vector<std::vector<int>> down_;
    std::vector<std::vector<int>> up_;
    int max_dim_ = 0;
    int interval_count_ = 0;
    std::uint64_t seed_ = 0;
};

/// (tau, sigma) ↦ (sigma_hat, tau_infty) from P^inf(src) to P^inf(tgt); tgt must be P(sigma_side, tau_side).
int iso_p(const CellPoset& src, const CellPoset& tgt, int cell);
/// The three-case mirror isomorphism J(src) → J(tgt).
int iso_j(const CellPoset& src, const CellPoset& tgt, int cell);
/// J → P: (tau, sigma) ↦ (0, sigma) if 0 ∉ tau, else itself.
int refine_to_p(const CellPoset& J, const CellPoset& P, int cell);

}  // namespace tropmirror
