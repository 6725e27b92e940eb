#pragma once

#include <memory>
#include <vector>

#include "tropmirror/linalg.hpp"

namespace tropmirror {

/// Subquotient A/B of a free ambient module Z^k, with A and B given by spanning rows.
///
/// Arithmetic is integral; Q and F2 values are obtained by base change of the integral
/// presentation, which is exact because every cosheaf value used downstream is free.
class PresentedModule {
public:
    PresentedModule() = default;
    static PresentedModule zero(int ambient_rank);
    static PresentedModule whole(int ambient_rank);
    static PresentedModule span(int ambient_rank, const std::vector<IntVector>& generators);
    /// A / B where B is spanned by quo_generators; B must lie in A.
    static PresentedModule quotient(const PresentedModule& sub, const std::vector<IntVector>& quo_generators);

    static PresentedModule sum(const PresentedModule& a, const PresentedModule& b);
    static PresentedModule intersection(const PresentedModule& a, const PresentedModule& b);

    int ambient_rank() const { return ambient_; }
    Ring ring() const { return ring_; }
    void set_ring(Ring ring) { ring_ = ring; }

    /// Canonical (Hermite) basis of the submodule A, one row per generator.
    const IntMatrix& sub_basis() const { return sub_; }
    /// Canonical basis of the quotient submodule B.
    const IntMatrix& quo_basis() const { return quo_; }
    bool has_quotient() const { return quo_.rows() > 0; }

    /// Free rank of A/B.
    int rank() const { return int(free_lifts_.rows()); }
    /// Torsion invariants of A/B greater than one.
    const std::vector<Int>& torsion() const { return torsion_; }
    bool is_free() const { return torsion_.empty(); }

    /// Ambient representatives of the canonical basis of the free part of A/B.
    const IntMatrix& basis() const { return free_lifts_; }
    IntVector basis_vector(int i) const { return free_lifts_.row(i); }

    bool contains(const IntVector& v) const;  // v in A
    bool in_quotient_submodule(const IntVector& v) const;  // v in B
    /// Coordinates of the class of v in the canonical basis; throws MembershipViolation if v is not in A.
    IntVector coords(const IntVector& v) const;
    /// Ambient representative of a coordinate vector.
    IntVector lift(const IntVector& coordinates) const;

private:
    void normalize();
    std::optional<IntVector> sub_coords(const IntVector& v) const;

    int ambient_ = 0;
    Ring ring_ = Ring::Z;
    IntMatrix sub_;
    IntMatrix quo_;
    // adapted basis data
    IntMatrix adapted_change_;  // V from the Smith form of B in A-coordinates
    int quo_rank_ = 0;
    std::vector<Int> quo_invariants_;
    std::vector<Int> torsion_;
    IntMatrix free_lifts_;
    std::shared_ptr<IntegralSolver> sub_solver_;
};

}  // namespace tropmirror
