#include "tropmirror/module.hpp"

namespace tropmirror {

PresentedModule PresentedModule::zero(int ambient_rank) { return span(ambient_rank, {}); }

PresentedModule PresentedModule::whole(int ambient_rank) {
    std::vector<IntVector> gens;
    for (int i = 0; i < ambient_rank; ++i) {
        IntVector e(ambient_rank, 0);
        e[i] = 1;
        gens.push_back(e);
    }
    return span(ambient_rank, gens);
}

PresentedModule PresentedModule::span(int ambient_rank, const std::vector<IntVector>& generators) {
    PresentedModule m;
    m.ambient_ = ambient_rank;
    IntMatrix G(0, ambient_rank);
    for (const auto& g : generators) G.append_row(g);
    m.sub_ = G.rows() ? row_span_basis(G) : G;
    m.quo_ = IntMatrix(0, ambient_rank);
    m.normalize();
    return m;
}

PresentedModule PresentedModule::quotient(const PresentedModule& sub, const std::vector<IntVector>& quo_generators) {
    PresentedModule m;
    m.ambient_ = sub.ambient_;
    m.sub_ = sub.sub_;
    IntMatrix B(0, m.ambient_);
    for (const auto& g : sub.quo_.row_list()) B.append_row(g);
    for (const auto& g : quo_generators) {
        require(sub.contains(g), ErrorCode::MembershipViolation, "quotient generator escapes the submodule");
        B.append_row(g);
    }
    m.quo_ = B.rows() ? row_span_basis(B) : B;
    m.normalize();
    return m;
}

PresentedModule PresentedModule::sum(const PresentedModule& a, const PresentedModule& b) {
    require(a.ambient_ == b.ambient_, ErrorCode::DimensionMismatch, "module sum in different ambients");
    auto gens = a.sub_.row_list();
    for (const auto& g : b.sub_.row_list()) gens.push_back(g);
    return span(a.ambient_, gens);
}

PresentedModule PresentedModule::intersection(const PresentedModule& a, const PresentedModule& b) {
    require(a.ambient_ == b.ambient_, ErrorCode::DimensionMismatch, "module intersection in different ambients");
    const int ra = a.sub_.rows(), rb = b.sub_.rows();
    if (ra == 0 || rb == 0) return zero(a.ambient_);
    IntMatrix M(ra + rb, a.ambient_);
    for (int i = 0; i < ra; ++i) M.set_row(i, a.sub_.row(i));
    for (int i = 0; i < rb; ++i) M.set_row(ra + i, scale(-1, b.sub_.row(i)));
    IntMatrix K = integral_kernel(M.transpose());
    std::vector<IntVector> gens;
    for (int i = 0; i < K.rows(); ++i) {
        IntVector k = K.row(i);
        IntVector x(k.begin(), k.begin() + ra);
        gens.push_back(a.sub_.left_mul(x));
    }
    return span(a.ambient_, gens);
}

void PresentedModule::normalize() {
    const int r = sub_.rows();
    sub_solver_ = std::make_shared<IntegralSolver>(sub_.transpose());
    IntMatrix K(0, r);
    for (const auto& b : quo_.row_list()) {
        auto c = sub_coords(b);
        require(c.has_value(), ErrorCode::MembershipViolation, "quotient generator escapes the submodule");
        K.append_row(*c);
    }
    SmithForm f = smith_form(K);
    adapted_change_ = f.V;
    quo_rank_ = f.rank;
    quo_invariants_ = f.invariants;
    torsion_.clear();
    for (Int d : f.invariants)
        if (d > 1) torsion_.push_back(d);
    // Adapted basis F = V^{-1} G: its first quo_rank_ rows span B up to the invariants.
    IntMatrix adapted = inverse_unimodular(f.V) * sub_;
    free_lifts_ = IntMatrix(0, ambient_);
    for (int i = quo_rank_; i < r; ++i) free_lifts_.append_row(adapted.row(i));
}

std::optional<IntVector> PresentedModule::sub_coords(const IntVector& v) const {
    require(int(v.size()) == ambient_, ErrorCode::DimensionMismatch, "vector outside the ambient module");
    if (sub_.rows() == 0) {
        if (!tropmirror::is_zero(v)) return std::nullopt;
        return IntVector{};
    }
    return sub_solver_->solve(v);
}

bool PresentedModule::contains(const IntVector& v) const { return sub_coords(v).has_value(); }

bool PresentedModule::in_quotient_submodule(const IntVector& v) const {
    auto c = sub_coords(v);
    if (!c) return false;
    IntVector adapted = adapted_change_.rows() ? adapted_change_.left_mul(*c) : *c;
    for (int i = 0; i < int(adapted.size()); ++i) {
        if (i < quo_rank_ ? adapted[i] % quo_invariants_[i] != 0 : adapted[i] != 0) return false;
    }
    return true;
}

IntVector PresentedModule::coords(const IntVector& v) const {
    auto c = sub_coords(v);
    require(c.has_value(), ErrorCode::MembershipViolation, "element is not in the module");
    IntVector adapted = adapted_change_.rows() ? adapted_change_.left_mul(*c) : *c;
    return IntVector(adapted.begin() + quo_rank_, adapted.end());
}

IntVector PresentedModule::lift(const IntVector& coordinates) const {
    require(int(coordinates.size()) == rank(), ErrorCode::DimensionMismatch, "coordinate vector has wrong length");
    if (rank() == 0) return IntVector(ambient_, 0);
    return free_lifts_.left_mul(coordinates);
}

}  // namespace tropmirror
