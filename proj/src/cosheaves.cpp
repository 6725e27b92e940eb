#include "tropmirror/cosheaves.hpp"

#include <sstream>

#include "tropmirror/exterior.hpp"

namespace tropmirror {

namespace {

bool unit_invariants(const IntMatrix& A, int expected_rank) {
    if (A.rows() == 0 || A.cols() == 0) return expected_rank == 0;
    SmithForm f = smith_form(A);
    if (f.rank != expected_rank) return false;
    for (Int d : f.invariants)
        if (d != 1) return false;
    return true;
}

std::string cell_text(const CellPoset& P, int cell) {
    return "(" + format_vector(IntVector(P.tau(cell).begin(), P.tau(cell).end())) + ", " +
           format_vector(IntVector(P.sigma(cell).begin(), P.sigma(cell).end())) + ")";
}

}  // namespace

Stratum make_stratum(const CentralTriangulation& side, const Simplex& rays) {
    const int full = side.rank();
    Stratum s;
    s.rays = rays;
    const int k = int(rays.size());
    s.rank = full - k;
    if (k == 0) {
        s.projection = IntMatrix::identity(full);
        s.section = IntMatrix::identity(full);
        return s;
    }
    IntMatrix B(0, full);
    for (int r : rays) B.append_row(side.point(r));
    require(unit_invariants(B, k), ErrorCode::Internal, "rays do not extend to a lattice basis");
    SmithForm f = smith_form(B);
    IntMatrix Vinv = inverse_unimodular(f.V);
    IntMatrix E = B;
    for (int i = k; i < full; ++i) E.append_row(Vinv.row(i));
    IntMatrix Einv = inverse_unimodular(E);
    s.projection = IntMatrix(s.rank, full);
    s.section = IntMatrix(full, s.rank);
    for (int j = 0; j < s.rank; ++j)
        for (int i = 0; i < full; ++i) {
            s.projection(j, i) = Einv(i, k + j);
            s.section(i, j) = E(k + j, i);
        }
    return s;
}

const char* cosheaf_name(CosheafKind kind) {
    switch (kind) {
        case CosheafKind::F: return "F";
        case CosheafKind::M: return "M";
        case CosheafKind::MDelta: return "MDelta";
        case CosheafKind::Q: return "Q";
        case CosheafKind::R: return "R";
    }
    return "?";
}

IntVector edge_direction(const CentralTriangulation& side, int a, int b) { return sub(side.point(b), side.point(a)); }

Cosheaf::Cosheaf(const CellPoset& poset, CosheafKind kind, int p) : poset_(&poset), kind_(kind), p_(p) {
    require(p >= 0 && p <= poset.n() + 1, ErrorCode::DimensionMismatch, "cosheaf degree out of range");
    require(kind == CosheafKind::F || poset.kind() == PosetKind::J, ErrorCode::InvalidInput,
            std::string(cosheaf_name(kind)) + " is defined on J posets only");
    const int size = poset.size();
    stratum_for(Simplex{});  // key 0: the whole lattice
    stratum_key_.resize(size);
    for (int c = 0; c < size; ++c) {
        const Simplex& tau = poset.tau(c);
        stratum_key_[c] = stratum_for(CentralTriangulation::has_origin(tau) ? CentralTriangulation::sigma_infty(tau) : Simplex{});
    }
    value_.reserve(size);
    for (int c = 0; c < size; ++c) {
        value_.push_back(compute_value(c));
        require(value_.back().is_free(), ErrorCode::Internal, label() + " has torsion at cell " + cell_text(poset, c));
    }
    map_.reserve(poset.covers().size());
    for (const Cover& cv : poset.covers()) {
        const PresentedModule& src = value_[cv.upper];
        const PresentedModule& tgt = value_[cv.lower];
        IntMatrix out(tgt.rank(), src.rank());
        if (src.rank() > 0 && tgt.rank() > 0) {
            const Stratum& sx = stratum(cv.upper);
            const Stratum& sy = stratum(cv.lower);
            IntMatrix wedge_map = exterior_power(sy.projection * sx.section, p_);
            for (int j = 0; j < src.rank(); ++j) {
                IntVector coords = tgt.coords(wedge_map * src.basis_vector(j));
                for (int i = 0; i < tgt.rank(); ++i) out(i, j) = coords[i];
            }
        }
        map_.push_back(std::move(out));
    }
}

std::string Cosheaf::label() const { return std::string(cosheaf_name(kind_)) + "_" + std::to_string(p_); }

int Cosheaf::stratum_for(const Simplex& rays) {
    auto it = stratum_lookup_.find(rays);
    if (it != stratum_lookup_.end()) return it->second;
    strata_.push_back(make_stratum(poset_->tau_side(), rays));
    int key = int(strata_.size()) - 1;
    stratum_lookup_[rays] = key;
    return key;
}

PresentedModule Cosheaf::multitangent(int key, const Simplex& sigma, int degree) const {
    const Stratum& st = strata_[key];
    const int ambient = int(binomial(st.rank, degree));
    if (sigma.size() < 2) return PresentedModule::zero(ambient);
    const CentralTriangulation& side = poset_->sigma_side();
    IntMatrix section_t = st.section.transpose();
    PresentedModule total = PresentedModule::zero(ambient);
    for (std::size_t a = 0; a < sigma.size(); ++a)
        for (std::size_t b = a + 1; b < sigma.size(); ++b) {
            IntVector covector = section_t * edge_direction(side, sigma[a], sigma[b]);
            total = PresentedModule::sum(total, annihilator_wedge({covector}, st.rank, degree));
        }
    return total;
}

// Generators of <C(tau)> ^ F_{p-1}(0, sigma_inf) for a cell with the origin outside tau.
std::vector<IntVector> Cosheaf::killed_generators(int cell) const {
    std::vector<IntVector> gens;
    if (p_ == 0) return gens;
    const PresentedModule lower = multitangent(0, CentralTriangulation::sigma_infty(poset_->sigma(cell)), p_ - 1);
    const int full = poset_->tau_side().rank();
    for (int u : poset_->tau(cell)) {
        Multivector ray = Multivector::vector(poset_->tau_side().point(u));
        for (int i = 0; i < lower.rank(); ++i)
            gens.push_back(wedge(ray, Multivector::from_coords(full, p_ - 1, lower.basis_vector(i))).to_coords());
    }
    return gens;
}

PresentedModule Cosheaf::mirror_quotient(int cell) const {
    return PresentedModule::quotient(multitangent(0, poset_->sigma(cell), p_), killed_generators(cell));
}

PresentedModule Cosheaf::compute_value(int cell) const {
    const Cell& c = poset_->cell(cell);
    const int key = stratum_key_[cell];
    const int ambient = int(binomial(strata_[key].rank, p_));
    const bool origin_in_tau = CentralTriangulation::has_origin(poset_->tau(cell));
    auto mdelta = [&] { return origin_in_tau ? multitangent(key, poset_->sigma(cell), p_) : mirror_quotient(cell); };
    switch (kind_) {
        case CosheafKind::F: return multitangent(key, poset_->sigma(cell), p_);
        case CosheafKind::MDelta: return mdelta();
        case CosheafKind::M: return c.has(kJS) ? mdelta() : PresentedModule::zero(ambient);
        case CosheafKind::Q: return c.has(kJub) ? mdelta() : PresentedModule::zero(ambient);
        case CosheafKind::R:
            return origin_in_tau ? PresentedModule::zero(ambient) : PresentedModule::span(ambient, killed_generators(cell));
    }
    fail(ErrorCode::Internal, "unknown cosheaf kind");
}

ChainComplex Cosheaf::chain_complex(const std::function<bool(int)>& keep) const {
    const CellPoset& P = *poset_;
    ChainComplex C(P.max_dim());
    for (int x = 0; x < P.size(); ++x)
        if (rank(x) > 0 && (!keep || keep(x))) C.add_block(P.cell(x).dim, x, rank(x));
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
                if (A(i, j)) C.boundary_mut(q).add(by->offset + i, bx->offset + j, cv.sign * A(i, j));
    }
    C.verify(Ring::Z);
    return C;
}

IntMatrix sequence_map(const Cosheaf& from, const Cosheaf& to, int cell) {
    const PresentedModule& src = from.value(cell);
    const PresentedModule& tgt = to.value(cell);
    require(src.ambient_rank() == tgt.ambient_rank(), ErrorCode::DimensionMismatch, "sequence map between different ambients");
    IntMatrix out(tgt.rank(), src.rank());
    if (tgt.rank() == 0) return out;
    for (int j = 0; j < src.rank(); ++j) {
        IntVector coords = tgt.coords(src.basis_vector(j));
        for (int i = 0; i < tgt.rank(); ++i) out(i, j) = coords[i];
    }
    return out;
}

IntVector map_chain(const ChainComplex& from, const ChainComplex& to, int q, const IntVector& chain,
                    const std::function<IntMatrix(int)>& cell_matrix) {
    IntVector out = to.zero_chain(q);
    for (const ChainBlock& b : from.blocks(q)) {
        IntVector x(chain.begin() + b.offset, chain.begin() + b.offset + b.rank);
        if (is_zero(x)) continue;
        const ChainBlock* t = to.block(q, b.cell);
        IntMatrix A = cell_matrix(b.cell);
        if (!t) {
            require(A.rows() == 0 || is_zero(A * x), ErrorCode::SupportViolation, "chain map leaves the target support");
            continue;
        }
        IntVector y = A * x;
        for (int i = 0; i < t->rank; ++i) out[t->offset + i] = checked_add(out[t->offset + i], y[i]);
    }
    return out;
}

ExactnessReport check_exact_sequences(const CellPoset& J, int p) {
    ExactnessReport report;
    const Cosheaf F(J, CosheafKind::F, p), M(J, CosheafKind::M, p), MD(J, CosheafKind::MDelta, p), Q(J, CosheafKind::Q, p),
        R(J, CosheafKind::R, p);
    auto note = [&](int cell, const std::string& what) {
        report.failures.push_back("p=" + std::to_string(p) + " cell " + cell_text(J, cell) + ": " + what);
    };
    std::vector<IntMatrix> inc_m, proj_q, inc_r, proj_f;
    for (int c = 0; c < J.size(); ++c) {
        ++report.cells_checked;
        inc_m.push_back(sequence_map(M, MD, c));
        proj_q.push_back(sequence_map(MD, Q, c));
        inc_r.push_back(sequence_map(R, F, c));
        proj_f.push_back(sequence_map(F, MD, c));
        if (M.rank(c) + Q.rank(c) != MD.rank(c)) note(c, "rank M + rank Q != rank MDelta");
        if (R.rank(c) + MD.rank(c) != F.rank(c)) note(c, "rank R + rank MDelta != rank F");
        if (!(proj_q[c] * inc_m[c]).is_zero()) note(c, "Q projection does not kill M");
        if (!(proj_f[c] * inc_r[c]).is_zero()) note(c, "MDelta projection does not kill R");
        if (!unit_invariants(inc_m[c], M.rank(c))) note(c, "M -> MDelta is not a split injection");
        if (!unit_invariants(proj_q[c], Q.rank(c))) note(c, "MDelta -> Q is not surjective");
        if (!unit_invariants(inc_r[c], R.rank(c))) note(c, "R -> F is not a split injection");
        if (!unit_invariants(proj_f[c], MD.rank(c))) note(c, "F -> MDelta is not surjective");
    }
    for (std::size_t k = 0; k < J.covers().size(); ++k) {
        const Cover& cv = J.covers()[k];
        const int x = cv.upper, y = cv.lower;
        auto natural = [&](const Cosheaf& a, const Cosheaf& b, const std::vector<IntMatrix>& seq, const char* name) {
            if (!(b.map(int(k)) * seq[x] == seq[y] * a.map(int(k))))
                note(x, std::string(name) + " does not commute with the cover to " + cell_text(J, y));
        };
        natural(M, MD, inc_m, "M -> MDelta");
        natural(MD, Q, proj_q, "MDelta -> Q");
        natural(R, F, inc_r, "R -> F");
        natural(F, MD, proj_f, "F -> MDelta");
    }
    return report;
}

bool HodgeTable::has_torsion() const {
    for (const auto& row : rows)
        for (const auto& t : row.torsion)
            if (!t.empty()) return true;
    return false;
}

std::string HodgeTable::to_text() const {
    std::ostringstream os;
    os << "ring " << ring_name(ring) << "\n";
    os << "     ";
    for (int q = 0; q <= n; ++q) os << " q=" << q;
    os << "\n";
    for (int p = 0; p <= n; ++p) {
        os << "p=" << p << "  ";
        for (int q = 0; q <= n; ++q) {
            std::string cell = std::to_string(at(p, q));
            os << std::string(4 - std::min<std::size_t>(4, cell.size()), ' ') << cell;
        }
        if (ring == Ring::Z) {
            for (int q = 0; q <= n; ++q)
                for (Int t : rows[p].torsion[q]) os << "  torsion H" << q << ":Z/" << t;
        }
        os << "\n";
    }
    return os.str();
}

HodgeTable hodge_table(const CellPoset& P, Ring ring) {
    require(P.kind() == PosetKind::P, ErrorCode::InvalidInput, "hodge tables are computed on P posets");
    HodgeTable table;
    table.ring = ring;
    table.n = P.n();
    for (int p = 0; p <= P.n(); ++p) {
        Cosheaf F(P, CosheafKind::F, p);
        table.rows.push_back(homology(F.chain_complex(), ring));
    }
    return table;
}

}  // namespace tropmirror
