#include "tropmirror/complex.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace tropmirror {

void SparseMatrix::add(int row, int col, Int value) {
    require(row >= 0 && row < rows_ && col >= 0 && col < cols_, ErrorCode::DimensionMismatch, "sparse entry out of range");
    if (value == 0) return;
    auto& c = columns_[col];
    auto it = c.find(row);
    if (it == c.end()) {
        c.emplace(row, value);
        return;
    }
    it->second = checked_add(it->second, value);
    if (it->second == 0) c.erase(it);
}

Int SparseMatrix::get(int row, int col) const {
    auto it = columns_[col].find(row);
    return it == columns_[col].end() ? 0 : it->second;
}

std::size_t SparseMatrix::nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.size();
    return n;
}

IntVector SparseMatrix::apply(const IntVector& x) const {
    require(int(x.size()) == cols_, ErrorCode::DimensionMismatch, "vector length does not match the matrix");
    IntVector y(rows_, 0);
    for (int j = 0; j < cols_; ++j) {
        if (x[j] == 0) continue;
        for (const auto& [i, v] : columns_[j]) y[i] = checked_add(y[i], checked_mul(v, x[j]));
    }
    return y;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& other) const {
    require(cols_ == other.rows_, ErrorCode::DimensionMismatch, "sparse product of incompatible shapes");
    SparseMatrix out(rows_, other.cols_);
    for (int j = 0; j < other.cols_; ++j)
        for (const auto& [k, b] : other.columns_[j])
            for (const auto& [i, a] : columns_[k]) out.add(i, j, checked_mul(a, b));
    return out;
}

bool SparseMatrix::is_zero() const {
    for (const auto& c : columns_)
        if (!c.empty()) return false;
    return true;
}

IntMatrix SparseMatrix::to_dense() const {
    IntMatrix M(rows_, cols_);
    for (int j = 0; j < cols_; ++j)
        for (const auto& [i, v] : columns_[j]) M(i, j) = v;
    return M;
}

IntegralRank integral_rank(const SparseMatrix& A) {
    const int m = A.rows(), n = A.cols();
    std::vector<std::map<int, Int>> rows(m);
    std::vector<std::set<int>> cols(n);
    for (int j = 0; j < n; ++j)
        for (const auto& [i, v] : A.column(j)) {
            rows[i][j] = v;
            cols[j].insert(i);
        }
    IntegralRank out;
    std::vector<bool> row_alive(m, true), col_alive(n, true);
    for (;;) {
        // unit pivot of least fill-in cost
        int best_r = -1, best_c = -1;
        std::size_t best_cost = SIZE_MAX;
        for (int i = 0; i < m && best_cost > 0; ++i) {
            if (!row_alive[i]) continue;
            for (const auto& [j, v] : rows[i]) {
                if (v != 1 && v != -1) continue;
                std::size_t cost = (rows[i].size() - 1) * (cols[j].size() - 1);
                if (cost < best_cost) {
                    best_cost = cost;
                    best_r = i;
                    best_c = j;
                    if (cost == 0) break;
                }
            }
        }
        if (best_r < 0) break;
        const Int u = rows[best_r][best_c];
        std::vector<int> others(cols[best_c].begin(), cols[best_c].end());
        for (int r2 : others) {
            if (r2 == best_r) continue;
            Int factor = checked_mul(rows[r2][best_c], u);
            for (const auto& [j, v] : rows[best_r]) {
                Int nv = checked_sub(rows[r2].count(j) ? rows[r2][j] : 0, checked_mul(factor, v));
                if (nv == 0) {
                    rows[r2].erase(j);
                    cols[j].erase(r2);
                } else {
                    rows[r2][j] = nv;
                    cols[j].insert(r2);
                }
            }
        }
        for (const auto& [j, v] : rows[best_r]) cols[j].erase(best_r);
        rows[best_r].clear();
        row_alive[best_r] = false;
        col_alive[best_c] = false;
        ++out.rank;
    }
    std::vector<int> rest_rows, rest_cols;
    for (int i = 0; i < m; ++i)
        if (!rows[i].empty()) rest_rows.push_back(i);
    for (int j = 0; j < n; ++j)
        if (!cols[j].empty()) rest_cols.push_back(j);
    if (!rest_rows.empty()) {
        IntMatrix D(int(rest_rows.size()), int(rest_cols.size()));
        std::map<int, int> col_pos;
        for (std::size_t k = 0; k < rest_cols.size(); ++k) col_pos[rest_cols[k]] = int(k);
        for (std::size_t k = 0; k < rest_rows.size(); ++k)
            for (const auto& [j, v] : rows[rest_rows[k]]) D(int(k), col_pos[j]) = v;
        SmithForm f = smith_form(D);
        out.rank += f.rank;
        for (Int d : f.invariants)
            if (d > 1) out.torsion.push_back(d);
    }
    return out;
}

int f2_rank(const SparseMatrix& A) {
    F2Matrix M(A.rows(), A.cols());
    for (int j = 0; j < A.cols(); ++j)
        for (const auto& [i, v] : A.column(j))
            if (v & 1) M.set(i, j, true);
    return M.rank();
}

Bits Bits::from_int(const IntVector& v) {
    Bits b(int(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] & 1) b.set(int(i), true);
    return b;
}

void Bits::set(int i, bool v) {
    if (v)
        words[i >> 6] |= std::uint64_t(1) << (i & 63);
    else
        words[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
}

void Bits::xor_with(const Bits& o) {
    if (o.size > size) {
        size = o.size;
        words.resize(o.words.size(), 0);
    }
    for (std::size_t k = 0; k < o.words.size(); ++k) words[k] ^= o.words[k];
}

bool Bits::any() const {
    for (auto w : words)
        if (w) return true;
    return false;
}

int Bits::lowest() const {
    for (std::size_t k = 0; k < words.size(); ++k)
        if (words[k]) return int(k * 64) + std::countr_zero(words[k]);
    return -1;
}

IntVector Bits::to_int() const {
    IntVector v(size, 0);
    for (int i = 0; i < size; ++i) v[i] = get(i);
    return v;
}

bool F2Reducer::add(const Bits& column) {
    require(column.size == rows_, ErrorCode::DimensionMismatch, "column length does not match the reducer");
    Bits col = column;
    Bits combo(count_ + 1);
    combo.set(count_, true);
    ++count_;
    for (int low = col.lowest(); low >= 0; low = col.lowest()) {
        auto it = pivot_.find(low);
        if (it == pivot_.end()) {
            pivot_[low] = int(reduced_.size());
            reduced_.push_back(std::move(col));
            combos_.push_back(std::move(combo));
            return true;
        }
        col.xor_with(reduced_[it->second]);
        combo.xor_with(combos_[it->second]);
    }
    return false;
}

std::optional<Bits> F2Reducer::express(const Bits& target) const {
    require(target.size == rows_, ErrorCode::DimensionMismatch, "target length does not match the reducer");
    Bits t = target;
    Bits combo(count_);
    for (int low = t.lowest(); low >= 0; low = t.lowest()) {
        auto it = pivot_.find(low);
        if (it == pivot_.end()) return std::nullopt;
        t.xor_with(reduced_[it->second]);
        combo.xor_with(combos_[it->second]);
    }
    Bits out(count_);
    for (int i = 0; i < count_ && i < combo.size; ++i) out.set(i, combo.get(i));
    return out;
}

int HomologySummary::total_rank() const {
    int t = 0;
    for (int r : ranks) t += r;
    return t;
}

std::string HomologySummary::to_string() const {
    std::ostringstream os;
    os << ring_name(ring) << ":";
    for (std::size_t q = 0; q < ranks.size(); ++q) {
        os << " H" << q << "=" << ranks[q];
        if (q < torsion.size() && !torsion[q].empty()) {
            os << "+tors(";
            for (std::size_t k = 0; k < torsion[q].size(); ++k) os << (k ? "," : "") << torsion[q][k];
            os << ")";
        }
    }
    return os.str();
}

ChainComplex::ChainComplex(int top_degree)
    : blocks_(top_degree + 1), lookup_(top_degree + 1), dims_(top_degree + 1, 0), boundary_(top_degree + 1) {}

const ChainBlock* ChainComplex::block(int q, int cell) const {
    if (q < 0 || q > top_degree()) return nullptr;
    auto it = lookup_[q].find(cell);
    return it == lookup_[q].end() ? nullptr : &blocks_[q][it->second];
}

void ChainComplex::add_block(int q, int cell, int rank) {
    require(q >= 0 && q <= top_degree(), ErrorCode::DimensionMismatch, "chain degree out of range");
    if (rank == 0) return;
    require(!lookup_[q].count(cell), ErrorCode::Internal, "cell registered twice");
    lookup_[q][cell] = int(blocks_[q].size());
    blocks_[q].push_back({cell, dims_[q], rank});
    dims_[q] += rank;
}

void ChainComplex::finalize_blocks() {
    for (int q = 0; q <= top_degree(); ++q) boundary_[q] = SparseMatrix(dim(q - 1), dim(q));
    f2_boundary_reducers_.assign(top_degree() + 2, nullptr);
}

void ChainComplex::verify(Ring ring) const {
    for (int q = 2; q <= top_degree(); ++q) {
        SparseMatrix sq = boundary_[q - 1] * boundary_[q];
        bool bad = false;
        for (int j = 0; j < sq.cols() && !bad; ++j)
            for (const auto& [i, v] : sq.column(j))
                if (ring == Ring::F2 ? (v & 1) != 0 : v != 0) {
                    bad = true;
                    break;
                }
        require(!bad, ErrorCode::BoundarySquareNonzero, "boundary squares to a nonzero map in degree " + std::to_string(q));
    }
}

IntVector ChainComplex::apply_boundary(int q, const IntVector& chain) const {
    if (q <= 0) return {};
    return boundary_[q].apply(chain);
}

bool ChainComplex::is_cycle(int q, const IntVector& chain, Ring ring) const {
    IntVector b = apply_boundary(q, chain);
    for (Int v : b)
        if (ring == Ring::F2 ? (v & 1) != 0 : v != 0) return false;
    return true;
}

IntVector ChainComplex::cell_coeffs(int q, const IntVector& chain, int cell) const {
    const ChainBlock* b = block(q, cell);
    if (!b) return {};
    return IntVector(chain.begin() + b->offset, chain.begin() + b->offset + b->rank);
}

void ChainComplex::set_cell_coeffs(int q, IntVector& chain, int cell, const IntVector& coeffs) const {
    const ChainBlock* b = block(q, cell);
    if (!b) {
        require(is_zero(coeffs), ErrorCode::SupportViolation, "nonzero coefficient on a cell outside the support");
        return;
    }
    require(int(coeffs.size()) == b->rank, ErrorCode::DimensionMismatch, "coefficient vector has wrong length");
    std::copy(coeffs.begin(), coeffs.end(), chain.begin() + b->offset);
}

std::optional<IntVector> ChainComplex::solve_boundary(int q, const IntVector& chain, Ring ring) const {
    require(int(chain.size()) == dim(q), ErrorCode::DimensionMismatch, "chain has wrong length");
    if (q + 1 > top_degree() || dim(q + 1) == 0) {
        for (Int v : chain)
            if (ring == Ring::F2 ? (v & 1) != 0 : v != 0) return std::nullopt;
        return IntVector(dim(q + 1), 0);
    }
    const SparseMatrix& B = boundary_[q + 1];
    if (ring == Ring::F2) {
        std::shared_ptr<const F2Reducer> reducer;
        {
            std::lock_guard<std::mutex> lock(*reducer_mutex_);
            if (!f2_boundary_reducers_[q + 1]) {
                auto r = std::make_shared<F2Reducer>(B.rows());
                for (int j = 0; j < B.cols(); ++j) {
                    Bits col(B.rows());
                    for (const auto& [i, v] : B.column(j))
                        if (v & 1) col.set(i, true);
                    r->add(col);
                }
                f2_boundary_reducers_[q + 1] = r;
            }
            reducer = f2_boundary_reducers_[q + 1];
        }
        auto x = reducer->express(Bits::from_int(chain));
        if (!x) return std::nullopt;
        return x->to_int();
    }
    require(ring == Ring::Z, ErrorCode::InvalidInput, "boundary solves run over Z or F2");
    return solve_z(B.to_dense(), chain);
}

std::vector<IntVector> ChainComplex::f2_homology_basis(int q) const {
    std::vector<IntVector> out;
    if (dim(q) == 0) return out;
    F2Matrix D(dim(q - 1), dim(q));
    if (q > 0)
        for (int j = 0; j < dim(q); ++j)
            for (const auto& [i, v] : boundary_[q].column(j))
                if (v & 1) D.set(i, j, true);
    std::vector<std::vector<std::uint8_t>> cycles;
    if (q > 0) {
        cycles = D.nullspace();
    } else {
        for (int j = 0; j < dim(q); ++j) {
            std::vector<std::uint8_t> e(dim(q), 0);
            e[j] = 1;
            cycles.push_back(e);
        }
    }
    F2Reducer reducer(dim(q));
    if (q + 1 <= top_degree())
        for (int j = 0; j < dim(q + 1); ++j) {
            Bits col(dim(q));
            for (const auto& [i, v] : boundary_[q + 1].column(j))
                if (v & 1) col.set(i, true);
            reducer.add(col);
        }
    for (const auto& z : cycles) {
        Bits b(dim(q));
        for (int i = 0; i < dim(q); ++i)
            if (z[i]) b.set(i, true);
        if (reducer.add(b)) out.push_back(b.to_int());
    }
    return out;
}

std::vector<Int> ChainComplex::chain_ranks() const {
    std::vector<Int> r;
    for (int q = 0; q <= top_degree(); ++q) r.push_back(dim(q));
    return r;
}

HomologySummary homology(const ChainComplex& C, Ring ring) {
    const int top = C.top_degree();
    HomologySummary H;
    H.ring = ring;
    H.ranks.assign(top + 1, 0);
    H.torsion.assign(top + 1, {});
    // rank of boundary(q) for q = 0..top+1
    std::vector<int> rk(top + 2, 0);
    std::vector<std::vector<Int>> tors(top + 2);
    for (int q = 1; q <= top; ++q) {
        if (C.dim(q) == 0 || C.dim(q - 1) == 0) continue;
        if (ring == Ring::F2) {
            rk[q] = f2_rank(C.boundary(q));
        } else {
            IntegralRank r = integral_rank(C.boundary(q));
            rk[q] = r.rank;
            tors[q] = r.torsion;
        }
    }
    for (int q = 0; q <= top; ++q) {
        H.ranks[q] = C.dim(q) - rk[q] - rk[q + 1];
        if (ring == Ring::Z) {
            H.torsion[q] = tors[q + 1];
            std::sort(H.torsion[q].begin(), H.torsion[q].end());
        }
    }
    return H;
}

Int euler_from_chains(const ChainComplex& C) {
    Int e = 0;
    for (int q = 0; q <= C.top_degree(); ++q) e += (q % 2 ? -1 : 1) * Int(C.dim(q));
    return e;
}

Int euler_from_homology(const HomologySummary& H) {
    Int e = 0;
    for (std::size_t q = 0; q < H.ranks.size(); ++q) e += (q % 2 ? -1 : 1) * Int(H.ranks[q]);
    return e;
}

}  // namespace tropmirror
