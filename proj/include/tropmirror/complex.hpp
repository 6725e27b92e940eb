#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tropmirror/linalg.hpp"

namespace tropmirror {

/// Column-major sparse integer matrix.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), columns_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    void add(int row, int col, Int value);
    Int get(int row, int col) const;
    const std::map<int, Int>& column(int col) const { return columns_[col]; }
    std::size_t nonzeros() const;

    IntVector apply(const IntVector& x) const;
    SparseMatrix operator*(const SparseMatrix& other) const;
    bool is_zero() const;
    IntMatrix to_dense() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::map<int, Int>> columns_;
};

/// Rank and nonunit Smith invariants of an integral matrix.
struct IntegralRank {
    int rank = 0;
    std::vector<Int> torsion;  // invariants > 1
};

/// Unit-pivot sparse elimination followed by a dense Smith form of the remainder.
IntegralRank integral_rank(const SparseMatrix& A);
int f2_rank(const SparseMatrix& A);

/// Packed F2 vector.
struct Bits {
    std::vector<std::uint64_t> words;
    int size = 0;
    explicit Bits(int n = 0) : words((n + 63) / 64, 0), size(n) {}
    static Bits from_int(const IntVector& v);
    bool get(int i) const { return (words[i >> 6] >> (i & 63)) & 1u; }
    void set(int i, bool v);
    void flip(int i) { words[i >> 6] ^= std::uint64_t(1) << (i & 63); }
    void xor_with(const Bits& o);
    bool any() const;
    int lowest() const;  // -1 when zero
    IntVector to_int() const;
};

/// Incremental column reduction over F2 that remembers which inputs build each reduced column.
class F2Reducer {
public:
    explicit F2Reducer(int rows) : rows_(rows) {}
    /// Adds a column; true if it was independent of the previous ones.
    bool add(const Bits& column);
    int added() const { return count_; }
    int rank() const { return int(reduced_.size()); }
    /// Indicator over the added columns of a combination equal to target, or nullopt.
    std::optional<Bits> express(const Bits& target) const;
    bool in_span(const Bits& target) const { return express(target).has_value(); }

private:
    int rows_ = 0;
    int count_ = 0;
    std::vector<Bits> reduced_;
    std::vector<Bits> combos_;
    std::map<int, int> pivot_;  // lowest set row -> reduced column
};

/// One cell's coordinate block inside a chain group.
struct ChainBlock {
    int cell = 0;
    int offset = 0;
    int rank = 0;
};

struct HomologySummary {
    Ring ring = Ring::Q;
    std::vector<int> ranks;                 // per degree
    std::vector<std::vector<Int>> torsion;  // per degree, Z only
    bool operator==(const HomologySummary& o) const = default;
    int total_rank() const;
    std::string to_string() const;
};

/// Graded free chain complex assembled from per-cell blocks; boundary(q): C_q -> C_{q-1}.
class ChainComplex {
public:
    ChainComplex() = default;
    explicit ChainComplex(int top_degree);

    int top_degree() const { return int(blocks_.size()) - 1; }
    int dim(int q) const { return q < 0 || q > top_degree() ? 0 : dims_[q]; }
    const std::vector<ChainBlock>& blocks(int q) const { return blocks_[q]; }
    /// Block of a cell in degree q, or nullptr if the cell carries a zero module.
    const ChainBlock* block(int q, int cell) const;
    const SparseMatrix& boundary(int q) const { return boundary_[q]; }

    void add_block(int q, int cell, int rank);
    /// Allocates boundary matrices once all blocks are registered.
    void finalize_blocks();
    SparseMatrix& boundary_mut(int q) { return boundary_[q]; }
    /// Throws BoundarySquareNonzero if some composite is nonzero over the ring.
    void verify(Ring ring = Ring::Z) const;

    IntVector apply_boundary(int q, const IntVector& chain) const;
    bool is_cycle(int q, const IntVector& chain, Ring ring) const;
    /// Slice of a chain vector for one cell (zero vector if absent).
    IntVector cell_coeffs(int q, const IntVector& chain, int cell) const;
    void set_cell_coeffs(int q, IntVector& chain, int cell, const IntVector& coeffs) const;
    IntVector zero_chain(int q) const { return IntVector(dim(q), 0); }

    /// Some x with boundary(q+1) x = chain, or nullopt.
    std::optional<IntVector> solve_boundary(int q, const IntVector& chain, Ring ring) const;
    /// F2 homology representatives of degree q (independent modulo boundaries).
    std::vector<IntVector> f2_homology_basis(int q) const;

    std::vector<Int> chain_ranks() const;

private:
    std::vector<std::vector<ChainBlock>> blocks_;
    std::vector<std::map<int, int>> lookup_;
    std::vector<int> dims_;
    std::vector<SparseMatrix> boundary_;
    // lazily built per degree; guarded so a finished complex can be shared across threads
    mutable std::vector<std::shared_ptr<const F2Reducer>> f2_boundary_reducers_;
    std::shared_ptr<std::mutex> reducer_mutex_ = std::make_shared<std::mutex>();
};

HomologySummary homology(const ChainComplex& C, Ring ring);
/// Alternating sums of chain ranks and of homology ranks.
Int euler_from_chains(const ChainComplex& C);
Int euler_from_homology(const HomologySummary& H);

}  // namespace tropmirror
