#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tropmirror/errors.hpp"

namespace tropmirror {

using Int = std::int64_t;
using IntVector = std::vector<Int>;

enum class Ring { Z, Q, F2 };

const char* ring_name(Ring ring);
Ring parse_ring(const std::string& name);

// Overflow-checked arithmetic; throws TropError(Overflow) instead of wrapping.
Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);
Int checked_neg(Int a);
Int floor_div(Int a, Int b);
Int gcd(Int a, Int b);

Int dot(const IntVector& a, const IntVector& b);
IntVector add(const IntVector& a, const IntVector& b);
IntVector sub(const IntVector& a, const IntVector& b);
IntVector scale(Int s, const IntVector& a);
bool is_zero(const IntVector& v);
Int content(const IntVector& v);  // gcd of entries, 0 for the zero vector
IntVector primitive(const IntVector& v);
IntVector mod2(const IntVector& v);

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, 0) {}
    static IntMatrix identity(int n);
    static IntMatrix from_rows(const std::vector<IntVector>& rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Int& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
    Int operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

    IntVector row(int i) const;
    IntVector col(int j) const;
    void set_row(int i, const IntVector& v);
    void append_row(const IntVector& v);
    std::vector<IntVector> row_list() const;

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& other) const;
    IntVector operator*(const IntVector& v) const;  // column action
    IntVector left_mul(const IntVector& v) const;    // row action v^T * A
    bool operator==(const IntMatrix& other) const = default;

    IntMatrix mod2() const;
    IntMatrix select_rows(const std::vector<int>& idx) const;
    IntMatrix select_cols(const std::vector<int>& idx) const;
    bool is_zero() const;

    // Elementary operations; all checked.
    void swap_rows(int a, int b);
    void swap_cols(int a, int b);
    void add_row_multiple(int target, int source, Int factor);  // row_t += f*row_s
    void add_col_multiple(int target, int source, Int factor);
    void negate_row(int r);
    void negate_col(int c);

    std::string to_string() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Int> data_;
};

struct SmithForm {
    IntMatrix S;  // U * A * V
    IntMatrix U;
    IntMatrix V;
    std::vector<Int> invariants;  // nonzero diagonal entries d1 | d2 | ...
    int rank = 0;
};

struct HermiteForm {
    IntMatrix H;  // W * A, row Hermite normal form
    IntMatrix W;
    int rank = 0;
    std::vector<int> pivots;  // pivot column per nonzero row
};

struct HermiteSmith {
    HermiteForm hermite;
    SmithForm smith;
};

SmithForm smith_form(const IntMatrix& A);
HermiteForm hermite_form(const IntMatrix& A);
HermiteSmith hermite_smith(const IntMatrix& A);

/// Nonzero rows of the row Hermite form: canonical basis of the row span.
IntMatrix row_span_basis(const IntMatrix& A);

/// Rows form a basis of {x : A x = 0} (a saturated lattice), in Hermite form.
IntMatrix integral_kernel(const IntMatrix& A);

Int determinant(const IntMatrix& A);
IntMatrix inverse_unimodular(const IntMatrix& A);

struct RationalVector {
    IntVector numerators;
    Int denominator = 1;
};

/// Some x with A x = b over the ring (F2: entries read mod 2), or nullopt.
std::optional<RationalVector> solve(const IntMatrix& A, const IntVector& b, Ring ring);
std::optional<IntVector> solve_z(const IntMatrix& A, const IntVector& b);
std::optional<IntVector> solve_f2(const IntMatrix& A, const IntVector& b);

/// Precomputed Smith data for repeated integral solves against a fixed matrix.
class IntegralSolver {
public:
    explicit IntegralSolver(const IntMatrix& A);
    std::optional<IntVector> solve(const IntVector& b) const;
    int rank() const { return form_.rank; }

private:
    int rows_ = 0;
    int cols_ = 0;
    SmithForm form_;
};

int rank_over(const IntMatrix& A, Ring ring);

/// Dense matrix over F2 with packed bit rows.
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(int rows, int cols);
    static F2Matrix from_int(const IntMatrix& A);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int words_per_row() const { return words_; }
    bool get(int i, int j) const;
    void set(int i, int j, bool v);
    void flip(int i, int j);
    void xor_row(int target, int source);
    void swap_rows(int a, int b);
    const std::uint64_t* row_data(int i) const { return bits_.data() + std::size_t(i) * words_; }
    std::uint64_t* row_data(int i) { return bits_.data() + std::size_t(i) * words_; }

    int rank() const;
    /// Some x with A x = b, or nullopt.
    std::optional<std::vector<std::uint8_t>> solve(const std::vector<std::uint8_t>& b) const;
    /// Basis of {x : A x = 0}.
    std::vector<std::vector<std::uint8_t>> nullspace() const;
    IntMatrix to_int() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    int words_ = 0;
    std::vector<std::uint64_t> bits_;
};

}  // namespace tropmirror
