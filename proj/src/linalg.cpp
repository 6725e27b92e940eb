#include "tropmirror/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace tropmirror {

const char* ring_name(Ring ring) {
    switch (ring) {
    case Ring::Z: return "z";
    case Ring::Q: return "q";
    case Ring::F2: return "f2";
    }
    return "?";
}

Ring parse_ring(const std::string& name) {
    if (name == "z" || name == "Z") return Ring::Z;
    if (name == "q" || name == "Q") return Ring::Q;
    if (name == "f2" || name == "F2") return Ring::F2;
    fail(ErrorCode::InvalidInput, "unknown ring '" + name + "'");
}

Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::Overflow, "integer addition overflow");
    return r;
}

Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) fail(ErrorCode::Overflow, "integer subtraction overflow");
    return r;
}

Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::Overflow, "integer multiplication overflow");
    return r;
}

Int checked_neg(Int a) { return checked_sub(0, a); }

Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Int gcd(Int a, Int b) {
    a = a < 0 ? checked_neg(a) : a;
    b = b < 0 ? checked_neg(b) : b;
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int dot(const IntVector& a, const IntVector& b) {
    require(a.size() == b.size(), ErrorCode::DimensionMismatch, "dot product of vectors of different length");
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
    return s;
}

IntVector add(const IntVector& a, const IntVector& b) {
    require(a.size() == b.size(), ErrorCode::DimensionMismatch, "vector sum length mismatch");
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], b[i]);
    return r;
}

IntVector sub(const IntVector& a, const IntVector& b) {
    require(a.size() == b.size(), ErrorCode::DimensionMismatch, "vector difference length mismatch");
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_sub(a[i], b[i]);
    return r;
}

IntVector scale(Int s, const IntVector& a) {
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_mul(s, a[i]);
    return r;
}

bool is_zero(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

Int content(const IntVector& v) {
    Int g = 0;
    for (Int x : v) g = gcd(g, x);
    return g;
}

IntVector primitive(const IntVector& v) {
    Int g = content(v);
    if (g <= 1) return v;
    IntVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
    return r;
}

IntVector mod2(const IntVector& v) {
    IntVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] & 1;
    return r;
}

// ---------------------------------------------------------------- IntMatrix

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, int cols) {
    IntMatrix m(int(rows.size()), cols);
    for (int i = 0; i < m.rows(); ++i) m.set_row(i, rows[i]);
    return m;
}

IntVector IntMatrix::row(int i) const {
    return IntVector(data_.begin() + std::size_t(i) * cols_, data_.begin() + std::size_t(i + 1) * cols_);
}

IntVector IntMatrix::col(int j) const {
    IntVector c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

void IntMatrix::set_row(int i, const IntVector& v) {
    require(int(v.size()) == cols_, ErrorCode::DimensionMismatch, "row length mismatch");
    std::copy(v.begin(), v.end(), data_.begin() + std::size_t(i) * cols_);
}

void IntMatrix::append_row(const IntVector& v) {
    require(int(v.size()) == cols_, ErrorCode::DimensionMismatch, "appended row length mismatch");
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
}

std::vector<IntVector> IntMatrix::row_list() const {
    std::vector<IntVector> out;
    out.reserve(rows_);
    for (int i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    require(cols_ == o.rows_, ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    IntMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            Int a = (*this)(i, k);
            if (a == 0) continue;
            for (int j = 0; j < o.cols_; ++j)
                if (o(k, j) != 0) r(i, j) = checked_add(r(i, j), checked_mul(a, o(k, j)));
        }
    return r;
}

IntVector IntMatrix::operator*(const IntVector& v) const {
    require(int(v.size()) == cols_, ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
    IntVector r(rows_, 0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if ((*this)(i, j) != 0 && v[j] != 0) r[i] = checked_add(r[i], checked_mul((*this)(i, j), v[j]));
    return r;
}

IntVector IntMatrix::left_mul(const IntVector& v) const {
    require(int(v.size()) == rows_, ErrorCode::DimensionMismatch, "vector-matrix shape mismatch");
    IntVector r(cols_, 0);
    for (int i = 0; i < rows_; ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < cols_; ++j)
            if ((*this)(i, j) != 0) r[j] = checked_add(r[j], checked_mul(v[i], (*this)(i, j)));
    }
    return r;
}

IntMatrix IntMatrix::mod2() const {
    IntMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] & 1;
    return r;
}

IntMatrix IntMatrix::select_rows(const std::vector<int>& idx) const {
    IntMatrix r(int(idx.size()), cols_);
    for (int i = 0; i < r.rows(); ++i) r.set_row(i, row(idx[i]));
    return r;
}

IntMatrix IntMatrix::select_cols(const std::vector<int>& idx) const {
    IntMatrix r(rows_, int(idx.size()));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < r.cols(); ++j) r(i, j) = (*this)(i, idx[j]);
    return r;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Int x) { return x == 0; });
}

void IntMatrix::swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(int target, int source, Int factor) {
    if (factor == 0) return;
    for (int j = 0; j < cols_; ++j)
        if ((*this)(source, j) != 0)
            (*this)(target, j) = checked_add((*this)(target, j), checked_mul(factor, (*this)(source, j)));
}

void IntMatrix::add_col_multiple(int target, int source, Int factor) {
    if (factor == 0) return;
    for (int i = 0; i < rows_; ++i)
        if ((*this)(i, source) != 0)
            (*this)(i, target) = checked_add((*this)(i, target), checked_mul(factor, (*this)(i, source)));
}

void IntMatrix::negate_row(int r) {
    for (int j = 0; j < cols_; ++j) (*this)(r, j) = checked_neg((*this)(r, j));
}

void IntMatrix::negate_col(int c) {
    for (int i = 0; i < rows_; ++i) (*this)(i, c) = checked_neg((*this)(i, c));
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------- normal forms

SmithForm smith_form(const IntMatrix& A) {
    SmithForm f;
    f.S = A;
    f.U = IntMatrix::identity(A.rows());
    f.V = IntMatrix::identity(A.cols());
    IntMatrix& S = f.S;
    const int r = A.rows(), c = A.cols();
    int t = 0;
    for (; t < std::min(r, c); ++t) {
        int pi = -1, pj = -1;
        Int best = 0;
        for (int i = t; i < r; ++i)
            for (int j = t; j < c; ++j) {
                Int a = std::llabs(S(i, j));
                if (a != 0 && (best == 0 || a < best)) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        S.swap_rows(t, pi);
        f.U.swap_rows(t, pi);
        S.swap_cols(t, pj);
        f.V.swap_cols(t, pj);
        for (;;) {
            bool changed = false;
            for (int i = t + 1; i < r; ++i) {
                if (S(i, t) == 0) continue;
                Int q = floor_div(S(i, t), S(t, t));
                S.add_row_multiple(i, t, checked_neg(q));
                f.U.add_row_multiple(i, t, checked_neg(q));
                if (S(i, t) != 0) {
                    S.swap_rows(i, t);
                    f.U.swap_rows(i, t);
                    changed = true;
                }
            }
            for (int j = t + 1; j < c; ++j) {
                if (S(t, j) == 0) continue;
                Int q = floor_div(S(t, j), S(t, t));
                S.add_col_multiple(j, t, checked_neg(q));
                f.V.add_col_multiple(j, t, checked_neg(q));
                if (S(t, j) != 0) {
                    S.swap_cols(j, t);
                    f.V.swap_cols(j, t);
                    changed = true;
                }
            }
            if (changed) continue;
            int bad = -1;
            for (int i = t + 1; i < r && bad < 0; ++i)
                for (int j = t + 1; j < c; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            S.add_row_multiple(t, bad, 1);
            f.U.add_row_multiple(t, bad, 1);
        }
        if (S(t, t) < 0) {
            S.negate_row(t);
            f.U.negate_row(t);
        }
        f.invariants.push_back(S(t, t));
    }
    f.rank = int(f.invariants.size());
    return f;
}

HermiteForm hermite_form(const IntMatrix& A) {
    HermiteForm f;
    f.H = A;
    f.W = IntMatrix::identity(A.rows());
    IntMatrix& H = f.H;
    const int r = A.rows(), c = A.cols();
    int p = 0;
    for (int j = 0; j < c && p < r; ++j) {
        for (;;) {
            int best = -1;
            for (int i = p; i < r; ++i)
                if (H(i, j) != 0 && (best < 0 || std::llabs(H(i, j)) < std::llabs(H(best, j)))) best = i;
            if (best < 0) break;
            H.swap_rows(p, best);
            f.W.swap_rows(p, best);
            bool clean = true;
            for (int i = p + 1; i < r; ++i) {
                if (H(i, j) == 0) continue;
                Int q = floor_div(H(i, j), H(p, j));
                H.add_row_multiple(i, p, checked_neg(q));
                f.W.add_row_multiple(i, p, checked_neg(q));
                if (H(i, j) != 0) clean = false;
            }
            if (clean) break;
        }
        if (p >= r || H(p, j) == 0) continue;
        if (H(p, j) < 0) {
            H.negate_row(p);
            f.W.negate_row(p);
        }
        for (int i = 0; i < p; ++i) {
            Int q = floor_div(H(i, j), H(p, j));
            H.add_row_multiple(i, p, checked_neg(q));
            f.W.add_row_multiple(i, p, checked_neg(q));
        }
        f.pivots.push_back(j);
        ++p;
    }
    f.rank = p;
    return f;
}

HermiteSmith hermite_smith(const IntMatrix& A) { return {hermite_form(A), smith_form(A)}; }

IntMatrix row_span_basis(const IntMatrix& A) {
    HermiteForm h = hermite_form(A);
    IntMatrix B(h.rank, A.cols());
    for (int i = 0; i < h.rank; ++i) B.set_row(i, h.H.row(i));
    return B;
}

IntMatrix integral_kernel(const IntMatrix& A) {
    HermiteForm h = hermite_form(A.transpose());
    IntMatrix K(0, A.cols());
    for (int i = h.rank; i < h.H.rows(); ++i) K.append_row(h.W.row(i));
    if (K.rows() == 0) return K;
    return row_span_basis(K);
}

Int determinant(const IntMatrix& A) {
    require(A.rows() == A.cols(), ErrorCode::DimensionMismatch, "determinant of non-square matrix");
    // Fraction-free Bareiss elimination.
    const int n = A.rows();
    IntMatrix M = A;
    Int sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (M(k, k) == 0) {
            int s = -1;
            for (int i = k + 1; i < n; ++i)
                if (M(i, k) != 0) {
                    s = i;
                    break;
                }
            if (s < 0) return 0;
            M.swap_rows(k, s);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                M(i, j) = checked_sub(checked_mul(M(i, j), M(k, k)), checked_mul(M(i, k), M(k, j))) / prev;
        prev = M(k, k);
    }
    return n == 0 ? 1 : checked_mul(sign, M(n - 1, n - 1));
}

IntMatrix inverse_unimodular(const IntMatrix& A) {
    require(A.rows() == A.cols(), ErrorCode::DimensionMismatch, "inverse of non-square matrix");
    SmithForm f = smith_form(A);
    require(f.rank == A.rows() && std::all_of(f.invariants.begin(), f.invariants.end(), [](Int d) { return d == 1; }),
            ErrorCode::Internal, "matrix is not unimodular");
    // U A V = I  =>  A^{-1} = V U
    return f.V * f.U;
}

// ---------------------------------------------------------------- solvers

IntegralSolver::IntegralSolver(const IntMatrix& A) : rows_(A.rows()), cols_(A.cols()), form_(smith_form(A)) {}

std::optional<IntVector> IntegralSolver::solve(const IntVector& b) const {
    require(int(b.size()) == rows_, ErrorCode::DimensionMismatch, "right-hand side length mismatch");
    IntVector ub = form_.U * b;
    IntVector y(cols_, 0);
    for (int i = 0; i < rows_; ++i) {
        if (i < form_.rank) {
            if (ub[i] % form_.invariants[i] != 0) return std::nullopt;
            y[i] = ub[i] / form_.invariants[i];
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return form_.V * y;
}

std::optional<IntVector> solve_z(const IntMatrix& A, const IntVector& b) { return IntegralSolver(A).solve(b); }

std::optional<IntVector> solve_f2(const IntMatrix& A, const IntVector& b) {
    require(int(b.size()) == A.rows(), ErrorCode::DimensionMismatch, "right-hand side length mismatch");
    F2Matrix M = F2Matrix::from_int(A);
    std::vector<std::uint8_t> rhs(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) rhs[i] = std::uint8_t(b[i] & 1);
    auto x = M.solve(rhs);
    if (!x) return std::nullopt;
    return IntVector(x->begin(), x->end());
}

std::optional<RationalVector> solve(const IntMatrix& A, const IntVector& b, Ring ring) {
    require(int(b.size()) == A.rows(), ErrorCode::DimensionMismatch, "right-hand side length mismatch");
    if (ring == Ring::Z) {
        auto x = solve_z(A, b);
        if (!x) return std::nullopt;
        return RationalVector{*x, 1};
    }
    if (ring == Ring::F2) {
        auto x = solve_f2(A, b);
        if (!x) return std::nullopt;
        return RationalVector{*x, 1};
    }
    SmithForm f = smith_form(A);
    IntVector ub = f.U * b;
    Int den = 1;
    for (int i = 0; i < A.rows(); ++i) {
        if (i >= f.rank && ub[i] != 0) return std::nullopt;
        if (i < f.rank) den = checked_mul(den / gcd(den, f.invariants[i]), f.invariants[i]);
    }
    IntVector y(A.cols(), 0);
    for (int i = 0; i < f.rank; ++i) y[i] = checked_mul(ub[i], den / f.invariants[i]);
    IntVector x = f.V * y;
    Int g = gcd(content(x), den);
    if (g > 1) {
        for (Int& v : x) v /= g;
        den /= g;
    }
    return RationalVector{x, den};
}

int rank_over(const IntMatrix& A, Ring ring) {
    if (ring == Ring::F2) return F2Matrix::from_int(A).rank();
    return smith_form(A).rank;
}

// ---------------------------------------------------------------- F2Matrix

F2Matrix::F2Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(std::size_t(rows) * ((cols + 63) / 64), 0) {}

F2Matrix F2Matrix::from_int(const IntMatrix& A) {
    F2Matrix m(A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (A(i, j) & 1) m.set(i, j, true);
    return m;
}

bool F2Matrix::get(int i, int j) const { return (row_data(i)[j >> 6] >> (j & 63)) & 1u; }

void F2Matrix::set(int i, int j, bool v) {
    std::uint64_t mask = std::uint64_t(1) << (j & 63);
    if (v)
        row_data(i)[j >> 6] |= mask;
    else
        row_data(i)[j >> 6] &= ~mask;
}

void F2Matrix::flip(int i, int j) { row_data(i)[j >> 6] ^= std::uint64_t(1) << (j & 63); }

void F2Matrix::xor_row(int target, int source) {
    std::uint64_t* t = row_data(target);
    const std::uint64_t* s = row_data(source);
    for (int w = 0; w < words_; ++w) t[w] ^= s[w];
}

void F2Matrix::swap_rows(int a, int b) {
    if (a == b) return;
    std::swap_ranges(row_data(a), row_data(a) + words_, row_data(b));
}

int F2Matrix::rank() const {
    F2Matrix m = *this;
    int r = 0;
    for (int j = 0; j < cols_ && r < rows_; ++j) {
        int p = -1;
        for (int i = r; i < rows_; ++i)
            if (m.get(i, j)) {
                p = i;
                break;
            }
        if (p < 0) continue;
        m.swap_rows(r, p);
        for (int i = r + 1; i < rows_; ++i)
            if (m.get(i, j)) m.xor_row(i, r);
        ++r;
    }
    return r;
}

std::optional<std::vector<std::uint8_t>> F2Matrix::solve(const std::vector<std::uint8_t>& b) const {
    require(int(b.size()) == rows_, ErrorCode::DimensionMismatch, "right-hand side length mismatch");
    F2Matrix m(rows_, cols_ + 1);
    for (int i = 0; i < rows_; ++i) {
        std::copy(row_data(i), row_data(i) + words_, m.row_data(i));
        if (b[i] & 1) m.set(i, cols_, true);
    }
    std::vector<int> pivot_col;
    int r = 0;
    for (int j = 0; j < cols_ && r < rows_; ++j) {
        int p = -1;
        for (int i = r; i < rows_; ++i)
            if (m.get(i, j)) {
                p = i;
                break;
            }
        if (p < 0) continue;
        m.swap_rows(r, p);
        for (int i = 0; i < rows_; ++i)
            if (i != r && m.get(i, j)) m.xor_row(i, r);
        pivot_col.push_back(j);
        ++r;
    }
    for (int i = r; i < rows_; ++i)
        if (m.get(i, cols_)) return std::nullopt;
    std::vector<std::uint8_t> x(cols_, 0);
    for (int i = 0; i < r; ++i) x[pivot_col[i]] = m.get(i, cols_) ? 1 : 0;
    return x;
}

std::vector<std::vector<std::uint8_t>> F2Matrix::nullspace() const {
    F2Matrix m = *this;
    std::vector<int> pivot_col;
    int r = 0;
    for (int j = 0; j < cols_ && r < rows_; ++j) {
        int p = -1;
        for (int i = r; i < rows_; ++i)
            if (m.get(i, j)) {
                p = i;
                break;
            }
        if (p < 0) continue;
        m.swap_rows(r, p);
        for (int i = 0; i < rows_; ++i)
            if (i != r && m.get(i, j)) m.xor_row(i, r);
        pivot_col.push_back(j);
        ++r;
    }
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<std::uint8_t>> basis;
    for (int f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        std::vector<std::uint8_t> x(cols_, 0);
        x[f] = 1;
        for (int i = 0; i < r; ++i)
            if (m.get(i, f)) x[pivot_col[i]] = 1;
        basis.push_back(std::move(x));
    }
    return basis;
}

IntMatrix F2Matrix::to_int() const {
    IntMatrix A(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) A(i, j) = get(i, j) ? 1 : 0;
    return A;
}

}  // namespace tropmirror
