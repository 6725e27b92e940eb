#include "tropmirror/exterior.hpp"

#include <bit>
#include <mutex>

namespace tropmirror {

Int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

namespace {

struct BladeTable {
    std::vector<Blade> list;
    std::map<Blade, int> index;
};

std::mutex blade_mutex;
std::map<std::pair<int, int>, BladeTable> blade_tables;

const BladeTable& blade_table(int m, int p) {
    std::lock_guard<std::mutex> lock(blade_mutex);
    auto key = std::make_pair(m, p);
    auto it = blade_tables.find(key);
    if (it != blade_tables.end()) return it->second;
    BladeTable t;
    if (p >= 0 && p <= m) {
        std::vector<int> idx(p);
        for (int i = 0; i < p; ++i) idx[i] = i;
        for (;;) {
            Blade b = 0;
            for (int i : idx) b |= Blade(1) << i;
            t.index[b] = int(t.list.size());
            t.list.push_back(b);
            int i = p - 1;
            while (i >= 0 && idx[i] == m - p + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return blade_tables.emplace(key, std::move(t)).first->second;
}

// Sign of e_a ^ e_b relative to e_{a|b}: (-1)^(pairs i in a, j in b with i > j).
int shuffle_sign(Blade a, Blade b) {
    int inversions = 0;
    for (Blade x = a; x; x &= x - 1) {
        int i = std::countr_zero(x);
        inversions += std::popcount(b & ((Blade(1) << i) - 1));
    }
    return (inversions & 1) ? -1 : 1;
}

}  // namespace

const std::vector<Blade>& blades(int m, int p) { return blade_table(m, p).list; }

int blade_index(int m, int p, Blade b) {
    const auto& t = blade_table(m, p);
    auto it = t.index.find(b);
    require(it != t.index.end(), ErrorCode::Internal, "blade outside the index table");
    return it->second;
}

Multivector Multivector::scalar(int rank, Int value) {
    Multivector m(rank, 0);
    m.add_term(0, value);
    return m;
}

Multivector Multivector::vector(const IntVector& coords) {
    Multivector m(int(coords.size()), 1);
    for (std::size_t i = 0; i < coords.size(); ++i) m.add_term(Blade(1) << i, coords[i]);
    return m;
}

Multivector Multivector::basis(int rank, const std::vector<int>& indices) {
    Multivector m = scalar(rank, 1);
    for (int i : indices) {
        IntVector e(rank, 0);
        e[i] = 1;
        m = wedge(m, vector(e));
    }
    return m;
}

Multivector Multivector::from_coords(int rank, int degree, const IntVector& coords) {
    const auto& list = blades(rank, degree);
    require(coords.size() == list.size(), ErrorCode::DimensionMismatch, "coordinate vector does not match Lambda^p");
    Multivector m(rank, degree);
    for (std::size_t i = 0; i < list.size(); ++i) m.add_term(list[i], coords[i]);
    return m;
}

Int Multivector::coefficient(Blade b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? 0 : it->second;
}

void Multivector::add_term(Blade b, Int c) {
    if (c == 0) return;
    require(std::popcount(b) == degree_, ErrorCode::Internal, "term degree mismatch");
    Int v = checked_add(coefficient(b), c);
    if (v == 0)
        terms_.erase(b);
    else
        terms_[b] = v;
}

IntVector Multivector::to_coords() const {
    const auto& list = blades(rank_, degree_);
    IntVector out(list.size(), 0);
    for (const auto& [b, c] : terms_) out[blade_index(rank_, degree_, b)] = c;
    return out;
}

Multivector Multivector::operator+(const Multivector& o) const {
    require(rank_ == o.rank_ && degree_ == o.degree_, ErrorCode::RankMismatch, "sum of multivectors of different type");
    Multivector r = *this;
    for (const auto& [b, c] : o.terms_) r.add_term(b, c);
    return r;
}

Multivector Multivector::operator-(const Multivector& o) const { return *this + o.scaled(-1); }

Multivector Multivector::scaled(Int s) const {
    Multivector r(rank_, degree_);
    for (const auto& [b, c] : terms_) r.add_term(b, checked_mul(s, c));
    return r;
}

Multivector wedge(const Multivector& a, const Multivector& b) {
    require(a.rank() == b.rank(), ErrorCode::RankMismatch, "wedge of multivectors of different rank");
    require(a.degree() + b.degree() <= a.rank(), ErrorCode::DegreeOverflow, "wedge degree exceeds the rank");
    Multivector r(a.rank(), a.degree() + b.degree());
    for (const auto& [ba, ca] : a.terms())
        for (const auto& [bb, cb] : b.terms()) {
            if (ba & bb) continue;
            r.add_term(ba | bb, checked_mul(shuffle_sign(ba, bb), checked_mul(ca, cb)));
        }
    return r;
}

Multivector contract_vector(const IntVector& v, const Multivector& omega) {
    require(int(v.size()) == omega.rank(), ErrorCode::RankMismatch, "contraction against a form of different rank");
    require(omega.degree() >= 1, ErrorCode::DegreeOverflow, "contraction of a scalar");
    Multivector r(omega.rank(), omega.degree() - 1);
    for (const auto& [b, c] : omega.terms()) {
        int k = 0;
        for (Blade x = b; x; x &= x - 1, ++k) {
            int i = std::countr_zero(x);
            if (v[i] == 0) continue;
            Int coeff = checked_mul(c, v[i]);
            r.add_term(b & ~(Blade(1) << i), (k & 1) ? checked_neg(coeff) : coeff);
        }
    }
    return r;
}

Multivector contract(const Multivector& w, const Multivector& omega) {
    require(w.rank() == omega.rank(), ErrorCode::RankMismatch, "contraction against a form of different rank");
    require(w.degree() <= omega.degree(), ErrorCode::DegreeOverflow, "contracting degree exceeds the form degree");
    Multivector r(omega.rank(), omega.degree() - w.degree());
    for (const auto& [b, c] : w.terms()) {
        Multivector acc = omega;
        // factors of e*_{j1} ^ ... ^ e*_{jk}: apply e*_{jk} first
        std::vector<int> idx;
        for (Blade x = b; x; x &= x - 1) idx.push_back(std::countr_zero(x));
        for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
            IntVector e(omega.rank(), 0);
            e[*it] = 1;
            acc = contract_vector(e, acc);
        }
        r = r + acc.scaled(c);
    }
    return r;
}

Multivector volume_form(int rank) {
    Multivector m(rank, rank);
    m.add_term(rank >= 32 ? ~Blade(0) : (Blade(1) << rank) - 1, 1);
    return m;
}

IntVector wedge_coords(const std::vector<IntVector>& vectors, int m) {
    Multivector acc = Multivector::scalar(m, 1);
    for (const auto& v : vectors) {
        require(int(v.size()) == m, ErrorCode::RankMismatch, "wedge factor of wrong rank");
        acc = wedge(acc, Multivector::vector(v));
    }
    return acc.to_coords();
}

IntMatrix exterior_power(const IntMatrix& R, int p) {
    const int mt = R.rows(), ms = R.cols();
    const auto& src = blades(ms, p);
    const auto& dst = blades(mt, p);
    IntMatrix out(int(dst.size()), int(src.size()));
    for (std::size_t j = 0; j < src.size(); ++j) {
        std::vector<IntVector> images;
        for (Blade x = src[j]; x; x &= x - 1) images.push_back(R.col(std::countr_zero(x)));
        IntVector img = wedge_coords(images, mt);
        for (std::size_t i = 0; i < dst.size(); ++i) out(int(i), int(j)) = img[i];
    }
    return out;
}

PresentedModule annihilator_wedge(const std::vector<IntVector>& vectors, int rank, int p) {
    IntMatrix A(0, rank);
    for (const auto& v : vectors) A.append_row(v);
    IntMatrix K = vectors.empty() ? IntMatrix::identity(rank) : integral_kernel(A);
    const int k = K.rows();
    std::vector<IntVector> gens;
    for (Blade b : blades(k, p)) {
        std::vector<IntVector> factors;
        for (Blade x = b; x; x &= x - 1) factors.push_back(K.row(std::countr_zero(x)));
        gens.push_back(wedge_coords(factors, rank));
    }
    return PresentedModule::span(int(binomial(rank, p)), gens);
}

}  // namespace tropmirror
