#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tropmirror/linalg.hpp"
#include "tropmirror/module.hpp"

namespace tropmirror {

/// Index subset of {0..rank-1}, bit i set when e_i is a factor.
using Blade = std::uint32_t;

Int binomial(int n, int k);
/// All p-subsets of {0..m-1} in lexicographic order of their sorted index tuples.
const std::vector<Blade>& blades(int m, int p);
int blade_index(int m, int p, Blade b);

class Multivector {
public:
    Multivector() = default;
    Multivector(int rank, int degree) : rank_(rank), degree_(degree) {}
    static Multivector scalar(int rank, Int value);
    static Multivector vector(const IntVector& coords);
    static Multivector basis(int rank, const std::vector<int>& indices);
    static Multivector from_coords(int rank, int degree, const IntVector& coords);

    int rank() const { return rank_; }
    int degree() const { return degree_; }
    const std::map<Blade, Int>& terms() const { return terms_; }
    Int coefficient(Blade b) const;
    void add_term(Blade b, Int c);
    bool is_zero() const { return terms_.empty(); }
    IntVector to_coords() const;

    Multivector operator+(const Multivector& o) const;
    Multivector operator-(const Multivector& o) const;
    Multivector scaled(Int s) const;
    bool operator==(const Multivector& o) const = default;

private:
    int rank_ = 0;
    int degree_ = 0;
    std::map<Blade, Int> terms_;
};

Multivector wedge(const Multivector& a, const Multivector& b);
/// Interior product of a covector v against omega (Leibniz sign convention).
Multivector contract_vector(const IntVector& v, const Multivector& omega);
/// iota_{v1 ^ ... ^ vk} = iota_{v1} o ... o iota_{vk}; the rightmost factor acts first.
Multivector contract(const Multivector& w, const Multivector& omega);
/// Coefficient +1 on {0..rank-1}.
Multivector volume_form(int rank);

/// Coordinates of v1 ^ ... ^ vp in the blade basis of Lambda^p Z^m.
IntVector wedge_coords(const std::vector<IntVector>& vectors, int m);
/// Matrix of Lambda^p R acting on coordinate columns, for R an (m' x m) matrix.
IntMatrix exterior_power(const IntMatrix& R, int p);

/// Span of Lambda^p of the integral orthogonal of the given vectors in Z^rank.
PresentedModule annihilator_wedge(const std::vector<IntVector>& vectors, int rank, int p);

}  // namespace tropmirror
