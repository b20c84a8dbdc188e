#pragma once

#include "trilie/linalg.hpp"

#include <array>
#include <string>
#include <vector>

namespace trilie {

using Triple = std::array<std::size_t, 3>;

/// Sign of the permutation sorting three distinct indices, with the sorted
/// triple written to out. Returns 0 when two indices coincide.
int sort_triple(std::size_t i, std::size_t j, std::size_t k, Triple& out);

/// Bracket tensor of a 3-Lie algebra in a fixed basis (0-based indices).
///
/// Only brackets [e_i, e_j, e_k] with i < j < k are supplied; every
/// permutation is answered from a signed lookup table, and brackets with a
/// repeated index are zero.
class StructureConstants {
public:
    /// Abelian algebra of the given dimension. Dimension 0 is rejected.
    explicit StructureConstants(std::size_t dim);

    std::size_t dim() const { return dim_; }

    /// Sets [e_i, e_j, e_k] (any order of distinct indices; the permutation
    /// sign is applied so the sorted entry is consistent).
    void set_bracket(std::size_t i, std::size_t j, std::size_t k, const Vector& value);

    /// Signed lookup of [e_i, e_j, e_k].
    const SparseVector& basis_bracket(std::size_t i, std::size_t j, std::size_t k) const
    {
        return table_[(i * dim_ + j) * dim_ + k];
    }

    /// Trilinear extension to arbitrary coordinate vectors.
    Vector bracket(const Vector& x, const Vector& y, const Vector& z) const;

    /// Nonzero brackets with sorted arguments, in lexicographic order.
    std::vector<std::pair<Triple, SparseVector>> entries() const;

    bool is_abelian() const { return nonzero_ == 0; }

    bool operator==(const StructureConstants& other) const
    {
        return dim_ == other.dim_ && table_ == other.table_;
    }

private:
    SparseVector& slot(std::size_t i, std::size_t j, std::size_t k) { return table_[(i * dim_ + j) * dim_ + k]; }

    std::size_t dim_;
    std::size_t nonzero_ = 0;
    std::vector<SparseVector> table_;
};

/// A linear subspace, stored as its canonical reduced row-echelon basis so
/// that equal subspaces compare equal.
class Subspace {
public:
    explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}

    static Subspace span(std::size_t ambient_dim, const std::vector<Vector>& vectors);
    static Subspace whole(std::size_t ambient_dim);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    bool is_zero() const { return basis_.empty(); }
    const std::vector<Vector>& basis() const { return basis_; }

    bool contains(const Vector& v) const;
    bool contains(const Subspace& other) const;

    Subspace operator+(const Subspace& other) const;
    Subspace intersect(const Subspace& other) const;

    /// Annihilator under the standard dot product: { x : b . x = 0 }.
    Subspace annihilator() const;

    bool operator==(const Subspace& other) const = default;

private:
    std::size_t ambient_;
    std::vector<Vector> basis_;
};

struct FilippovViolation {
    std::array<std::size_t, 5> indices;  ///< (a, b, c, d, e) with a<b<c, d<e
    Vector residual;
};

struct FilippovReport {
    bool pass = true;
    std::size_t violation_count = 0;
    std::vector<FilippovViolation> violations;  ///< first few, in index order
};

/// Exhaustive check of
///   [[e_a,e_b,e_c],e_d,e_e] = [[e_a,e_d,e_e],e_b,e_c] + [e_a,[e_b,e_d,e_e],e_c] + [e_a,e_b,[e_c,e_d,e_e]]
/// over a<b<c, d<e. At most max_recorded violations are kept.
FilippovReport check_filippov(const StructureConstants& sc, std::size_t max_recorded = 32);

Subspace derived_algebra(const StructureConstants& sc);
Subspace center(const StructureConstants& sc);

bool is_ideal(const StructureConstants& sc, const Subspace& w);
bool is_subalgebra(const StructureConstants& sc, const Subspace& w);

/// Span of [u, v, w] over u in a, v in b, w in c (given as subspaces).
Subspace bracket_span(const StructureConstants& sc, const Subspace& a, const Subspace& b, const Subspace& c);

/// Smallest ideal containing w.
Subspace ideal_closure(const StructureConstants& sc, const Subspace& w);

struct NilpotencySeries {
    std::vector<Subspace> series;  ///< I^0 = I, I^s = [I^{s-1}, I, L], up to stabilization
    bool nilpotent = false;
};

/// Throws InputError when i is not an ideal.
NilpotencySeries nilpotency_series(const StructureConstants& sc, const Subspace& i);

inline bool is_nilpotent(const StructureConstants& sc)
{
    return nilpotency_series(sc, Subspace::whole(sc.dim())).nilpotent;
}

}  // namespace trilie
