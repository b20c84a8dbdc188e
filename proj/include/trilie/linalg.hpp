#pragma once

#include "trilie/scalar.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace trilie {

/// Dense row-major matrix of exact rationals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Scalar(0)) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vector& d);
    /// Builds a matrix whose columns are the given vectors.
    static Matrix from_columns(std::size_t rows, const std::vector<Vector>& columns);
    /// Inverse of row-major vectorization.
    static Matrix from_vectorized(std::size_t rows, std::size_t cols, const Vector& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector row(std::size_t r) const;
    Vector column(std::size_t c) const;
    /// Row-major flattening; used to treat spaces of matrices as vector spaces.
    const Vector& vectorized() const { return data_; }

    Matrix transpose() const;
    bool is_zero() const;
    bool is_symmetric() const;
    bool is_skew() const;

    Vector operator*(const Vector& v) const;
    Matrix operator*(const Matrix& other) const;
    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;
    Matrix operator-() const;
    Matrix scaled(const Scalar& s) const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
Scalar determinant(const Matrix& m);

inline bool nonsingular(const Matrix& m) { return !is_zero(determinant(m)); }

/// Solves a x = b for nonsingular square a. Throws InputError when a is singular.
Vector solve(const Matrix& a, const Vector& b);

/// Incrementally maintained reduced row-echelon basis of a row space.
///
/// Rows are stored as primitive integer vectors (fraction-free elimination,
/// content divided out after every combination) and kept fully reduced: each
/// pivot column is zero in every other stored row. The pivot of a row is its
/// first nonzero column, so the rational RREF read back by rows() is canonical
/// for the row space.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t cols) : cols_(cols) {}

    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return rows_.size(); }

    /// Adds a row; returns true when it was independent of the current rows.
    bool insert(const SparseVector& row);
    bool insert(const Vector& row);

    bool contains(const Vector& row) const;

    /// Canonical rational RREF rows, ordered by pivot column.
    std::vector<Vector> rows() const;
    std::vector<std::size_t> pivots() const;

    /// Canonical RREF basis of { x : r . x = 0 for every stored row r }.
    std::vector<Vector> kernel() const;

private:
    using IntRow = std::vector<std::pair<std::size_t, mpz_class>>;

    IntRow to_int_row(const SparseVector& row) const;
    void reduce(IntRow& r) const;

    std::size_t cols_;
    std::map<std::size_t, IntRow> rows_;  // keyed by pivot column
};

/// Null space basis (canonical RREF) of the system whose rows are given.
std::vector<Vector> kernel(std::size_t cols, const std::vector<SparseVector>& rows);

/// Outcome of a seeded search for a nonsingular element of a linear space of
/// square matrices.
struct MemberSearch {
    std::optional<Matrix> member;
    std::vector<Scalar> coefficients;  ///< combination that produced member
    std::size_t attempts_used = 0;
    /// Set when every element of the space provably is singular: the stacked
    /// rows (or columns) share a nonzero kernel vector, recorded as witness.
    bool nonexistence_proved = false;
    Vector witness;

    bool found() const { return member.has_value(); }
};

/// Samples integer combinations of space deterministically from seed. Attempt
/// 0 is the plain sum of the basis; attempt t >= 1 draws coefficients from
/// [-(t+1), t+1]. Throws InputError on an empty space or mismatched shapes.
MemberSearch find_nonsingular_member(std::span<const Matrix> space, std::uint64_t seed, std::size_t attempts);

}  // namespace trilie
