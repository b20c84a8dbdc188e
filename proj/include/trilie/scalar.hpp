#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trilie {

/// Exact rational scalar. Values are kept canonical (lowest terms, positive
/// denominator) by every operation in this library.
using Scalar = mpq_class;

/// Dense coordinate vector.
using Vector = std::vector<Scalar>;

/// Sparse coordinate vector: (index, nonzero value) pairs sorted by index.
using SparseVector = std::vector<std::pair<std::size_t, Scalar>>;

/// Raised when an operation's precondition on its inputs does not hold.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parses "p" or "p/q" (optional leading '-', q > 0). Anything else,
/// including decimal or exponent notation, is rejected.
Scalar parse_scalar(std::string_view text);

/// Canonical text form: "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Scalar& value);

inline bool is_zero(const Scalar& s) { return sgn(s) == 0; }

bool is_zero(const Vector& v);

Vector zero_vector(std::size_t n);
Vector unit_vector(std::size_t n, std::size_t i);

Scalar dot(const Vector& a, const Vector& b);

Vector to_dense(const SparseVector& v, std::size_t n);
SparseVector to_sparse(const Vector& v);

/// out += factor * v
void axpy(Vector& out, const Scalar& factor, const SparseVector& v);
void axpy(Vector& out, const Scalar& factor, const Vector& v);

}  // namespace trilie
