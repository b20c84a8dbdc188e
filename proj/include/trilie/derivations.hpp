#pragma once

#include "trilie/forms.hpp"

#include <vector>

namespace trilie {

/// Endomorphism in the fixed basis; column j holds the image of e_j.
struct LinearMap {
    Matrix m;

    LinearMap() = default;
    explicit LinearMap(Matrix matrix);

    std::size_t dim() const { return m.rows(); }
    Vector operator()(const Vector& x) const { return m * x; }
    bool invertible() const { return nonsingular(m); }

    bool operator==(const LinearMap& other) const = default;
};

LinearMap commutator(const LinearMap& a, const LinearMap& b);

struct TripleViolation {
    std::array<std::size_t, 3> indices;
    Vector residual;  ///< D[e_i,e_j,e_k] - [De_i,e_j,e_k] - [e_i,De_j,e_k] - [e_i,e_j,De_k]
};

struct DerivationReport {
    bool pass = true;
    std::size_t violation_count = 0;
    std::vector<TripleViolation> violations;
};

DerivationReport is_derivation(const StructureConstants& sc, const LinearMap& d, std::size_t max_recorded = 32);

/// Canonical basis (RREF of row-major vectorizations) of Der(L).
std::vector<LinearMap> derivation_space(const StructureConstants& sc);

/// Canonical basis of Der_B(L) = { D in Der(L) : B(Dx,y) + B(x,Dy) = 0 }.
/// Throws InputError unless b is a metric for sc.
std::vector<LinearMap> metric_derivation_space(const StructureConstants& sc, const BilinearForm& b);

struct MapSearch {
    std::optional<LinearMap> map;
    std::size_t attempts_used = 0;
    bool nonexistence_proved = false;
    Vector witness;

    bool found() const { return map.has_value(); }
};

MapSearch find_invertible_member(const std::vector<LinearMap>& space, std::uint64_t seed = 0, std::size_t attempts = 64);

/// f(Dx, y) + f(x, Dy) = 0 on all basis pairs.
bool check_skew_for_form(const BilinearForm& f, const LinearMap& d);

struct OmegaFromDerivation {
    BilinearForm omega;  ///< omega(x, y) = B(Dx, y)
    SymplecticReport report;
};

/// Forward direction of the symplectic/derivation correspondence on a metric
/// algebra. Throws InputError when b is not a metric or d is not a B-skew
/// derivation. A singular d still yields its (degenerate) form, which the
/// report flags as non-symplectic.
OmegaFromDerivation omega_from_derivation(const StructureConstants& sc, const BilinearForm& b, const LinearMap& d);

struct DerivationFromOmega {
    LinearMap d;  ///< unique solution of B(Dx, y) = omega(x, y)
    bool invertible = false;
    bool in_metric_derivations = false;
    bool round_trip = false;  ///< B(D., .) reproduces omega exactly
};

/// Reverse direction. Solves one linear system per basis image. Throws
/// InputError when b is degenerate.
DerivationFromOmega derivation_from_omega(const StructureConstants& sc, const BilinearForm& b, const BilinearForm& omega);

namespace detail {

// Constraint rows over row-major vectorized maps (unknown D(r,c) at r*n + c).
void append_derivation_constraints(const StructureConstants& sc, EchelonBasis& eb);
void append_skew_constraints(const BilinearForm& b, EchelonBasis& eb);

}  // namespace detail

}  // namespace trilie
