#pragma once

#include "trilie/algebra.hpp"

#include <array>
#include <string>
#include <vector>

namespace trilie {

/// Bilinear form B(x, y) = x^T m y on the fixed basis. Symmetry and skewness
/// are properties queried at use sites.
struct BilinearForm {
    Matrix m;

    BilinearForm() = default;
    explicit BilinearForm(Matrix matrix);

    std::size_t dim() const { return m.rows(); }
    Scalar operator()(const Vector& x, const Vector& y) const;
    bool nondegenerate() const { return nonsingular(m); }

    bool operator==(const BilinearForm& other) const = default;
};

struct QuadrupleViolation {
    std::array<std::size_t, 4> indices;
    Scalar residual;
};

struct MetricReport {
    bool symmetric = false;
    bool nondegenerate = false;
    bool invariant = false;
    std::size_t violation_count = 0;
    std::vector<QuadrupleViolation> violations;

    bool metric() const { return symmetric && nondegenerate && invariant; }
};

/// Invariance is B([e_a,e_b,e_c], e_d) + B(e_c, [e_a,e_b,e_d]) = 0 on all basis
/// quadruples.
MetricReport is_metric(const StructureConstants& sc, const BilinearForm& b, std::size_t max_recorded = 32);

/// Basis of the symmetric forms satisfying the invariance condition
/// (nondegeneracy dropped).
std::vector<BilinearForm> invariant_symmetric_forms(const StructureConstants& sc);

struct SymplecticReport {
    bool skew = false;
    bool nondegenerate = false;
    bool compatible = false;
    bool even_dimension = false;
    std::size_t violation_count = 0;
    std::vector<QuadrupleViolation> violations;

    bool symplectic() const { return skew && nondegenerate && compatible; }
};

/// Compatibility is the four-term condition
///   w([x2,x3,x4],x1) - w([x1,x3,x4],x2) + w([x1,x2,x4],x3) - w([x1,x2,x3],x4) = 0.
/// The left side alternates in (x1..x4), so a<b<c<d covers every quadruple.
SymplecticReport is_symplectic(const StructureConstants& sc, const BilinearForm& w, std::size_t max_recorded = 32);

/// Basis of the skew forms satisfying the compatibility condition.
std::vector<BilinearForm> symplectic_compatible_forms(const StructureConstants& sc);

struct FormSearch {
    std::optional<BilinearForm> form;
    std::size_t attempts_used = 0;
    bool nonexistence_proved = false;
    Vector witness;  ///< common kernel vector when nonexistence is proved

    bool found() const { return form.has_value(); }
};

FormSearch find_nondegenerate_member(const std::vector<BilinearForm>& space, std::uint64_t seed = 0,
                                     std::size_t attempts = 64);

/// { x : B(w, x) = 0 for all w in W }. Throws InputError for degenerate b.
Subspace orthogonal_complement(const BilinearForm& b, const Subspace& w);

struct IsotropyClass {
    bool isotropic = false;             ///< W is contained in its complement
    bool completely_isotropic = false;  ///< W equals its complement
    bool nondegenerate = false;         ///< W meets its complement in 0

    /// Most specific label: completely_isotropic, isotropic, nondegenerate or none.
    std::string label() const;
};

IsotropyClass classify_isotropy(const BilinearForm& b, const Subspace& w);

}  // namespace trilie
