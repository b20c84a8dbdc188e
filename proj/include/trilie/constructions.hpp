#pragma once

#include "trilie/derivations.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace trilie {

/// Origin of one basis vector of a constructed algebra.
enum class Block { base, dual, graded, b, b_dual };

std::string to_string(Block block);

/// Where each basis vector of a constructed algebra came from. For graded
/// blocks the vector is e_index (x) t^degree; for b / b_dual the index is 0 or
/// 1 (e_1, e_2 or their duals).
struct BasisTag {
    Block block = Block::base;
    std::size_t index = 0;
    std::size_t degree = 0;

    bool operator==(const BasisTag&) const = default;
};

struct ExtensionLayout {
    std::vector<BasisTag> tags;  ///< tags[i] describes basis vector i

    std::size_t dim() const { return tags.size(); }
    /// True when every (block, index, degree) occurs exactly once.
    bool is_bijection() const;
    /// Indices belonging to one block, in increasing order.
    std::vector<std::size_t> indices(Block block) const;
    Subspace block_span(Block block) const;
    /// Human readable names such as "e3", "e3*", "e3.t2", "b1", "b1*".
    std::vector<std::string> names(const std::vector<std::string>& base_names = {}) const;
};

/// Trilinear map theta: A x A x A -> A*, alternating in its arguments, stored
/// as theta(e_i, e_j, e_k) (a dual-coordinate vector) with signed lookup.
class Cocycle {
public:
    explicit Cocycle(std::size_t dim) : values_(dim) {}

    std::size_t dim() const { return values_.dim(); }
    void set(std::size_t i, std::size_t j, std::size_t k, const Vector& value) { values_.set_bracket(i, j, k, value); }
    const SparseVector& at(std::size_t i, std::size_t j, std::size_t k) const { return values_.basis_bracket(i, j, k); }
    /// theta(e_i, e_j, e_k)(e_l)
    Scalar operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const;
    std::vector<std::pair<Triple, SparseVector>> entries() const { return values_.entries(); }
    bool is_zero() const { return values_.is_abelian(); }

    bool operator==(const Cocycle& other) const = default;

private:
    StructureConstants values_;  // same alternating triple storage as a bracket
};

/// Skew form psi on A together with H: A -> A* determined by B(Hx, y) = psi(x, y)
/// for the hyperbolic pairing, i.e. (He_j)(e_l) = psi(e_j, e_l).
struct CompatibilityPair {
    BilinearForm psi;
    LinearMap h;  ///< column j holds the dual coordinates of He_j

    explicit CompatibilityPair(BilinearForm psi_form);
};

struct TruncatedCurrent {
    StructureConstants algebra;
    LinearMap grading;
    ExtensionLayout layout;
};

/// L_n = L (x) tF[t]/t^nF[t], basis e_i (x) t^p in (p, i) order. Throws
/// InputError for n < 2.
TruncatedCurrent truncated_current_algebra(const StructureConstants& sc, std::size_t n);

/// L + L* (or A + A*) with the hyperbolic form, shared by the coadjoint sum and
/// the cocycle extension.
struct DualExtension {
    StructureConstants algebra;
    BilinearForm metric;
    ExtensionLayout layout;
};

struct CoadjointSum : DualExtension {
    std::optional<LinearMap> d_tilde{};
    std::optional<BilinearForm> omega{};
};

/// The coadjoint semidirect sum. When d is given it must be an invertible
/// derivation of sc; then d_tilde = D + D* with D*f = -f o D and omega is the
/// form it induces through the hyperbolic metric.
CoadjointSum coadjoint_semidirect(const StructureConstants& sc, const std::optional<LinearMap>& d = std::nullopt);

/// Hyperbolic form f(y) + g(x) on a space of dimension 2d laid out as (A, A*).
BilinearForm hyperbolic_form(std::size_t d);

struct CocycleViolation {
    std::array<std::size_t, 5> indices;  ///< (a, b, c, d, e) with a<b<c, d<e
    Vector residual;                     ///< evaluated on every basis vector w
};

struct CocycleReport {
    /// Full condition making the twisted bracket a 3-Lie bracket: the
    /// three-term identity on theta plus the coadjoint terms
    ///   - theta(x,y,z)([u,v,w]) on the left and
    ///   - theta(x,u,v)([y,z,w]) - theta(y,u,v)([z,x,w]) - theta(z,u,v)([x,y,w]) on the right.
    bool cocycle = false;
    /// The three-term identity theta([x,u,v],y,z)+theta([y,u,v],z,x)+theta(x,y,[z,u,v]) = theta([x,y,z],u,v)
    /// alone. Implied by the full condition only in special cases.
    bool bracket_terms = false;
    /// theta(x1,x2,x3)(x4) + theta(x1,x2,x4)(x3) = 0, making theta a 4-form.
    bool alternating = false;
    std::size_t cocycle_violation_count = 0;
    std::size_t bracket_terms_violation_count = 0;
    std::size_t alternating_violation_count = 0;
    std::vector<CocycleViolation> violations;            ///< of the full condition
    std::vector<QuadrupleViolation> alternating_violations;
};

CocycleReport validate_cocycle(const StructureConstants& sc, const Cocycle& th, std::size_t max_recorded = 32);

/// T*_theta A. Throws InputError when the full cocycle condition fails; a
/// non-alternating theta still yields the algebra with metric_valid false.
struct TThetaExtension : DualExtension {
    bool metric_valid = false;
};

TThetaExtension t_theta_extension(const StructureConstants& sc, const Cocycle& th);

/// Basis of the alternating cocycles (4-forms theta satisfying the full
/// condition), canonical order.
std::vector<Cocycle> solve_alternating_cocycles(const StructureConstants& sc);

/// Which reading of the compatibility condition held.
enum class PsiSign {
    b_hx_equals_psi,        ///< B(Hx, y) = psi(x, y); condition Theta + P = 0
    b_hx_equals_minus_psi,  ///< B(Hx, y) = -psi(x, y); condition Theta - P = 0
};

std::string to_string(PsiSign sign);

struct CompatibilityViolation {
    std::array<std::size_t, 4> indices;
    Scalar residual;
};

class CompatibilityError : public InputError {
public:
    CompatibilityError(const std::string& what, std::vector<CompatibilityViolation> violations)
        : InputError(what), violations_(std::move(violations))
    {
    }
    const std::vector<CompatibilityViolation>& violations() const { return violations_; }

private:
    std::vector<CompatibilityViolation> violations_;
};

/// Residuals of Theta(x,y,z,u) + s * P(x,y,z,u) over all ordered basis
/// quadruples, where
///   Theta = theta(Dx,y,z)u - theta(Dy,z,u)x + theta(Dz,u,x)y - theta(Du,x,y)z,
///   P     = psi(x,[y,z,u]) - psi(y,[x,z,u]) + psi(z,[x,y,u]) - psi(u,[x,y,z]),
/// and s = +1 for b_hx_equals_psi, -1 otherwise. Stops after max_recorded
/// violations (at least one).
std::vector<CompatibilityViolation> compatibility_violations(const StructureConstants& sc, const Cocycle& th,
                                                             const LinearMap& d, const BilinearForm& psi,
                                                             PsiSign sign, std::size_t max_recorded = 32);

struct LiftedDerivation {
    LinearMap d_bar;
    BilinearForm omega;  ///< omega(u, v) = T(D_bar u, v) on T*_theta A
    PsiSign sign = PsiSign::b_hx_equals_psi;
    bool compatible = false;
    DerivationReport derivation;
    bool invertible = false;
    bool skew = false;
    SymplecticReport symplectic;

    bool pass() const { return compatible && derivation.pass && invertible && skew && symplectic.symplectic(); }
};

/// D_bar(x + f) = Dx - Hx - f o D. The compatibility condition is tried with
/// H from B(Hx, y) = psi(x, y) first and with the opposite sign second; the
/// reading that holds is reported. Throws InputError when d is not an
/// invertible derivation or theta fails validation, CompatibilityError when
/// neither reading holds.
LiftedDerivation lift_derivation_t_theta(const StructureConstants& sc, const Cocycle& th, const LinearMap& d,
                                         const CompatibilityPair& pair);

struct CompatibleData {
    Cocycle theta;
    BilinearForm psi;
};

/// Basis of the pairs (theta, psi), theta an alternating cocycle and psi a
/// skew form, with Theta + P = 0 for the given d.
std::vector<CompatibleData> solve_compatible_pairs(const StructureConstants& sc, const LinearMap& d);

struct IsotropicSeed {
    Subspace ideal;
    bool isotropic = false;
    bool is_ideal = false;
    bool abelian_case = false;
};

/// I = L^1 ∩ Z(L) with its isotropy check. Throws InputError unless b is a
/// metric for sc.
IsotropicSeed isotropic_seed(const StructureConstants& sc, const BilinearForm& b);

struct GreedyIsotropic {
    Subspace ideal;
    std::size_t bound = 0;  ///< floor(dim / 2)
    bool reached_bound = false;
};

/// Enlarges an isotropic ideal by trying, in order, the standard basis vectors
/// from the last to the first and then the canonical basis of seed-perp; a
/// candidate is kept when the ideal it generates with the current ideal is
/// still isotropic. Throws InputError when b is not a metric or the seed is
/// not an isotropic ideal.
GreedyIsotropic extend_isotropic_greedy(const StructureConstants& sc, const BilinearForm& b, const Subspace& seed);

/// Layout (e1*, e2*, A, e1, e2) with A-basis shifted by two.
struct DoubleExtension {
    StructureConstants algebra;
    BilinearForm metric;
    ExtensionLayout layout;
};

/// Double extension of (A, B) by the two-dimensional abelian algebra through
/// delta. Throws InputError unless b is a metric, delta is a B-skew
/// derivation and delta vanishes on the derived algebra.
DoubleExtension double_extension(const StructureConstants& sc, const BilinearForm& b, const LinearMap& delta);

struct SymplecticDoubleExtension : DoubleExtension {
    LinearMap d_tilde{};
    BilinearForm omega_tilde{};
    bool d_tilde_invertible = false;
    DerivationReport d_tilde_derivation{};
    bool d_tilde_skew = false;
    SymplecticReport symplectic{};
    bool round_trip = false;  ///< derivation_from_omega(T, omega_tilde) == d_tilde

    bool pass() const
    {
        return d_tilde_invertible && d_tilde_derivation.pass && d_tilde_skew && symplectic.symplectic() && round_trip;
    }
};

class CommutationError : public InputError {
public:
    CommutationError(const std::string& what, Matrix residual) : InputError(what), residual_(std::move(residual)) {}
    const Matrix& residual() const { return residual_; }

private:
    Matrix residual_;
};

/// Requires d an invertible B-skew derivation and delta D - D delta = 2 delta
/// (CommutationError carries the residual otherwise). D_tilde is D on A, -1 on
/// e1, e2 and +1 on e1*, e2*; omega_tilde(u, v) = T(D_tilde u, v).
SymplecticDoubleExtension symplectic_double_extension(const StructureConstants& sc, const BilinearForm& b,
                                                      const LinearMap& d, const LinearMap& delta);

/// Basis of { delta in Der_B : delta D - D delta = 2 delta, delta(L^1) = 0 }.
/// Throws InputError unless b is a metric and d a B-skew derivation.
std::vector<LinearMap> solve_compatible_delta(const StructureConstants& sc, const BilinearForm& b, const LinearMap& d);

}  // namespace trilie
