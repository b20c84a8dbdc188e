#include "trilie/constructions.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace trilie {

namespace {

// Coordinate l of a sparse vector.
Scalar coord(const SparseVector& v, std::size_t l)
{
    auto it = std::lower_bound(v.begin(), v.end(), l, [](const auto& e, std::size_t key) { return e.first < key; });
    return it != v.end() && it->first == l ? it->second : Scalar(0);
}

SparseVector shifted(const SparseVector& v, std::size_t offset)
{
    SparseVector out = v;
    for (auto& [i, x] : out) i += offset;
    return out;
}

using LinExpr = std::map<std::size_t, Scalar>;

SparseVector flatten(const LinExpr& e)
{
    SparseVector sv;
    for (const auto& [k, v] : e)
        if (!is_zero(v)) sv.emplace_back(k, v);
    return sv;
}

// Residual of the full cocycle condition at (a,b,c,d,e) evaluated on e_m, and
// the part made of bracket terms only. theta(acc, factor, i, j, k, l) adds
// factor * theta(e_i,e_j,e_k)(e_l) into acc.
template <class Acc, class ThetaAt>
void cocycle_residual(const StructureConstants& sc, const ThetaAt& theta, std::size_t a, std::size_t b, std::size_t c,
                      std::size_t d, std::size_t e, std::size_t m, Acc& full, Acc& bracket_terms)
{
    for (const auto& [l, x] : sc.basis_bracket(a, b, c)) theta(bracket_terms, x, l, d, e, m);
    for (const auto& [l, x] : sc.basis_bracket(a, d, e)) theta(bracket_terms, -x, l, b, c, m);
    for (const auto& [l, x] : sc.basis_bracket(b, d, e)) theta(bracket_terms, -x, a, l, c, m);
    for (const auto& [l, x] : sc.basis_bracket(c, d, e)) theta(bracket_terms, -x, a, b, l, m);
    full = bracket_terms;
    for (const auto& [l, x] : sc.basis_bracket(d, e, m)) theta(full, -x, a, b, c, l);
    for (const auto& [l, x] : sc.basis_bracket(b, c, m)) theta(full, x, a, d, e, l);
    for (const auto& [l, x] : sc.basis_bracket(c, a, m)) theta(full, x, b, d, e, l);
    for (const auto& [l, x] : sc.basis_bracket(a, b, m)) theta(full, x, c, d, e, l);
}

// Theta(a,b,c,u) + s * P(a,b,c,u) with psi(acc, factor, i, l) adding factor * psi(e_i, e_l).
template <class Acc, class ThetaAt, class PsiAt>
void compatibility_residual(const StructureConstants& sc, const Matrix& dm, const ThetaAt& theta, const PsiAt& psi,
                            int s, std::size_t a, std::size_t b, std::size_t c, std::size_t u, Acc& acc)
{
    const std::size_t n = sc.dim();
    for (std::size_t l = 0; l < n; ++l) {
        if (!is_zero(dm(l, a))) theta(acc, dm(l, a), l, b, c, u);
        if (!is_zero(dm(l, b))) theta(acc, -dm(l, b), l, c, u, a);
        if (!is_zero(dm(l, c))) theta(acc, dm(l, c), l, u, a, b);
        if (!is_zero(dm(l, u))) theta(acc, -dm(l, u), l, a, b, c);
    }
    for (const auto& [l, x] : sc.basis_bracket(b, c, u)) psi(acc, s * x, a, l);
    for (const auto& [l, x] : sc.basis_bracket(a, c, u)) psi(acc, -s * x, b, l);
    for (const auto& [l, x] : sc.basis_bracket(a, b, u)) psi(acc, s * x, c, l);
    for (const auto& [l, x] : sc.basis_bracket(a, b, c)) psi(acc, -s * x, u, l);
}

// Unknown index and sign of an alternating 4-form component omega(i,j,k,l).
class FourFormIndex {
public:
    explicit FourFormIndex(std::size_t n) : n_(n), slot_(n * n * n * n, {0, 0})
    {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k)
                    for (std::size_t l = k + 1; l < n; ++l) {
                        quads_.push_back({i, j, k, l});
                        std::array<std::size_t, 4> p{i, j, k, l};
                        do {
                            slot_[((p[0] * n + p[1]) * n + p[2]) * n + p[3]] = {quads_.size() - 1, parity(p)};
                        } while (std::next_permutation(p.begin(), p.end()));
                    }
    }

    std::size_t size() const { return quads_.size(); }
    std::pair<std::size_t, int> at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const
    {
        return slot_[((i * n_ + j) * n_ + k) * n_ + l];
    }

private:
    static int parity(const std::array<std::size_t, 4>& p)
    {
        int inversions = 0;
        for (std::size_t x = 0; x < 4; ++x)
            for (std::size_t y = x + 1; y < 4; ++y) inversions += p[x] > p[y];
        return inversions % 2 == 0 ? 1 : -1;
    }

    std::size_t n_;
    std::vector<std::pair<std::size_t, int>> slot_;
    std::vector<std::array<std::size_t, 4>> quads_;
};

Cocycle cocycle_from_four_form(std::size_t n, const FourFormIndex& idx, const Vector& values, std::size_t offset)
{
    Cocycle th(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Vector v = zero_vector(n);
                for (std::size_t l = 0; l < n; ++l) {
                    const auto [u, sign] = idx.at(i, j, k, l);
                    if (sign != 0) v[l] = sign * values[offset + u];
                }
                if (!is_zero(v)) th.set(i, j, k, v);
            }
    return th;
}

void append_cocycle_constraints(const StructureConstants& sc, const FourFormIndex& idx, EchelonBasis& eb)
{
    const std::size_t n = sc.dim();
    auto theta = [&](LinExpr& acc, const Scalar& f, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        const auto [u, sign] = idx.at(i, j, k, l);
        if (sign != 0) acc[u] += sign * f;
    };
    LinExpr full, bracket_terms;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d)
                    for (std::size_t e = d + 1; e < n; ++e)
                        for (std::size_t m = 0; m < n; ++m) {
                            full.clear();
                            bracket_terms.clear();
                            cocycle_residual(sc, theta, a, b, c, d, e, m, full, bracket_terms);
                            SparseVector sv = flatten(full);
                            if (!sv.empty()) eb.insert(sv);
                        }
}

ExtensionLayout dual_layout(std::size_t d)
{
    ExtensionLayout layout;
    for (std::size_t i = 0; i < d; ++i) layout.tags.push_back({Block::base, i, 0});
    for (std::size_t i = 0; i < d; ++i) layout.tags.push_back({Block::dual, i, 0});
    return layout;
}

// A + A* with bracket [x+f, y+g, z+h] = [x,y,z] + theta(x,y,z) + ad*(y,z)f + ad*(z,x)g + ad*(x,y)h.
DualExtension build_dual_extension(const StructureConstants& sc, const Cocycle* th)
{
    const std::size_t d = sc.dim();
    DualExtension out{StructureConstants(2 * d), hyperbolic_form(d), dual_layout(d)};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            for (std::size_t k = j + 1; k < d; ++k) {
                SparseVector v = sc.basis_bracket(i, j, k);
                if (th)
                    for (const auto& [l, x] : th->at(i, j, k)) v.emplace_back(d + l, x);
                if (!v.empty()) out.algebra.set_bracket(i, j, k, to_dense(v, 2 * d));
            }
    // [e_i*, e_j, e_k] = ad*(e_j, e_k) e_i* = -sum_w c_{jkw}^i e_w*
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = j + 1; k < d; ++k) {
                Vector v = zero_vector(2 * d);
                bool any = false;
                for (std::size_t w = 0; w < d; ++w) {
                    const Scalar x = coord(sc.basis_bracket(j, k, w), i);
                    if (is_zero(x)) continue;
                    v[d + w] = -x;
                    any = true;
                }
                if (any) out.algebra.set_bracket(d + i, j, k, v);
            }
    return out;
}

void require_invertible_derivation(const StructureConstants& sc, const LinearMap& d, const char* what)
{
    if (d.dim() != sc.dim()) throw InputError(std::string(what) + ": map dimension does not match algebra");
    if (!is_derivation(sc, d, 0).pass) throw InputError(std::string(what) + ": map is not a derivation");
    if (!d.invertible()) throw InputError(std::string(what) + ": derivation is not invertible");
}

void require_metric(const StructureConstants& sc, const BilinearForm& b, const char* what)
{
    if (b.dim() != sc.dim()) throw InputError(std::string(what) + ": form dimension does not match algebra");
    if (!is_metric(sc, b, 0).metric()) throw InputError(std::string(what) + ": form is not a metric");
}

// D on the first block, -D^T on the dual block, -H from base to dual.
LinearMap lifted_map(const LinearMap& d, const Matrix& h)
{
    const std::size_t n = d.dim();
    Matrix m(2 * n, 2 * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            m(r, c) = d.m(r, c);
            m(n + r, n + c) = -d.m(c, r);
            m(n + r, c) = -h(r, c);
        }
    return LinearMap(std::move(m));
}

}  // namespace

std::string to_string(Block block)
{
    switch (block) {
    case Block::base: return "base";
    case Block::dual: return "dual";
    case Block::graded: return "graded";
    case Block::b: return "b";
    case Block::b_dual: return "b_dual";
    }
    return "unknown";
}

bool ExtensionLayout::is_bijection() const
{
    std::set<std::tuple<int, std::size_t, std::size_t>> seen;
    for (const auto& t : tags)
        if (!seen.insert({static_cast<int>(t.block), t.index, t.degree}).second) return false;
    return true;
}

std::vector<std::size_t> ExtensionLayout::indices(Block block) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (tags[i].block == block) out.push_back(i);
    return out;
}

Subspace ExtensionLayout::block_span(Block block) const
{
    std::vector<Vector> vs;
    for (std::size_t i : indices(block)) vs.push_back(unit_vector(dim(), i));
    return Subspace::span(dim(), vs);
}

std::vector<std::string> ExtensionLayout::names(const std::vector<std::string>& base_names) const
{
    auto base = [&](std::size_t i) {
        return i < base_names.size() ? base_names[i] : "e" + std::to_string(i + 1);
    };
    std::vector<std::string> out;
    for (const auto& t : tags) {
        switch (t.block) {
        case Block::base: out.push_back(base(t.index)); break;
        case Block::dual: out.push_back(base(t.index) + "*"); break;
        case Block::graded: out.push_back(base(t.index) + ".t" + std::to_string(t.degree)); break;
        case Block::b: out.push_back("b" + std::to_string(t.index + 1)); break;
        case Block::b_dual: out.push_back("b" + std::to_string(t.index + 1) + "*"); break;
        }
    }
    return out;
}

Scalar Cocycle::operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const
{
    return coord(at(i, j, k), l);
}

CompatibilityPair::CompatibilityPair(BilinearForm psi_form) : psi(std::move(psi_form))
{
    if (!psi.m.is_skew()) throw InputError("compatibility pair: psi must be skew-symmetric");
    h = LinearMap(psi.m.transpose());
}

TruncatedCurrent truncated_current_algebra(const StructureConstants& sc, std::size_t n)
{
    if (n < 2) throw InputError("truncated_current_algebra: n must be at least 2");
    const std::size_t d = sc.dim();
    const std::size_t top = n - 1;
    auto index = [d](std::size_t p, std::size_t i) { return (p - 1) * d + i; };

    TruncatedCurrent out{StructureConstants(d * top), LinearMap(Matrix(d * top, d * top)), {}};
    for (std::size_t p = 1; p <= top; ++p)
        for (std::size_t i = 0; i < d; ++i) {
            out.layout.tags.push_back({Block::graded, i, p});
            out.grading.m(index(p, i), index(p, i)) = Scalar(static_cast<long>(p));
        }
    for (const auto& [t, v] : sc.entries())
        for (std::size_t p = 1; p <= top; ++p)
            for (std::size_t q = 1; p + q < top; ++q)
                for (std::size_t r = 1; p + q + r <= top; ++r) {
                    SparseVector value = shifted(v, (p + q + r - 1) * d);
                    out.algebra.set_bracket(index(p, t[0]), index(q, t[1]), index(r, t[2]), to_dense(value, d * top));
                }
    return out;
}

BilinearForm hyperbolic_form(std::size_t d)
{
    Matrix m(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i) m(i, d + i) = m(d + i, i) = 1;
    return BilinearForm(std::move(m));
}

CoadjointSum coadjoint_semidirect(const StructureConstants& sc, const std::optional<LinearMap>& d)
{
    CoadjointSum out{build_dual_extension(sc, nullptr)};
    if (d) {
        require_invertible_derivation(sc, *d, "coadjoint_semidirect");
        out.d_tilde = lifted_map(*d, Matrix(sc.dim(), sc.dim()));
        out.omega = omega_from_derivation(out.algebra, out.metric, *out.d_tilde).omega;
    }
    return out;
}

CocycleReport validate_cocycle(const StructureConstants& sc, const Cocycle& th, std::size_t max_recorded)
{
    const std::size_t n = sc.dim();
    if (th.dim() != n) throw InputError("validate_cocycle: cocycle dimension does not match algebra");
    CocycleReport r;
    auto theta = [&](Scalar& acc, const Scalar& f, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        const SparseVector& v = th.at(i, j, k);
        if (!v.empty()) acc += f * coord(v, l);
    };

    Vector res = zero_vector(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d)
                    for (std::size_t e = d + 1; e < n; ++e) {
                        bool bracket_bad = false;
                        for (std::size_t m = 0; m < n; ++m) {
                            Scalar full = 0, part = 0;
                            cocycle_residual(sc, theta, a, b, c, d, e, m, full, part);
                            res[m] = full;
                            bracket_bad = bracket_bad || !is_zero(part);
                        }
                        r.bracket_terms_violation_count += bracket_bad;
                        if (is_zero(res)) continue;
                        ++r.cocycle_violation_count;
                        if (r.violations.size() < max_recorded) r.violations.push_back({{a, b, c, d, e}, res});
                    }

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = c; d < n; ++d) {
                    const Scalar res4 = th(a, b, c, d) + th(a, b, d, c);
                    if (is_zero(res4)) continue;
                    ++r.alternating_violation_count;
                    if (r.alternating_violations.size() < max_recorded)
                        r.alternating_violations.push_back({{a, b, c, d}, res4});
                }

    r.cocycle = r.cocycle_violation_count == 0;
    r.bracket_terms = r.bracket_terms_violation_count == 0;
    r.alternating = r.alternating_violation_count == 0;
    return r;
}

TThetaExtension t_theta_extension(const StructureConstants& sc, const Cocycle& th)
{
    const CocycleReport report = validate_cocycle(sc, th, 0);
    if (!report.cocycle) throw InputError("t_theta_extension: theta violates the cocycle condition");
    return {build_dual_extension(sc, &th), report.alternating};
}

std::vector<Cocycle> solve_alternating_cocycles(const StructureConstants& sc)
{
    const std::size_t n = sc.dim();
    const FourFormIndex idx(n);
    if (idx.size() == 0) return {};
    EchelonBasis eb(idx.size());
    append_cocycle_constraints(sc, idx, eb);
    std::vector<Cocycle> out;
    for (const auto& v : eb.kernel()) out.push_back(cocycle_from_four_form(n, idx, v, 0));
    return out;
}

std::string to_string(PsiSign sign)
{
    return sign == PsiSign::b_hx_equals_psi ? "B(Hx,y)=psi(x,y)" : "B(Hx,y)=-psi(x,y)";
}

std::vector<CompatibilityViolation> compatibility_violations(const StructureConstants& sc, const Cocycle& th,
                                                             const LinearMap& d, const BilinearForm& psi,
                                                             PsiSign sign, std::size_t max_recorded)
{
    const std::size_t n = sc.dim();
    if (th.dim() != n || d.dim() != n || psi.dim() != n)
        throw InputError("compatibility check: dimension mismatch");
    auto theta = [&](Scalar& acc, const Scalar& f, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        const SparseVector& v = th.at(i, j, k);
        if (!v.empty()) acc += f * coord(v, l);
    };
    auto psi_at = [&](Scalar& acc, const Scalar& f, std::size_t i, std::size_t l) { acc += f * psi.m(i, l); };
    const int s = sign == PsiSign::b_hx_equals_psi ? 1 : -1;

    std::vector<CompatibilityViolation> out;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t u = 0; u < n; ++u) {
                    Scalar acc = 0;
                    compatibility_residual(sc, d.m, theta, psi_at, s, a, b, c, u, acc);
                    if (is_zero(acc)) continue;
                    out.push_back({{a, b, c, u}, acc});
                    if (out.size() >= max_recorded) return out;
                }
    return out;
}

LiftedDerivation lift_derivation_t_theta(const StructureConstants& sc, const Cocycle& th, const LinearMap& d,
                                         const CompatibilityPair& pair)
{
    require_invertible_derivation(sc, d, "lift_derivation_t_theta");
    if (pair.psi.dim() != sc.dim()) throw InputError("lift_derivation_t_theta: psi dimension does not match algebra");
    const CocycleReport cr = validate_cocycle(sc, th, 0);
    if (!cr.cocycle || !cr.alternating) throw InputError("lift_derivation_t_theta: theta is not an alternating cocycle");

    LiftedDerivation out;
    auto stated = compatibility_violations(sc, th, d, pair.psi, PsiSign::b_hx_equals_psi);
    if (stated.empty()) {
        out.sign = PsiSign::b_hx_equals_psi;
    } else if (compatibility_violations(sc, th, d, pair.psi, PsiSign::b_hx_equals_minus_psi, 1).empty()) {
        out.sign = PsiSign::b_hx_equals_minus_psi;
    } else {
        throw CompatibilityError("lift_derivation_t_theta: compatibility condition violated", std::move(stated));
    }
    out.compatible = true;

    const TThetaExtension ext = t_theta_extension(sc, th);
    const Matrix h = out.sign == PsiSign::b_hx_equals_psi ? pair.h.m : -pair.h.m;
    out.d_bar = lifted_map(d, h);
    out.derivation = is_derivation(ext.algebra, out.d_bar);
    out.invertible = out.d_bar.invertible();
    out.skew = check_skew_for_form(ext.metric, out.d_bar);
    out.omega = BilinearForm(out.d_bar.m.transpose() * ext.metric.m);
    out.symplectic = is_symplectic(ext.algebra, out.omega);
    return out;
}

std::vector<CompatibleData> solve_compatible_pairs(const StructureConstants& sc, const LinearMap& d)
{
    const std::size_t n = sc.dim();
    if (d.dim() != n) throw InputError("solve_compatible_pairs: map dimension does not match algebra");
    const FourFormIndex idx(n);
    const std::size_t nt = idx.size();
    std::vector<std::size_t> psi_index(n * n, 0);
    std::vector<int> psi_sign(n * n, 0);
    std::size_t np = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++np) {
            psi_index[i * n + j] = psi_index[j * n + i] = nt + np;
            psi_sign[i * n + j] = 1;
            psi_sign[j * n + i] = -1;
        }

    EchelonBasis eb(nt + np);
    append_cocycle_constraints(sc, idx, eb);
    auto theta = [&](LinExpr& acc, const Scalar& f, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        const auto [u, sign] = idx.at(i, j, k, l);
        if (sign != 0) acc[u] += sign * f;
    };
    auto psi_at = [&](LinExpr& acc, const Scalar& f, std::size_t i, std::size_t l) {
        if (psi_sign[i * n + l] != 0) acc[psi_index[i * n + l]] += psi_sign[i * n + l] * f;
    };
    LinExpr acc;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t u = 0; u < n; ++u) {
                    acc.clear();
                    compatibility_residual(sc, d.m, theta, psi_at, 1, a, b, c, u, acc);
                    SparseVector sv = flatten(acc);
                    if (!sv.empty()) eb.insert(sv);
                }

    std::vector<CompatibleData> out;
    for (const auto& v : eb.kernel()) {
        Matrix psi(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (psi_sign[i * n + j] != 0) psi(i, j) = psi_sign[i * n + j] * v[psi_index[i * n + j]];
        out.push_back({cocycle_from_four_form(n, idx, v, 0), BilinearForm(std::move(psi))});
    }
    return out;
}

IsotropicSeed isotropic_seed(const StructureConstants& sc, const BilinearForm& b)
{
    require_metric(sc, b, "isotropic_seed");
    IsotropicSeed out{derived_algebra(sc).intersect(center(sc))};
    out.isotropic = classify_isotropy(b, out.ideal).isotropic;
    out.is_ideal = is_ideal(sc, out.ideal);
    out.abelian_case = sc.is_abelian();
    return out;
}

GreedyIsotropic extend_isotropic_greedy(const StructureConstants& sc, const BilinearForm& b, const Subspace& seed)
{
    require_metric(sc, b, "extend_isotropic_greedy");
    if (seed.ambient_dim() != sc.dim()) throw InputError("extend_isotropic_greedy: seed dimension mismatch");
    if (!is_ideal(sc, seed) || !classify_isotropy(b, seed).isotropic)
        throw InputError("extend_isotropic_greedy: seed is not an isotropic ideal");

    const std::size_t n = sc.dim();
    GreedyIsotropic out{seed, n / 2};
    std::vector<Vector> candidates;
    for (std::size_t i = n; i-- > 0;) candidates.push_back(unit_vector(n, i));
    const Subspace perp = orthogonal_complement(b, seed);
    candidates.insert(candidates.end(), perp.basis().begin(), perp.basis().end());

    // A candidate rejected once stays rejected: the ideal it would generate
    // only grows with the current ideal.
    for (const auto& v : candidates) {
        if (out.ideal.dim() >= out.bound) break;
        if (out.ideal.contains(v)) continue;
        Subspace next = ideal_closure(sc, out.ideal + Subspace::span(n, {v}));
        if (classify_isotropy(b, next).isotropic) out.ideal = std::move(next);
    }
    out.reached_bound = out.ideal.dim() == out.bound;
    return out;
}

DoubleExtension double_extension(const StructureConstants& sc, const BilinearForm& b, const LinearMap& delta)
{
    require_metric(sc, b, "double_extension");
    const std::size_t d = sc.dim();
    if (delta.dim() != d) throw InputError("double_extension: delta dimension does not match algebra");
    if (!is_derivation(sc, delta, 0).pass || !check_skew_for_form(b, delta))
        throw InputError("double_extension: delta is not a skew derivation for the metric");
    const Subspace derived = derived_algebra(sc);
    for (const auto& v : derived.basis())
        if (!is_zero(delta(v))) throw InputError("double_extension: delta does not vanish on the derived algebra");

    const std::size_t n = d + 4;
    const std::size_t e1s = 0, e2s = 1, e1 = d + 2, e2 = d + 3;
    DoubleExtension out{StructureConstants(n), BilinearForm(Matrix(n, n)), {}};
    out.layout.tags = {{Block::b_dual, 0, 0}, {Block::b_dual, 1, 0}};
    for (std::size_t i = 0; i < d; ++i) out.layout.tags.push_back({Block::base, i, 0});
    out.layout.tags.push_back({Block::b, 0, 0});
    out.layout.tags.push_back({Block::b, 1, 0});

    for (const auto& [t, v] : sc.entries())
        out.algebra.set_bracket(t[0] + 2, t[1] + 2, t[2] + 2, to_dense(shifted(v, 2), n));
    const Matrix phi = delta.m.transpose() * b.m;  // phi(i, j) = B(delta e_i, e_j)
    for (std::size_t i = 0; i < d; ++i) {
        Vector v = zero_vector(n);
        for (std::size_t l = 0; l < d; ++l) v[l + 2] = delta.m(l, i);
        if (!is_zero(v)) out.algebra.set_bracket(i + 2, e1, e2, v);
        for (std::size_t j = i + 1; j < d; ++j) {
            if (is_zero(phi(i, j))) continue;
            Vector w1 = zero_vector(n), w2 = zero_vector(n);
            w1[e2s] = phi(i, j);
            w2[e1s] = -phi(i, j);
            out.algebra.set_bracket(i + 2, j + 2, e1, w1);
            out.algebra.set_bracket(i + 2, j + 2, e2, w2);
        }
    }

    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out.metric.m(i + 2, j + 2) = b.m(i, j);
    out.metric.m(e1, e1s) = out.metric.m(e1s, e1) = 1;
    out.metric.m(e2, e2s) = out.metric.m(e2s, e2) = 1;
    return out;
}

SymplecticDoubleExtension symplectic_double_extension(const StructureConstants& sc, const BilinearForm& b,
                                                      const LinearMap& d, const LinearMap& delta)
{
    require_metric(sc, b, "symplectic_double_extension");
    require_invertible_derivation(sc, d, "symplectic_double_extension");
    if (!check_skew_for_form(b, d)) throw InputError("symplectic_double_extension: D is not skew for the metric");
    if (delta.dim() != sc.dim()) throw InputError("symplectic_double_extension: delta dimension does not match algebra");
    const Matrix residual = delta.m * d.m - d.m * delta.m - delta.m.scaled(2);
    if (!residual.is_zero())
        throw CommutationError("symplectic_double_extension: delta D - D delta != 2 delta", residual);

    SymplecticDoubleExtension out{double_extension(sc, b, delta)};
    const std::size_t n = sc.dim();
    const std::size_t total = n + 4;
    Matrix dt(total, total), om(total, total);
    const Matrix omega_a = d.m.transpose() * b.m;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            dt(i + 2, j + 2) = d.m(i, j);
            om(i + 2, j + 2) = omega_a(i, j);
        }
    for (std::size_t k = 0; k < 2; ++k) {
        dt(k, k) = 1;
        dt(n + 2 + k, n + 2 + k) = -1;
        om(n + 2 + k, k) = -1;  // omega(e_k, e_k*)
        om(k, n + 2 + k) = 1;   // omega(e_k*, e_k)
    }
    out.d_tilde = LinearMap(std::move(dt));
    out.omega_tilde = BilinearForm(std::move(om));
    out.d_tilde_invertible = out.d_tilde.invertible();
    out.d_tilde_derivation = is_derivation(out.algebra, out.d_tilde);
    out.d_tilde_skew = check_skew_for_form(out.metric, out.d_tilde);
    out.symplectic = is_symplectic(out.algebra, out.omega_tilde);
    out.round_trip = derivation_from_omega(out.algebra, out.metric, out.omega_tilde).d == out.d_tilde;
    return out;
}

std::vector<LinearMap> solve_compatible_delta(const StructureConstants& sc, const BilinearForm& b, const LinearMap& d)
{
    require_metric(sc, b, "solve_compatible_delta");
    const std::size_t n = sc.dim();
    if (d.dim() != n) throw InputError("solve_compatible_delta: map dimension does not match algebra");
    if (!is_derivation(sc, d, 0).pass || !check_skew_for_form(b, d))
        throw InputError("solve_compatible_delta: D is not a skew derivation for the metric");

    EchelonBasis eb(n * n);
    detail::append_skew_constraints(b, eb);
    detail::append_derivation_constraints(sc, eb);
    // (delta D - D delta - 2 delta)(r, c) = 0
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            LinExpr row;
            for (std::size_t l = 0; l < n; ++l) {
                if (!is_zero(d.m(l, c))) row[r * n + l] += d.m(l, c);
                if (!is_zero(d.m(r, l))) row[l * n + c] -= d.m(r, l);
            }
            row[r * n + c] -= 2;
            SparseVector sv = flatten(row);
            if (!sv.empty()) eb.insert(sv);
        }
    // delta v = 0 for v in L^1
    const Subspace derived = derived_algebra(sc);
    for (const auto& v : derived.basis())
        for (std::size_t r = 0; r < n; ++r) {
            LinExpr row;
            for (std::size_t c = 0; c < n; ++c)
                if (!is_zero(v[c])) row[r * n + c] += v[c];
            SparseVector sv = flatten(row);
            if (!sv.empty()) eb.insert(sv);
        }
    std::vector<LinearMap> out;
    for (const auto& v : eb.kernel()) out.emplace_back(Matrix::from_vectorized(n, n, v));
    return out;
}

}  // namespace trilie
