#include "trilie/forms.hpp"

#include <map>

namespace trilie {

BilinearForm::BilinearForm(Matrix matrix) : m(std::move(matrix))
{
    if (!m.square()) throw InputError("bilinear form matrix must be square");
}

Scalar BilinearForm::operator()(const Vector& x, const Vector& y) const
{
    return dot(x, m * y);
}

namespace {

// sum_m v_m * W(m, col)
Scalar pair_with_basis(const Matrix& w, const SparseVector& v, std::size_t col)
{
    Scalar s = 0;
    for (const auto& [i, x] : v)
        if (!is_zero(w(i, col))) s += x * w(i, col);
    return s;
}

// sum_m W(row, m) * v_m
Scalar basis_pair_with(const Matrix& w, std::size_t row, const SparseVector& v)
{
    Scalar s = 0;
    for (const auto& [i, x] : v)
        if (!is_zero(w(row, i))) s += w(row, i) * x;
    return s;
}

// Assembles forms from a kernel vector over the given (row, col) unknowns,
// applying the sign for the mirrored entry.
std::vector<BilinearForm> forms_from_kernel(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& unknowns,
                                            const std::vector<Vector>& kernel_basis, int mirror_sign)
{
    std::vector<BilinearForm> out;
    for (const auto& v : kernel_basis) {
        Matrix m(n, n);
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
            const auto [r, c] = unknowns[u];
            m(r, c) = v[u];
            if (r != c) m(c, r) = mirror_sign * v[u];
        }
        out.emplace_back(std::move(m));
    }
    return out;
}

}  // namespace

MetricReport is_metric(const StructureConstants& sc, const BilinearForm& b, std::size_t max_recorded)
{
    const std::size_t n = sc.dim();
    if (b.dim() != n) throw InputError("is_metric: form dimension does not match algebra");
    MetricReport r;
    r.symmetric = b.m.is_symmetric();
    r.nondegenerate = b.nondegenerate();

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t bb = a + 1; bb < n; ++bb)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) {
                    const Scalar res = pair_with_basis(b.m, sc.basis_bracket(a, bb, c), d) +
                                       basis_pair_with(b.m, c, sc.basis_bracket(a, bb, d));
                    if (is_zero(res)) continue;
                    ++r.violation_count;
                    if (r.violations.size() < max_recorded) r.violations.push_back({{a, bb, c, d}, res});
                }
    r.invariant = r.violation_count == 0;
    return r;
}

std::vector<BilinearForm> invariant_symmetric_forms(const StructureConstants& sc)
{
    const std::size_t n = sc.dim();
    std::vector<std::pair<std::size_t, std::size_t>> unknowns;
    std::vector<std::size_t> index(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            index[i * n + j] = index[j * n + i] = unknowns.size();
            unknowns.emplace_back(i, j);
        }

    EchelonBasis eb(unknowns.size());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = c; d < n; ++d) {
                    std::map<std::size_t, Scalar> row;
                    for (const auto& [m, x] : sc.basis_bracket(a, b, c)) row[index[m * n + d]] += x;
                    for (const auto& [m, x] : sc.basis_bracket(a, b, d)) row[index[c * n + m]] += x;
                    SparseVector sv;
                    for (auto& [k, v] : row)
                        if (!is_zero(v)) sv.emplace_back(k, v);
                    if (!sv.empty()) eb.insert(sv);
                }
    return forms_from_kernel(n, unknowns, eb.kernel(), +1);
}

SymplecticReport is_symplectic(const StructureConstants& sc, const BilinearForm& w, std::size_t max_recorded)
{
    const std::size_t n = sc.dim();
    if (w.dim() != n) throw InputError("is_symplectic: form dimension does not match algebra");
    SymplecticReport r;
    r.skew = w.m.is_skew();
    r.nondegenerate = w.nondegenerate();
    r.even_dimension = n % 2 == 0;
    // A nondegenerate skew form only exists in even dimension.
    if (r.skew && r.nondegenerate && !r.even_dimension)
        throw std::logic_error("nondegenerate skew form in odd dimension");

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) {
                    const Scalar res = pair_with_basis(w.m, sc.basis_bracket(b, c, d), a) -
                                       pair_with_basis(w.m, sc.basis_bracket(a, c, d), b) +
                                       pair_with_basis(w.m, sc.basis_bracket(a, b, d), c) -
                                       pair_with_basis(w.m, sc.basis_bracket(a, b, c), d);
                    if (is_zero(res)) continue;
                    ++r.violation_count;
                    if (r.violations.size() < max_recorded) r.violations.push_back({{a, b, c, d}, res});
                }
    r.compatible = r.violation_count == 0;
    return r;
}

std::vector<BilinearForm> symplectic_compatible_forms(const StructureConstants& sc)
{
    const std::size_t n = sc.dim();
    std::vector<std::pair<std::size_t, std::size_t>> unknowns;
    // index/sign of W(i, j) in terms of the unknown W(min, max)
    std::vector<std::size_t> index(n * n, 0);
    std::vector<int> sign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            index[i * n + j] = index[j * n + i] = unknowns.size();
            sign[i * n + j] = 1;
            sign[j * n + i] = -1;
            unknowns.emplace_back(i, j);
        }

    EchelonBasis eb(unknowns.size());
    auto add_term = [&](std::map<std::size_t, Scalar>& row, const SparseVector& v, std::size_t col, int outer) {
        for (const auto& [m, x] : v)
            if (sign[m * n + col] != 0) row[index[m * n + col]] += outer * sign[m * n + col] * x;
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) {
                    std::map<std::size_t, Scalar> row;
                    add_term(row, sc.basis_bracket(b, c, d), a, +1);
                    add_term(row, sc.basis_bracket(a, c, d), b, -1);
                    add_term(row, sc.basis_bracket(a, b, d), c, +1);
                    add_term(row, sc.basis_bracket(a, b, c), d, -1);
                    SparseVector sv;
                    for (auto& [k, v] : row)
                        if (!is_zero(v)) sv.emplace_back(k, v);
                    if (!sv.empty()) eb.insert(sv);
                }
    return forms_from_kernel(n, unknowns, eb.kernel(), -1);
}

FormSearch find_nondegenerate_member(const std::vector<BilinearForm>& space, std::uint64_t seed, std::size_t attempts)
{
    std::vector<Matrix> mats;
    mats.reserve(space.size());
    for (const auto& f : space) mats.push_back(f.m);
    MemberSearch s = find_nonsingular_member(mats, seed, attempts);
    FormSearch out;
    out.attempts_used = s.attempts_used;
    out.nonexistence_proved = s.nonexistence_proved;
    out.witness = std::move(s.witness);
    if (s.member) out.form = BilinearForm(std::move(*s.member));
    return out;
}

Subspace orthogonal_complement(const BilinearForm& b, const Subspace& w)
{
    if (w.ambient_dim() != b.dim()) throw InputError("orthogonal_complement: dimension mismatch");
    if (!b.nondegenerate()) throw InputError("orthogonal_complement: form is degenerate");
    const Matrix bt = b.m.transpose();
    std::vector<SparseVector> rows;
    // w^T B x = 0  <=>  (B^T w) . x = 0
    for (const auto& v : w.basis()) rows.push_back(to_sparse(bt * v));
    return Subspace::span(b.dim(), kernel(b.dim(), rows));
}

std::string IsotropyClass::label() const
{
    if (completely_isotropic) return "completely_isotropic";
    if (isotropic) return "isotropic";
    if (nondegenerate) return "nondegenerate";
    return "none";
}

IsotropyClass classify_isotropy(const BilinearForm& b, const Subspace& w)
{
    const Subspace perp = orthogonal_complement(b, w);
    IsotropyClass c;
    c.isotropic = perp.contains(w);
    c.completely_isotropic = c.isotropic && perp.dim() == w.dim();
    c.nondegenerate = w.intersect(perp).is_zero();
    return c;
}

}  // namespace trilie
