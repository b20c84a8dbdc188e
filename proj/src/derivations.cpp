#include "trilie/derivations.hpp"

#include <map>

namespace trilie {

LinearMap::LinearMap(Matrix matrix) : m(std::move(matrix))
{
    if (!m.square()) throw InputError("linear map matrix must be square");
}

LinearMap commutator(const LinearMap& a, const LinearMap& b)
{
    return LinearMap(a.m * b.m - b.m * a.m);
}

namespace {

// Image of e_col under d, sparse.
SparseVector image(const Matrix& d, std::size_t col)
{
    SparseVector out;
    for (std::size_t r = 0; r < d.rows(); ++r)
        if (!is_zero(d(r, col))) out.emplace_back(r, d(r, col));
    return out;
}

SparseVector flatten(const std::map<std::size_t, Scalar>& row)
{
    SparseVector sv;
    for (const auto& [k, v] : row)
        if (!is_zero(v)) sv.emplace_back(k, v);
    return sv;
}

std::vector<LinearMap> maps_from_kernel(std::size_t n, const std::vector<Vector>& kernel_basis)
{
    std::vector<LinearMap> out;
    out.reserve(kernel_basis.size());
    for (const auto& v : kernel_basis) out.emplace_back(Matrix::from_vectorized(n, n, v));
    return out;
}

}  // namespace

namespace detail {

// One Leibniz-rule row per (i<j<k, m).
void append_derivation_constraints(const StructureConstants& sc, EchelonBasis& eb)
{
    const std::size_t n = sc.dim();
    std::vector<std::map<std::size_t, Scalar>> rows(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                for (auto& r : rows) r.clear();
                for (const auto& [l, x] : sc.basis_bracket(i, j, k))
                    for (std::size_t m = 0; m < n; ++m) rows[m][m * n + l] += x;
                for (std::size_t l = 0; l < n; ++l) {
                    for (const auto& [m, x] : sc.basis_bracket(l, j, k)) rows[m][l * n + i] -= x;
                    for (const auto& [m, x] : sc.basis_bracket(i, l, k)) rows[m][l * n + j] -= x;
                    for (const auto& [m, x] : sc.basis_bracket(i, j, l)) rows[m][l * n + k] -= x;
                }
                for (const auto& r : rows) {
                    SparseVector sv = flatten(r);
                    if (!sv.empty()) eb.insert(sv);
                }
            }
}

// sum_l D(l,r) B(l,s) + sum_l B(r,l) D(l,s) = 0 for r <= s
void append_skew_constraints(const BilinearForm& b, EchelonBasis& eb)
{
    const std::size_t n = b.dim();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = r; s < n; ++s) {
            std::map<std::size_t, Scalar> row;
            for (std::size_t l = 0; l < n; ++l) {
                if (!is_zero(b.m(l, s))) row[l * n + r] += b.m(l, s);
                if (!is_zero(b.m(r, l))) row[l * n + s] += b.m(r, l);
            }
            SparseVector sv = flatten(row);
            if (!sv.empty()) eb.insert(sv);
        }
}

}  // namespace detail

DerivationReport is_derivation(const StructureConstants& sc, const LinearMap& d, std::size_t max_recorded)
{
    const std::size_t n = sc.dim();
    if (d.dim() != n) throw InputError("is_derivation: map dimension does not match algebra");
    std::vector<SparseVector> images(n);
    for (std::size_t c = 0; c < n; ++c) images[c] = image(d.m, c);

    DerivationReport r;
    Vector res = zero_vector(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                std::fill(res.begin(), res.end(), Scalar(0));
                for (const auto& [l, x] : sc.basis_bracket(i, j, k)) axpy(res, x, images[l]);
                for (const auto& [l, x] : images[i]) axpy(res, -x, sc.basis_bracket(l, j, k));
                for (const auto& [l, x] : images[j]) axpy(res, -x, sc.basis_bracket(i, l, k));
                for (const auto& [l, x] : images[k]) axpy(res, -x, sc.basis_bracket(i, j, l));
                if (is_zero(res)) continue;
                r.pass = false;
                ++r.violation_count;
                if (r.violations.size() < max_recorded) r.violations.push_back({{i, j, k}, res});
            }
    return r;
}

std::vector<LinearMap> derivation_space(const StructureConstants& sc)
{
    const std::size_t n = sc.dim();
    EchelonBasis eb(n * n);
    detail::append_derivation_constraints(sc, eb);
    return maps_from_kernel(n, eb.kernel());
}

std::vector<LinearMap> metric_derivation_space(const StructureConstants& sc, const BilinearForm& b)
{
    const std::size_t n = sc.dim();
    if (!is_metric(sc, b, 0).metric()) throw InputError("metric_derivation_space: form is not a metric");
    EchelonBasis eb(n * n);
    detail::append_skew_constraints(b, eb);
    detail::append_derivation_constraints(sc, eb);
    return maps_from_kernel(n, eb.kernel());
}

MapSearch find_invertible_member(const std::vector<LinearMap>& space, std::uint64_t seed, std::size_t attempts)
{
    std::vector<Matrix> mats;
    mats.reserve(space.size());
    for (const auto& d : space) mats.push_back(d.m);
    MemberSearch s = find_nonsingular_member(mats, seed, attempts);
    MapSearch out;
    out.attempts_used = s.attempts_used;
    out.nonexistence_proved = s.nonexistence_proved;
    out.witness = std::move(s.witness);
    if (s.member) out.map = LinearMap(std::move(*s.member));
    return out;
}

bool check_skew_for_form(const BilinearForm& f, const LinearMap& d)
{
    if (f.dim() != d.dim()) throw InputError("check_skew_for_form: dimension mismatch");
    // f(Dx, y) + f(x, Dy) = x^T (D^T F + F D) y
    return (d.m.transpose() * f.m + f.m * d.m).is_zero();
}

OmegaFromDerivation omega_from_derivation(const StructureConstants& sc, const BilinearForm& b, const LinearMap& d)
{
    if (b.dim() != sc.dim() || d.dim() != sc.dim()) throw InputError("omega_from_derivation: dimension mismatch");
    if (!is_metric(sc, b, 0).metric()) throw InputError("omega_from_derivation: form is not a metric");
    if (!check_skew_for_form(b, d)) throw InputError("omega_from_derivation: map is not skew for the metric");
    if (!is_derivation(sc, d, 0).pass) throw InputError("omega_from_derivation: map is not a derivation");

    OmegaFromDerivation out;
    out.omega = BilinearForm(d.m.transpose() * b.m);
    out.report = is_symplectic(sc, out.omega);
    if (!out.omega.m.is_skew()) throw std::logic_error("omega_from_derivation produced a non-skew form");
    return out;
}

DerivationFromOmega derivation_from_omega(const StructureConstants& sc, const BilinearForm& b, const BilinearForm& omega)
{
    const std::size_t n = sc.dim();
    if (b.dim() != n || omega.dim() != n) throw InputError("derivation_from_omega: dimension mismatch");
    if (!b.nondegenerate()) throw InputError("derivation_from_omega: metric is degenerate");

    // omega = D^T B  =>  B^T D = omega^T; column j of D solves B^T d_j = (row j of omega).
    const Matrix bt = b.m.transpose();
    std::vector<Vector> columns;
    columns.reserve(n);
    for (std::size_t j = 0; j < n; ++j) columns.push_back(solve(bt, omega.m.row(j)));

    DerivationFromOmega out;
    out.d = LinearMap(Matrix::from_columns(n, columns));
    out.invertible = out.d.invertible();
    out.in_metric_derivations = check_skew_for_form(b, out.d) && is_derivation(sc, out.d, 0).pass;
    out.round_trip = out.d.m.transpose() * b.m == omega.m;
    return out;
}

}  // namespace trilie
