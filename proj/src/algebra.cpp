#include "trilie/algebra.hpp"

#include <algorithm>

namespace trilie {

int sort_triple(std::size_t i, std::size_t j, std::size_t k, Triple& out)
{
    if (i == j || j == k || i == k) return 0;
    out = {i, j, k};
    int sign = 1;
    if (out[0] > out[1]) std::swap(out[0], out[1]), sign = -sign;
    if (out[1] > out[2]) std::swap(out[1], out[2]), sign = -sign;
    if (out[0] > out[1]) std::swap(out[0], out[1]), sign = -sign;
    return sign;
}

StructureConstants::StructureConstants(std::size_t dim) : dim_(dim)
{
    if (dim == 0) throw InputError("algebra dimension must be positive");
    table_.resize(dim * dim * dim);
}

void StructureConstants::set_bracket(std::size_t i, std::size_t j, std::size_t k, const Vector& value)
{
    if (i >= dim_ || j >= dim_ || k >= dim_) throw InputError("bracket index out of range");
    if (value.size() != dim_) throw InputError("bracket value has wrong length");
    Triple t;
    const int sign = sort_triple(i, j, k, t);
    if (sign == 0) throw InputError("bracket arguments must be distinct");

    SparseVector sorted = to_sparse(value);
    if (sign < 0)
        for (auto& [c, x] : sorted) x = -x;

    const bool was_zero = slot(t[0], t[1], t[2]).empty();
    const bool now_zero = sorted.empty();
    nonzero_ += static_cast<std::size_t>(was_zero && !now_zero);
    nonzero_ -= static_cast<std::size_t>(!was_zero && now_zero);

    SparseVector negated = sorted;
    for (auto& [c, x] : negated) x = -x;

    const auto [a, b, c] = t;
    slot(a, b, c) = sorted;
    slot(b, c, a) = sorted;
    slot(c, a, b) = sorted;
    slot(b, a, c) = negated;
    slot(a, c, b) = negated;
    slot(c, b, a) = negated;
}

Vector StructureConstants::bracket(const Vector& x, const Vector& y, const Vector& z) const
{
    if (x.size() != dim_ || y.size() != dim_ || z.size() != dim_)
        throw InputError("bracket: vector length does not match algebra dimension");
    Vector out = zero_vector(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        if (is_zero(x[i])) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (is_zero(y[j])) continue;
            const Scalar xy = x[i] * y[j];
            for (std::size_t k = 0; k < dim_; ++k) {
                if (is_zero(z[k])) continue;
                const SparseVector& v = basis_bracket(i, j, k);
                if (!v.empty()) axpy(out, xy * z[k], v);
            }
        }
    }
    return out;
}

std::vector<std::pair<Triple, SparseVector>> StructureConstants::entries() const
{
    std::vector<std::pair<Triple, SparseVector>> out;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i + 1; j < dim_; ++j)
            for (std::size_t k = j + 1; k < dim_; ++k) {
                const SparseVector& v = basis_bracket(i, j, k);
                if (!v.empty()) out.push_back({Triple{i, j, k}, v});
            }
    return out;
}

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<Vector>& vectors)
{
    EchelonBasis eb(ambient_dim);
    for (const auto& v : vectors) eb.insert(v);
    Subspace s(ambient_dim);
    s.basis_ = eb.rows();
    return s;
}

Subspace Subspace::whole(std::size_t ambient_dim)
{
    Subspace s(ambient_dim);
    for (std::size_t i = 0; i < ambient_dim; ++i) s.basis_.push_back(unit_vector(ambient_dim, i));
    return s;
}

bool Subspace::contains(const Vector& v) const
{
    if (v.size() != ambient_) throw InputError("subspace membership: dimension mismatch");
    if (trilie::is_zero(v)) return true;
    EchelonBasis eb(ambient_);
    for (const auto& b : basis_) eb.insert(b);
    return eb.contains(v);
}

bool Subspace::contains(const Subspace& other) const
{
    if (other.ambient_ != ambient_) throw InputError("subspace inclusion: dimension mismatch");
    EchelonBasis eb(ambient_);
    for (const auto& b : basis_) eb.insert(b);
    for (const auto& v : other.basis_)
        if (!eb.contains(v)) return false;
    return true;
}

Subspace Subspace::operator+(const Subspace& other) const
{
    if (other.ambient_ != ambient_) throw InputError("subspace sum: dimension mismatch");
    std::vector<Vector> all = basis_;
    all.insert(all.end(), other.basis_.begin(), other.basis_.end());
    return span(ambient_, all);
}

Subspace Subspace::annihilator() const
{
    EchelonBasis eb(ambient_);
    for (const auto& b : basis_) eb.insert(b);
    Subspace s(ambient_);
    s.basis_ = eb.kernel();
    return s;
}

Subspace Subspace::intersect(const Subspace& other) const
{
    if (other.ambient_ != ambient_) throw InputError("subspace intersection: dimension mismatch");
    // x = sum c_i u_i lies in other iff it is orthogonal to other's annihilator.
    const Subspace ann = other.annihilator();
    std::vector<SparseVector> rows;
    for (const auto& n : ann.basis()) {
        Vector row(basis_.size());
        for (std::size_t i = 0; i < basis_.size(); ++i) row[i] = dot(basis_[i], n);
        rows.push_back(to_sparse(row));
    }
    std::vector<Vector> out;
    for (const auto& c : kernel(basis_.size(), rows)) {
        Vector x = zero_vector(ambient_);
        for (std::size_t i = 0; i < basis_.size(); ++i) axpy(x, c[i], basis_[i]);
        out.push_back(std::move(x));
    }
    return span(ambient_, out);
}

FilippovReport check_filippov(const StructureConstants& sc, std::size_t max_recorded)
{
    const std::size_t n = sc.dim();
    FilippovReport report;
    Vector res = zero_vector(n);

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
                const SparseVector& abc = sc.basis_bracket(a, b, c);
                for (std::size_t d = 0; d < n; ++d)
                    for (std::size_t e = d + 1; e < n; ++e) {
                        const SparseVector& ade = sc.basis_bracket(a, d, e);
                        const SparseVector& bde = sc.basis_bracket(b, d, e);
                        const SparseVector& cde = sc.basis_bracket(c, d, e);
                        if (abc.empty() && ade.empty() && bde.empty() && cde.empty()) continue;

                        std::fill(res.begin(), res.end(), Scalar(0));
                        for (const auto& [m, x] : abc) axpy(res, x, sc.basis_bracket(m, d, e));
                        for (const auto& [m, x] : ade) axpy(res, -x, sc.basis_bracket(m, b, c));
                        for (const auto& [m, x] : bde) axpy(res, -x, sc.basis_bracket(a, m, c));
                        for (const auto& [m, x] : cde) axpy(res, -x, sc.basis_bracket(a, b, m));
                        if (is_zero(res)) continue;

                        report.pass = false;
                        ++report.violation_count;
                        if (report.violations.size() < max_recorded)
                            report.violations.push_back({{a, b, c, d, e}, res});
                    }
            }
    return report;
}

Subspace derived_algebra(const StructureConstants& sc)
{
    std::vector<Vector> gens;
    for (const auto& [t, v] : sc.entries()) gens.push_back(to_dense(v, sc.dim()));
    return Subspace::span(sc.dim(), gens);
}

Subspace center(const StructureConstants& sc)
{
    const std::size_t n = sc.dim();
    // Unknown x; for each j<k and output coordinate m: sum_i x_i c_{ijk}^m = 0.
    std::vector<SparseVector> rows;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            std::vector<SparseVector> by_m(n);
            for (std::size_t i = 0; i < n; ++i)
                for (const auto& [m, x] : sc.basis_bracket(i, j, k)) by_m[m].emplace_back(i, x);
            for (auto& r : by_m)
                if (!r.empty()) rows.push_back(std::move(r));
        }
    return Subspace::span(n, kernel(n, rows));
}

Subspace bracket_span(const StructureConstants& sc, const Subspace& a, const Subspace& b, const Subspace& c)
{
    const std::size_t n = sc.dim();
    EchelonBasis eb(n);
    for (const auto& u : a.basis())
        for (const auto& v : b.basis())
            for (const auto& w : c.basis()) eb.insert(sc.bracket(u, v, w));
    return Subspace::span(n, eb.rows());
}

bool is_ideal(const StructureConstants& sc, const Subspace& w)
{
    if (w.ambient_dim() != sc.dim()) throw InputError("is_ideal: dimension mismatch");
    const std::size_t n = sc.dim();
    EchelonBasis eb(n);
    for (const auto& u : w.basis()) eb.insert(u);
    for (const auto& u : w.basis())
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                if (!eb.contains(sc.bracket(u, unit_vector(n, j), unit_vector(n, k)))) return false;
    return true;
}

bool is_subalgebra(const StructureConstants& sc, const Subspace& w)
{
    if (w.ambient_dim() != sc.dim()) throw InputError("is_subalgebra: dimension mismatch");
    const auto& b = w.basis();
    EchelonBasis eb(sc.dim());
    for (const auto& u : b) eb.insert(u);
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
            for (std::size_t k = j + 1; k < b.size(); ++k)
                if (!eb.contains(sc.bracket(b[i], b[j], b[k]))) return false;
    return true;
}

Subspace ideal_closure(const StructureConstants& sc, const Subspace& w)
{
    const Subspace all = Subspace::whole(sc.dim());
    Subspace current = w;
    while (true) {
        Subspace next = current + bracket_span(sc, current, all, all);
        if (next == current) return current;
        current = std::move(next);
    }
}

NilpotencySeries nilpotency_series(const StructureConstants& sc, const Subspace& i)
{
    if (i.ambient_dim() != sc.dim()) throw InputError("nilpotency_series: dimension mismatch");
    if (!is_ideal(sc, i)) throw InputError("nilpotency_series: input subspace is not an ideal");
    const Subspace all = Subspace::whole(sc.dim());
    NilpotencySeries out;
    out.series.push_back(i);
    while (!out.series.back().is_zero()) {
        Subspace next = bracket_span(sc, out.series.back(), i, all);
        if (next == out.series.back()) break;
        out.series.push_back(std::move(next));
    }
    out.nilpotent = out.series.back().is_zero();
    return out;
}

}  // namespace trilie
