#include "trilie/linalg.hpp"

#include <algorithm>
#include <random>

namespace trilie {

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::diagonal(const Vector& d)
{
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::from_columns(std::size_t rows, const std::vector<Vector>& columns)
{
    Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != rows) throw InputError("from_columns: column length mismatch");
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
}

Matrix Matrix::from_vectorized(std::size_t rows, std::size_t cols, const Vector& v)
{
    if (v.size() != rows * cols) throw InputError("from_vectorized: length mismatch");
    Matrix m(rows, cols);
    m.data_ = v;
    return m;
}

Vector Matrix::row(std::size_t r) const
{
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::column(std::size_t c) const
{
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

Matrix Matrix::transpose() const
{
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

bool Matrix::is_zero() const
{
    return trilie::is_zero(data_);
}

bool Matrix::is_symmetric() const
{
    if (!square()) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r + 1; c < cols_; ++c)
            if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
}

bool Matrix::is_skew() const
{
    if (!square()) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            if ((*this)(r, c) != -(*this)(c, r)) return false;
    return true;
}

Vector Matrix::operator*(const Vector& v) const
{
    if (v.size() != cols_) throw InputError("matrix-vector product: dimension mismatch");
    Vector out(rows_, Scalar(0));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            const Scalar& a = (*this)(r, c);
            if (!trilie::is_zero(a) && !trilie::is_zero(v[c])) out[r] += a * v[c];
        }
    return out;
}

Matrix Matrix::operator*(const Matrix& other) const
{
    if (cols_ != other.rows_) throw InputError("matrix product: dimension mismatch");
    Matrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& a = (*this)(r, k);
            if (trilie::is_zero(a)) continue;
            for (std::size_t c = 0; c < other.cols_; ++c)
                if (!trilie::is_zero(other(k, c))) out(r, c) += a * other(k, c);
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& other) const
{
    if (rows_ != other.rows_ || cols_ != other.cols_) throw InputError("matrix sum: dimension mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& other) const
{
    return *this + (-other);
}

Matrix Matrix::operator-() const
{
    return scaled(Scalar(-1));
}

Matrix Matrix::scaled(const Scalar& s) const
{
    Matrix out = *this;
    for (auto& x : out.data_) x *= s;
    return out;
}

Scalar determinant(const Matrix& m)
{
    if (!m.square()) throw InputError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;

    // Clear denominators row by row: det(m) = det(a) / prod(scale).
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
    mpz_class scale = 1;
    for (std::size_t r = 0; r < n; ++r) {
        mpz_class l = 1;
        for (std::size_t c = 0; c < n; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
        for (std::size_t c = 0; c < n; ++c) a[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
        scale *= l;
    }

    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Scalar det(a[n - 1][n - 1] * sign, scale);
    det.canonicalize();
    return det;
}

Vector solve(const Matrix& a, const Vector& b)
{
    if (!a.square() || a.rows() != b.size()) throw InputError("solve: dimension mismatch");
    const std::size_t n = a.rows();
    EchelonBasis eb(n + 1);
    for (std::size_t r = 0; r < n; ++r) {
        Vector row = a.row(r);
        row.push_back(b[r]);
        eb.insert(row);
    }
    const auto piv = eb.pivots();
    if (piv.size() < n || piv[n - 1] != n - 1) throw InputError("solve: singular system");
    const auto rows = eb.rows();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rows[i][n];
    return x;
}

namespace {

void make_primitive(std::vector<std::pair<std::size_t, mpz_class>>& r)
{
    if (r.empty()) return;
    mpz_class g = 0;
    for (const auto& [c, v] : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) break;
    }
    if (r.front().second < 0) g = -g;
    if (g != 1)
        for (auto& [c, v] : r) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

// a * r - b * s, dropping zeros
std::vector<std::pair<std::size_t, mpz_class>> combine(const mpz_class& a,
                                                       const std::vector<std::pair<std::size_t, mpz_class>>& r,
                                                       const mpz_class& b,
                                                       const std::vector<std::pair<std::size_t, mpz_class>>& s)
{
    std::vector<std::pair<std::size_t, mpz_class>> out;
    out.reserve(r.size() + s.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < r.size() || j < s.size()) {
        if (j == s.size() || (i < r.size() && r[i].first < s[j].first)) {
            out.emplace_back(r[i].first, a * r[i].second);
            ++i;
        } else if (i == r.size() || s[j].first < r[i].first) {
            out.emplace_back(s[j].first, -b * s[j].second);
            ++j;
        } else {
            mpz_class v = a * r[i].second - b * s[j].second;
            if (v != 0) out.emplace_back(r[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

EchelonBasis::IntRow EchelonBasis::to_int_row(const SparseVector& row) const
{
    mpz_class l = 1;
    for (const auto& [c, v] : row) {
        if (c >= cols_) throw InputError("EchelonBasis: column index out of range");
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    }
    IntRow r;
    r.reserve(row.size());
    for (const auto& [c, v] : row)
        if (!is_zero(v)) r.emplace_back(c, v.get_num() * (l / v.get_den()));
    std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    make_primitive(r);
    return r;
}

void EchelonBasis::reduce(IntRow& r) const
{
    std::size_t pos = 0;
    while (pos < r.size()) {
        const auto it = rows_.find(r[pos].first);
        if (it == rows_.end()) {
            ++pos;
            continue;
        }
        const IntRow& s = it->second;
        // s has nothing left of its pivot, so entries before pos are untouched.
        r = combine(s.front().second, r, r[pos].second, s);
        make_primitive(r);
    }
}

bool EchelonBasis::insert(const SparseVector& row)
{
    IntRow r = to_int_row(row);
    reduce(r);
    if (r.empty()) return false;
    make_primitive(r);
    const std::size_t p = r.front().first;
    for (auto& [q, s] : rows_) {
        if (q > p) break;
        const auto hit = std::find_if(s.begin(), s.end(), [p](const auto& e) { return e.first == p; });
        if (hit == s.end()) continue;
        const mpz_class coeff = hit->second;
        s = combine(r.front().second, s, coeff, r);
        make_primitive(s);
    }
    rows_.emplace(p, std::move(r));
    return true;
}

bool EchelonBasis::insert(const Vector& row)
{
    if (row.size() != cols_) throw InputError("EchelonBasis: row length mismatch");
    return insert(to_sparse(row));
}

bool EchelonBasis::contains(const Vector& row) const
{
    if (row.size() != cols_) throw InputError("EchelonBasis: row length mismatch");
    IntRow r = to_int_row(to_sparse(row));
    reduce(r);
    return r.empty();
}

std::vector<Vector> EchelonBasis::rows() const
{
    std::vector<Vector> out;
    out.reserve(rows_.size());
    for (const auto& [p, r] : rows_) {
        Vector v(cols_, Scalar(0));
        const mpz_class& lead = r.front().second;
        for (const auto& [c, x] : r) {
            v[c] = Scalar(x, lead);
            v[c].canonicalize();
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<std::size_t> EchelonBasis::pivots() const
{
    std::vector<std::size_t> out;
    for (const auto& [p, r] : rows_) out.push_back(p);
    return out;
}

std::vector<Vector> EchelonBasis::kernel() const
{
    std::vector<char> is_pivot(cols_, 0);
    for (const auto& [p, r] : rows_) is_pivot[p] = 1;

    EchelonBasis k(cols_);
    for (std::size_t f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        SparseVector v;
        v.emplace_back(f, Scalar(1));
        for (const auto& [p, r] : rows_) {
            for (const auto& [c, x] : r) {
                if (c != f) continue;
                Scalar val(-x, r.front().second);
                val.canonicalize();
                v.emplace_back(p, val);
            }
        }
        std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        k.insert(v);
    }
    return k.rows();
}

std::vector<Vector> kernel(std::size_t cols, const std::vector<SparseVector>& rows)
{
    EchelonBasis eb(cols);
    for (const auto& r : rows) eb.insert(r);
    return eb.kernel();
}

MemberSearch find_nonsingular_member(std::span<const Matrix> space, std::uint64_t seed, std::size_t attempts)
{
    if (space.empty()) throw InputError("member search over an empty space");
    const std::size_t n = space.front().rows();
    for (const auto& m : space)
        if (!m.square() || m.rows() != n) throw InputError("member search: inconsistent matrix shapes");

    MemberSearch out;

    // Common right kernel, then common left kernel.
    for (int side = 0; side < 2 && !out.nonexistence_proved; ++side) {
        EchelonBasis eb(n);
        for (const auto& m : space) {
            const Matrix& src = side == 0 ? m : m.transpose();
            for (std::size_t r = 0; r < n; ++r) eb.insert(src.row(r));
        }
        if (eb.rank() < n) {
            out.nonexistence_proved = true;
            out.witness = eb.kernel().front();
        }
    }
    if (out.nonexistence_proved) return out;

    std::mt19937_64 engine(seed);
    for (std::size_t t = 0; t < attempts; ++t) {
        std::vector<Scalar> coeffs(space.size());
        const std::uint64_t height = t + 1;
        for (auto& c : coeffs) {
            if (t == 0) {
                c = 1;
            } else {
                const auto draw = static_cast<std::int64_t>(engine() % (2 * height + 1));
                c = Scalar(static_cast<long>(draw - static_cast<std::int64_t>(height)));
            }
        }
        Matrix candidate(n, n);
        for (std::size_t i = 0; i < space.size(); ++i)
            if (!is_zero(coeffs[i])) candidate = candidate + space[i].scaled(coeffs[i]);
        out.attempts_used = t + 1;
        if (nonsingular(candidate)) {
            out.member = std::move(candidate);
            out.coefficients = std::move(coeffs);
            return out;
        }
    }
    return out;
}

}  // namespace trilie
