#include "trilie/scalar.hpp"

#include <cctype>

namespace trilie {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Scalar parse_scalar(std::string_view text)
{
    std::string_view body = text;
    if (!body.empty() && body.front() == '-') body.remove_prefix(1);
    const auto slash = body.find('/');
    const std::string_view num = body.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw InputError("malformed rational '" + std::string(text) + "'");

    mpz_class d(std::string(den), 10);
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    mpz_class n(std::string(num), 10);
    if (text.front() == '-') n = -n;
    Scalar r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Scalar& value)
{
    return value.get_str(10);
}

bool is_zero(const Vector& v)
{
    for (const auto& x : v)
        if (!is_zero(x)) return false;
    return true;
}

Vector zero_vector(std::size_t n)
{
    return Vector(n, Scalar(0));
}

Vector unit_vector(std::size_t n, std::size_t i)
{
    Vector v(n, Scalar(0));
    v.at(i) = 1;
    return v;
}

Scalar dot(const Vector& a, const Vector& b)
{
    if (a.size() != b.size()) throw InputError("dot: length mismatch");
    Scalar s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!is_zero(a[i]) && !is_zero(b[i])) s += a[i] * b[i];
    return s;
}

Vector to_dense(const SparseVector& v, std::size_t n)
{
    Vector out(n, Scalar(0));
    for (const auto& [i, x] : v) out.at(i) = x;
    return out;
}

SparseVector to_sparse(const Vector& v)
{
    SparseVector out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!is_zero(v[i])) out.emplace_back(i, v[i]);
    return out;
}

void axpy(Vector& out, const Scalar& factor, const SparseVector& v)
{
    if (is_zero(factor)) return;
    for (const auto& [i, x] : v) out[i] += factor * x;
}

void axpy(Vector& out, const Scalar& factor, const Vector& v)
{
    if (is_zero(factor)) return;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!is_zero(v[i])) out[i] += factor * v[i];
}

}  // namespace trilie
