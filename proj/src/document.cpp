#include "trilie/document.hpp"

#include <cstdio>
#include <set>

namespace trilie {

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

Scalar parse_scalar_at(const Json& j, const std::string& path)
{
    if (j.is_number_integer()) return Scalar(j.dump());
    if (!j.is_string()) throw ParseError(path, "expected a rational string such as \"3\" or \"-2/5\"");
    try {
        return parse_scalar(j.get<std::string>());
    } catch (const InputError& e) {
        throw ParseError(path, e.what());
    }
}

std::size_t parse_index(const Json& j, std::size_t dim, const std::string& path)
{
    if (!j.is_number_integer()) throw ParseError(path, "expected an integer index");
    const long long v = j.get<long long>();
    if (v < 1 || static_cast<unsigned long long>(v) > dim)
        throw ParseError(path, "index " + std::to_string(v) + " outside 1.." + std::to_string(dim));
    return static_cast<std::size_t>(v - 1);
}

std::size_t parse_key_index(const std::string& key, std::size_t dim, const std::string& path)
{
    if (key.empty() || key.size() > 9 || key.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(path, "coordinate key \"" + key + "\" is not a positive integer");
    const std::size_t v = std::stoul(key);
    if (v < 1 || v > dim) throw ParseError(path, "coordinate index " + key + " outside 1.." + std::to_string(dim));
    return v - 1;
}

const Json& require(const Json& obj, const char* key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path, std::string("missing key \"") + key + "\"");
    return *it;
}

// List of {args: [i<j<k], value: {l: rational}} entries.
std::vector<std::pair<Triple, Vector>> parse_triple_entries(const Json& list, std::size_t dim, const std::string& path)
{
    if (!list.is_array()) throw ParseError(path, "expected a list of entries");
    std::vector<std::pair<Triple, Vector>> out;
    std::set<Triple> seen;
    for (std::size_t e = 0; e < list.size(); ++e) {
        const std::string p = at(path, e);
        const Json& entry = list[e];
        if (!entry.is_object()) throw ParseError(p, "expected an object with args and value");
        for (const auto& [key, unused] : entry.items())
            if (key != "args" && key != "value") throw ParseError(at(p, key), "unknown key");
        const Json& args = require(entry, "args", p);
        if (!args.is_array() || args.size() != 3) throw ParseError(at(p, "args"), "expected three indices");
        Triple t{};
        for (std::size_t k = 0; k < 3; ++k) t[k] = parse_index(args[k], dim, at(at(p, "args"), k));
        if (!(t[0] < t[1] && t[1] < t[2]))
            throw ParseError(at(p, "args"), "indices must be strictly increasing");
        if (!seen.insert(t).second) throw ParseError(at(p, "args"), "repeated entry");
        const Json& value = require(entry, "value", p);
        if (!value.is_object()) throw ParseError(at(p, "value"), "expected an object of index: rational");
        Vector v = zero_vector(dim);
        for (const auto& [key, x] : value.items()) {
            const std::string vp = at(at(p, "value"), key);
            v[parse_key_index(key, dim, vp)] = parse_scalar_at(x, vp);
        }
        out.emplace_back(t, std::move(v));
    }
    return out;
}

Matrix parse_matrix(const Json& j, std::size_t dim, const std::string& path)
{
    if (!j.is_array() || j.size() != dim) throw ParseError(path, "expected " + std::to_string(dim) + " rows");
    Matrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const Json& row = j[r];
        if (!row.is_array() || row.size() != dim)
            throw ParseError(at(path, r), "expected " + std::to_string(dim) + " entries");
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = parse_scalar_at(row[c], at(at(path, r), c));
    }
    return m;
}

Json triple_entries_json(const std::vector<std::pair<Triple, SparseVector>>& entries)
{
    Json list = Json::array();
    for (const auto& [t, v] : entries) {
        Json e;
        e["args"] = {t[0] + 1, t[1] + 1, t[2] + 1};
        e["value"] = sparse_json(v);
        list.push_back(std::move(e));
    }
    return list;
}

}  // namespace

AlgebraDocument parse_document(std::string_view text)
{
    Json root;
    try {
        root = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), "malformed document");
    }
    if (!root.is_object()) throw ParseError("/", "document must be an object");
    static const std::set<std::string> known{"dim", "basis_names", "brackets", "forms", "maps", "cocycles"};
    for (const auto& [key, unused] : root.items())
        if (!known.count(key)) throw ParseError("/" + key, "unknown key");

    const Json& dim_json = require(root, "dim", "");
    if (!dim_json.is_number_integer() || dim_json.get<long long>() < 1)
        throw ParseError("/dim", "dimension must be a positive integer");
    const auto dim = static_cast<std::size_t>(dim_json.get<long long>());

    AlgebraDocument doc;
    doc.algebra = StructureConstants(dim);
    if (auto it = root.find("basis_names"); it != root.end()) {
        if (!it->is_array() || it->size() != dim)
            throw ParseError("/basis_names", "expected " + std::to_string(dim) + " names");
        for (std::size_t i = 0; i < dim; ++i) {
            if (!(*it)[i].is_string()) throw ParseError(at("/basis_names", i), "expected a string");
            doc.basis_names.push_back((*it)[i].get<std::string>());
        }
    }
    if (auto it = root.find("brackets"); it != root.end())
        for (const auto& [t, v] : parse_triple_entries(*it, dim, "/brackets")) doc.algebra.set_bracket(t[0], t[1], t[2], v);

    auto parse_named = [&](const char* key, auto&& each) {
        auto it = root.find(key);
        if (it == root.end()) return;
        const std::string path = std::string("/") + key;
        if (!it->is_object()) throw ParseError(path, "expected an object of named entries");
        for (const auto& [name, value] : it->items()) each(name, value, at(path, name));
    };
    parse_named("forms", [&](const std::string& name, const Json& v, const std::string& p) {
        doc.forms.emplace(name, BilinearForm(parse_matrix(v, dim, p)));
    });
    parse_named("maps", [&](const std::string& name, const Json& v, const std::string& p) {
        doc.maps.emplace(name, LinearMap(parse_matrix(v, dim, p)));
    });
    parse_named("cocycles", [&](const std::string& name, const Json& v, const std::string& p) {
        Cocycle th(dim);
        for (const auto& [t, value] : parse_triple_entries(v, dim, p)) th.set(t[0], t[1], t[2], value);
        doc.cocycles.emplace(name, std::move(th));
    });
    return doc;
}

Json scalar_json(const Scalar& s) { return to_string(s); }

Json vector_json(const Vector& v)
{
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
}

Json sparse_json(const SparseVector& v)
{
    Json out = Json::object();
    for (const auto& [i, x] : v) out[std::to_string(i + 1)] = to_string(x);
    return out;
}

Json matrix_json(const Matrix& m)
{
    Json out = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r)));
    return out;
}

Json subspace_json(const Subspace& s)
{
    Json out = Json::array();
    for (const auto& v : s.basis()) out.push_back(vector_json(v));
    return out;
}

Json document_to_json(const AlgebraDocument& doc)
{
    Json out;
    out["dim"] = doc.algebra.dim();
    if (!doc.basis_names.empty()) out["basis_names"] = doc.basis_names;
    out["brackets"] = triple_entries_json(doc.algebra.entries());
    out["forms"] = Json::object();
    for (const auto& [name, f] : doc.forms) out["forms"][name] = matrix_json(f.m);
    out["maps"] = Json::object();
    for (const auto& [name, d] : doc.maps) out["maps"][name] = matrix_json(d.m);
    out["cocycles"] = Json::object();
    for (const auto& [name, th] : doc.cocycles) out["cocycles"][name] = triple_entries_json(th.entries());
    return out;
}

std::string serialize_document(const AlgebraDocument& doc) { return document_to_json(doc).dump(2) + "\n"; }

std::string input_digest(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

}  // namespace trilie
