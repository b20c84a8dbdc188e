#pragma once

#include "trilie/constructions.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace trilie {

using Json = nlohmann::ordered_json;

/// Parse failure; location is a JSON-pointer-like path ("/brackets/2/args")
/// or "byte N" for syntax errors.
class ParseError : public InputError {
public:
    ParseError(const std::string& location, const std::string& message)
        : InputError(location + ": " + message), location_(location)
    {
    }
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

/// Input/output document. On disk every index is 1-based and every scalar is
/// a rational string.
///
///   {
///     "dim": 4,
///     "basis_names": ["x1", "x2", "x3", "x4"],
///     "brackets": [ {"args": [1, 2, 4], "value": {"3": "1"}} ],
///     "forms": { "omega": [["0", "0", "0", "1"], ...] },
///     "maps": { "D": [["2", "0", "0", "0"], ...] },
///     "cocycles": { "theta": [ {"args": [1, 2, 4], "value": {"3": "1/2"}} ] }
///   }
struct AlgebraDocument {
    StructureConstants algebra{1};
    std::vector<std::string> basis_names;
    std::map<std::string, BilinearForm> forms;
    std::map<std::string, LinearMap> maps;
    std::map<std::string, Cocycle> cocycles;

    bool operator==(const AlgebraDocument&) const = default;
};

AlgebraDocument parse_document(std::string_view text);

/// Canonical form: fixed key order, bracket and cocycle entries sorted by
/// args, value coordinates in increasing index order, zero coordinates
/// dropped.
Json document_to_json(const AlgebraDocument& doc);
std::string serialize_document(const AlgebraDocument& doc);

// Shared JSON encodings, 1-based.
Json scalar_json(const Scalar& s);
Json vector_json(const Vector& v);
Json sparse_json(const SparseVector& v);
Json matrix_json(const Matrix& m);
Json subspace_json(const Subspace& s);

/// FNV-1a 64-bit digest, as "fnv1a64:<16 hex digits>".
std::string input_digest(std::string_view bytes);

}  // namespace trilie
