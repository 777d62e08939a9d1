#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "spinrec/multivector.hpp"
#include "spinrec/ortho_matrix.hpp"
#include "spinrec/rotor_recovery.hpp"

namespace spinrec::io {

using Json = nlohmann::ordered_json;

// Blade labels list ascending 1-based generator indices: "" is the scalar, "12"
// is e1e2. For n >= 10 indices are comma separated ("1,12"); a comma-separated
// label is accepted for any n.
std::string blade_label(BladeMask mask, const Signature& sig);
BladeMask parse_blade_label(std::string_view label, const Signature& sig);

Json multivector_to_json(const Multivector& m);
Multivector multivector_from_json(const Json& blades, const Signature& sig);

/// Reads {"p": int, "q": int}; falls back to `fallback` when the keys are absent.
Signature signature_from_json(const Json& doc, std::optional<Signature> fallback);

struct MatrixDocument {
  Signature sig;
  SquareMatrix entries;
};

/// {"p", "q", "entries": [[row-major]]}.
MatrixDocument matrix_from_json(const Json& doc, std::optional<Signature> fallback);
/// Row-major CSV, one matrix row per line; the signature must be supplied.
MatrixDocument matrix_from_csv(std::string_view text, const Signature& sig);

/// {"p", "q", "multivector" | "S": {...}}.
Multivector rotor_from_json(const Json& doc, std::optional<Signature> fallback);
/// {"p", "q", "frames": [{...}, ...]} or a bare array of multivectors.
std::vector<Multivector> frames_from_json(const Json& doc, std::optional<Signature> fallback);

Json matrix_to_json(const OrthoMatrix& p);
Json component_to_json(const GroupComponent& g);
Json spin_tags_to_json(const SpinGroupTags& tags);
Json rotor_result_to_json(const RotorResult& r);

Json parse_json(std::string_view text);
/// Serializes with every floating-point value printed to 17 significant digits.
std::string dump(const Json& doc, int indent = 2);

}  // namespace spinrec::io
