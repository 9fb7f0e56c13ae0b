#pragma once

// JSON configuration parsing and canonical serialization for the command-line
// tool: cyclotomic literals, extensions, algebras, automorphisms, cocycles,
// points, module labels, and the deterministic report encodings.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "galcur/reps.hpp"

namespace galcur {

using Json = nlohmann::ordered_json;

/// FNV-1a 64-bit hash of a byte string, as 16 lowercase hex digits.
std::string fnv1a64_hex(const std::string& bytes);

/// Cyclotomic literal (string in the z<n> grammar).  Throws ConfigError.
CycNum parse_cyc(const Json& j);

/// Array of num_vars cyclotomic literals.
TorusPoint parse_point(const Json& j, int num_vars);

/// Laurent polynomial: either a string literal (constant) or an array of
/// {"exp": [...], "coeff": "..."} terms.
LaurentPoly parse_laurent(const Json& j, int num_vars);

/// Rectangular matrix of cyclotomic literals.
CycMatrix parse_matrix(const Json& j);

/// {"orders": [...], "roots": [...]}; roots default to the standard primitive
/// roots of unity when omitted.
ExtensionSpec parse_extension(const Json& j);

/// {"type": "sl"|"matrix", "n": k}.
StructureAlgebra parse_algebra(const Json& j);

/// One automorphism: {"conjugate": n x n matrix}, {"coords": d x d matrix},
/// or {"negative_transpose": true}; validated by check_auto.
AlgebraAuto parse_auto(const Json& j, const StructureAlgebra& g, const Json& algebra_cfg);

/// Full form description: kind, algebra, extension, and the kind-specific
/// twisting data (autos / cocycle / nothing for the Azumaya algebra).
FormSpec parse_form(const Json& j);

/// [{"weight": [...], "point": [...]}, ...].
ModuleLabel parse_label(const Json& j, int num_vars);

Json point_json(const TorusPoint& a);
Json cyc_matrix_json(const CycMatrix& m);
Json label_entry_json(const LabelEntry& e);
Json chi_json(const InvariantChi& chi);

/// Canonical one-line form, terms in exponent order: "(c)*t^(e1,...,eN)".
std::string laurent_str(const LaurentPoly& p);

} // namespace galcur
