#pragma once

// JSON wire formats. Numbers are written in shortest round-trip form, so a
// document read back yields bit-identical doubles.
//
// FracAffineMap: {"n", "m", "A": [[...]], "a": [...], "B": [...], "b", "anchor": [...]}

#include "cevarep/certify.hpp"
#include "cevarep/error.hpp"
#include "cevarep/extract.hpp"
#include "cevarep/fracaffine.hpp"

#include <string>
#include <string_view>

namespace cevarep {

/// indent < 0 gives a single line.
std::string map_to_json(const FracAffineMap& f, int indent = -1);

/// Throws SyntaxError on malformed JSON and InvalidArgument on schema errors;
/// constructor errors (EmptyDomain, DimensionMismatch) pass through.
FracAffineMap map_from_json(std::string_view text);

std::string witness_to_json(const Witness& w, int indent = -1);
Witness witness_from_json(std::string_view text);

std::string report_to_json(const CertReport& r, int indent = -1);
std::string extract_to_json(const ExtractResult& r, int indent = -1);

/// {"error": {"kind": ..., "message": ...}} plus line/column for ParseError.
std::string error_to_json(const Error& e, int indent = -1);

}  // namespace cevarep
