#pragma once

#include <iosfwd>

#include "sigdex/encoding.hpp"

namespace sigdex {

/// Text persistence of an encoding. Header "SIGENC 1", the text length,
/// the start id (or "-"), then one line per live signature in ascending id
/// order. Ids are written verbatim, so edited encodings round-trip exactly
/// and serialization is byte-deterministic.
void save_encoding(const Encoding& enc, std::ostream& out);

/// Parses, recomputes lengths/levels, and audits store invariants.
/// Throws std::runtime_error on malformed input.
Encoding load_encoding(std::istream& in, ParserParams params = {});

std::string encoding_to_string(const Encoding& enc);
Encoding encoding_from_string(std::string_view text, ParserParams params = {});

} // namespace sigdex
