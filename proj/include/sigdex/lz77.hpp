#pragma once

#include <unordered_map>

#include "sigdex/editor.hpp"
#include "sigdex/index.hpp"

namespace sigdex {

/// One factor of the self-referential greedy LZ77 factorization: a fresh
/// literal character, or a reference to an earlier occurrence (which may
/// overlap the factor itself).
struct Factor {
    bool is_literal;
    unsigned char ch; // literal payload
    std::uint64_t pos; // reference source, 1-based
    std::uint64_t len;

    static Factor literal(unsigned char c) { return {true, c, 0, 0}; }
    static Factor reference(std::uint64_t pos, std::uint64_t len) { return {false, 0, pos, len}; }

    friend bool operator==(const Factor&, const Factor&) = default;
};

/// weight(e) = min vOcc(e) + |e.left| for every pair/run signature: the
/// text position just past the left part of e's earliest occurrence.
using WeightMap = std::unordered_map<Signature, std::uint64_t>;

WeightMap compute_weights(const Encoding& enc);

/// Minimum weight over primary occurrences of P split at i, if any.
std::optional<std::uint64_t> fst_occ(const Encoding& enc, Index& idx, const WeightMap& wmap,
                                     const PatternHandle& p, std::uint64_t i);

/// Leftmost position < j where T[j..j+k-1] also occurs, if any.
std::optional<std::uint64_t> fst(const Encoding& enc, Index& idx, const WeightMap& wmap,
                                 std::uint64_t j, std::uint64_t k);

/// Greedy self-referential LZ77 factorization of the frozen encoding.
std::vector<Factor> factorize(Encoding& enc);
std::vector<Factor> factorize_text(std::string_view text, ParserParams params = {});

/// Rebuilds an encoding from factors by repeated appends, reusing the
/// earlier occurrence of every reference.
Encoding from_factors(std::span<const Factor> factors, ParserParams params = {});

/// Factor text format: "L <byte>" or "F <pos> <len>", LF-terminated.
std::string serialize_factors(std::span<const Factor> factors);
std::vector<Factor> parse_factors(std::string_view text);

} // namespace sigdex
