#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sigdex {

/// Context widths and relabel depth of the locally consistent parser.
/// Fixed for the lifetime of an encoding; two encodings with equal params
/// parse identically.
struct ParserParams {
    std::uint32_t reduce_rounds = 6;
    std::uint32_t delta_left = 12;
    std::uint32_t delta_right = 6;

    void validate() const {
        if (delta_left < reduce_rounds + 6)
            throw std::invalid_argument("ParserParams: delta_left < reduce_rounds + 6");
        if (delta_right < 6)
            throw std::invalid_argument("ParserParams: delta_right < 6");
    }

    // window budget consumed by one trim level: |L| + |R| + the two edge runs
    std::uint32_t seam_window() const { return delta_left + delta_right + 9; }

    friend bool operator==(const ParserParams&, const ParserParams&) = default;
};

using Symbol = std::uint64_t;

/// One maximal run of a symbol sequence.
struct SymbolRun {
    Symbol symbol;
    std::uint64_t exp;

    friend bool operator==(const SymbolRun&, const SymbolRun&) = default;
};

/// Relabels a sequence of distinct-adjacent word-sized values down to the
/// colors {0,1,2}, keeping adjacent outputs distinct. Position i of the
/// output depends only on p[i-rounds-3 .. i+3] and the distance of i from
/// the sequence ends.
std::vector<std::uint8_t> reduce_colors(std::span<const Symbol> p, std::uint32_t rounds);

/// Block-start bits for a distinct-adjacent sequence. bits[0] = 1, no two
/// adjacent bits set, and every 4 consecutive interior positions contain a
/// set bit. bits[i] is a pure function of p[i-delta_left .. i+delta_right]
/// with out-of-range positions read as a sentinel below all symbols.
std::vector<std::uint8_t> compute_landmarks(std::span<const Symbol> p, const ParserParams& params);

/// Splits p into blocks starting exactly where bits are set. All blocks
/// have length 2..4 except a final block of up to 5.
std::vector<std::vector<Symbol>> split_blocks(std::span<const Symbol> p,
                                              std::span<const std::uint8_t> bits);

/// Groups maximal runs of equal symbols.
std::vector<SymbolRun> group_runs(std::span<const Symbol> s);

} // namespace sigdex
