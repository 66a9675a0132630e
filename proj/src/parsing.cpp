#include "sigdex/parsing.hpp"

#include <bit>
#include <limits>

namespace sigdex {

namespace {

constexpr Symbol kLeftSentinel = std::numeric_limits<Symbol>::max();

void require_distinct_adjacent(std::span<const Symbol> p) {
    if (p.empty()) throw std::invalid_argument("parsing: empty input sequence");
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i] == p[i + 1])
            throw std::invalid_argument("parsing: adjacent elements equal");
}

} // namespace

std::vector<std::uint8_t> reduce_colors(std::span<const Symbol> p, std::uint32_t rounds) {
    require_distinct_adjacent(p);
    const std::size_t n = p.size();

    std::vector<Symbol> cur(p.begin(), p.end());
    for (std::uint32_t r = 0; r < rounds; ++r) {
        Symbol prev = kLeftSentinel;
        for (std::size_t i = 0; i < n; ++i) {
            const Symbol x = cur[i];
            const Symbol diff = x ^ prev;
            // diff != 0: adjacent values stay distinct round over round, and
            // real symbols never equal the all-ones sentinel
            const unsigned k = static_cast<unsigned>(std::countr_zero(diff));
            prev = x;
            cur[i] = 2 * static_cast<Symbol>(k) + ((x >> k) & 1);
        }
    }

    // sweep colors 5,4,3 down into {0,1,2}; each sweep reads the pre-sweep
    // state so a position's result depends only on its direct neighbors
    std::vector<std::uint8_t> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = static_cast<std::uint8_t>(cur[i]);
    for (std::uint8_t c : {std::uint8_t{5}, std::uint8_t{4}, std::uint8_t{3}}) {
        std::vector<std::uint8_t> prev = col;
        for (std::size_t i = 0; i < n; ++i) {
            if (prev[i] != c) continue;
            bool used[3] = {false, false, false};
            if (i > 0 && prev[i - 1] < 3) used[prev[i - 1]] = true;
            if (i + 1 < n && prev[i + 1] < 3) used[prev[i + 1]] = true;
            for (std::uint8_t v = 0; v < 3; ++v) {
                if (!used[v]) { col[i] = v; break; }
            }
        }
    }
    return col;
}

std::vector<std::uint8_t> compute_landmarks(std::span<const Symbol> p, const ParserParams& params) {
    params.validate();
    const auto col = reduce_colors(p, params.reduce_rounds);
    const std::size_t n = col.size();

    // color at a virtual out-of-range position: below all real colors
    auto at = [&](std::size_t i, std::ptrdiff_t d) -> int {
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + d;
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(n)) return -1;
        return col[static_cast<std::size_t>(j)];
    };

    std::vector<std::uint8_t> maxima(n, 0), bits(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        maxima[i] = (col[i] > at(i, -1) && col[i] > at(i, +1)) ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
        bool is_min = static_cast<int>(col[i]) < at(i, -1) && static_cast<int>(col[i]) < at(i, +1);
        bool neighbor_marked = (i > 0 && maxima[i - 1]) || (i + 1 < n && maxima[i + 1]);
        bits[i] = (maxima[i] || (is_min && !neighbor_marked)) ? 1 : 0;
    }

    // a mark on the final position would start a length-1 block; drop it and
    // let the preceding block run long (up to 5)
    if (n >= 2) bits[n - 1] = 0;
    // the first position always starts a block
    if (!bits[0]) {
        bits[0] = 1;
        if (n >= 2) bits[1] = 0;
    }
    return bits;
}

std::vector<std::vector<Symbol>> split_blocks(std::span<const Symbol> p,
                                              std::span<const std::uint8_t> bits) {
    if (p.size() != bits.size())
        throw std::invalid_argument("split_blocks: length mismatch");
    if (p.empty() || bits[0] != 1)
        throw std::invalid_argument("split_blocks: first position must start a block");

    std::vector<std::vector<Symbol>> blocks;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= p.size(); ++i) {
        if (i == p.size() || bits[i]) {
            blocks.emplace_back(p.begin() + start, p.begin() + i);
            start = i;
        }
    }
    return blocks;
}

std::vector<SymbolRun> group_runs(std::span<const Symbol> s) {
    if (s.empty()) throw std::invalid_argument("group_runs: empty input");
    std::vector<SymbolRun> runs;
    runs.push_back({s[0], 1});
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] == runs.back().symbol)
            ++runs.back().exp;
        else
            runs.push_back({s[i], 1});
    }
    return runs;
}

} // namespace sigdex
