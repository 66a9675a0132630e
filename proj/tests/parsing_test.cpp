#include <doctest.h>

#include <random>

#include "sigdex/parsing.hpp"

using namespace sigdex;

namespace {

const ParserParams kP{};

std::vector<Symbol> random_distinct_adjacent(std::mt19937_64& rng, std::size_t n,
                                             std::uint64_t universe) {
    std::uniform_int_distribution<std::uint64_t> d(1, universe);
    std::vector<Symbol> p(n);
    p[0] = d(rng);
    for (std::size_t i = 1; i < n; ++i) {
        do p[i] = d(rng);
        while (p[i] == p[i - 1]);
    }
    return p;
}

void check_landmark_invariants(const std::vector<std::uint8_t>& d) {
    REQUIRE(d[0] == 1);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) CHECK(d[i] + d[i + 1] <= 1);
    // every window of four positions not touching the end holds a mark
    for (std::size_t i = 0; i + 4 <= d.size() - 1; ++i)
        CHECK(d[i] + d[i + 1] + d[i + 2] + d[i + 3] >= 1);
}

} // namespace

TEST_CASE("reduce_colors: single element") {
    const std::vector<Symbol> p{5};
    const auto c = reduce_colors(p, kP.reduce_rounds);
    REQUIRE(c.size() == 1);
    CHECK(c[0] <= 2);
}

TEST_CASE("reduce_colors: first relabel round uses the least differing bit") {
    // 3=011b vs all-ones neighbor differs first at bit 2 -> 2*2+0; 7=111b vs
    // 3 differs at bit 2 -> 2*2+1
    const std::vector<Symbol> p{3, 7};
    const auto one_round = reduce_colors(p, 1);
    REQUIRE(one_round == std::vector<std::uint8_t>{4, 5});
    const auto full = reduce_colors(p, kP.reduce_rounds);
    CHECK(full[0] <= 2);
    CHECK(full[1] <= 2);
    CHECK(full[0] != full[1]);
}

TEST_CASE("reduce_colors: random sequences land in {0,1,2}, adjacent distinct") {
    std::mt19937_64 rng(42);
    for (int it = 0; it < 20; ++it) {
        const auto p = random_distinct_adjacent(rng, 256, ~0ull - 1);
        const auto c = reduce_colors(p, kP.reduce_rounds);
        REQUIRE(c.size() == p.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(c[i] <= 2);
            if (i) CHECK(c[i] != c[i - 1]);
        }
    }
}

TEST_CASE("reduce_colors: window locality") {
    // output at i may depend only on p[i-rounds-3 .. i+3], so a single flip
    // at `flip` can change outputs only inside [flip-3, flip+rounds+3]
    std::mt19937_64 rng(7);
    for (int it = 0; it < 50; ++it) {
        auto p = random_distinct_adjacent(rng, 128, 1u << 20);
        auto q = p;
        const std::size_t flip = 64;
        do q[flip] = std::uniform_int_distribution<std::uint64_t>(1, 1u << 20)(rng);
        while (q[flip] == q[flip - 1] || q[flip] == q[flip + 1] || q[flip] == p[flip]);
        const auto cp = reduce_colors(p, kP.reduce_rounds);
        const auto cq = reduce_colors(q, kP.reduce_rounds);
        for (std::size_t i = 0; i < p.size(); ++i)
            if (i + 3 < flip || i > flip + kP.reduce_rounds + 3) CHECK(cp[i] == cq[i]);
    }
}

TEST_CASE("reduce_colors: rejects adjacent equal input") {
    const std::vector<Symbol> p{4, 4};
    CHECK_THROWS_AS(reduce_colors(p, kP.reduce_rounds), std::invalid_argument);
    CHECK_THROWS_AS(reduce_colors(std::vector<Symbol>{}, kP.reduce_rounds),
                    std::invalid_argument);
}

TEST_CASE("compute_landmarks: forced single mark") {
    CHECK(compute_landmarks(std::vector<Symbol>{5}, kP) == std::vector<std::uint8_t>{1});
    CHECK(compute_landmarks(std::vector<Symbol>{3, 7}, kP) == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("compute_landmarks: invariants on random input") {
    std::mt19937_64 rng(1234);
    for (int it = 0; it < 40; ++it) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 400);
        const auto p = random_distinct_adjacent(rng, n, 1ull << 40);
        check_landmark_invariants(compute_landmarks(p, kP));
    }
}

TEST_CASE("compute_landmarks: equal windows give equal bits") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 30; ++it) {
        // plant the same window at two interior offsets of one sequence
        auto p = random_distinct_adjacent(rng, 64, 1u << 16);
        const std::size_t a = 10, b = 40;
        for (std::size_t k = 0; k <= kP.delta_left + kP.delta_right; ++k)
            p[b - kP.delta_left + k] = p[a - kP.delta_left + k];
        // repair adjacency at the copy borders
        bool ok = true;
        for (std::size_t i = 1; i < p.size(); ++i)
            if (p[i] == p[i - 1]) ok = false;
        if (!ok) continue;
        const auto d = compute_landmarks(p, kP);
        CHECK(d[a - 1] == d[b - 1]);
    }
}

TEST_CASE("compute_landmarks: consistency across two sequences") {
    std::mt19937_64 rng(500);
    for (int it = 0; it < 30; ++it) {
        const auto p = random_distinct_adjacent(rng, 80, 1u << 16);
        // q shares p's window around position a at a different position
        const std::size_t a = 30, b = 45;
        auto q = random_distinct_adjacent(rng, 100, 1u << 16);
        for (std::size_t k = 0; k <= kP.delta_left + kP.delta_right; ++k)
            q[b - 1 - kP.delta_left + k] = p[a - 1 - kP.delta_left + k];
        bool ok = true;
        for (std::size_t i = 1; i < q.size(); ++i)
            if (q[i] == q[i - 1]) ok = false;
        if (!ok) continue;
        const auto dp = compute_landmarks(p, kP);
        const auto dq = compute_landmarks(q, kP);
        CHECK(dp[a - 1] == dq[b - 1]);
    }
}

TEST_CASE("split_blocks: worked example") {
    const std::vector<Symbol> p{1, 2, 3, 2, 5, 7, 6, 4, 3, 4, 3, 4, 1, 2, 3, 4, 5};
    const std::vector<std::uint8_t> d{1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0};
    const auto blocks = split_blocks(p, d);
    const std::vector<std::vector<Symbol>> expect{
        {1, 2, 3}, {2, 5}, {7, 6, 4}, {3, 4, 3, 4}, {1, 2}, {3, 4, 5}};
    CHECK(blocks == expect);
}

TEST_CASE("split_blocks: two elements, one block") {
    const std::vector<Symbol> p{3, 7};
    const std::vector<std::uint8_t> d{1, 0};
    const auto blocks = split_blocks(p, d);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0] == std::vector<Symbol>{3, 7});
}

TEST_CASE("split_blocks: partition property on random input") {
    std::mt19937_64 rng(77);
    for (int it = 0; it < 20; ++it) {
        const auto p = random_distinct_adjacent(rng, 1000, 1ull << 30);
        const auto d = compute_landmarks(p, kP);
        const auto blocks = split_blocks(p, d);
        std::vector<Symbol> flat;
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            const auto& b = blocks[bi];
            const bool last = bi + 1 == blocks.size();
            CHECK(b.size() >= 2);
            CHECK(b.size() <= (last ? 5 : 4));
            flat.insert(flat.end(), b.begin(), b.end());
        }
        CHECK(flat == p);
    }
}

TEST_CASE("group_runs: worked example and identities") {
    // aabbbbbabb -> a^2 b^5 a^1 b^2
    const std::vector<Symbol> s{'a', 'a', 'b', 'b', 'b', 'b', 'b', 'a', 'b', 'b'};
    const auto runs = group_runs(s);
    const std::vector<SymbolRun> expect{{'a', 2}, {'b', 5}, {'a', 1}, {'b', 2}};
    CHECK(runs == expect);

    CHECK(group_runs(std::vector<Symbol>{9}) == std::vector<SymbolRun>{{9, 1}});
    CHECK(group_runs(std::vector<Symbol>{4, 4, 4, 4}) == std::vector<SymbolRun>{{4, 4}});
}

TEST_CASE("group_runs: expansion identity on random input") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint64_t> d(1, 4);
    for (int it = 0; it < 20; ++it) {
        std::vector<Symbol> s(300);
        for (auto& x : s) x = d(rng);
        const auto runs = group_runs(s);
        std::vector<Symbol> flat;
        for (const auto& r : runs) {
            CHECK(r.exp >= 1);
            flat.insert(flat.end(), r.exp, r.symbol);
        }
        CHECK(flat == s);
        for (std::size_t i = 1; i < runs.size(); ++i) CHECK(runs[i].symbol != runs[i - 1].symbol);
    }
}

TEST_CASE("parsing determinism") {
    std::mt19937_64 rng(11);
    const auto p = random_distinct_adjacent(rng, 500, 1ull << 50);
    CHECK(compute_landmarks(p, kP) == compute_landmarks(p, kP));
    CHECK(reduce_colors(p, 6) == reduce_colors(p, 6));
}
