#include <doctest.h>

#include "oracles.hpp"
#include "sigdex/grammar_store.hpp"

using namespace sigdex;

namespace {

/// The worked run-length grammar: T = CABCAB(AB)^8CCCC, start 17.
GrammarStore example_grammar() {
    GrammarStore st;
    REQUIRE(st.intern(Assignment::character('A')) == 1);
    REQUIRE(st.intern(Assignment::character('B')) == 2);
    REQUIRE(st.intern(Assignment::character('C')) == 3);
    REQUIRE(st.intern(Assignment::run(3, 4)) == 4);
    REQUIRE(st.intern(Assignment::run(1, 1)) == 5);
    REQUIRE(st.intern(Assignment::run(2, 1)) == 6);
    REQUIRE(st.intern(Assignment::run(3, 1)) == 7);
    REQUIRE(st.intern(Assignment::pair(7, 5)) == 8);
    REQUIRE(st.intern(Assignment::pair(8, 6)) == 9);
    REQUIRE(st.intern(Assignment::pair(5, 6)) == 10);
    REQUIRE(st.intern(Assignment::pair(10, 4)) == 11);
    REQUIRE(st.intern(Assignment::run(9, 2)) == 12);
    REQUIRE(st.intern(Assignment::run(10, 7)) == 13);
    REQUIRE(st.intern(Assignment::run(11, 1)) == 14);
    REQUIRE(st.intern(Assignment::pair(12, 13)) == 15);
    REQUIRE(st.intern(Assignment::pair(15, 14)) == 16);
    REQUIRE(st.intern(Assignment::run(16, 1)) == 17);
    st.pin(17);
    return st;
}

} // namespace

TEST_CASE("intern and lookup on the worked grammar") {
    GrammarStore st = example_grammar();

    CHECK(st.lookup(Assignment::pair(7, 5)) == Signature{8});
    CHECK(st.lookup(Assignment::pair(6, 5)) == std::nullopt);
    CHECK(st.lookup(Assignment::character('A')) == Signature{1});

    // interning is idempotent
    CHECK(st.intern(Assignment::pair(7, 5)) == 8);
    CHECK(st.live_count() == 17);

    // a fresh right-hand side allocates max + 1
    CHECK(st.intern(Assignment::pair(6, 5)) == 18);
    st.audit();
}

TEST_CASE("fold_block folds pairs left to right") {
    GrammarStore st = example_grammar();
    const std::vector<Signature> b{7, 5, 6};
    CHECK(st.fold_block(b) == 9);

    const std::vector<Signature> two{5, 6};
    CHECK(st.fold_block(two) == st.intern(Assignment::pair(5, 6)));

    // a four-block unfolds to three nested pairs
    const std::vector<Signature> four{7, 5, 6, 7};
    const Signature f = st.fold_block(four);
    const Signature inner = st.lookup(Assignment::pair(8, 6)).value(); // 9
    CHECK(st.lookup(Assignment::pair(inner, 7)) == f);

    CHECK_THROWS_AS(st.fold_block(std::vector<Signature>{5}), std::invalid_argument);
    CHECK_THROWS_AS(st.fold_block(std::vector<Signature>{5, 6, 5, 6, 5, 6}),
                    std::invalid_argument);
    st.audit();
}

TEST_CASE("metadata accessors") {
    GrammarStore st = example_grammar();

    const auto p5 = st.parents_of(5);
    std::vector<Signature> ps(p5.begin(), p5.end());
    std::sort(ps.begin(), ps.end());
    CHECK(ps == std::vector<Signature>{8, 10});

    CHECK(st.length_of(1) == 1);
    CHECK(st.length_of(4) == 4);   // 3^4
    CHECK(st.length_of(9) == 3);   // CAB
    CHECK(st.length_of(13) == 14); // (AB)^7
    CHECK(st.length_of(17) == 26);

    CHECK(st.level_of(1) == 0);
    CHECK(st.level_of(7) == 1);
    CHECK(st.level_of(9) == 2);
    CHECK(st.level_of(12) == 3);
    CHECK(st.level_of(16) == 4);
    CHECK(st.level_of(17) == 5);

    CHECK_THROWS_AS(st.length_of(99), std::invalid_argument);
}

TEST_CASE("intern validates operands") {
    GrammarStore st;
    CHECK_THROWS_AS(st.intern(Assignment::pair(1, 2)), std::invalid_argument);
    const Signature a = st.intern(Assignment::character('a'));
    CHECK_THROWS_AS(st.intern(Assignment::run(a, 0)), std::invalid_argument);
    // pairing characters directly is malformed: pairs take run-level symbols
    CHECK_THROWS_AS(st.intern(Assignment::pair(a, a)), std::invalid_argument);
}

TEST_CASE("release semantics") {
    GrammarStore st = example_grammar();

    SUBCASE("fresh unreferenced signature releases back to the prior state") {
        const std::size_t before = st.live_count();
        const Signature fresh = st.intern(Assignment::pair(6, 5));
        st.pin(fresh);
        st.unpin(fresh);
        CHECK(st.live_count() == before);
        CHECK(st.lookup(Assignment::pair(6, 5)) == std::nullopt);
        st.audit();
    }

    SUBCASE("shared child survives when one referencing parent dies") {
        const std::uint32_t rc_before = st.refcount_of(5);
        CHECK(rc_before == 2); // parents 8 and 10
        const Signature tmp = st.intern(Assignment::pair(6, 5));
        CHECK(st.refcount_of(5) == rc_before + 1);
        st.pin(tmp);
        st.unpin(tmp); // tmp dies and releases its operands
        CHECK(st.is_live(5));
        CHECK(st.refcount_of(5) == rc_before);
        st.audit();
    }

    SUBCASE("releasing the start cascades to everything unreachable") {
        st.unpin(17);
        CHECK(st.live_count() == 0);
        st.audit();
    }
}

TEST_CASE("gc mark-sweep agrees with a reachability walk") {
    GrammarStore st = example_grammar();
    st.intern(Assignment::pair(6, 5)); // unreferenced junk
    const auto keep = oracle::reachable(st, {17});
    const auto removed = st.collect_garbage(std::vector<Signature>{17});
    CHECK(removed.size() == 1);
    CHECK(st.live_count() == keep.size());
    for (Signature e : keep) CHECK(st.is_live(e));
    // idempotent
    CHECK(st.collect_garbage(std::vector<Signature>{17}).empty());
    st.audit();
}

TEST_CASE("dictionary bijection holds for every live signature") {
    GrammarStore st = example_grammar();
    st.for_each_live([&](Signature id, const Assignment& a) {
        CHECK(st.lookup(a) == id);
        if (a.kind != AssignKind::Char) CHECK(a.a < id);
        if (a.kind == AssignKind::Pair) CHECK(a.b < id);
    });
    st.audit();
}

TEST_CASE("insert_raw accepts gaps and rejects duplicates") {
    GrammarStore st;
    st.insert_raw(1, Assignment::character('x'));
    st.insert_raw(5, Assignment::run(1, 3));
    CHECK(st.lookup(Assignment::run(1, 3)) == Signature{5});
    CHECK(st.max_id() == 5);
    CHECK_THROWS_AS(st.insert_raw(4, Assignment::character('y')), std::runtime_error);
    CHECK_THROWS_AS(st.insert_raw(6, Assignment::character('x')), std::runtime_error);
    CHECK(st.intern(Assignment::character('z')) == 6);
    st.audit();
}
