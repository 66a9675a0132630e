#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sigdex {

/// A signature names one unique right-hand side in the dictionary.
/// 0 is reserved as "no signature".
using Signature = std::uint64_t;
constexpr Signature kNoSignature = 0;

enum class AssignKind : std::uint8_t { Char = 0, Pair = 1, Run = 2 };

/// Right-hand side of a production: a character, an ordered pair, or a
/// run base^exp (exp >= 1).
struct Assignment {
    AssignKind kind;
    std::uint64_t a; // Char: codepoint, Pair: left, Run: base
    std::uint64_t b; // Pair: right, Run: exponent

    static Assignment character(std::uint32_t c) { return {AssignKind::Char, c, 0}; }
    static Assignment pair(Signature l, Signature r) { return {AssignKind::Pair, l, r}; }
    static Assignment run(Signature base, std::uint64_t exp) { return {AssignKind::Run, base, exp}; }

    friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

/// Signature dictionary plus its reverse DAG. Interning is injective: one
/// live signature per right-hand side. Operand ids are always smaller than
/// the owning id, so the DAG is acyclic by construction.
///
/// Mutation requires exclusive access; concurrent readers are fine while no
/// writer is active.
class GrammarStore {
public:
    struct Listener {
        virtual ~Listener() = default;
        virtual void on_add(Signature e) = 0;
        // fired before the node is erased; the node and its operands are
        // still readable
        virtual void on_remove(Signature e) = 0;
    };

    /// Returns the signature of x, allocating max-id+1 if unmapped.
    Signature intern(const Assignment& x);

    /// Never allocates.
    std::optional<Signature> lookup(const Assignment& x) const;

    /// Left-fold of pair interning over a block of 2..5 same-level symbols.
    Signature fold_block(std::span<const Signature> seq);

    const Assignment& assignment_of(Signature e) const { return node(e).assign; }
    std::uint64_t length_of(Signature e) const { return node(e).length; }
    std::uint32_t level_of(Signature e) const { return node(e).level; }
    std::uint32_t refcount_of(Signature e) const { return node(e).refcount; }

    /// Parent multiset: one entry per occurrence of e in a right-hand side.
    std::span<const Signature> parents_of(Signature e) const { return node(e).parents; }

    /// Drops one reference; at zero the node is removed and release cascades
    /// to its operands.
    void release(Signature e);

    /// Pin/unpin a root (start symbol or temporary pattern). An unpin is a
    /// release of the pin reference.
    void pin(Signature e);
    void unpin(Signature e) { release_pin(e); }

    bool is_live(Signature e) const {
        return e != kNoSignature && e < nodes_.size() && nodes_[e].live;
    }
    std::size_t live_count() const { return live_count_; }
    Signature max_id() const { return nodes_.size() - 1; }

    /// Live signatures in ascending id order.
    void for_each_live(const std::function<void(Signature, const Assignment&)>& fn) const;

    /// Mark-sweep removal of everything not reachable from the given roots
    /// or a pin. Returns the removed ids (descending).
    std::vector<Signature> collect_garbage(std::span<const Signature> roots);

    std::vector<Signature> pinned() const;

    /// Full-store invariant check: dictionary bijection, acyclicity, the
    /// length/level equations, parent/refcount bookkeeping.
    void audit() const;

    void add_listener(Listener* l) { listeners_.push_back(l); }
    void remove_listener(Listener* l);

    /// Load path: installs a node under a caller-chosen id. Ids must arrive
    /// in ascending order and reference only smaller live ids.
    void insert_raw(Signature id, const Assignment& x);

private:
    struct Node {
        Assignment assign{AssignKind::Char, 0, 0};
        std::uint64_t length = 0;
        std::uint32_t level = 0;
        std::uint32_t refcount = 0;
        std::uint32_t pins = 0;
        bool live = false;
        std::vector<Signature> parents;
    };

    const Node& node(Signature e) const {
        if (!is_live(e)) throw std::invalid_argument("GrammarStore: dead or unknown signature");
        return nodes_[e];
    }
    Node& node_mut(Signature e) {
        if (!is_live(e)) throw std::invalid_argument("GrammarStore: dead or unknown signature");
        return nodes_[e];
    }

    void check_operands(const Assignment& x) const;
    void derive_meta(const Assignment& x, std::uint64_t& length, std::uint32_t& level) const;
    void attach(Signature id, const Assignment& x);
    void remove_node(Signature e);
    void release_pin(Signature e);

    std::map<Assignment, Signature> dict_;
    std::vector<Node> nodes_ = std::vector<Node>(1); // id 0 reserved
    std::size_t live_count_ = 0;
    std::vector<Listener*> listeners_;
};

} // namespace sigdex
