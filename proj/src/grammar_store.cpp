#include "sigdex/grammar_store.hpp"

#include <algorithm>

namespace sigdex {

void GrammarStore::check_operands(const Assignment& x) const {
    switch (x.kind) {
    case AssignKind::Char:
        break;
    case AssignKind::Pair: {
        if (!is_live(x.a) || !is_live(x.b))
            throw std::invalid_argument("GrammarStore: pair operand not live");
        const std::uint32_t ll = nodes_[x.a].level, lr = nodes_[x.b].level;
        // pairs sit on block levels: the right child is a run-level symbol,
        // the left child is either a sibling run symbol or the fold built so far
        if (lr % 2 != 1 || (ll != lr && ll != lr + 1))
            throw std::invalid_argument("GrammarStore: pair operand levels malformed");
        break;
    }
    case AssignKind::Run:
        if (!is_live(x.a))
            throw std::invalid_argument("GrammarStore: run base not live");
        if (x.b < 1) throw std::invalid_argument("GrammarStore: run exponent < 1");
        if (nodes_[x.a].level % 2 != 0)
            throw std::invalid_argument("GrammarStore: run base must be a block-level symbol");
        break;
    }
}

void GrammarStore::derive_meta(const Assignment& x, std::uint64_t& length, std::uint32_t& level) const {
    switch (x.kind) {
    case AssignKind::Char:
        length = 1;
        level = 0;
        break;
    case AssignKind::Pair:
        length = nodes_[x.a].length + nodes_[x.b].length;
        level = nodes_[x.b].level + 1;
        break;
    case AssignKind::Run:
        length = nodes_[x.a].length * x.b;
        level = nodes_[x.a].level + 1;
        break;
    }
}

void GrammarStore::attach(Signature id, const Assignment& x) {
    Node& n = nodes_[id];
    n.assign = x;
    derive_meta(x, n.length, n.level);
    n.refcount = 0;
    n.pins = 0;
    n.live = true;
    dict_.emplace(x, id);
    ++live_count_;
    if (x.kind == AssignKind::Pair) {
        nodes_[x.a].parents.push_back(id);
        ++nodes_[x.a].refcount;
        nodes_[x.b].parents.push_back(id);
        ++nodes_[x.b].refcount;
    } else if (x.kind == AssignKind::Run) {
        nodes_[x.a].parents.push_back(id);
        ++nodes_[x.a].refcount;
    }
    for (Listener* l : listeners_) l->on_add(id);
}

Signature GrammarStore::intern(const Assignment& x) {
    if (auto it = dict_.find(x); it != dict_.end()) return it->second;
    check_operands(x);
    const Signature id = nodes_.size();
    nodes_.emplace_back();
    attach(id, x);
    return id;
}

std::optional<Signature> GrammarStore::lookup(const Assignment& x) const {
    if (auto it = dict_.find(x); it != dict_.end()) return it->second;
    return std::nullopt;
}

Signature GrammarStore::fold_block(std::span<const Signature> seq) {
    if (seq.size() < 2 || seq.size() > 5)
        throw std::invalid_argument("fold_block: block length outside 2..5");
    const std::uint32_t lvl = level_of(seq[0]);
    for (Signature s : seq)
        if (level_of(s) != lvl)
            throw std::invalid_argument("fold_block: mixed-level block");
    Signature acc = seq[0];
    for (std::size_t i = 1; i < seq.size(); ++i)
        acc = intern(Assignment::pair(acc, seq[i]));
    return acc;
}

void GrammarStore::remove_node(Signature e) {
    Node& n = nodes_[e];
    for (Listener* l : listeners_) l->on_remove(e);
    dict_.erase(n.assign);
    n.live = false;
    --live_count_;

    auto drop_edge = [&](Signature child) {
        Node& c = nodes_[child];
        auto it = std::find(c.parents.begin(), c.parents.end(), e);
        if (it == c.parents.end())
            throw std::logic_error("GrammarStore: missing parent edge");
        c.parents.erase(it);
        release(child);
    };
    const Assignment a = n.assign;
    if (a.kind == AssignKind::Pair) {
        drop_edge(a.a);
        drop_edge(a.b);
    } else if (a.kind == AssignKind::Run) {
        drop_edge(a.a);
    }
    nodes_[e].parents.clear();
}

void GrammarStore::release(Signature e) {
    Node& n = node_mut(e);
    if (n.refcount > 0) --n.refcount;
    else throw std::logic_error("GrammarStore: release below zero");
    if (n.refcount == 0) remove_node(e);
}

void GrammarStore::pin(Signature e) {
    Node& n = node_mut(e);
    ++n.pins;
    ++n.refcount;
}

void GrammarStore::release_pin(Signature e) {
    Node& n = node_mut(e);
    if (n.pins == 0) throw std::logic_error("GrammarStore: unpin without pin");
    --n.pins;
    release(e);
}

void GrammarStore::for_each_live(const std::function<void(Signature, const Assignment&)>& fn) const {
    for (Signature id = 1; id < nodes_.size(); ++id)
        if (nodes_[id].live) fn(id, nodes_[id].assign);
}

std::vector<Signature> GrammarStore::pinned() const {
    std::vector<Signature> out;
    for (Signature id = 1; id < nodes_.size(); ++id)
        if (nodes_[id].live && nodes_[id].pins > 0) out.push_back(id);
    return out;
}

std::vector<Signature> GrammarStore::collect_garbage(std::span<const Signature> roots) {
    std::vector<bool> mark(nodes_.size(), false);
    std::vector<Signature> stack;
    auto push = [&](Signature e) {
        if (is_live(e) && !mark[e]) {
            mark[e] = true;
            stack.push_back(e);
        }
    };
    for (Signature r : roots) push(r);
    for (Signature id = 1; id < nodes_.size(); ++id)
        if (nodes_[id].live && nodes_[id].pins > 0) push(id);
    while (!stack.empty()) {
        const Signature e = stack.back();
        stack.pop_back();
        const Assignment& a = nodes_[e].assign;
        if (a.kind == AssignKind::Pair) {
            push(a.a);
            push(a.b);
        } else if (a.kind == AssignKind::Run) {
            push(a.a);
        }
    }

    std::vector<Signature> removed;
    // sweep parents before children so listeners always see live operands
    for (Signature id = nodes_.size() - 1; id >= 1; --id) {
        if (!nodes_[id].live || mark[id]) continue;
        Node& n = nodes_[id];
        for (Listener* l : listeners_) l->on_remove(id);
        dict_.erase(n.assign);
        n.live = false;
        n.parents.clear();
        --live_count_;
        removed.push_back(id);
    }
    if (!removed.empty()) {
        // rebuild surviving parent/refcount bookkeeping
        for (Signature id = 1; id < nodes_.size(); ++id)
            if (nodes_[id].live) {
                nodes_[id].parents.clear();
                nodes_[id].refcount = nodes_[id].pins;
            }
        for (Signature id = 1; id < nodes_.size(); ++id) {
            if (!nodes_[id].live) continue;
            const Assignment& a = nodes_[id].assign;
            if (a.kind == AssignKind::Pair) {
                nodes_[a.a].parents.push_back(id);
                ++nodes_[a.a].refcount;
                nodes_[a.b].parents.push_back(id);
                ++nodes_[a.b].refcount;
            } else if (a.kind == AssignKind::Run) {
                nodes_[a.a].parents.push_back(id);
                ++nodes_[a.a].refcount;
            }
        }
    }
    return removed;
}

void GrammarStore::remove_listener(Listener* l) {
    listeners_.erase(std::remove(listeners_.begin(), listeners_.end(), l), listeners_.end());
}

void GrammarStore::insert_raw(Signature id, const Assignment& x) {
    if (id < nodes_.size())
        throw std::runtime_error("GrammarStore: ids must arrive in ascending order");
    if (dict_.count(x))
        throw std::runtime_error("GrammarStore: duplicate right-hand side");
    check_operands(x);
    nodes_.resize(id + 1);
    attach(id, x);
}

void GrammarStore::audit() const {
    std::size_t seen = 0;
    std::vector<std::vector<Signature>> expect_parents(nodes_.size());
    for (Signature id = 1; id < nodes_.size(); ++id) {
        if (!nodes_[id].live) continue;
        const Assignment& a = nodes_[id].assign;
        if (a.kind == AssignKind::Pair) {
            expect_parents[a.a].push_back(id);
            expect_parents[a.b].push_back(id);
        } else if (a.kind == AssignKind::Run) {
            expect_parents[a.a].push_back(id);
        }
    }
    for (Signature id = 1; id < nodes_.size(); ++id) {
        const Node& n = nodes_[id];
        if (!n.live) continue;
        ++seen;
        auto it = dict_.find(n.assign);
        if (it == dict_.end() || it->second != id)
            throw std::logic_error("audit: dictionary bijection broken");

        const Assignment& a = n.assign;
        if (a.kind != AssignKind::Char) {
            if (a.a >= id || (a.kind == AssignKind::Pair && a.b >= id))
                throw std::logic_error("audit: operand id not smaller than owner");
            if (!nodes_[a.a].live || (a.kind == AssignKind::Pair && !nodes_[a.b].live))
                throw std::logic_error("audit: dangling operand");
        }
        std::uint64_t len;
        std::uint32_t lvl;
        derive_meta(a, len, lvl);
        if (len != n.length || lvl != n.level)
            throw std::logic_error("audit: stored length/level disagrees");

        if (n.refcount != n.pins + expect_parents[id].size())
            throw std::logic_error("audit: refcount disagrees with parent occurrences");
        std::vector<Signature> ps(n.parents.begin(), n.parents.end());
        std::sort(ps.begin(), ps.end());
        if (ps != expect_parents[id])
            throw std::logic_error("audit: parent multiset disagrees");
    }
    if (seen != live_count_ || seen != dict_.size())
        throw std::logic_error("audit: live counters disagree");
}

} // namespace sigdex
