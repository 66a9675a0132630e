#include "sigdex/editor.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace sigdex {

namespace {

struct Item {
    Signature sig;
    std::uint64_t exp;
};

struct DeltaRecorder final : GrammarStore::Listener {
    std::vector<Signature> added, removed;
    GrammarStore* store;

    explicit DeltaRecorder(GrammarStore& s) : store(&s) { s.add_listener(this); }
    ~DeltaRecorder() override { store->remove_listener(this); }

    void on_add(Signature e) override { added.push_back(e); }
    void on_remove(Signature e) override { removed.push_back(e); }

    EditDelta net() const {
        std::unordered_set<Signature> a(added.begin(), added.end());
        std::unordered_set<Signature> r(removed.begin(), removed.end());
        EditDelta d;
        for (Signature e : added)
            if (!r.count(e)) d.added.push_back(e);
        for (Signature e : removed)
            if (!a.count(e)) d.removed.push_back(e);
        return d;
    }
};

/// Collects, right-to-left, the last level-`lvl` elements of s's expansion.
void tail_rev(const GrammarStore& st, Signature s, std::uint32_t lvl, std::size_t want,
              std::vector<Signature>& rev) {
    if (rev.size() >= want) return;
    if (st.level_of(s) == lvl) {
        rev.push_back(s);
        return;
    }
    const Assignment& a = st.assignment_of(s);
    if (a.kind == AssignKind::Char)
        throw std::logic_error("editor: expansion ran past the leaves");
    if (a.kind == AssignKind::Pair) {
        // walk the fold right-to-left
        tail_rev(st, a.b, lvl, want, rev);
        tail_rev(st, a.a, lvl, want, rev);
    } else {
        for (std::uint64_t c = 0; c < a.b && rev.size() < want; ++c)
            tail_rev(st, a.a, lvl, want, rev);
    }
}

/// Collects, left-to-right, the first level-`lvl` elements of s's expansion.
void head_fwd(const GrammarStore& st, Signature s, std::uint32_t lvl, std::size_t want,
              std::vector<Signature>& out) {
    if (out.size() >= want) return;
    if (st.level_of(s) == lvl) {
        out.push_back(s);
        return;
    }
    const Assignment& a = st.assignment_of(s);
    if (a.kind == AssignKind::Char)
        throw std::logic_error("editor: expansion ran past the leaves");
    if (a.kind == AssignKind::Pair) {
        head_fwd(st, a.a, lvl, want, out);
        head_fwd(st, a.b, lvl, want, out);
    } else {
        for (std::uint64_t c = 0; c < a.b && out.size() < want; ++c)
            head_fwd(st, a.a, lvl, want, out);
    }
}

std::vector<Signature> left_context(const GrammarStore& st, const std::vector<Item>& work,
                                    std::size_t stretch_begin, std::uint32_t lvl, std::size_t want) {
    std::vector<Signature> rev;
    for (std::size_t idx = stretch_begin; idx-- > 0 && rev.size() < want;) {
        for (std::uint64_t c = 0; c < work[idx].exp && rev.size() < want; ++c)
            tail_rev(st, work[idx].sig, lvl, want, rev);
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

std::vector<Signature> right_context(const GrammarStore& st, const std::vector<Item>& work,
                                     std::size_t stretch_end, std::uint32_t lvl, std::size_t want) {
    std::vector<Signature> out;
    for (std::size_t idx = stretch_end; idx < work.size() && out.size() < want; ++idx) {
        for (std::uint64_t c = 0; c < work[idx].exp && out.size() < want; ++c)
            head_fwd(st, work[idx].sig, lvl, want, out);
    }
    return out;
}

/// Level-synchronized reparse of the concatenated items. Interior structure
/// of every piece is reused; only seam neighborhoods form new signatures.
Signature merge_items(GrammarStore& st, std::vector<Item> work, const ParserParams& pp) {
    std::uint64_t total_len = 0;
    for (const Item& it : work) total_len += st.length_of(it.sig) * it.exp;
    const std::uint32_t max_level = 2 * std::bit_width(total_len) + 16;

    for (std::uint32_t level = 0;; ++level) {
        if (work.size() == 1 && work[0].exp == 1 && st.level_of(work[0].sig) % 2 == 1) {
            st.pin(work[0].sig);
            return work[0].sig;
        }
        if (level > max_level) throw std::logic_error("merge: did not converge");

        std::vector<Item> next;
        next.reserve(work.size());
        std::size_t i = 0;
        while (i < work.size()) {
            if (st.level_of(work[i].sig) != level) {
                next.push_back(work[i]);
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < work.size() && st.level_of(work[j].sig) == level) ++j;

            if (level % 2 == 0) {
                // block-level symbols -> maximal runs
                std::vector<SymbolRun> runs;
                for (std::size_t t = i; t < j; ++t) {
                    if (!runs.empty() && runs.back().symbol == work[t].sig)
                        runs.back().exp += work[t].exp;
                    else
                        runs.push_back({work[t].sig, work[t].exp});
                }
                for (const auto& r : runs)
                    next.push_back({st.intern(Assignment::run(r.symbol, r.exp)), 1});
            } else {
                // run-level symbols -> landmark blocks, folded one level up
                std::vector<Signature> p;
                p.reserve(j - i);
                for (std::size_t t = i; t < j; ++t) {
                    if (work[t].exp != 1)
                        throw std::logic_error("merge: run-level item with exponent");
                    p.push_back(work[t].sig);
                }
                const auto ctx_l = left_context(st, work, i, level, pp.delta_left);
                const auto ctx_r = right_context(st, work, j, level, pp.delta_right + 1);

                std::vector<Signature> full;
                full.reserve(ctx_l.size() + p.size() + ctx_r.size());
                full.insert(full.end(), ctx_l.begin(), ctx_l.end());
                full.insert(full.end(), p.begin(), p.end());
                full.insert(full.end(), ctx_r.begin(), ctx_r.end());

                const auto bits = compute_landmarks(full, pp);
                const std::size_t base = ctx_l.size();
                if (!bits[base])
                    throw std::logic_error("merge: stretch does not start on a block boundary");
                if (!ctx_r.empty() && !bits[base + p.size()])
                    throw std::logic_error("merge: stretch does not end on a block boundary");

                std::size_t bstart = 0;
                for (std::size_t t = 1; t <= p.size(); ++t) {
                    if (t == p.size() || bits[base + t]) {
                        next.push_back(
                            {st.fold_block(std::span<const Signature>(p.data() + bstart, t - bstart)),
                             1});
                        bstart = t;
                    }
                }
            }
            i = j;
        }
        work = std::move(next);
    }
}

std::vector<Item> items_of(const std::vector<PowSeq>& pieces) {
    std::vector<Item> work;
    for (const PowSeq& ps : pieces) {
        if (ps.items.empty()) throw std::invalid_argument("merge_pow: empty piece");
        for (const PowItem& it : ps.items) {
            if (it.exp == 0) throw std::invalid_argument("merge_pow: zero exponent");
            if (!work.empty() && work.back().sig == it.sig) work.back().exp += it.exp;
            else work.push_back({it.sig, it.exp});
        }
    }
    return work;
}

} // namespace

std::pair<Signature, EditDelta> merge_pow(Encoding& enc, const std::vector<PowSeq>& pieces) {
    if (pieces.empty()) throw std::invalid_argument("merge_pow: no pieces");
    DeltaRecorder rec(enc.store());
    const Signature top = merge_items(enc.store(), items_of(pieces), enc.params());
    return {top, rec.net()};
}

EditDelta insert_str(Encoding& enc, std::uint64_t i, std::string_view y) {
    const std::uint64_t n = enc.text_len();
    if (y.empty()) throw std::invalid_argument("insert: empty string");
    if (i < 1 || i > n + 1) throw std::out_of_range("insert: position outside text");

    GrammarStore& st = enc.store();
    DeltaRecorder rec(st);

    if (enc.empty()) {
        const Signature s = encode_into(st, y, enc.params());
        enc.adopt_start(s, y.size());
        return rec.net();
    }

    std::vector<PowSeq> pieces;
    if (i > 1) pieces.push_back(enc.uniq_pow(enc.start(), 1, i - 1));
    const Signature ytop = encode_into(st, y, enc.params());
    pieces.push_back(uniq_pow_in(st, ytop, 1, y.size(), enc.params()));
    if (i <= n) pieces.push_back(enc.uniq_pow(enc.start(), i, n - i + 1));

    const Signature fresh = merge_items(st, items_of(pieces), enc.params());
    const Signature old = enc.start();
    enc.adopt_start(fresh, n + y.size());
    st.unpin(old);
    st.unpin(ytop);
    return rec.net();
}

EditDelta delete_range(Encoding& enc, std::uint64_t i, std::uint64_t k) {
    const std::uint64_t n = enc.text_len();
    if (k < 1 || i < 1 || i > n || i + k - 1 > n)
        throw std::out_of_range("delete: range outside text");

    GrammarStore& st = enc.store();
    DeltaRecorder rec(st);

    if (k == n) {
        const Signature old = enc.start();
        enc.adopt_start(kNoSignature, 0);
        st.unpin(old);
        return rec.net();
    }

    std::vector<PowSeq> pieces;
    if (i > 1) pieces.push_back(enc.uniq_pow(enc.start(), 1, i - 1));
    if (i + k <= n) pieces.push_back(enc.uniq_pow(enc.start(), i + k, n - (i + k) + 1));

    const Signature fresh = merge_items(st, items_of(pieces), enc.params());
    const Signature old = enc.start();
    enc.adopt_start(fresh, n - k);
    st.unpin(old);
    return rec.net();
}

EditDelta append_copy(Encoding& enc, std::uint64_t src, std::uint64_t len) {
    if (enc.empty()) throw std::out_of_range("append_copy: empty text");
    if (len < 1 || src < 1 || src > enc.text_len())
        throw std::out_of_range("append_copy: source outside text");

    GrammarStore& st = enc.store();
    DeltaRecorder rec(st);

    // a self-overlapping copy doubles the copied prefix each round
    std::uint64_t pos = src;
    std::uint64_t remaining = len;
    while (remaining > 0) {
        const std::uint64_t n = enc.text_len();
        const std::uint64_t chunk = std::min(remaining, n - pos + 1);
        std::vector<PowSeq> pieces;
        pieces.push_back(enc.uniq_pow(enc.start(), 1, n));
        pieces.push_back(enc.uniq_pow(enc.start(), pos, chunk));
        const Signature fresh = merge_items(st, items_of(pieces), enc.params());
        const Signature old = enc.start();
        enc.adopt_start(fresh, n + chunk);
        st.unpin(old);
        pos += chunk;
        remaining -= chunk;
    }
    return rec.net();
}

std::vector<Signature> gc(Encoding& enc) {
    std::vector<Signature> roots;
    if (!enc.empty()) roots.push_back(enc.start());
    return enc.store().collect_garbage(roots);
}

} // namespace sigdex
