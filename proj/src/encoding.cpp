#include "sigdex/encoding.hpp"

#include <bit>
#include <cassert>

namespace sigdex {

namespace {

Signature require_sig(std::optional<Signature> s, const char* what) {
    if (!s) throw std::logic_error(std::string("encoding: missing signature for ") + what);
    return *s;
}

/// Left-fold pair lookup over a block; every intermediate must already exist.
Signature fold_lookup(const GrammarStore& store, std::span<const Signature> block) {
    Signature acc = block[0];
    for (std::size_t i = 1; i < block.size(); ++i)
        acc = require_sig(store.lookup(Assignment::pair(acc, block[i])), "block fold");
    return acc;
}

void extract_rec(const GrammarStore& store, Signature e, std::uint64_t lo, std::uint64_t hi,
                 std::string& out) {
    const Assignment& a = store.assignment_of(e);
    switch (a.kind) {
    case AssignKind::Char:
        out.push_back(static_cast<char>(static_cast<unsigned char>(a.a)));
        return;
    case AssignKind::Pair: {
        const std::uint64_t ll = store.length_of(a.a);
        if (lo <= ll) extract_rec(store, a.a, lo, std::min(hi, ll), out);
        if (hi > ll) extract_rec(store, a.b, lo > ll ? lo - ll : 1, hi - ll, out);
        return;
    }
    case AssignKind::Run: {
        const std::uint64_t bl = store.length_of(a.a);
        const std::uint64_t c0 = (lo - 1) / bl, c1 = (hi - 1) / bl;
        for (std::uint64_t c = c0; c <= c1; ++c) {
            const std::uint64_t base = c * bl;
            extract_rec(store, a.a, lo > base ? lo - base : 1,
                        std::min(hi - base, bl), out);
        }
        return;
    }
    }
}

struct ChainEntry {
    Signature sig;
    std::uint64_t len;
};

/// Nodes of e's derivation starting exactly at position pos, largest first.
void chain_forward(const GrammarStore& store, Signature e, std::uint64_t pos,
                   std::vector<ChainEntry>& out) {
    out.clear();
    Signature cur = e;
    std::uint64_t off = pos;
    for (;;) {
        if (off == 1) out.push_back({cur, store.length_of(cur)});
        const Assignment& a = store.assignment_of(cur);
        if (a.kind == AssignKind::Char) return;
        if (a.kind == AssignKind::Pair) {
            const std::uint64_t ll = store.length_of(a.a);
            if (off <= ll) cur = a.a;
            else { off -= ll; cur = a.b; }
        } else {
            const std::uint64_t bl = store.length_of(a.a);
            off -= ((off - 1) / bl) * bl;
            cur = a.a;
        }
    }
}

/// Nodes of e's derivation ending exactly at position pos, largest first.
void chain_backward(const GrammarStore& store, Signature e, std::uint64_t pos,
                    std::vector<ChainEntry>& out) {
    out.clear();
    Signature cur = e;
    std::uint64_t off = pos;
    for (;;) {
        if (off == store.length_of(cur)) out.push_back({cur, off});
        const Assignment& a = store.assignment_of(cur);
        if (a.kind == AssignKind::Char) return;
        if (a.kind == AssignKind::Pair) {
            const std::uint64_t ll = store.length_of(a.a);
            if (off <= ll) cur = a.a;
            else { off -= ll; cur = a.b; }
        } else {
            const std::uint64_t bl = store.length_of(a.a);
            off -= ((off - 1) / bl) * bl;
            cur = a.a;
        }
    }
}

/// Longest constituent both chains share; chains are length-sorted with at
/// most two equal-length entries each (a unit run over its base).
std::uint64_t largest_common(const std::vector<ChainEntry>& A, const std::vector<ChainEntry>& B) {
    std::size_t a = 0, b = 0;
    while (a < A.size() && b < B.size()) {
        if (A[a].len > B[b].len) { ++a; continue; }
        if (B[b].len > A[a].len) { ++b; continue; }
        std::size_t a2 = a, b2 = b;
        while (a2 < A.size() && A[a2].len == A[a].len) ++a2;
        while (b2 < B.size() && B[b2].len == B[b].len) ++b2;
        for (std::size_t i = a; i < a2; ++i)
            for (std::size_t j = b; j < b2; ++j)
                if (A[i].sig == B[j].sig) return A[i].len;
        a = a2;
        b = b2;
    }
    return 0;
}

} // namespace

Signature encode_into(GrammarStore& store, std::string_view text, const ParserParams& params) {
    if (text.empty()) return kNoSignature;
    std::vector<Signature> seq;
    seq.reserve(text.size());
    for (unsigned char c : text) seq.push_back(store.intern(Assignment::character(c)));

    for (;;) {
        const auto runs = group_runs(seq);
        std::vector<Signature> pow;
        pow.reserve(runs.size());
        for (const auto& r : runs) pow.push_back(store.intern(Assignment::run(r.symbol, r.exp)));
        if (pow.size() == 1) {
            store.pin(pow[0]);
            return pow[0];
        }
        const auto bits = compute_landmarks(pow, params);
        const auto blocks = split_blocks(pow, bits);
        seq.clear();
        for (const auto& b : blocks) seq.push_back(store.fold_block(b));
    }
}

Encoding Encoding::encode_string(std::string_view text, ParserParams params) {
    Encoding enc(params);
    const Signature s = encode_into(enc.store_, text, params);
    enc.adopt_start(s, text.size());
    return enc;
}

std::string extract_in(const GrammarStore& store, Signature e, std::uint64_t i, std::uint64_t k) {
    const std::uint64_t n = store.length_of(e);
    if (i < 1 || k < 1 || i > n || i + k - 1 > n)
        throw std::out_of_range("extract: range outside val(e)");
    std::string out;
    out.reserve(k);
    extract_rec(store, e, i, i + k - 1, out);
    return out;
}

std::string Encoding::extract(Signature e, std::uint64_t i, std::uint64_t k) const {
    return extract_in(store_, e, i, k);
}

std::uint64_t uniq_pow_bound(std::uint64_t k, const ParserParams& params) {
    const std::uint64_t w = params.seam_window();
    const std::uint64_t levels = std::bit_width(k); // floor(log2 k) + 1 for k >= 1
    return 2 * w * levels + w;
}

PowSeq uniq_pow_in(const GrammarStore& store, Signature e, std::uint64_t i, std::uint64_t k,
                   const ParserParams& params) {
    const std::uint64_t n = store.length_of(e);
    if (i < 1 || k < 1 || i > n || i + k - 1 > n)
        throw std::out_of_range("uniq_pow: range outside val(e)");

    // level-0 run structure of the substring
    const std::string chars = extract_in(store, e, i, k);
    std::vector<PowItem> cur;
    for (char ch : chars) {
        const Signature cs =
            require_sig(store.lookup(Assignment::character(static_cast<unsigned char>(ch))), "char");
        if (!cur.empty() && cur.back().sig == cs) ++cur.back().exp;
        else cur.push_back({cs, 1});
    }

    const std::uint64_t window = params.seam_window();
    std::vector<PowItem> left;                    // ascending levels
    std::vector<std::vector<PowItem>> right_parts; // per level, deepest first

    while (cur.size() > window) {
        left.push_back(cur.front());
        std::vector<PowItem> right_here;

        // power-encode the interior (first and last runs trimmed away)
        std::vector<Signature> pw;
        pw.reserve(cur.size() - 2);
        for (std::size_t idx = 1; idx + 1 < cur.size(); ++idx)
            pw.push_back(require_sig(
                store.lookup(Assignment::run(cur[idx].sig, cur[idx].exp)), "interior run"));

        const auto bits = compute_landmarks(pw, params);

        // shortest prefix of width >= delta_left ending on a block boundary
        std::size_t lw = params.delta_left;
        while (lw < pw.size() && !bits[lw]) ++lw;
        // shortest suffix of width >= delta_right + 1 starting on a boundary
        std::size_t rw = params.delta_right + 1;
        while (rw < pw.size() && !bits[pw.size() - rw]) ++rw;
        if (lw + rw >= pw.size())
            throw std::logic_error("uniq_pow: trims exhausted the level");

        for (std::size_t idx = 0; idx < lw; ++idx) left.push_back({pw[idx], 1});
        for (std::size_t idx = pw.size() - rw; idx < pw.size(); ++idx)
            right_here.push_back({pw[idx], 1});
        right_here.push_back(cur.back());
        right_parts.push_back(std::move(right_here));

        // blocks of the remaining middle, folded one level up
        std::vector<Signature> folded;
        std::size_t bstart = lw;
        for (std::size_t idx = lw + 1; idx <= pw.size() - rw; ++idx) {
            if (idx == pw.size() - rw || bits[idx]) {
                folded.push_back(fold_lookup(
                    store, std::span<const Signature>(pw.data() + bstart, idx - bstart)));
                bstart = idx;
            }
        }

        std::vector<PowItem> next;
        for (Signature s : folded) {
            if (!next.empty() && next.back().sig == s) ++next.back().exp;
            else next.push_back({s, 1});
        }
        cur = std::move(next);
    }

    PowSeq out;
    for (const auto& it : left) out.push(it.sig, it.exp);
    for (const auto& it : cur) out.push(it.sig, it.exp);
    for (auto part = right_parts.rbegin(); part != right_parts.rend(); ++part)
        for (const auto& it : *part) out.push(it.sig, it.exp);

    std::uint64_t total = 0;
    for (const auto& it : out.items) total += store.length_of(it.sig) * it.exp;
    if (total != k) throw std::logic_error("uniq_pow: expansion length mismatch");
    if (out.items.size() > uniq_pow_bound(k, params))
        throw std::logic_error("uniq_pow: output exceeds size bound");
    return out;
}

PowSeq Encoding::uniq_pow(Signature e, std::uint64_t i, std::uint64_t k) const {
    return uniq_pow_in(store_, e, i, k, params_);
}

std::uint64_t lce_forward_in(const GrammarStore& store, Signature e1, Signature e2,
                             std::uint64_t i, std::uint64_t j) {
    const std::uint64_t n1 = store.length_of(e1), n2 = store.length_of(e2);
    if (i < 1 || i > n1 || j < 1 || j > n2)
        throw std::out_of_range("lce_forward: position outside val");
    std::uint64_t ell = 0;
    std::vector<ChainEntry> a, b;
    while (i + ell <= n1 && j + ell <= n2) {
        chain_forward(store, e1, i + ell, a);
        chain_forward(store, e2, j + ell, b);
        const std::uint64_t m = largest_common(a, b);
        if (m == 0) break;
        ell += m;
    }
    return ell;
}

std::uint64_t lce_backward_in(const GrammarStore& store, Signature e1, Signature e2,
                              std::uint64_t i, std::uint64_t j) {
    const std::uint64_t n1 = store.length_of(e1), n2 = store.length_of(e2);
    if (i < 1 || i > n1 || j < 1 || j > n2)
        throw std::out_of_range("lce_backward: position outside val");
    std::uint64_t ell = 0;
    std::vector<ChainEntry> a, b;
    while (ell < i && ell < j) {
        chain_backward(store, e1, i - ell, a);
        chain_backward(store, e2, j - ell, b);
        const std::uint64_t m = largest_common(a, b);
        if (m == 0) break;
        ell += m;
    }
    return ell;
}

std::uint64_t Encoding::lce_forward(Signature e1, Signature e2, std::uint64_t i,
                                    std::uint64_t j) const {
    return lce_forward_in(store_, e1, e2, i, j);
}

std::uint64_t Encoding::lce_backward(Signature e1, Signature e2, std::uint64_t i,
                                     std::uint64_t j) const {
    return lce_backward_in(store_, e1, e2, i, j);
}

std::vector<Signature> child_elements(const GrammarStore& store, Signature e) {
    const Assignment& a = store.assignment_of(e);
    if (a.kind != AssignKind::Pair)
        throw std::invalid_argument("child_elements: not a block signature");
    std::vector<Signature> out;
    Signature cur = e;
    // unwind the left fold: internal pairs sit at the block's own level
    for (;;) {
        const Assignment& ca = store.assignment_of(cur);
        out.push_back(ca.b);
        if (store.level_of(ca.a) == store.level_of(cur)) cur = ca.a;
        else { out.push_back(ca.a); break; }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

void Encoding::audit_well_formed() const {
    store_.audit();
    if (empty()) {
        if (text_len_ != 0) throw std::logic_error("audit: empty start with nonzero length");
        return;
    }
    if (store_.length_of(start_) != text_len_)
        throw std::logic_error("audit: start length != text length");
    const std::uint32_t top = store_.level_of(start_);
    if (top % 2 != 1) throw std::logic_error("audit: start symbol is not a run-level symbol");
    // height ceiling: two levels per halving round plus slack for the ends
    const std::uint64_t cl2 =
        text_len_ <= 1 ? 0 : std::bit_width(text_len_ - 1); // ceil(log2 N)
    if (top > 2 * cl2 + 4) throw std::logic_error("audit: derivation too tall");

    std::vector<Signature> pow_seq{start_};
    for (std::uint32_t level = top; level >= 1; level -= 2) {
        // run level -> block level below
        std::vector<Signature> shrink_seq;
        for (Signature s : pow_seq) {
            const Assignment& a = store_.assignment_of(s);
            if (a.kind != AssignKind::Run || store_.level_of(s) != level)
                throw std::logic_error("audit: run level holds a non-run");
            shrink_seq.insert(shrink_seq.end(), a.b, a.a);
        }
        const auto runs = group_runs(shrink_seq);
        if (runs.size() != pow_seq.size())
            throw std::logic_error("audit: run grouping disagrees with stored runs");
        for (std::size_t idx = 0; idx < runs.size(); ++idx) {
            const Assignment& a = store_.assignment_of(pow_seq[idx]);
            if (a.a != runs[idx].symbol || a.b != runs[idx].exp)
                throw std::logic_error("audit: stored run does not match maximal run");
        }

        if (level == 1) {
            if (shrink_seq.size() != text_len_)
                throw std::logic_error("audit: leaf count != text length");
            for (Signature s : shrink_seq)
                if (store_.assignment_of(s).kind != AssignKind::Char)
                    throw std::logic_error("audit: level 0 holds a non-character");
            break;
        }

        // block level -> run level below, re-derive landmarks and blocks
        std::vector<Signature> below;
        std::vector<std::size_t> stored_starts;
        for (Signature s : shrink_seq) {
            stored_starts.push_back(below.size());
            const auto elems = child_elements(store_, s);
            below.insert(below.end(), elems.begin(), elems.end());
        }
        const auto bits = compute_landmarks(below, params_);
        std::vector<std::size_t> derived_starts;
        for (std::size_t idx = 0; idx < below.size(); ++idx)
            if (bits[idx]) derived_starts.push_back(idx);
        if (derived_starts != stored_starts)
            throw std::logic_error("audit: stored blocks disagree with landmarks");
        for (std::size_t bi = 0; bi < stored_starts.size(); ++bi) {
            const std::size_t lo = stored_starts[bi];
            const std::size_t hi = bi + 1 < stored_starts.size() ? stored_starts[bi + 1] : below.size();
            if (fold_lookup(store_, std::span<const Signature>(below.data() + lo, hi - lo)) !=
                shrink_seq[bi])
                throw std::logic_error("audit: block fold does not reproduce stored signature");
        }
        pow_seq = std::move(below);
    }
}

} // namespace sigdex
