#include "sigdex/lz77.hpp"

#include <algorithm>
#include <charconv>

namespace sigdex {

namespace {

/// Earliest constituent occurrence of every signature under the start,
/// propagated parents-first down the DAG.
std::unordered_map<Signature, std::uint64_t> min_positions(const Encoding& enc) {
    std::unordered_map<Signature, std::uint64_t> min_occ;
    if (enc.empty()) return min_occ;
    const GrammarStore& st = enc.store();
    min_occ[enc.start()] = 1;
    auto relax = [&](Signature child, std::uint64_t pos) {
        auto it = min_occ.find(child);
        if (it == min_occ.end() || pos < it->second) min_occ[child] = pos;
    };
    for (Signature id = st.max_id(); id >= 1; --id) {
        if (!st.is_live(id)) continue;
        auto it = min_occ.find(id);
        if (it == min_occ.end()) continue;
        const std::uint64_t at = it->second;
        const Assignment& a = st.assignment_of(id);
        if (a.kind == AssignKind::Pair) {
            relax(a.a, at);
            relax(a.b, at + st.length_of(a.a));
        } else if (a.kind == AssignKind::Run) {
            relax(a.a, at); // the first copy is leftmost
        }
    }
    return min_occ;
}

} // namespace

WeightMap compute_weights(const Encoding& enc) {
    WeightMap wmap;
    if (enc.empty()) return wmap;
    const GrammarStore& st = enc.store();
    for (const auto& [sig, at] : min_positions(enc)) {
        const Assignment& a = st.assignment_of(sig);
        if (a.kind == AssignKind::Char) continue;
        wmap.emplace(sig, at + st.length_of(a.a));
    }
    return wmap;
}

std::optional<std::uint64_t> fst_occ(const Encoding& enc, Index& idx, const WeightMap& wmap,
                                     const PatternHandle& p, std::uint64_t i) {
    (void)enc;
    (void)wmap; // weights were installed on the index by the caller
    const auto rect = idx.pattern_ranges(p, i);
    if (!rect) return std::nullopt;
    return idx.min_weight_in(*rect);
}

namespace {

/// Earliest text position of a character, via its vOcc.
std::optional<std::uint64_t> earliest_char(const Encoding& enc, unsigned char c) {
    const auto cs = enc.store().lookup(Assignment::character(c));
    if (!cs) return std::nullopt;
    const auto occ = vocc_of(enc, *cs);
    if (occ.empty()) return std::nullopt;
    return *std::min_element(occ.begin(), occ.end());
}

} // namespace

std::optional<std::uint64_t> fst(const Encoding& enc, Index& idx, const WeightMap& wmap,
                                 std::uint64_t j, std::uint64_t k) {
    const std::uint64_t n = enc.text_len();
    if (j < 1 || k < 1 || j + k - 1 > n) throw std::out_of_range("fst: range outside text");

    if (k == 1) {
        const auto at = earliest_char(enc, static_cast<unsigned char>(enc.extract(enc.start(), j, 1)[0]));
        if (at && *at < j) return at;
        return std::nullopt;
    }

    const PatternHandle p{enc.start(), j, k};
    std::optional<std::uint64_t> best;
    for (std::uint64_t i : split_positions(enc, p)) {
        const auto w = fst_occ(enc, idx, wmap, p, i);
        if (!w) continue;
        const std::uint64_t cand = *w - i;
        if (!best || cand < *best) best = cand;
    }
    if (best && *best < j) return best;
    return std::nullopt;
}

std::vector<Factor> factorize(Encoding& enc) {
    std::vector<Factor> factors;
    if (enc.empty()) return factors;
    const std::uint64_t n = enc.text_len();
    const std::string text = enc.text();

    Index idx(enc);
    const WeightMap wmap = compute_weights(enc);
    idx.set_weight_fn([&wmap](Signature e) -> std::optional<std::uint64_t> {
        auto it = wmap.find(e);
        if (it == wmap.end()) return std::nullopt;
        return it->second;
    });

    // earliest occurrence per character, for the length-1 decision
    std::unordered_map<unsigned char, std::uint64_t> char_first;
    for (const auto& [sig, at] : min_positions(enc)) {
        const Assignment& a = enc.store().assignment_of(sig);
        if (a.kind == AssignKind::Char)
            char_first.emplace(static_cast<unsigned char>(a.a), at);
    }

    std::uint64_t pos = 1;
    while (pos <= n) {
        const auto cf = char_first.find(static_cast<unsigned char>(text[pos - 1]));
        if (cf == char_first.end() || cf->second >= pos) {
            factors.push_back(Factor::literal(static_cast<unsigned char>(text[pos - 1])));
            ++pos;
            continue;
        }
        // grow by doubling, then binary search the greedy factor length
        const std::uint64_t cap = n - pos + 1;
        std::uint64_t lo = 1, hi = 2;
        while (hi <= cap && fst(enc, idx, wmap, pos, hi)) {
            lo = hi;
            hi *= 2;
        }
        hi = std::min(hi, cap + 1); // first invalid candidate (or cap+1)
        while (lo + 1 < hi) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            if (fst(enc, idx, wmap, pos, mid)) lo = mid;
            else hi = mid;
        }
        const std::uint64_t src = *fst(enc, idx, wmap, pos, lo);
        factors.push_back(Factor::reference(src, lo));
        pos += lo;
    }
    return factors;
}

std::vector<Factor> factorize_text(std::string_view text, ParserParams params) {
    Encoding enc = Encoding::encode_string(text, params);
    return factorize(enc);
}

Encoding from_factors(std::span<const Factor> factors, ParserParams params) {
    Encoding enc(params);
    for (const Factor& f : factors) {
        if (f.is_literal) {
            insert_str(enc, enc.text_len() + 1, std::string(1, static_cast<char>(f.ch)));
        } else {
            if (f.len < 1 || f.pos < 1 || f.pos > enc.text_len())
                throw std::runtime_error("lz77: factor references text that does not exist yet");
            append_copy(enc, f.pos, f.len);
        }
    }
    return enc;
}

std::string serialize_factors(std::span<const Factor> factors) {
    std::string out;
    for (const Factor& f : factors) {
        if (f.is_literal) {
            out += "L ";
            out += static_cast<char>(f.ch);
            out += '\n';
        } else {
            out += "F " + std::to_string(f.pos) + " " + std::to_string(f.len) + "\n";
        }
    }
    return out;
}

namespace {

std::uint64_t parse_u64(std::string_view s, std::size_t& i) {
    std::uint64_t v = 0;
    const char* begin = s.data() + i;
    const auto res = std::from_chars(begin, s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr == begin)
        throw std::runtime_error("lz77: malformed number in factor file");
    i += res.ptr - begin;
    return v;
}

} // namespace

std::vector<Factor> parse_factors(std::string_view text) {
    std::vector<Factor> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 2, "L ") == 0) {
            if (i + 2 >= text.size()) throw std::runtime_error("lz77: truncated literal line");
            const unsigned char c = static_cast<unsigned char>(text[i + 2]);
            if (i + 3 >= text.size() || text[i + 3] != '\n')
                throw std::runtime_error("lz77: literal line not LF-terminated");
            out.push_back(Factor::literal(c));
            i += 4;
        } else if (text.compare(i, 2, "F ") == 0) {
            i += 2;
            const std::uint64_t pos = parse_u64(text, i);
            if (i >= text.size() || text[i] != ' ')
                throw std::runtime_error("lz77: malformed reference line");
            ++i;
            const std::uint64_t len = parse_u64(text, i);
            if (i >= text.size() || text[i] != '\n')
                throw std::runtime_error("lz77: reference line not LF-terminated");
            ++i;
            if (pos == 0 || len == 0) throw std::runtime_error("lz77: zero field in reference");
            out.push_back(Factor::reference(pos, len));
        } else {
            throw std::runtime_error("lz77: unrecognized factor line");
        }
    }
    return out;
}

} // namespace sigdex
