#pragma once

// Independent reference implementations the tests check the library
// against. Everything here works on plain strings or walks structures
// naively; none of it shares code with the implementation paths under test.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sigdex/grammar_store.hpp"
#include "sigdex/lz77.hpp"
#include "sigdex/slp.hpp"

namespace oracle {

inline std::uint64_t lce_scan(const std::string& a, const std::string& b, std::uint64_t i,
                              std::uint64_t j) {
    std::uint64_t ell = 0;
    while (i - 1 + ell < a.size() && j - 1 + ell < b.size() &&
           a[i - 1 + ell] == b[j - 1 + ell])
        ++ell;
    return ell;
}

inline std::uint64_t lcs_scan(const std::string& a, const std::string& b, std::uint64_t i,
                              std::uint64_t j) {
    std::uint64_t ell = 0;
    while (ell < i && ell < j && a[i - 1 - ell] == b[j - 1 - ell]) ++ell;
    return ell;
}

inline std::vector<std::uint64_t> find_all(const std::string& text, const std::string& pat) {
    std::vector<std::uint64_t> out;
    if (pat.empty() || pat.size() > text.size()) return out;
    for (std::size_t i = 0; i + pat.size() <= text.size(); ++i)
        if (text.compare(i, pat.size(), pat) == 0) out.push_back(i + 1);
    return out;
}

/// Greedy self-referential LZ77, leftmost source, quadratic scan.
inline std::vector<sigdex::Factor> lz77_naive(const std::string& t) {
    std::vector<sigdex::Factor> out;
    std::size_t pos = 0;
    while (pos < t.size()) {
        std::size_t best_len = 0, best_src = 0;
        for (std::size_t src = 0; src < pos; ++src) {
            std::size_t len = 0;
            while (pos + len < t.size() && t[src + len] == t[pos + len]) ++len;
            if (len > best_len) {
                best_len = len;
                best_src = src;
            }
        }
        if (best_len == 0) {
            out.push_back(sigdex::Factor::literal(static_cast<unsigned char>(t[pos])));
            ++pos;
        } else {
            // leftmost source of the maximal length
            for (std::size_t src = 0; src < pos; ++src) {
                std::size_t len = 0;
                while (pos + len < t.size() && len < best_len && t[src + len] == t[pos + len]) ++len;
                if (len == best_len) {
                    best_src = src;
                    break;
                }
            }
            out.push_back(sigdex::Factor::reference(best_src + 1, best_len));
            pos += best_len;
        }
    }
    return out;
}

inline std::string expand_factors(const std::vector<sigdex::Factor>& fs) {
    std::string t;
    for (const auto& f : fs) {
        if (f.is_literal) {
            t.push_back(static_cast<char>(f.ch));
        } else {
            for (std::uint64_t i = 0; i < f.len; ++i) t.push_back(t[f.pos - 1 + i]);
        }
    }
    return t;
}

/// Leftmost occurrence of t[j..j+k-1] starting strictly before j (1-based).
inline std::optional<std::uint64_t> fst_naive(const std::string& t, std::uint64_t j,
                                              std::uint64_t k) {
    for (std::uint64_t p = 1; p < j; ++p) {
        bool ok = true;
        for (std::uint64_t q = 0; q < k; ++q)
            if (t[p - 1 + q] != t[j - 1 + q]) {
                ok = false;
                break;
            }
        if (ok) return p;
    }
    return std::nullopt;
}

inline std::string expand_slp(const sigdex::Slp& slp) {
    std::map<std::uint64_t, std::string> val;
    for (const auto& r : slp.rules) {
        if (r.is_char) val[r.id] = std::string(1, static_cast<char>(r.ch));
        else val[r.id] = val.at(r.left) + val.at(r.right);
    }
    return val.at(slp.start);
}

/// Signatures reachable from the given roots by walking assignments.
inline std::set<sigdex::Signature> reachable(const sigdex::GrammarStore& st,
                                             std::vector<sigdex::Signature> roots) {
    std::set<sigdex::Signature> seen;
    while (!roots.empty()) {
        const sigdex::Signature e = roots.back();
        roots.pop_back();
        if (e == sigdex::kNoSignature || !seen.insert(e).second) continue;
        const auto& a = st.assignment_of(e);
        if (a.kind == sigdex::AssignKind::Pair) {
            roots.push_back(a.a);
            roots.push_back(a.b);
        } else if (a.kind == sigdex::AssignKind::Run) {
            roots.push_back(a.a);
        }
    }
    return seen;
}

/// Full derivation-tree walk collecting constituent start positions of e.
inline std::vector<std::uint64_t> vocc_walk(const sigdex::GrammarStore& st,
                                            sigdex::Signature start, sigdex::Signature e) {
    std::vector<std::uint64_t> out;
    const std::function<void(sigdex::Signature, std::uint64_t)> walk = [&](sigdex::Signature x,
                                                                           std::uint64_t at) {
        if (x == e) out.push_back(at);
        const auto& a = st.assignment_of(x);
        if (a.kind == sigdex::AssignKind::Pair) {
            walk(a.a, at);
            walk(a.b, at + st.length_of(a.a));
        } else if (a.kind == sigdex::AssignKind::Run) {
            for (std::uint64_t c = 0; c < a.b; ++c) walk(a.a, at + c * st.length_of(a.a));
        }
    };
    walk(start, 1);
    std::sort(out.begin(), out.end());
    return out;
}

// ------------------------------------------------------ random test data --

inline std::string random_string(std::mt19937_64& rng, std::size_t len, unsigned alphabet) {
    std::uniform_int_distribution<unsigned> d(0, alphabet - 1);
    std::string s(len, 'a');
    for (auto& c : s) c = static_cast<char>('a' + d(rng));
    return s;
}

/// Alternating blocks of a periodic seed; produces texts with heavy
/// repetition structure.
inline std::string periodic_string(std::mt19937_64& rng, std::size_t len, unsigned alphabet,
                                   std::size_t period) {
    std::string seed = random_string(rng, period, alphabet);
    std::string s;
    while (s.size() < len) s += seed;
    s.resize(len);
    return s;
}

inline std::string fibonacci_word(std::size_t min_len) {
    std::string a = "a", b = "ab";
    while (b.size() < min_len) {
        std::string c = b + a;
        a = std::move(b);
        b = std::move(c);
    }
    return b;
}

} // namespace oracle
