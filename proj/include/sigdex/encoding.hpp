#pragma once

#include <string>
#include <string_view>

#include "sigdex/grammar_store.hpp"
#include "sigdex/parsing.hpp"

namespace sigdex {

/// One item of a power-encoded signature sequence.
struct PowItem {
    Signature sig;
    std::uint64_t exp;

    friend bool operator==(const PowItem&, const PowItem&) = default;
};

/// A power-encoded signature sequence: expansions of the items concatenate
/// to a contiguous substring. Adjacent items never share a signature.
struct PowSeq {
    std::vector<PowItem> items;

    void push(Signature sig, std::uint64_t exp) {
        if (!items.empty() && items.back().sig == sig)
            items.back().exp += exp;
        else
            items.push_back({sig, exp});
    }

    friend bool operator==(const PowSeq&, const PowSeq&) = default;
};

/// The live grammar for one text: dictionary + start symbol + text length.
/// Queries are read-only; all mutation goes through the editor.
class Encoding {
public:
    explicit Encoding(ParserParams params = {}) : params_(params) { params_.validate(); }

    static Encoding encode_string(std::string_view text, ParserParams params = {});

    bool empty() const { return start_ == kNoSignature; }
    Signature start() const { return start_; }
    std::uint64_t text_len() const { return text_len_; }
    const ParserParams& params() const { return params_; }
    GrammarStore& store() { return store_; }
    const GrammarStore& store() const { return store_; }

    /// Derivation height: level of the start symbol (0 when empty).
    std::uint32_t height() const { return empty() ? 0 : store_.level_of(start_); }

    /// val(e)[i..i+k-1], 1-based.
    std::string extract(Signature e, std::uint64_t i, std::uint64_t k) const;

    /// The whole text.
    std::string text() const { return empty() ? std::string{} : extract(start_, 1, text_len_); }

    /// Power-encoded common sequence of val(e)[i..i+k-1]. Depends only on
    /// the substring content, so equal substrings anywhere in the store
    /// yield equal results. Performs no interning.
    PowSeq uniq_pow(Signature e, std::uint64_t i, std::uint64_t k) const;

    /// Longest common prefix of val(e1)[i..] and val(e2)[j..].
    std::uint64_t lce_forward(Signature e1, Signature e2, std::uint64_t i, std::uint64_t j) const;

    /// Longest common suffix of val(e1)[..i] and val(e2)[..j].
    std::uint64_t lce_backward(Signature e1, Signature e2, std::uint64_t i, std::uint64_t j) const;

    std::uint64_t lcp_of(Signature e1, Signature e2) const { return lce_forward(e1, e2, 1, 1); }
    std::uint64_t lcs_of(Signature e1, Signature e2) const {
        return lce_backward(e1, e2, store_.length_of(e1), store_.length_of(e2));
    }

    /// Re-derives every level of the derivation and checks it against the
    /// parser; also audits the store. Throws on any mismatch.
    void audit_well_formed() const;

    /// Takes ownership of a pinned start symbol (editor/import use).
    void adopt_start(Signature start, std::uint64_t text_len) {
        start_ = start;
        text_len_ = text_len;
    }

private:
    GrammarStore store_;
    Signature start_ = kNoSignature;
    std::uint64_t text_len_ = 0;
    ParserParams params_;
};

/// Builds the signature encoding of `text` inside an existing store and
/// returns the pinned top signature (kNoSignature for empty input).
Signature encode_into(GrammarStore& store, std::string_view text, const ParserParams& params);

/// uniq_pow against an arbitrary store (Encoding::uniq_pow delegates here).
PowSeq uniq_pow_in(const GrammarStore& store, Signature e, std::uint64_t i, std::uint64_t k,
                   const ParserParams& params);

/// Output-size ceiling for uniq_pow over a k-length range.
std::uint64_t uniq_pow_bound(std::uint64_t k, const ParserParams& params);

std::string extract_in(const GrammarStore& store, Signature e, std::uint64_t i, std::uint64_t k);

std::uint64_t lce_forward_in(const GrammarStore& store, Signature e1, Signature e2,
                             std::uint64_t i, std::uint64_t j);
std::uint64_t lce_backward_in(const GrammarStore& store, Signature e1, Signature e2,
                              std::uint64_t i, std::uint64_t j);

/// The 2..5 block elements (or run copies collapsed to one entry each) one
/// level below e. Fold-internal pairs are flattened away.
std::vector<Signature> child_elements(const GrammarStore& store, Signature e);

} // namespace sigdex
