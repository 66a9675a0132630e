#pragma once

#include <map>

#include "sigdex/editor.hpp"

namespace sigdex {

/// One Chomsky-normal-form rule: id -> character, or id -> left right with
/// both operands smaller than id.
struct SlpRule {
    std::uint64_t id;
    bool is_char;
    std::uint32_t ch;
    std::uint64_t left;
    std::uint64_t right;

    friend bool operator==(const SlpRule&, const SlpRule&) = default;
};

/// A straight-line program: rules in ascending id order plus the start id.
struct Slp {
    std::vector<SlpRule> rules;
    std::uint64_t start;

    friend bool operator==(const Slp&, const Slp&) = default;
};

/// Text format: "SLP 1", "S <start>", then "<id> C <codepoint>" or
/// "<id> P <l> <r>", ascending, LF-terminated.
Slp parse_slp(std::string_view text);
std::string serialize_slp(const Slp& slp);

/// Signature-encodes every variable bottom-up by concatenating children.
/// All returned signatures stay pinned in the encoding's store.
std::pair<Encoding, std::map<std::uint64_t, Signature>> import_slp(const Slp& slp,
                                                                   ParserParams params = {});

/// Full translation of a nonempty encoding: pairs become one rule, runs
/// expand by repeated squaring, unit runs alias their base.
Slp export_slp(const Encoding& enc);

/// Keeps the signature-to-rule mapping alive between exports so an edit's
/// delta can patch the previous SLP instead of retranslating everything.
class SlpExporter {
public:
    explicit SlpExporter(const Encoding& enc);

    /// Drops rules of removed signatures, appends rules for added ones.
    void apply_delta(const Encoding& enc, const EditDelta& delta);

    Slp slp() const;

private:
    void translate(const GrammarStore& st, Signature e);

    std::map<std::uint64_t, SlpRule> rules_;
    std::unordered_map<Signature, std::uint64_t> id_of_;
    std::unordered_map<Signature, std::vector<std::uint64_t>> owned_;
    std::uint64_t next_id_ = 1;
    std::uint64_t start_id_ = 0;
};

/// Renumbers ids by first visit from the start; structural comparison of
/// exports produced along different routes.
Slp canonical_slp(const Slp& slp);

/// LCE/LCP/LCS over imported variables.
std::uint64_t slp_lce(const Encoding& enc, const std::map<std::uint64_t, Signature>& vars,
                      std::uint64_t xi, std::uint64_t xj, std::uint64_t a, std::uint64_t b);
std::uint64_t slp_lcp(const Encoding& enc, const std::map<std::uint64_t, Signature>& vars,
                      std::uint64_t xi, std::uint64_t xj);
std::uint64_t slp_lcs(const Encoding& enc, const std::map<std::uint64_t, Signature>& vars,
                      std::uint64_t xi, std::uint64_t xj);

} // namespace sigdex
