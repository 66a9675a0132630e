#pragma once

#include <utility>

#include "sigdex/encoding.hpp"

namespace sigdex {

/// Net effect of one edit on the live signature set.
struct EditDelta {
    std::vector<Signature> added;   // creation order (ascending ids)
    std::vector<Signature> removed; // removal order
};

/// Builds one start signature whose expansion is the concatenation of the
/// piece expansions, reparsing only seam-adjacent regions. Pieces must be
/// common sequences (uniq_pow output) or a single complete encoding top.
/// The returned signature is pinned; the caller owns that pin.
std::pair<Signature, EditDelta> merge_pow(Encoding& enc, const std::vector<PowSeq>& pieces);

/// T := T[..i-1] Y T[i..]; 1 <= i <= N+1, Y nonempty.
EditDelta insert_str(Encoding& enc, std::uint64_t i, std::string_view y);

/// T := T[..i-1] T[i+k..]; deleting everything empties the encoding.
EditDelta delete_range(Encoding& enc, std::uint64_t i, std::uint64_t k);

/// Appends T[src..src+len-1] to the end of T, reusing the existing
/// occurrence; len may run past the current end (self-referential copy).
EditDelta append_copy(Encoding& enc, std::uint64_t src, std::uint64_t len);

/// Removes every signature not reachable from the start or a pin.
/// Idempotent; returns the removed ids.
std::vector<Signature> gc(Encoding& enc);

} // namespace sigdex
