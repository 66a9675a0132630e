#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "sigdex/encoding.hpp"

namespace sigdex {

/// A substring handle: val(sig)[off .. off+len-1]. Lets queries reference
/// pattern text without interning it.
struct PatternHandle {
    Signature sig;
    std::uint64_t off;
    std::uint64_t len;
};

/// The unique lowest covering signature of a pattern occurrence and the
/// 1-based offset of the pattern inside val(sig).
struct PrimaryOcc {
    Signature sig;
    std::uint64_t offset;
};

/// Ordered set of non-character signatures keyed by a derived string
/// (right string, or reversed left string), ties broken by id. Backed by a
/// balanced order-statistic tree whose comparisons run LCE queries.
class OrderedStrSet {
public:
    enum class Key { RightString, ReverseLeftString };

    OrderedStrSet(const GrammarStore& store, Key key) : store_(&store), key_(key) {}
    ~OrderedStrSet();
    OrderedStrSet(const OrderedStrSet&) = delete;
    OrderedStrSet& operator=(const OrderedStrSet&) = delete;

    void insert(Signature e);
    void erase(Signature e);
    bool contains(Signature e) const;
    std::uint64_t size() const;

    /// 1-based rank -> signature.
    Signature select(std::uint64_t rank) const;
    /// 1-based rank of a contained signature.
    std::uint64_t rank_of(Signature e) const;

    /// Number of leading elements satisfying pred; pred must be monotone
    /// (true on a prefix of the key order).
    std::uint64_t count_prefix(const std::function<bool(Signature)>& pred) const;

    std::vector<Signature> in_order() const;

    /// -1/0/+1 lexicographic comparison of the derived key strings.
    int compare_keys(Signature a, Signature b) const;

    struct Node;

private:
    int cmp(Signature a, Signature b) const; // key order, ties by id
    Node* root_ = nullptr;
    const GrammarStore* store_;
    Key key_;
};

/// Pattern-occurrence index over one encoding: ordered sets X and Y plus
/// the point set R, kept in sync with the live grammar through store
/// listeners. Range queries rebuild a static structure lazily after edits.
class Index final : public GrammarStore::Listener {
public:
    struct Rect {
        std::uint64_t x1, x2, y1, y2; // inclusive 1-based ranks
    };
    struct Point {
        Signature sig;
        std::uint64_t x_rank, y_rank;
    };

    explicit Index(Encoding& enc);
    ~Index() override;
    Index(const Index&) = delete;
    Index& operator=(const Index&) = delete;

    void on_add(Signature e) override;
    void on_remove(Signature e) override;

    const OrderedStrSet& x_set() const { return x_; }
    const OrderedStrSet& y_set() const { return y_; }
    std::uint64_t point_count() const { return x_.size(); }

    /// All points with ranks inside the rectangle (inverted ranges: empty).
    std::vector<Point> range_report(std::uint64_t x1, std::uint64_t x2, std::uint64_t y1,
                                    std::uint64_t y2);

    /// Rank rectangle of signatures whose reversed left string starts with
    /// reverse(P[..j]) and right string starts with P[j+1..].
    std::optional<Rect> pattern_ranges(const PatternHandle& p, std::uint64_t j);

    /// Weight source for min-weight rectangle queries; resets the lazily
    /// built structure.
    void set_weight_fn(std::function<std::optional<std::uint64_t>(Signature)> fn);

    /// Minimum weight over weighted points in the rectangle.
    std::optional<std::uint64_t> min_weight_in(const Rect& r);

private:
    struct RangeTree;
    void ensure_built();

    Encoding* enc_;
    OrderedStrSet x_, y_;
    std::function<std::optional<std::uint64_t>(Signature)> weight_fn_;
    std::unique_ptr<RangeTree> tree_;
    bool dirty_ = true;
};

/// All start positions of val(e) as a derivation constituent under start.
std::vector<std::uint64_t> vocc_of(const Encoding& enc, Signature e);

/// Extra in-run alignments of a pattern that crosses the first copy
/// boundary of a run signature.
std::vector<std::uint64_t> run_offsets(const Encoding& enc, Signature e, std::uint64_t j,
                                       std::uint64_t plen);

/// Candidate split positions for primary-occurrence queries.
std::vector<std::uint64_t> split_positions(const Encoding& enc, const PatternHandle& p);

/// Exactly Occ(P, T), ascending and duplicate-free.
std::vector<std::uint64_t> search(Encoding& enc, Index& idx, std::string_view pattern);

} // namespace sigdex
