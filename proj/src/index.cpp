#include "sigdex/index.hpp"

#include <algorithm>
#include <unordered_map>

namespace sigdex {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct RepKey {
    Signature base;
    std::uint64_t copies; // 0 encodes the empty string
};

/// Derived key of a point. Right string of a run base^d is d-1 copies of
/// the base; its left string is one copy.
RepKey key_of(const GrammarStore& st, Signature e, OrderedStrSet::Key kind) {
    const Assignment& a = st.assignment_of(e);
    if (a.kind == AssignKind::Char)
        throw std::invalid_argument("index: character signatures carry no point");
    if (kind == OrderedStrSet::Key::RightString) {
        if (a.kind == AssignKind::Pair) return {a.b, 1};
        return {a.a, a.b - 1};
    }
    return {a.a, 1};
}

char char_at(const GrammarStore& st, Signature e, std::uint64_t pos) {
    return extract_in(st, e, pos, 1)[0];
}

/// Lexicographic comparison of repeated strings base^copies.
int cmp_repeated(const GrammarStore& st, const RepKey& x, const RepKey& y) {
    const std::uint64_t lx = x.copies ? st.length_of(x.base) : 0;
    const std::uint64_t ly = y.copies ? st.length_of(y.base) : 0;
    const std::uint64_t totx = lx * x.copies, toty = ly * y.copies;
    if (totx == 0 || toty == 0) return totx == toty ? 0 : (totx == 0 ? -1 : 1);
    if (x.base == y.base) return totx == toty ? 0 : (totx < toty ? -1 : 1);

    std::uint64_t pos = 0;
    const std::uint64_t lim = std::min(totx, toty);
    while (pos < lim) {
        const std::uint64_t ox = pos % lx, oy = pos % ly;
        const std::uint64_t m = lce_forward_in(st, x.base, y.base, ox + 1, oy + 1);
        const std::uint64_t remx = lx - ox, remy = ly - oy;
        if (m < remx && m < remy && pos + m < lim) {
            const char cx = char_at(st, x.base, ox + 1 + m);
            const char cy = char_at(st, y.base, oy + 1 + m);
            return static_cast<unsigned char>(cx) < static_cast<unsigned char>(cy) ? -1 : 1;
        }
        pos += std::min({m, remx, remy, lim - pos});
    }
    return totx == toty ? 0 : (totx < toty ? -1 : 1);
}

/// Compare reverse(val(a)) with reverse(val(b)).
int cmp_reversed(const GrammarStore& st, Signature a, Signature b) {
    if (a == b) return 0;
    const std::uint64_t la = st.length_of(a), lb = st.length_of(b);
    const std::uint64_t m = lce_backward_in(st, a, b, la, lb);
    if (m == std::min(la, lb)) return la == lb ? 0 : (la < lb ? -1 : 1);
    const char ca = char_at(st, a, la - m);
    const char cb = char_at(st, b, lb - m);
    return static_cast<unsigned char>(ca) < static_cast<unsigned char>(cb) ? -1 : 1;
}

/// Compare the first |target| characters of key base^copies against the
/// target substring; -1 also covers "key is a proper prefix of target".
int prefix_cmp_right(const GrammarStore& st, const RepKey& key, const PatternHandle& target) {
    const std::uint64_t kl = key.copies ? st.length_of(key.base) : 0;
    const std::uint64_t keylen = kl * key.copies;
    std::uint64_t pos = 0;
    while (pos < keylen && pos < target.len) {
        const std::uint64_t o = pos % kl;
        const std::uint64_t raw =
            lce_forward_in(st, key.base, target.sig, o + 1, target.off + pos);
        const std::uint64_t adv = std::min({raw, kl - o, target.len - pos});
        if (adv < kl - o && adv < target.len - pos) {
            const char ck = char_at(st, key.base, o + 1 + adv);
            const char ct = char_at(st, target.sig, target.off + pos + adv);
            return static_cast<unsigned char>(ck) < static_cast<unsigned char>(ct) ? -1 : 1;
        }
        pos += adv;
    }
    return pos >= target.len ? 0 : -1;
}

/// Compare the first j characters of reverse(val(left)) against the
/// reverse of the pattern's first j characters.
int prefix_cmp_left(const GrammarStore& st, Signature left, const PatternHandle& p,
                    std::uint64_t j) {
    const std::uint64_t ll = st.length_of(left);
    std::uint64_t m = lce_backward_in(st, left, p.sig, ll, p.off + j - 1);
    m = std::min(m, j);
    if (m >= j) return 0;
    if (m >= ll) return -1;
    const char ck = char_at(st, left, ll - m);
    const char ct = char_at(st, p.sig, p.off + j - 1 - m);
    return static_cast<unsigned char>(ck) < static_cast<unsigned char>(ct) ? -1 : 1;
}

} // namespace

// ---------------------------------------------------------------- treap --

struct OrderedStrSet::Node {
    Signature sig;
    std::uint64_t pri;
    std::uint64_t size;
    Node* l = nullptr;
    Node* r = nullptr;
};

namespace {

std::uint64_t node_size(const OrderedStrSet::Node* n) { return n ? n->size : 0; }

void pull(OrderedStrSet::Node* n) { n->size = 1 + node_size(n->l) + node_size(n->r); }

OrderedStrSet::Node* treap_join(OrderedStrSet::Node* a, OrderedStrSet::Node* b) {
    if (!a) return b;
    if (!b) return a;
    if (a->pri > b->pri) {
        a->r = treap_join(a->r, b);
        pull(a);
        return a;
    }
    b->l = treap_join(a, b->l);
    pull(b);
    return b;
}

} // namespace

OrderedStrSet::~OrderedStrSet() {
    std::vector<Node*> stack;
    if (root_) stack.push_back(root_);
    while (!stack.empty()) {
        Node* n = stack.back();
        stack.pop_back();
        if (n->l) stack.push_back(n->l);
        if (n->r) stack.push_back(n->r);
        delete n;
    }
}

int OrderedStrSet::compare_keys(Signature a, Signature b) const {
    if (key_ == Key::RightString)
        return cmp_repeated(*store_, key_of(*store_, a, key_), key_of(*store_, b, key_));
    return cmp_reversed(*store_, key_of(*store_, a, key_).base, key_of(*store_, b, key_).base);
}

int OrderedStrSet::cmp(Signature a, Signature b) const {
    if (a == b) return 0;
    const int c = compare_keys(a, b);
    if (c != 0) return c;
    return a < b ? -1 : 1;
}

void OrderedStrSet::insert(Signature e) {
    Node* fresh = new Node{e, splitmix64(e), 1, nullptr, nullptr};
    const std::function<Node*(Node*)> rec = [&](Node* n) -> Node* {
        if (!n) return fresh;
        if (cmp(fresh->sig, n->sig) < 0) {
            n->l = rec(n->l);
            if (n->l->pri > n->pri) {
                Node* l = n->l;
                n->l = l->r;
                l->r = n;
                pull(n);
                pull(l);
                return l;
            }
        } else {
            n->r = rec(n->r);
            if (n->r->pri > n->pri) {
                Node* r = n->r;
                n->r = r->l;
                r->l = n;
                pull(n);
                pull(r);
                return r;
            }
        }
        pull(n);
        return n;
    };
    root_ = rec(root_);
}

void OrderedStrSet::erase(Signature e) {
    const std::function<Node*(Node*)> rec = [&](Node* n) -> Node* {
        if (!n) throw std::logic_error("OrderedStrSet: erase of absent signature");
        const int c = cmp(e, n->sig);
        if (c == 0) {
            Node* joined = treap_join(n->l, n->r);
            delete n;
            return joined;
        }
        if (c < 0) n->l = rec(n->l);
        else n->r = rec(n->r);
        pull(n);
        return n;
    };
    root_ = rec(root_);
}

bool OrderedStrSet::contains(Signature e) const {
    const Node* cur = root_;
    while (cur) {
        const int c = cmp(e, cur->sig);
        if (c == 0) return true;
        cur = c < 0 ? cur->l : cur->r;
    }
    return false;
}

std::uint64_t OrderedStrSet::size() const { return node_size(root_); }

Signature OrderedStrSet::select(std::uint64_t rank) const {
    if (rank < 1 || rank > size()) throw std::out_of_range("OrderedStrSet: rank out of range");
    const Node* cur = root_;
    for (;;) {
        const std::uint64_t ls = node_size(cur->l);
        if (rank == ls + 1) return cur->sig;
        if (rank <= ls) cur = cur->l;
        else {
            rank -= ls + 1;
            cur = cur->r;
        }
    }
}

std::uint64_t OrderedStrSet::rank_of(Signature e) const {
    const Node* cur = root_;
    std::uint64_t acc = 0;
    while (cur) {
        const int c = cmp(e, cur->sig);
        if (c == 0) return acc + node_size(cur->l) + 1;
        if (c < 0) cur = cur->l;
        else {
            acc += node_size(cur->l) + 1;
            cur = cur->r;
        }
    }
    throw std::logic_error("OrderedStrSet: rank of absent signature");
}

std::uint64_t OrderedStrSet::count_prefix(const std::function<bool(Signature)>& pred) const {
    const Node* cur = root_;
    std::uint64_t acc = 0;
    while (cur) {
        if (pred(cur->sig)) {
            acc += node_size(cur->l) + 1;
            cur = cur->r;
        } else {
            cur = cur->l;
        }
    }
    return acc;
}

std::vector<Signature> OrderedStrSet::in_order() const {
    std::vector<Signature> out;
    out.reserve(size());
    std::vector<const Node*> stack;
    const Node* cur = root_;
    while (cur || !stack.empty()) {
        while (cur) {
            stack.push_back(cur);
            cur = cur->l;
        }
        cur = stack.back();
        stack.pop_back();
        out.push_back(cur->sig);
        cur = cur->r;
    }
    return out;
}

// ----------------------------------------------------------- range tree --

/// Static merge tree over points sorted by x-rank; each node keeps its
/// subtree's points sorted by y-rank plus a min-weight segment tree.
struct Index::RangeTree {
    struct NodeData {
        std::vector<std::uint64_t> ys;
        std::vector<Signature> sigs;
        std::vector<std::uint64_t> wmin; // segment tree, 2*n entries
    };
    std::uint64_t n = 0;
    std::vector<NodeData> nodes;

    static constexpr std::uint64_t kInf = ~0ull;

    void build(const std::vector<std::pair<std::uint64_t, Signature>>& by_x,
               const std::function<std::optional<std::uint64_t>(Signature)>& wf) {
        n = by_x.size();
        nodes.assign(4 * std::max<std::uint64_t>(n, 1), {});
        if (n) build_rec(1, 0, n, by_x, wf);
    }

    void build_rec(std::uint64_t v, std::uint64_t lo, std::uint64_t hi,
                   const std::vector<std::pair<std::uint64_t, Signature>>& by_x,
                   const std::function<std::optional<std::uint64_t>(Signature)>& wf) {
        NodeData& nd = nodes[v];
        if (hi - lo == 1) {
            nd.ys = {by_x[lo].first};
            nd.sigs = {by_x[lo].second};
        } else {
            const std::uint64_t mid = (lo + hi) / 2;
            build_rec(2 * v, lo, mid, by_x, wf);
            build_rec(2 * v + 1, mid, hi, by_x, wf);
            const NodeData& a = nodes[2 * v];
            const NodeData& b = nodes[2 * v + 1];
            nd.ys.resize(a.ys.size() + b.ys.size());
            nd.sigs.resize(nd.ys.size());
            std::uint64_t i = 0, j = 0, k = 0;
            while (i < a.ys.size() || j < b.ys.size()) {
                const bool takea = j >= b.ys.size() || (i < a.ys.size() && a.ys[i] <= b.ys[j]);
                if (takea) {
                    nd.ys[k] = a.ys[i];
                    nd.sigs[k++] = a.sigs[i++];
                } else {
                    nd.ys[k] = b.ys[j];
                    nd.sigs[k++] = b.sigs[j++];
                }
            }
        }
        const std::uint64_t m = nd.ys.size();
        nd.wmin.assign(2 * m, kInf);
        for (std::uint64_t i = 0; i < m; ++i) {
            const auto w = wf ? wf(nd.sigs[i]) : std::nullopt;
            nd.wmin[m + i] = w ? *w : kInf;
        }
        for (std::uint64_t i = m; i-- > 1;)
            nd.wmin[i] = std::min(nd.wmin[2 * i], nd.wmin[2 * i + 1]);
    }

    void report_rec(std::uint64_t v, std::uint64_t lo, std::uint64_t hi, std::uint64_t x1,
                    std::uint64_t x2, std::uint64_t y1, std::uint64_t y2,
                    std::vector<Index::Point>& out) const {
        if (x2 < lo || x1 >= hi) return;
        const NodeData& nd = nodes[v];
        if (x1 <= lo && hi <= x2 + 1) {
            auto it = std::lower_bound(nd.ys.begin(), nd.ys.end(), y1);
            for (; it != nd.ys.end() && *it <= y2; ++it) {
                const std::size_t idx = it - nd.ys.begin();
                out.push_back({nd.sigs[idx], 0, *it});
            }
            return;
        }
        const std::uint64_t mid = (lo + hi) / 2;
        report_rec(2 * v, lo, mid, x1, x2, y1, y2, out);
        report_rec(2 * v + 1, mid, hi, x1, x2, y1, y2, out);
    }

    std::uint64_t min_rec(std::uint64_t v, std::uint64_t lo, std::uint64_t hi, std::uint64_t x1,
                          std::uint64_t x2, std::uint64_t y1, std::uint64_t y2) const {
        if (x2 < lo || x1 >= hi) return kInf;
        const NodeData& nd = nodes[v];
        if (x1 <= lo && hi <= x2 + 1) {
            const std::uint64_t m = nd.ys.size();
            std::uint64_t l = std::lower_bound(nd.ys.begin(), nd.ys.end(), y1) - nd.ys.begin();
            std::uint64_t r = std::upper_bound(nd.ys.begin(), nd.ys.end(), y2) - nd.ys.begin();
            std::uint64_t best = kInf;
            for (l += m, r += m; l < r; l >>= 1, r >>= 1) {
                if (l & 1) best = std::min(best, nd.wmin[l++]);
                if (r & 1) best = std::min(best, nd.wmin[--r]);
            }
            return best;
        }
        const std::uint64_t mid = (lo + hi) / 2;
        return std::min(min_rec(2 * v, lo, mid, x1, x2, y1, y2),
                        min_rec(2 * v + 1, mid, hi, x1, x2, y1, y2));
    }
};

// ---------------------------------------------------------------- index --

Index::Index(Encoding& enc)
    : enc_(&enc),
      x_(enc.store(), OrderedStrSet::Key::ReverseLeftString),
      y_(enc.store(), OrderedStrSet::Key::RightString) {
    enc.store().for_each_live([&](Signature e, const Assignment& a) {
        if (a.kind != AssignKind::Char) {
            x_.insert(e);
            y_.insert(e);
        }
    });
    enc.store().add_listener(this);
}

Index::~Index() { enc_->store().remove_listener(this); }

void Index::on_add(Signature e) {
    if (enc_->store().assignment_of(e).kind == AssignKind::Char) return;
    x_.insert(e);
    y_.insert(e);
    dirty_ = true;
}

void Index::on_remove(Signature e) {
    if (enc_->store().assignment_of(e).kind == AssignKind::Char) return;
    x_.erase(e);
    y_.erase(e);
    dirty_ = true;
}

void Index::set_weight_fn(std::function<std::optional<std::uint64_t>(Signature)> fn) {
    weight_fn_ = std::move(fn);
    dirty_ = true;
}

void Index::ensure_built() {
    if (!dirty_ && tree_) return;
    const auto xs = x_.in_order();
    std::vector<std::pair<std::uint64_t, Signature>> by_x(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) by_x[i] = {y_.rank_of(xs[i]), xs[i]};
    if (!tree_) tree_ = std::make_unique<RangeTree>();
    tree_->build(by_x, weight_fn_);
    dirty_ = false;
}

std::vector<Index::Point> Index::range_report(std::uint64_t x1, std::uint64_t x2, std::uint64_t y1,
                                              std::uint64_t y2) {
    std::vector<Point> out;
    if (x1 > x2 || y1 > y2 || x_.size() == 0) return out;
    ensure_built();
    x1 = std::max<std::uint64_t>(x1, 1);
    x2 = std::min<std::uint64_t>(x2, tree_->n);
    if (x1 > x2) return out;
    tree_->report_rec(1, 0, tree_->n, x1 - 1, x2 - 1, y1, y2, out);
    for (auto& p : out) p.x_rank = x_.rank_of(p.sig);
    return out;
}

std::optional<std::uint64_t> Index::min_weight_in(const Rect& r) {
    if (r.x1 > r.x2 || r.y1 > r.y2 || x_.size() == 0) return std::nullopt;
    ensure_built();
    const std::uint64_t best =
        tree_->min_rec(1, 0, tree_->n, r.x1 - 1, r.x2 - 1, r.y1, r.y2);
    if (best == RangeTree::kInf) return std::nullopt;
    return best;
}

std::optional<Index::Rect> Index::pattern_ranges(const PatternHandle& p, std::uint64_t j) {
    if (j < 1 || j >= p.len)
        throw std::invalid_argument("pattern_ranges: split outside pattern");
    const GrammarStore& st = enc_->store();

    const auto left_key = [&](Signature e) { return key_of(st, e, OrderedStrSet::Key::ReverseLeftString).base; };

    const std::uint64_t xlo = x_.count_prefix(
        [&](Signature e) { return prefix_cmp_left(st, left_key(e), p, j) < 0; });
    const std::uint64_t xhi = x_.count_prefix(
        [&](Signature e) { return prefix_cmp_left(st, left_key(e), p, j) <= 0; });
    if (xlo >= xhi) return std::nullopt;

    const PatternHandle rest{p.sig, p.off + j, p.len - j};
    const std::uint64_t ylo = y_.count_prefix([&](Signature e) {
        return prefix_cmp_right(st, key_of(st, e, OrderedStrSet::Key::RightString), rest) < 0;
    });
    const std::uint64_t yhi = y_.count_prefix([&](Signature e) {
        return prefix_cmp_right(st, key_of(st, e, OrderedStrSet::Key::RightString), rest) <= 0;
    });
    if (ylo >= yhi) return std::nullopt;

    return Rect{xlo + 1, xhi, ylo + 1, yhi};
}

// ------------------------------------------------------------- queries --

std::vector<std::uint64_t> vocc_of(const Encoding& enc, Signature e) {
    const GrammarStore& st = enc.store();
    if (enc.empty() || !st.is_live(e)) return {};
    std::unordered_map<Signature, std::vector<std::uint64_t>> memo;
    const std::function<const std::vector<std::uint64_t>&(Signature)> rec =
        [&](Signature x) -> const std::vector<std::uint64_t>& {
        if (auto it = memo.find(x); it != memo.end()) return it->second;
        std::vector<std::uint64_t> res;
        if (x == enc.start()) {
            res.push_back(1);
        } else {
            std::vector<Signature> ps(st.parents_of(x).begin(), st.parents_of(x).end());
            std::sort(ps.begin(), ps.end());
            ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
            for (Signature parent : ps) {
                const Assignment& pa = st.assignment_of(parent);
                std::vector<std::uint64_t> offs;
                if (pa.kind == AssignKind::Pair) {
                    if (pa.a == x) offs.push_back(0);
                    if (pa.b == x) offs.push_back(st.length_of(pa.a));
                } else if (pa.kind == AssignKind::Run) {
                    const std::uint64_t bl = st.length_of(pa.a);
                    for (std::uint64_t c = 0; c < pa.b; ++c) offs.push_back(c * bl);
                }
                for (std::uint64_t v : rec(parent))
                    for (std::uint64_t off : offs) res.push_back(v + off);
            }
            std::sort(res.begin(), res.end());
            res.erase(std::unique(res.begin(), res.end()), res.end());
        }
        return memo.emplace(x, std::move(res)).first->second;
    };
    return rec(e);
}

std::vector<std::uint64_t> run_offsets(const Encoding& enc, Signature e, std::uint64_t j,
                                       std::uint64_t plen) {
    const GrammarStore& st = enc.store();
    const Assignment& a = st.assignment_of(e);
    if (a.kind != AssignKind::Run) return {};
    const std::uint64_t bl = st.length_of(a.a);
    const std::uint64_t total = st.length_of(e);
    std::vector<std::uint64_t> out;
    for (std::uint64_t c = 1; j + c * bl + plen - 1 <= total; ++c) out.push_back(c * bl);
    return out;
}

std::vector<std::uint64_t> split_positions(const Encoding& enc, const PatternHandle& p) {
    if (p.len <= 1) throw std::invalid_argument("split_positions: pattern too short");
    const PowSeq u = uniq_pow_in(enc.store(), p.sig, p.off, p.len, enc.params());
    if (u.items.size() == 1) return {1}; // unary pattern
    std::vector<std::uint64_t> splits;
    std::uint64_t cum = 0;
    for (std::size_t i = 0; i + 1 < u.items.size(); ++i) {
        cum += enc.store().length_of(u.items[i].sig) * u.items[i].exp;
        splits.push_back(cum);
    }
    return splits;
}

std::vector<std::uint64_t> search(Encoding& enc, Index& idx, std::string_view pattern) {
    if (pattern.empty()) throw std::invalid_argument("search: empty pattern");
    GrammarStore& st = enc.store();
    std::vector<std::uint64_t> out;
    if (enc.empty() || pattern.size() > enc.text_len()) return out;

    if (pattern.size() == 1) {
        const auto cs = st.lookup(Assignment::character(static_cast<unsigned char>(pattern[0])));
        if (!cs) return out;
        out = vocc_of(enc, *cs);
        std::sort(out.begin(), out.end());
        return out;
    }

    const Signature psig = encode_into(st, pattern, enc.params());
    const PatternHandle handle{psig, 1, pattern.size()};
    std::unordered_map<Signature, std::vector<std::uint64_t>> vocc_cache;

    for (std::uint64_t j : split_positions(enc, handle)) {
        const auto rect = idx.pattern_ranges(handle, j);
        if (!rect) continue;
        for (const auto& pt : idx.range_report(rect->x1, rect->x2, rect->y1, rect->y2)) {
            const Assignment& a = st.assignment_of(pt.sig);
            const std::uint64_t left_len = st.length_of(a.a);
            const std::uint64_t ioff = left_len - j + 1;
            auto vit = vocc_cache.find(pt.sig);
            if (vit == vocc_cache.end())
                vit = vocc_cache.emplace(pt.sig, vocc_of(enc, pt.sig)).first;
            std::vector<std::uint64_t> shifts{0};
            for (std::uint64_t c : run_offsets(enc, pt.sig, ioff, pattern.size()))
                shifts.push_back(c);
            for (std::uint64_t v : vit->second)
                for (std::uint64_t c : shifts) out.push_back(v + ioff + c - 1);
        }
    }
    st.unpin(psig);

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace sigdex
