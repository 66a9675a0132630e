#include "sigdex/slp.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

namespace sigdex {

namespace {

std::uint64_t parse_num(std::string_view s, std::size_t& i, const char* what) {
    std::uint64_t v = 0;
    const char* begin = s.data() + i;
    const auto res = std::from_chars(begin, s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr == begin)
        throw std::runtime_error(std::string("slp: malformed ") + what);
    i += res.ptr - begin;
    return v;
}

void expect(std::string_view s, std::size_t& i, std::string_view tok, const char* what) {
    if (s.compare(i, tok.size(), tok) != 0)
        throw std::runtime_error(std::string("slp: expected ") + what);
    i += tok.size();
}

} // namespace

Slp parse_slp(std::string_view text) {
    std::size_t i = 0;
    expect(text, i, "SLP 1\n", "header 'SLP 1'");
    expect(text, i, "S ", "start line");
    Slp slp;
    slp.start = parse_num(text, i, "start id");
    expect(text, i, "\n", "newline after start");

    std::unordered_set<std::uint64_t> defined;
    std::uint64_t prev_id = 0;
    while (i < text.size()) {
        SlpRule rule{};
        rule.id = parse_num(text, i, "rule id");
        if (rule.id <= prev_id)
            throw std::runtime_error("slp: rule ids must be ascending and unique");
        prev_id = rule.id;
        expect(text, i, " ", "space after rule id");
        if (i >= text.size()) throw std::runtime_error("slp: truncated rule");
        const char kind = text[i++];
        expect(text, i, " ", "space after rule kind");
        if (kind == 'C') {
            rule.is_char = true;
            const std::uint64_t cp = parse_num(text, i, "codepoint");
            if (cp > 255) throw std::runtime_error("slp: codepoint outside byte range");
            rule.ch = static_cast<std::uint32_t>(cp);
        } else if (kind == 'P') {
            rule.is_char = false;
            rule.left = parse_num(text, i, "left operand");
            expect(text, i, " ", "space between operands");
            rule.right = parse_num(text, i, "right operand");
            if (rule.left >= rule.id || rule.right >= rule.id)
                throw std::runtime_error("slp: rule references a forward or self id");
            if (!defined.count(rule.left) || !defined.count(rule.right))
                throw std::runtime_error("slp: rule references an unknown id");
        } else {
            throw std::runtime_error("slp: unknown rule kind");
        }
        expect(text, i, "\n", "newline after rule");
        defined.insert(rule.id);
        slp.rules.push_back(rule);
    }
    if (slp.rules.empty()) throw std::runtime_error("slp: no rules");
    if (!defined.count(slp.start)) throw std::runtime_error("slp: start id is undefined");
    return slp;
}

std::string serialize_slp(const Slp& slp) {
    std::string out = "SLP 1\nS " + std::to_string(slp.start) + "\n";
    for (const SlpRule& r : slp.rules) {
        out += std::to_string(r.id);
        if (r.is_char) {
            out += " C " + std::to_string(r.ch);
        } else {
            out += " P " + std::to_string(r.left) + " " + std::to_string(r.right);
        }
        out += '\n';
    }
    return out;
}

std::pair<Encoding, std::map<std::uint64_t, Signature>> import_slp(const Slp& slp,
                                                                   ParserParams params) {
    Encoding enc(params);
    GrammarStore& st = enc.store();
    std::map<std::uint64_t, Signature> vars;

    for (const SlpRule& r : slp.rules) {
        if (r.is_char) {
            const std::string one(1, static_cast<char>(static_cast<unsigned char>(r.ch)));
            vars[r.id] = encode_into(st, one, params);
        } else {
            const Signature l = vars.at(r.left), rr = vars.at(r.right);
            std::vector<PowSeq> pieces;
            pieces.push_back(uniq_pow_in(st, l, 1, st.length_of(l), params));
            pieces.push_back(uniq_pow_in(st, rr, 1, st.length_of(rr), params));
            auto [top, delta] = merge_pow(enc, pieces);
            (void)delta;
            vars[r.id] = top;
        }
    }
    const Signature start = vars.at(slp.start);
    enc.adopt_start(start, st.length_of(start));
    return {std::move(enc), std::move(vars)};
}

void SlpExporter::translate(const GrammarStore& st, Signature e) {
    const Assignment& a = st.assignment_of(e);
    std::vector<std::uint64_t>& owned = owned_[e];
    auto emit = [&](bool is_char, std::uint32_t ch, std::uint64_t l, std::uint64_t r) {
        const std::uint64_t id = next_id_++;
        rules_.emplace(id, SlpRule{id, is_char, ch, l, r});
        owned.push_back(id);
        return id;
    };

    switch (a.kind) {
    case AssignKind::Char:
        id_of_[e] = emit(true, static_cast<std::uint32_t>(a.a), 0, 0);
        break;
    case AssignKind::Pair:
        id_of_[e] = emit(false, 0, id_of_.at(a.a), id_of_.at(a.b));
        break;
    case AssignKind::Run: {
        const std::uint64_t d = a.b;
        if (d == 1) {
            id_of_[e] = id_of_.at(a.a); // unit run aliases its base
            break;
        }
        // powers of two by squaring, combined along the binary digits of d
        std::vector<std::uint64_t> pow{id_of_.at(a.a)};
        for (std::uint64_t span = 2; span <= d; span *= 2)
            pow.push_back(emit(false, 0, pow.back(), pow.back()));
        std::uint64_t acc = 0;
        for (std::size_t bit = 0; bit < pow.size(); ++bit) {
            if (!((d >> bit) & 1)) continue;
            acc = acc ? emit(false, 0, acc, pow[bit]) : pow[bit];
        }
        id_of_[e] = acc;
        break;
    }
    }
}

SlpExporter::SlpExporter(const Encoding& enc) {
    if (enc.empty()) throw std::invalid_argument("export_slp: empty encoding");
    const GrammarStore& st = enc.store();

    // translate exactly the signatures reachable from the start
    std::vector<bool> reach(st.max_id() + 1, false);
    std::vector<Signature> stack{enc.start()};
    reach[enc.start()] = true;
    while (!stack.empty()) {
        const Signature e = stack.back();
        stack.pop_back();
        const Assignment& a = st.assignment_of(e);
        if (a.kind == AssignKind::Char) continue;
        for (Signature op : {a.a, a.kind == AssignKind::Pair ? a.b : a.a}) {
            if (!reach[op]) {
                reach[op] = true;
                stack.push_back(op);
            }
        }
    }
    for (Signature id = 1; id <= st.max_id(); ++id)
        if (reach[id] && st.is_live(id)) translate(st, id);
    start_id_ = id_of_.at(enc.start());
}

void SlpExporter::apply_delta(const Encoding& enc, const EditDelta& delta) {
    for (Signature e : delta.removed) {
        auto it = owned_.find(e);
        if (it == owned_.end())
            throw std::runtime_error("export delta: removed signature was never exported");
        for (std::uint64_t id : it->second) rules_.erase(id);
        owned_.erase(it);
        id_of_.erase(e);
    }
    for (Signature e : delta.added) translate(enc.store(), e);
    start_id_ = id_of_.at(enc.start());
}

Slp SlpExporter::slp() const {
    Slp out;
    out.start = start_id_;
    out.rules.reserve(rules_.size());
    for (const auto& [id, rule] : rules_) out.rules.push_back(rule);
    return out;
}

Slp export_slp(const Encoding& enc) { return SlpExporter(enc).slp(); }

Slp canonical_slp(const Slp& slp) {
    std::map<std::uint64_t, const SlpRule*> by_id;
    for (const SlpRule& r : slp.rules) by_id[r.id] = &r;

    // assign new ids bottom-up in DFS-from-start discovery order
    std::unordered_map<std::uint64_t, std::uint64_t> fresh;
    std::vector<SlpRule> out;
    const std::function<std::uint64_t(std::uint64_t)> visit = [&](std::uint64_t id) {
        if (auto it = fresh.find(id); it != fresh.end()) return it->second;
        const SlpRule* r = by_id.at(id);
        SlpRule c = *r;
        if (!r->is_char) {
            c.left = visit(r->left);
            c.right = visit(r->right);
        }
        const std::uint64_t nid = out.size() + 1;
        c.id = nid;
        fresh.emplace(id, nid);
        out.push_back(c);
        return nid;
    };
    Slp res;
    res.start = visit(slp.start);
    res.rules = std::move(out);
    return res;
}

std::uint64_t slp_lce(const Encoding& enc, const std::map<std::uint64_t, Signature>& vars,
                      std::uint64_t xi, std::uint64_t xj, std::uint64_t a, std::uint64_t b) {
    return enc.lce_forward(vars.at(xi), vars.at(xj), a, b);
}

std::uint64_t slp_lcp(const Encoding& enc, const std::map<std::uint64_t, Signature>& vars,
                      std::uint64_t xi, std::uint64_t xj) {
    return enc.lcp_of(vars.at(xi), vars.at(xj));
}

std::uint64_t slp_lcs(const Encoding& enc, const std::map<std::uint64_t, Signature>& vars,
                      std::uint64_t xi, std::uint64_t xj) {
    return enc.lcs_of(vars.at(xi), vars.at(xj));
}

} // namespace sigdex
