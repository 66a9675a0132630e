#include "sigdex/encoding_io.hpp"

#include <charconv>
#include <ostream>
#include <istream>
#include <sstream>

namespace sigdex {

void save_encoding(const Encoding& enc, std::ostream& out) {
    out << "SIGENC 1\n";
    out << "N " << enc.text_len() << "\n";
    if (enc.empty()) out << "S -\n";
    else out << "S " << enc.start() << "\n";
    enc.store().for_each_live([&](Signature id, const Assignment& a) {
        out << id;
        switch (a.kind) {
        case AssignKind::Char: out << " C " << a.a; break;
        case AssignKind::Pair: out << " P " << a.a << " " << a.b; break;
        case AssignKind::Run: out << " R " << a.a << " " << a.b; break;
        }
        out << "\n";
    });
}

std::string encoding_to_string(const Encoding& enc) {
    std::ostringstream os;
    save_encoding(enc, os);
    return os.str();
}

namespace {

std::uint64_t parse_num(std::string_view s, std::size_t& i, const char* what) {
    std::uint64_t v = 0;
    const char* begin = s.data() + i;
    const auto res = std::from_chars(begin, s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr == begin)
        throw std::runtime_error(std::string("encoding file: malformed ") + what);
    i += res.ptr - begin;
    return v;
}

void expect(std::string_view s, std::size_t& i, std::string_view tok, const char* what) {
    if (s.compare(i, tok.size(), tok) != 0)
        throw std::runtime_error(std::string("encoding file: expected ") + what);
    i += tok.size();
}

} // namespace

Encoding encoding_from_string(std::string_view text, ParserParams params) {
    std::size_t i = 0;
    expect(text, i, "SIGENC 1\n", "header 'SIGENC 1'");
    expect(text, i, "N ", "text length line");
    const std::uint64_t n = parse_num(text, i, "text length");
    expect(text, i, "\n", "newline after length");
    expect(text, i, "S ", "start line");
    Signature start = kNoSignature;
    bool has_start = false;
    if (i < text.size() && text[i] == '-') {
        ++i;
    } else {
        start = parse_num(text, i, "start id");
        has_start = true;
    }
    expect(text, i, "\n", "newline after start");

    Encoding enc(params);
    GrammarStore& st = enc.store();
    while (i < text.size()) {
        const std::uint64_t id = parse_num(text, i, "signature id");
        expect(text, i, " ", "space after id");
        if (i >= text.size()) throw std::runtime_error("encoding file: truncated row");
        const char kind = text[i++];
        expect(text, i, " ", "space after row kind");
        Assignment a{};
        if (kind == 'C') {
            const std::uint64_t cp = parse_num(text, i, "codepoint");
            if (cp > 255) throw std::runtime_error("encoding file: codepoint outside byte range");
            a = Assignment::character(static_cast<std::uint32_t>(cp));
        } else if (kind == 'P') {
            const std::uint64_t l = parse_num(text, i, "left operand");
            expect(text, i, " ", "space between operands");
            const std::uint64_t r = parse_num(text, i, "right operand");
            a = Assignment::pair(l, r);
        } else if (kind == 'R') {
            const std::uint64_t b = parse_num(text, i, "run base");
            expect(text, i, " ", "space between operands");
            const std::uint64_t d = parse_num(text, i, "run exponent");
            a = Assignment::run(b, d);
        } else {
            throw std::runtime_error("encoding file: unknown row kind");
        }
        expect(text, i, "\n", "newline after row");
        try {
            st.insert_raw(id, a);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("encoding file: ") + e.what());
        }
    }

    if (has_start) {
        if (!st.is_live(start)) throw std::runtime_error("encoding file: start id is undefined");
        if (st.length_of(start) != n)
            throw std::runtime_error("encoding file: start length disagrees with N");
        if (st.level_of(start) % 2 != 1)
            throw std::runtime_error("encoding file: start is not a run-level symbol");
        st.pin(start);
        enc.adopt_start(start, n);
    } else {
        if (n != 0) throw std::runtime_error("encoding file: no start but nonzero N");
        if (st.live_count() != 0)
            throw std::runtime_error("encoding file: rows present without a start");
    }
    st.audit();
    return enc;
}

Encoding load_encoding(std::istream& in, ParserParams params) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return encoding_from_string(buf.str(), params);
}

} // namespace sigdex
