#include "sigdex/cli.hpp"

#include <bit>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sigdex/encoding_io.hpp"
#include "sigdex/lz77.hpp"
#include "sigdex/slp.hpp"

namespace sigdex {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

Encoding load_enc(const std::string& path) {
    return encoding_from_string(read_file(path));
}

void emit(const std::string& path, const std::string& data, std::ostream& out) {
    if (path.empty()) out << data;
    else write_file(path, data);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sigdex: dynamic grammar-compressed text index"};
    app.require_subcommand(1);

    std::string in_path, out_path, enc_path, pattern, text_arg, text_file;
    std::uint64_t pos = 0, len = 0, ipos = 0, jpos = 0;
    bool backward = false, with_z = false;

    auto* build = app.add_subcommand("build", "encode a text file");
    build->add_option("-i,--input", in_path, "input text file")->required();
    build->add_option("-o,--output", out_path, "output encoding file")->required();

    auto* extract = app.add_subcommand("extract", "print a substring of the encoded text");
    extract->add_option("-e,--encoding", enc_path)->required();
    extract->add_option("--pos", pos, "1-based start position")->required();
    extract->add_option("--len", len, "substring length")->required();

    auto* search = app.add_subcommand("search", "report all pattern occurrences");
    search->add_option("-e,--encoding", enc_path)->required();
    search->add_option("-p,--pattern", pattern)->required();

    auto* lce = app.add_subcommand("lce", "longest common extension of two text positions");
    lce->add_option("-e,--encoding", enc_path)->required();
    lce->add_option("--i", ipos)->required();
    lce->add_option("--j", jpos)->required();
    lce->add_flag("--backward", backward, "match suffixes leftward instead");

    auto* insert = app.add_subcommand("insert", "insert a string into the text");
    insert->add_option("-e,--encoding", enc_path)->required();
    insert->add_option("--pos", pos)->required();
    auto* ins_text = insert->add_option("--text", text_arg, "literal string to insert");
    insert->add_option("--file", text_file, "file whose bytes are inserted")->excludes(ins_text);
    insert->add_option("-o,--output", out_path, "output encoding (defaults to -e)");

    auto* del = app.add_subcommand("delete", "delete a range from the text");
    del->add_option("-e,--encoding", enc_path)->required();
    del->add_option("--pos", pos)->required();
    del->add_option("--len", len)->required();
    del->add_option("-o,--output", out_path);

    auto* lz = app.add_subcommand("lz77", "LZ77-factorize a text or encoding");
    auto* lz_in = lz->add_option("-i,--input", in_path, "raw text file");
    lz->add_option("-e,--encoding", enc_path)->excludes(lz_in);
    lz->add_option("-o,--output", out_path, "factor file (stdout if absent)");

    auto* fromlz = app.add_subcommand("from-lz77", "build an encoding from LZ77 factors");
    fromlz->add_option("-i,--input", in_path)->required();
    fromlz->add_option("-o,--output", out_path)->required();

    auto* imp = app.add_subcommand("import-slp", "signature-encode an SLP file");
    imp->add_option("-i,--input", in_path)->required();
    imp->add_option("-o,--output", out_path)->required();

    auto* exp = app.add_subcommand("export-slp", "translate an encoding to an SLP");
    exp->add_option("-e,--encoding", enc_path)->required();
    exp->add_option("-o,--output", out_path, "SLP file (stdout if absent)");

    auto* stats = app.add_subcommand("stats", "report size figures of an encoding");
    stats->add_option("-e,--encoding", enc_path)->required();
    stats->add_flag("--with-z", with_z, "also factorize and report w vs z");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (build->parsed()) {
            const std::string text = read_file(in_path);
            write_file(out_path, encoding_to_string(Encoding::encode_string(text)));
        } else if (extract->parsed()) {
            Encoding enc = load_enc(enc_path);
            if (enc.empty()) throw std::out_of_range("extract: text is empty");
            out << enc.extract(enc.start(), pos, len);
        } else if (search->parsed()) {
            Encoding enc = load_enc(enc_path);
            if (pattern.empty()) throw std::runtime_error("search: empty pattern");
            Index idx(enc);
            const auto hits = sigdex::search(enc, idx, pattern);
            for (std::size_t i = 0; i < hits.size(); ++i)
                out << (i ? " " : "") << hits[i];
            out << "\n";
        } else if (lce->parsed()) {
            Encoding enc = load_enc(enc_path);
            if (enc.empty()) throw std::out_of_range("lce: text is empty");
            const std::uint64_t v = backward
                                        ? enc.lce_backward(enc.start(), enc.start(), ipos, jpos)
                                        : enc.lce_forward(enc.start(), enc.start(), ipos, jpos);
            out << v << "\n";
        } else if (insert->parsed()) {
            Encoding enc = load_enc(enc_path);
            std::string y = text_arg;
            if (!text_file.empty()) y = read_file(text_file);
            if (y.empty()) throw std::runtime_error("insert: nothing to insert");
            insert_str(enc, pos, y);
            write_file(out_path.empty() ? enc_path : out_path, encoding_to_string(enc));
        } else if (del->parsed()) {
            Encoding enc = load_enc(enc_path);
            delete_range(enc, pos, len);
            write_file(out_path.empty() ? enc_path : out_path, encoding_to_string(enc));
        } else if (lz->parsed()) {
            std::vector<Factor> factors;
            if (!in_path.empty()) {
                factors = factorize_text(read_file(in_path));
            } else if (!enc_path.empty()) {
                Encoding enc = load_enc(enc_path);
                factors = factorize(enc);
            } else {
                err << "usage error: lz77 needs --input or --encoding\n";
                return 1;
            }
            emit(out_path, serialize_factors(factors), out);
        } else if (fromlz->parsed()) {
            const Encoding enc = from_factors(parse_factors(read_file(in_path)));
            write_file(out_path, encoding_to_string(enc));
        } else if (imp->parsed()) {
            auto [enc, vars] = import_slp(parse_slp(read_file(in_path)));
            for (const auto& [id, sig] : vars)
                if (sig != enc.start()) enc.store().unpin(sig);
            gc(enc);
            write_file(out_path, encoding_to_string(enc));
        } else if (exp->parsed()) {
            Encoding enc = load_enc(enc_path);
            if (enc.empty()) throw std::runtime_error("export-slp: empty encoding");
            emit(out_path, serialize_slp(export_slp(enc)), out);
        } else if (stats->parsed()) {
            Encoding enc = load_enc(enc_path);
            const std::uint64_t n = enc.text_len();
            const std::uint64_t w = enc.store().live_count();
            out << "N " << n << "\n";
            out << "w " << w << "\n";
            out << "height " << enc.height() << "\n";
            if (with_z) {
                const std::size_t z = factorize(enc).size();
                out << "z " << z << "\n";
                if (z > 0 && n > 0) {
                    const std::uint64_t lg = std::bit_width(n); // floor(log2 N) + 1
                    const double ratio =
                        static_cast<double>(w) / (static_cast<double>(z) * static_cast<double>(lg) * 5.0);
                    out << "ratio " << std::fixed << std::setprecision(6) << ratio << "\n";
                } else {
                    out << "ratio -\n";
                }
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace sigdex
