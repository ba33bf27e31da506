#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "slam/error.hpp"
#include "slam/structure.hpp"

namespace slam {

namespace {

struct token {
    std::string_view text;
    int column;
};

std::vector<token> tokenize_line(std::string_view line) {
    std::vector<token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

int parse_int(const token& t, int line) {
    int v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || p != t.text.data() + t.text.size())
        throw parse_error("expected an integer, got '" + std::string(t.text) + "'", line, t.column);
    return v;
}

} // namespace

structure parse_structure(std::string_view text) {
    enum class state { header, domain, body, relation, done };
    state st = state::header;
    std::string name;
    int n = -1;
    std::vector<relation_symbol> symbols;
    std::vector<std::vector<int>> flats;
    std::vector<int> tuple_lines;

    int line_no = 0;
    std::size_t pos = 0;
    int last_line = 1;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        auto toks = tokenize_line(line);
        if (toks.empty()) {
            if (nl == text.size()) break;
            continue;
        }
        last_line = line_no;
        const auto& head = toks[0];
        switch (st) {
        case state::header:
            if (head.text != "structure") throw parse_error("expected 'structure'", line_no, head.column);
            if (toks.size() > 2) throw parse_error("unexpected token", line_no, toks[2].column);
            name = toks.size() == 2 ? std::string(toks[1].text) : std::string();
            st = state::domain;
            break;
        case state::domain:
            if (head.text != "domain" || toks.size() != 2)
                throw parse_error("expected 'domain <n>'", line_no, head.column);
            n = parse_int(toks[1], line_no);
            if (n < 0) throw parse_error("domain size must be non-negative", line_no, toks[1].column);
            st = state::body;
            break;
        case state::body:
            if (head.text == "end") {
                if (toks.size() != 1) throw parse_error("unexpected token", line_no, toks[1].column);
                st = state::done;
            } else if (head.text == "rel") {
                if (toks.size() != 3) throw parse_error("expected 'rel <symbol> <arity>'", line_no, head.column);
                int arity = parse_int(toks[2], line_no);
                if (arity < 1) throw parse_error("arity must be >= 1", line_no, toks[2].column);
                for (const auto& s : symbols)
                    if (s.name == toks[1].text)
                        throw parse_error("duplicate relation '" + s.name + "'", line_no, toks[1].column);
                symbols.push_back({std::string(toks[1].text), arity});
                flats.emplace_back();
                st = state::relation;
            } else {
                throw parse_error("expected 'rel' or 'end'", line_no, head.column);
            }
            break;
        case state::relation:
            if (head.text == "end") {
                if (toks.size() != 1) throw parse_error("unexpected token", line_no, toks[1].column);
                st = state::body;
                break;
            }
            if (static_cast<int>(toks.size()) != symbols.back().arity)
                throw parse_error("tuple length does not match arity of '" + symbols.back().name + "'", line_no,
                                  head.column);
            for (const auto& t : toks) {
                int v = parse_int(t, line_no);
                if (v < 0 || v >= n)
                    throw parse_error("element " + std::to_string(v) + " outside domain", line_no, t.column);
                flats.back().push_back(v);
            }
            break;
        case state::done:
            throw parse_error("content after final 'end'", line_no, head.column);
        }
        if (nl == text.size()) break;
    }
    if (st != state::done) throw parse_error("unexpected end of input", last_line, 1);

    structure s(signature(symbols), n, name);
    for (std::size_t r = 0; r < symbols.size(); ++r)
        s.set_relation(r, relation::from_flat(symbols[r].arity, std::move(flats[r])));
    return s;
}

std::string print_structure(const structure& s) {
    std::ostringstream os;
    os << "structure " << (s.name().empty() ? "unnamed" : s.name()) << "\n";
    os << "domain " << s.size() << "\n";
    for (std::size_t r = 0; r < s.sig().size(); ++r) {
        os << "rel " << s.sig()[r].name << " " << s.sig()[r].arity << "\n";
        for (auto t : s.rel(r)) {
            for (std::size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << t[i];
            os << "\n";
        }
        os << "end\n";
    }
    os << "end\n";
    return os.str();
}

std::string read_text_file(const std::string& path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw error("cannot open '" + path + "'");
    ss << in.rdbuf();
    return ss.str();
}

structure read_structure_file(const std::string& path) {
    return parse_structure(read_text_file(path));
}

} // namespace slam
