#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "slam/datalog.hpp"
#include "slam/error.hpp"

namespace slam {

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '{' || c == '}';
}

struct raw_atom {
    std::string pred;
    std::vector<std::string> args;
    bool has_parens = false;
    int line = 0, column = 0;
};

struct raw_rule {
    raw_atom head;
    std::vector<raw_atom> body;
    int line = 0;
};

class line_parser {
public:
    line_parser(std::string_view line, int line_no) : s_(line), line_(line_no) {}

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip();
        return pos_ >= s_.size();
    }
    bool accept(std::string_view t) {
        skip();
        if (s_.substr(pos_, t.size()) != t) return false;
        pos_ += t.size();
        return true;
    }
    void expect(std::string_view t) {
        if (!accept(t)) fail("expected '" + std::string(t) + "'");
    }
    std::string identifier() {
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        }
        if (start == pos_) fail("expected an identifier");
        return std::string(s_.substr(start, pos_ - start));
    }
    int integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        int v = 0;
        auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (start == pos_ || ec != std::errc{}) fail("expected an integer");
        return v;
    }
    int column() {
        skip();
        return static_cast<int>(pos_) + 1;
    }
    [[noreturn]] void fail(const std::string& msg) {
        skip();
        throw parse_error(msg, line_, static_cast<int>(pos_) + 1);
    }

    raw_atom atom_() {
        raw_atom a;
        a.line = line_;
        a.column = column();
        a.pred = identifier();
        if (accept("(")) {
            a.has_parens = true;
            if (!accept(")")) {
                do a.args.push_back(identifier());
                while (accept(","));
                expect(")");
            }
        }
        return a;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
};

std::string strip_comment(std::string_view line) {
    std::size_t cut = line.size();
    for (std::size_t i = 0; i < line.size(); ++i)
        if (line[i] == '%' || line[i] == '#') {
            cut = i;
            break;
        }
    return std::string(line.substr(0, cut));
}

} // namespace

program parse_program(std::string_view text) {
    std::vector<raw_rule> raws;
    std::optional<std::vector<relation_symbol>> declared;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string line = strip_comment(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        line_parser lp(line, line_no);
        if (lp.at_end()) {
            if (nl == text.size()) break;
            continue;
        }
        if (lp.accept("@edb")) {
            if (declared) lp.fail("duplicate @edb directive");
            declared.emplace();
            while (!lp.at_end()) {
                std::string name = lp.identifier();
                lp.expect("/");
                int arity = lp.integer();
                if (arity < 1) lp.fail("EDB arity must be >= 1");
                declared->push_back({name, arity});
            }
        } else {
            raw_rule r;
            r.line = line_no;
            r.head = lp.atom_();
            lp.expect(":-");
            if (lp.accept(".")) throw parse_error("rule body is empty (unsafe rule)", line_no, lp.column());
            do r.body.push_back(lp.atom_());
            while (lp.accept(","));
            lp.expect(".");
            if (!lp.at_end()) lp.fail("unexpected trailing input");
            raws.push_back(std::move(r));
        }
        if (nl == text.size()) break;
    }

    std::map<std::string, int> arity;
    std::vector<std::string> order;
    auto note = [&](const raw_atom& a) {
        if (a.pred == goal_name) {
            if (!a.args.empty()) throw parse_error("goal takes no arguments", a.line, a.column);
            return;
        }
        if (!a.has_parens || a.args.empty())
            throw parse_error("predicate '" + a.pred + "' needs arguments", a.line, a.column);
        auto [it, fresh] = arity.emplace(a.pred, static_cast<int>(a.args.size()));
        if (fresh) order.push_back(a.pred);
        else if (it->second != static_cast<int>(a.args.size()))
            throw parse_error("arity clash for '" + a.pred + "'", a.line, a.column);
    };
    std::set<std::string> heads;
    for (const auto& r : raws) {
        note(r.head);
        for (const auto& b : r.body) note(b);
        if (r.head.pred != goal_name) heads.insert(r.head.pred);
    }

    program p;
    std::set<std::string> edb_names;
    if (declared) {
        for (const auto& s : *declared) {
            auto it = arity.find(s.name);
            if (it != arity.end() && it->second != s.arity)
                throw parse_error("arity clash for '" + s.name + "' with @edb", 1, 1);
            edb_names.insert(s.name);
        }
        p.edb = signature(*declared);
    } else {
        std::vector<relation_symbol> syms;
        for (const auto& name : order)
            if (!heads.count(name)) {
                syms.push_back({name, arity[name]});
                edb_names.insert(name);
            }
        p.edb = signature(syms);
    }
    for (const auto& name : order)
        if (!edb_names.count(name)) p.idb.push_back({name, arity[name]});

    auto convert = [&](const raw_atom& a) {
        atom out;
        out.pred = a.pred;
        out.args = a.args;
        out.kind = a.pred == goal_name ? predicate_kind::goal
                   : edb_names.count(a.pred) ? predicate_kind::edb
                                             : predicate_kind::idb;
        return out;
    };
    for (const auto& r : raws) {
        rule out;
        out.head = convert(r.head);
        if (out.head.kind == predicate_kind::edb)
            throw parse_error("EDB '" + r.head.pred + "' used in a rule head", r.head.line, r.head.column);
        std::set<std::string> body_vars;
        for (const auto& b : r.body) {
            out.body.push_back(convert(b));
            body_vars.insert(b.args.begin(), b.args.end());
        }
        for (const auto& v : r.head.args)
            if (!body_vars.count(v))
                throw parse_error("unsafe rule: head variable '" + v + "' does not occur in the body", r.line,
                                  r.head.column);
        p.rules.push_back(std::move(out));
    }
    return p;
}

namespace {

void render_atom(std::ostream& os, const atom& a) {
    os << a.pred;
    if (a.kind == predicate_kind::goal) return;
    os << "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) os << (i ? "," : "") << a.args[i];
    os << ")";
}

} // namespace

std::string render_rule(const rule& r) {
    std::ostringstream os;
    render_atom(os, r.head);
    os << " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i) os << ", ";
        render_atom(os, r.body[i]);
    }
    os << ".";
    return os.str();
}

std::string render_program(const program& p) {
    std::ostringstream os;
    os << "@edb";
    for (const auto& s : p.edb) os << " " << s.name << "/" << s.arity;
    os << "\n";
    for (const auto& r : p.rules) os << render_rule(r) << "\n";
    return os.str();
}

std::optional<std::size_t> program::find_rule(const rule& r) const {
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (rules[i] == r) return i;
    return std::nullopt;
}

rule reverse_rule(const rule& r) {
    if (r.head.kind != predicate_kind::idb) throw precondition_error("reverse_rule: head must be an IDB atom");
    auto it = std::find_if(r.body.begin(), r.body.end(), [](const atom& a) { return a.kind == predicate_kind::idb; });
    if (it == r.body.end()) throw precondition_error("reverse_rule: body contains no IDB atom");
    rule out = r;
    std::swap(out.head, out.body[it - r.body.begin()]);
    return out;
}

fragment_flags fragment_of(const program& p) {
    fragment_flags f;
    f.monadic = std::all_of(p.idb.begin(), p.idb.end(), [](const relation_symbol& s) { return s.arity <= 1; });
    f.arc = true;
    f.linear = true;
    for (const auto& r : p.rules) {
        int edb = 0, idb = 0;
        for (const auto& a : r.body) {
            if (a.kind == predicate_kind::edb) ++edb;
            else ++idb;
        }
        if (edb > 1) f.arc = false;
        if (idb > 1) f.linear = false;
    }
    f.symmetric = f.linear;
    if (f.symmetric) {
        auto key = [](const rule& r) {
            std::vector<atom> body = r.body;
            std::sort(body.begin(), body.end());
            return std::make_pair(r.head, body);
        };
        std::set<std::pair<atom, std::vector<atom>>> present;
        for (const auto& r : p.rules) present.insert(key(r));
        for (const auto& r : p.rules) {
            if (r.head.kind != predicate_kind::idb) continue;
            bool has_idb = std::any_of(r.body.begin(), r.body.end(),
                                       [](const atom& a) { return a.kind == predicate_kind::idb; });
            if (has_idb && !present.count(key(reverse_rule(r)))) {
                f.symmetric = false;
                break;
            }
        }
    }
    return f;
}

std::string render_fact(const ground_fact& f) {
    if (f.pred == goal_name && f.args.empty()) return std::string(goal_name);
    std::string s = f.pred + "(";
    for (std::size_t i = 0; i < f.args.size(); ++i) s += (i ? "," : "") + std::to_string(f.args[i]);
    return s + ")";
}

std::string derivation_json(const derivation& d) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : d.steps) {
        nlohmann::ordered_json step;
        step["fact"] = render_fact(s.fact);
        step["rule"] = render_rule(s.used);
        step["rule_id"] = s.rule_id;
        nlohmann::ordered_json b = nlohmann::ordered_json::object();
        for (const auto& [v, e] : s.bindings) b[v] = e;
        step["bindings"] = b;
        arr.push_back(step);
    }
    return arr.dump(2);
}

} // namespace slam
