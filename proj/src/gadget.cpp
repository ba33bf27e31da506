#include <cctype>
#include <charconv>
#include <sstream>

#include "slam/error.hpp"
#include "slam/gadget.hpp"
#include "slam/homsolver.hpp"

namespace slam {

void pp_power_spec::validate() const {
    if (d < 1) throw precondition_error("pp-power: dimension must be >= 1");
    if (queries.size() != target.size()) throw precondition_error("pp-power: one query per target symbol required");
    for (std::size_t r = 0; r < target.size(); ++r) {
        const auto& q = queries[r];
        if (!(q.sig == source)) throw precondition_error("pp-power: query signature differs from the source");
        if (q.num_free != d * target[r].arity)
            throw precondition_error("pp-power: query for '" + target[r].name + "' needs " +
                                     std::to_string(d * target[r].arity) + " free variables");
        q.validate();
    }
}

namespace {

class lexer {
public:
    lexer(std::string_view s, int line) : s_(s), line_(line) {}

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
    bool peek_identifier() {
        skip();
        return pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_');
    }
    std::string identifier() {
        if (!peek_identifier()) fail("expected an identifier");
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
            ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }
    int integer() {
        skip();
        int v = 0;
        auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (ec != std::errc{}) fail("expected an integer");
        pos_ = p - s_.data();
        return v;
    }
    // Identifier if the next token is one that is directly followed by `next`.
    bool lookahead_identifier_then(char next) {
        skip();
        std::size_t save = pos_;
        if (!peek_identifier()) return false;
        identifier();
        skip();
        bool ok = pos_ < s_.size() && s_[pos_] == next;
        pos_ = save;
        return ok;
    }
    [[noreturn]] void fail(const std::string& msg) {
        skip();
        throw parse_error(msg, line_, static_cast<int>(pos_) + 1);
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
};

std::vector<std::pair<std::string, int>> split_statements(std::string_view text) {
    std::vector<std::pair<std::string, int>> out;
    int line = 1;
    std::string cur;
    int cur_line = 1;
    bool comment = false;
    for (char c : text) {
        if (c == '\n' || c == ';') {
            if (cur.find_first_not_of(" \t\r") != std::string::npos) out.emplace_back(cur, cur_line);
            cur.clear();
            comment = false;
            if (c == '\n') ++line;
            cur_line = line;
            continue;
        }
        if (c == '#') comment = true;
        if (!comment) cur += c;
    }
    if (cur.find_first_not_of(" \t\r") != std::string::npos) out.emplace_back(cur, cur_line);
    return out;
}

} // namespace

pp_power_spec parse_pp_power_spec(std::string_view text) {
    auto stmts = split_statements(text);
    if (stmts.empty()) throw parse_error("empty pp-power spec", 1, 1);
    pp_power_spec spec;
    {
        lexer lx(stmts[0].first, stmts[0].second);
        if (lx.identifier() != "ppower") lx.fail("expected 'ppower'");
        if (lx.identifier() != "d") lx.fail("expected 'd='");
        lx.expect("=");
        spec.d = lx.integer();
        if (spec.d < 1) lx.fail("dimension must be >= 1");
        if (lx.identifier() != "from") lx.fail("expected 'from'");
        std::vector<relation_symbol> syms;
        while (!lx.at_end()) {
            std::string name = lx.identifier();
            lx.expect("/");
            int a = lx.integer();
            if (a < 1) lx.fail("arity must be >= 1");
            syms.push_back({name, a});
        }
        spec.source = signature(syms);
    }
    std::vector<relation_symbol> target;
    for (std::size_t i = 1; i < stmts.size(); ++i) {
        lexer lx(stmts[i].first, stmts[i].second);
        if (lx.identifier() != "rel") lx.fail("expected 'rel'");
        conjunctive_query q;
        q.sig = spec.source;
        std::string name = lx.identifier();
        lx.expect("(");
        if (!lx.accept(")")) {
            do {
                std::string v = lx.identifier();
                if (q.var_index(v) >= 0) lx.fail("repeated head variable '" + v + "'");
                q.vars.push_back(v);
            } while (lx.accept(","));
            lx.expect(")");
        }
        q.num_free = static_cast<int>(q.vars.size());
        if (q.num_free == 0 || q.num_free % spec.d != 0)
            lx.fail("head of '" + name + "' must list a positive multiple of d variables");
        lx.expect(":=");
        if (lx.accept("exists")) {
            while (!lx.accept(".")) {
                std::string v = lx.identifier();
                if (q.var_index(v) >= 0) lx.fail("variable '" + v + "' declared twice");
                q.vars.push_back(v);
            }
        }
        auto var = [&](const std::string& v) {
            int idx = q.var_index(v);
            if (idx < 0) lx.fail("undeclared variable '" + v + "'");
            return idx;
        };
        do {
            if (lx.lookahead_identifier_then('(')) {
                std::string pred = lx.identifier();
                auto sym = spec.source.find(pred);
                if (!sym) lx.fail("unknown source symbol '" + pred + "'");
                query_atom at{*sym, {}};
                lx.expect("(");
                do at.args.push_back(var(lx.identifier()));
                while (lx.accept(","));
                lx.expect(")");
                if (static_cast<int>(at.args.size()) != spec.source[*sym].arity) lx.fail("arity mismatch for '" + pred + "'");
                q.atoms.push_back(std::move(at));
            } else {
                std::string v = lx.identifier();
                if (v == "true") continue;
                int x = var(v);
                lx.expect("=");
                q.equalities.emplace_back(x, var(lx.identifier()));
            }
        } while (lx.accept(","));
        if (!lx.at_end()) lx.fail("unexpected trailing input");
        for (const auto& s : target)
            if (s.name == name) lx.fail("duplicate definition of '" + name + "'");
        target.push_back({name, q.num_free / spec.d});
        spec.queries.push_back(std::move(q));
    }
    spec.target = signature(target);
    spec.validate();
    return spec;
}

std::string render_pp_power_spec(const pp_power_spec& spec) {
    std::ostringstream os;
    os << "ppower d=" << spec.d << " from";
    for (const auto& s : spec.source) os << " " << s.name << "/" << s.arity;
    os << "\n";
    for (std::size_t r = 0; r < spec.target.size(); ++r) {
        const auto& q = spec.queries[r];
        os << "rel " << spec.target[r].name << "(";
        for (int v = 0; v < q.num_free; ++v) os << (v ? "," : "") << q.vars[v];
        os << ") :=";
        if (q.num_bound() > 0) {
            os << " exists";
            for (std::size_t v = q.num_free; v < q.vars.size(); ++v) os << " " << q.vars[v];
            os << " .";
        }
        bool first = true;
        for (const auto& a : q.atoms) {
            os << (first ? " " : ", ") << q.sig[a.symbol].name << "(";
            for (std::size_t i = 0; i < a.args.size(); ++i) os << (i ? "," : "") << q.vars[a.args[i]];
            os << ")";
            first = false;
        }
        for (auto [x, y] : q.equalities) {
            os << (first ? " " : ", ") << q.vars[x] << "=" << q.vars[y];
            first = false;
        }
        if (first) os << " true";
        os << "\n";
    }
    return os.str();
}

structure pp_power(const structure& b, const pp_power_spec& spec, std::size_t domain_cap) {
    spec.validate();
    if (!(b.sig() == spec.source)) throw signature_mismatch("pp-power: template signature differs from the spec source");
    std::size_t size = 1;
    for (int i = 0; i < spec.d; ++i) {
        size *= static_cast<std::size_t>(b.size());
        if (size > domain_cap) throw cap_exceeded("pp-power domain", size, domain_cap);
    }
    structure out(spec.target, static_cast<int>(size), b.name().empty() ? "" : b.name() + "^" + std::to_string(spec.d));
    for (std::size_t r = 0; r < spec.target.size(); ++r) {
        const auto& q = spec.queries[r];
        auto db = canonical_database(q);
        const int arity = spec.target[r].arity;
        std::vector<int> flat;
        for (const auto& h : enumerate_homomorphisms(db.db, b)) {
            for (int i = 0; i < arity; ++i) {
                int code = 0;
                for (int c = 0; c < spec.d; ++c) code = code * b.size() + h[db.element_of[i * spec.d + c]];
                flat.push_back(code);
            }
        }
        out.set_relation(r, relation::from_flat(arity, std::move(flat)));
    }
    return out;
}

structure apply_gadget_reduction(const pp_power_spec& spec, const structure& c) {
    spec.validate();
    if (!(c.sig() == spec.target)) throw signature_mismatch("gadget: instance signature differs from the spec target");
    const int d = spec.d;
    int next = c.size() * d;
    std::vector<std::vector<int>> flats(spec.source.size());
    std::vector<std::pair<int, int>> merges;
    for (std::size_t r = 0; r < spec.target.size(); ++r) {
        const auto& q = spec.queries[r];
        for (auto t : c.rel(r)) {
            std::vector<int> elem(q.vars.size());
            for (int v = 0; v < q.num_free; ++v) elem[v] = t[v / d] * d + v % d;
            for (std::size_t v = q.num_free; v < q.vars.size(); ++v) elem[v] = next++;
            for (const auto& a : q.atoms)
                for (int v : a.args) flats[a.symbol].push_back(elem[v]);
            for (auto [x, y] : q.equalities) merges.emplace_back(elem[x], elem[y]);
        }
    }
    structure raw(spec.source, next, c.name().empty() ? "" : "gadget(" + c.name() + ")");
    for (std::size_t r = 0; r < spec.source.size(); ++r)
        raw.set_relation(r, relation::from_flat(spec.source[r].arity, std::move(flats[r])));
    partition p(next);
    for (auto [x, y] : merges) p.unite(x, y);
    auto ids = p.class_ids();
    const int classes = static_cast<int>(p.class_count());
    structure out = quotient(raw, ids, classes);
    out.set_name(raw.name());
    return out;
}

} // namespace slam
