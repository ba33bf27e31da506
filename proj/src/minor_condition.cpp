#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "slam/error.hpp"
#include "slam/polymorph.hpp"

namespace slam {

namespace {

minor_identity ident(std::vector<int> lhs, std::vector<int> rhs) { return {std::move(lhs), std::move(rhs)}; }

} // namespace

minor_condition minor_condition::quasi_maltsev() {
    minor_condition c;
    c.kind = condition_kind::quasi_maltsev;
    c.arity = 3;
    c.vars = {"x", "y"};
    c.identities = {ident({0, 0, 1}, {1, 0, 0}), ident({1, 0, 0}, {1, 1, 1})};
    return c;
}

minor_condition minor_condition::quasi_minority() {
    minor_condition c = quasi_maltsev();
    c.kind = condition_kind::quasi_minority;
    c.identities.push_back(ident({0, 1, 0}, {1, 1, 1}));
    return c;
}

minor_condition minor_condition::quasi_majority() {
    minor_condition c;
    c.kind = condition_kind::quasi_majority;
    c.arity = 3;
    c.vars = {"x", "y"};
    c.identities = {ident({0, 0, 1}, {0, 1, 0}), ident({0, 1, 0}, {1, 0, 0}), ident({1, 0, 0}, {0, 0, 0})};
    return c;
}

minor_condition minor_condition::totally_symmetric(int n) {
    if (n < 1) throw precondition_error("totally symmetric arity must be >= 1");
    minor_condition c;
    c.kind = condition_kind::totally_symmetric;
    c.arity = n;
    c.n = n;
    return c;
}

minor_condition minor_condition::absorptive(int k, int n) {
    if (k < 1 || n < 1) throw precondition_error("absorptive parameters must be >= 1");
    minor_condition c;
    c.kind = condition_kind::absorptive;
    c.arity = k * n;
    c.k = k;
    c.n = n;
    return c;
}

minor_condition minor_condition::from_identities(int arity, std::vector<std::string> vars,
                                                 std::vector<minor_identity> identities) {
    if (arity < 1) throw precondition_error("condition arity must be >= 1");
    const int nv = static_cast<int>(vars.size());
    for (const auto& id : identities) {
        if (static_cast<int>(id.lhs.size()) != arity || static_cast<int>(id.rhs.size()) != arity)
            throw precondition_error("identity length does not match arity " + std::to_string(arity));
        for (int v : id.lhs)
            if (v < 0 || v >= nv) throw precondition_error("identity uses an undeclared variable");
        for (int v : id.rhs)
            if (v < 0 || v >= nv) throw precondition_error("identity uses an undeclared variable");
    }
    minor_condition c;
    c.kind = condition_kind::explicit_identities;
    c.arity = arity;
    c.vars = std::move(vars);
    c.identities = std::move(identities);
    return c;
}

namespace {

class condition_lexer {
public:
    explicit condition_lexer(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size()) {
            if (text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            } else {
                break;
            }
        }
    }
    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    bool accept(std::string_view s) {
        skip_space();
        if (text_.substr(pos_, s.size()) != s) return false;
        for (std::size_t i = 0; i < s.size(); ++i) advance();
        return true;
    }
    void expect(std::string_view s) {
        if (!accept(s)) fail("expected '" + std::string(s) + "'");
    }
    std::string word() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-' ||
                text_[pos_] == '\''))
            advance();
        if (start == pos_) fail("expected a word");
        return std::string(text_.substr(start, pos_ - start));
    }
    int integer() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        int v = 0;
        auto [p, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (start == pos_ || ec != std::errc{}) fail("expected an integer");
        return v;
    }
    bool accept_approx() { return accept("≈") || accept("~"); }
    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, line_, column_); }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

} // namespace

minor_condition parse_condition(std::string_view text) {
    condition_lexer lx(text);
    lx.expect("cond");
    std::string kind = lx.word();
    minor_condition c;
    if (kind == "quasi-maltsev") {
        c = minor_condition::quasi_maltsev();
    } else if (kind == "quasi-minority") {
        c = minor_condition::quasi_minority();
    } else if (kind == "quasi-majority") {
        c = minor_condition::quasi_majority();
    } else if (kind == "tsym") {
        int n = lx.integer();
        if (n < 1) lx.fail("arity must be >= 1");
        c = minor_condition::totally_symmetric(n);
    } else if (kind == "absorptive") {
        int k = lx.integer();
        int n = lx.integer();
        if (k < 1 || n < 1) lx.fail("parameters must be >= 1");
        c = minor_condition::absorptive(k, n);
    } else if (kind == "explicit") {
        lx.expect("m");
        lx.expect("=");
        int m = lx.integer();
        if (m < 1) lx.fail("arity must be >= 1");
        std::vector<std::string> vars;
        std::vector<minor_identity> ids;
        auto read_tuple = [&] {
            std::vector<int> t;
            std::string symbol;
            if (!lx.accept("(")) {
                // optional function symbol before the argument list
                symbol = lx.word();
                lx.expect("(");
            }
            if (!symbol.empty() && symbol != "f") lx.fail("only the function symbol 'f' is supported");
            do {
                std::string v = lx.word();
                auto it = std::find(vars.begin(), vars.end(), v);
                if (it == vars.end()) {
                    vars.push_back(v);
                    it = vars.end() - 1;
                }
                t.push_back(static_cast<int>(it - vars.begin()));
            } while (lx.accept(","));
            lx.expect(")");
            if (static_cast<int>(t.size()) != m) lx.fail("tuple length does not match m=" + std::to_string(m));
            return t;
        };
        while (!lx.at_end()) {
            auto prev = read_tuple();
            if (!lx.accept_approx()) lx.fail("expected '≈'");
            do {
                auto next = read_tuple();
                ids.push_back({prev, next});
                prev = std::move(next);
            } while (lx.accept_approx());
            if (!lx.accept(";")) break;
        }
        c = minor_condition::from_identities(m, std::move(vars), std::move(ids));
    } else {
        lx.fail("unknown condition '" + kind + "'");
    }
    if (!lx.at_end()) lx.fail("unexpected trailing input");
    return c;
}

std::string render_condition(const minor_condition& c) {
    switch (c.kind) {
    case condition_kind::quasi_maltsev: return "cond quasi-maltsev";
    case condition_kind::quasi_minority: return "cond quasi-minority";
    case condition_kind::quasi_majority: return "cond quasi-majority";
    case condition_kind::totally_symmetric: return "cond tsym " + std::to_string(c.n);
    case condition_kind::absorptive: return "cond absorptive " + std::to_string(c.k) + " " + std::to_string(c.n);
    case condition_kind::explicit_identities: break;
    }
    std::ostringstream os;
    os << "cond explicit m=" << c.arity;
    auto tuple = [&](const std::vector<int>& t) {
        os << "(";
        for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << c.vars[t[i]];
        os << ")";
    };
    for (std::size_t i = 0; i < c.identities.size(); ++i) {
        os << (i ? "; " : " ");
        tuple(c.identities[i].lhs);
        os << "≈";
        tuple(c.identities[i].rhs);
    }
    return os.str();
}

std::optional<std::uint64_t> checked_power(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > (std::uint64_t{1} << 62) / base) return std::nullopt;
        r *= base;
    }
    return r;
}

tuple_code encode_tuple(std::span<const int> t, int base) {
    tuple_code c = 0;
    for (int v : t) c = c * base + static_cast<tuple_code>(v);
    return c;
}

void decode_tuple(tuple_code code, int base, std::span<int> out) {
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = static_cast<int>(code % base);
        code /= base;
    }
}

namespace {

using mask = std::uint64_t;

// Writes the canonical arrangement of a family of sets into n blocks of k entries:
// distinct sets ascending, extra blocks repeat the last set, each block lists its set
// ascending and repeats its largest element.
void arrange_blocks(std::vector<mask> sets, int k, int n, std::span<int> out) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    for (int b = 0; b < n; ++b) {
        mask s = sets[std::min<std::size_t>(b, sets.size() - 1)];
        int pos = 0, last = 0;
        for (int v = 0; v < 64 && (s >> v); ++v)
            if ((s >> v) & 1u) {
                out[b * k + pos++] = v;
                last = v;
            }
        while (pos < k) out[b * k + pos++] = last;
    }
}

} // namespace

void for_each_condition_pair(const minor_condition& c, int domain_size,
                             const std::function<void(tuple_code, tuple_code)>& fn) {
    if (domain_size <= 0) return;
    const int m = c.arity;
    auto total = checked_power(domain_size, m);
    if (c.kind == condition_kind::totally_symmetric || c.kind == condition_kind::absorptive) {
        if (!total) throw cap_exceeded("condition pairs: domain^arity", SIZE_MAX, SIZE_MAX);
        if (domain_size > 64) throw precondition_error("condition pairs: domain too large for set encoding");
        const int k = c.kind == condition_kind::absorptive ? c.k : 1;
        const int n = c.kind == condition_kind::absorptive ? c.n : c.arity;
        std::vector<int> t(m), canon(m), moved(m);
        std::vector<mask> sets(n);
        for (tuple_code code = 0; code < *total; ++code) {
            decode_tuple(code, domain_size, t);
            if (c.kind == condition_kind::totally_symmetric) {
                mask s = 0;
                for (int v : t) s |= mask{1} << v;
                arrange_blocks({s}, m, 1, canon);
            } else {
                for (int b = 0; b < n; ++b) {
                    sets[b] = 0;
                    for (int j = 0; j < k; ++j) sets[b] |= mask{1} << t[b * k + j];
                }
                arrange_blocks(sets, k, n, canon);
                if (n >= 2 && (sets[1] & ~sets[0]) == 0 && sets[0] != sets[1]) {
                    moved = t;
                    std::copy(t.begin() + k, t.begin() + 2 * k, moved.begin());
                    fn(code, encode_tuple(moved, domain_size));
                }
            }
            tuple_code cc = encode_tuple(canon, domain_size);
            if (cc != code) fn(code, cc);
        }
        return;
    }
    const int nv = static_cast<int>(c.vars.size());
    auto assignments = checked_power(domain_size, nv);
    if (!assignments) throw cap_exceeded("condition pairs: variable assignments", SIZE_MAX, SIZE_MAX);
    std::vector<int> val(nv), lhs(m), rhs(m);
    for (std::uint64_t a = 0; a < *assignments; ++a) {
        decode_tuple(a, domain_size, val);
        for (const auto& id : c.identities) {
            for (int i = 0; i < m; ++i) {
                lhs[i] = val[id.lhs[i]];
                rhs[i] = val[id.rhs[i]];
            }
            fn(encode_tuple(lhs, domain_size), encode_tuple(rhs, domain_size));
        }
    }
}

std::vector<std::pair<tuple_code, tuple_code>> condition_pairs(const minor_condition& c, int domain_size) {
    std::vector<std::pair<tuple_code, tuple_code>> out;
    for_each_condition_pair(c, domain_size, [&](tuple_code a, tuple_code b) { out.emplace_back(a, b); });
    return out;
}

bool satisfies(const operation_table& f, const minor_condition& c) {
    if (f.arity != c.arity) return false;
    bool ok = true;
    for_each_condition_pair(c, f.domain, [&](tuple_code a, tuple_code b) {
        if (f.values[a] != f.values[b]) ok = false;
    });
    return ok;
}

} // namespace slam
