#include <algorithm>
#include <functional>
#include <map>

#include "canonical_util.hpp"
#include "slam/datalog.hpp"
#include "slam/error.hpp"

namespace slam {

std::string subset_predicate(const std::vector<int>& elements) {
    if (elements.empty()) return "Pempty";
    std::string s = "P{";
    for (std::size_t i = 0; i < elements.size(); ++i) s += (i ? "_" : "") + std::to_string(elements[i]);
    return s + "}";
}

std::string subset_predicate(std::uint64_t mask, int domain_size) {
    std::vector<int> e;
    for (int v = 0; v < domain_size; ++v)
        if ((mask >> v) & 1u) e.push_back(v);
    return subset_predicate(e);
}

namespace detail {

std::optional<std::uint64_t> parse_subset_predicate(std::string_view name, int domain_size) {
    if (name == "Pempty") return 0;
    if (name.size() < 3 || name.substr(0, 2) != "P{" || name.back() != '}') return std::nullopt;
    std::string_view body = name.substr(2, name.size() - 3);
    std::uint64_t mask = 0;
    int prev = -1;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t end = body.find('_', pos);
        if (end == std::string_view::npos) end = body.size();
        std::string_view num = body.substr(pos, end - pos);
        if (num.empty()) return std::nullopt;
        int v = 0;
        for (char c : num) {
            if (c < '0' || c > '9') return std::nullopt;
            v = v * 10 + (c - '0');
            if (v >= domain_size) return std::nullopt;
        }
        if (v <= prev) return std::nullopt;
        prev = v;
        mask |= std::uint64_t{1} << v;
        pos = end + 1;
    }
    return mask;
}

std::vector<std::string> variable_names(int arity) {
    static const char* small[] = {"x", "y", "z"};
    std::vector<std::string> out;
    for (int i = 0; i < arity; ++i) out.push_back(arity <= 3 ? small[i] : "x" + std::to_string(i + 1));
    return out;
}

} // namespace detail

namespace {

using mask = std::uint64_t;

// An EDB atom with a fixed pattern of repeated variables, viewed as a relation on its
// distinct variables.
struct edb_view {
    atom edb;
    std::vector<std::string> vars; // one per column of rel
    relation rel;
};

// Restricted growth strings of length n, identity pattern first.
std::vector<std::vector<int>> equality_patterns(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, 0);
    std::function<void(int, int)> rec = [&](int i, int blocks) {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (int b = 0; b <= blocks; ++b) {
            cur[i] = b;
            rec(i + 1, std::max(blocks, b + 1));
        }
    };
    rec(0, 0);
    std::reverse(out.begin(), out.end());
    return out;
}

struct builder {
    const structure& b;
    program p;
    std::map<std::string, std::size_t> idb_seen;
    std::vector<edb_view> views;

    explicit builder(const structure& s) : b(s) { p.edb = s.sig(); }

    mask full() const { return b.size() == 64 ? ~mask{0} : (mask{1} << b.size()) - 1; }

    atom edb_atom(std::size_t r) const {
        return {predicate_kind::edb, b.sig()[r].name, detail::variable_names(b.sig()[r].arity)};
    }
    atom idb_atom(mask s, const std::string& var) {
        std::string name = subset_predicate(s, b.size());
        if (!idb_seen.count(name)) {
            idb_seen.emplace(name, p.idb.size());
            p.idb.push_back({name, 1});
        }
        return {predicate_kind::idb, name, {var}};
    }
    static atom goal_atom() { return {predicate_kind::goal, std::string(goal_name), {}}; }

    void add(atom head, std::vector<atom> body) { p.rules.push_back({std::move(head), std::move(body)}); }

    // Empty relations give a goal rule; every other relation contributes one view per
    // equality pattern, patterns no tuple matches giving a goal rule as well.
    void make_views() {
        for (std::size_t r = 0; r < b.sig().size(); ++r) {
            const auto& rel = b.rel(r);
            if (rel.empty()) {
                add(goal_atom(), {edb_atom(r)});
                continue;
            }
            const int a = rel.arity();
            for (const auto& pat : equality_patterns(a)) {
                const int blocks = *std::max_element(pat.begin(), pat.end()) + 1;
                edb_view v{{predicate_kind::edb, b.sig()[r].name, {}}, detail::variable_names(blocks), relation(blocks)};
                for (int i = 0; i < a; ++i) v.edb.args.push_back(v.vars[pat[i]]);
                std::vector<int> row(blocks);
                for (auto t : rel) {
                    bool ok = true;
                    int seen = 0;
                    for (int i = 0; i < a && ok; ++i) {
                        if (pat[i] == seen) row[seen++] = t[i];
                        else ok = row[pat[i]] == t[i];
                    }
                    if (ok) v.rel.insert(row);
                }
                if (v.rel.empty()) add(goal_atom(), {v.edb});
                else views.push_back(std::move(v));
            }
        }
    }

    static mask projection(const relation& rel, int i) {
        mask m = 0;
        for (auto t : rel) m |= mask{1} << t[i];
        return m;
    }
    // {t_j : t in R, t_i in T}
    static mask image(const relation& rel, int i, int j, mask t_set) {
        mask m = 0;
        for (auto t : rel)
            if ((t_set >> t[i]) & 1u) m |= mask{1} << t[j];
        return m;
    }

    void goal_on_empty() { add(goal_atom(), {idb_atom(0, "x")}); }
};

void build_am(builder& g) {
    const mask full = g.full();
    for (const auto& v : g.views) {
        const auto& rel = v.rel;
        const int a = rel.arity();
        // Each position carries a nonempty candidate set; the full set is left implicit.
        std::vector<mask> choice(a, full);
        while (true) {
            std::vector<mask> support(a, 0);
            for (auto t : rel) {
                bool ok = true;
                for (int i = 0; i < a && ok; ++i) ok = (choice[i] >> t[i]) & 1u;
                if (!ok) continue;
                for (int j = 0; j < a; ++j) support[j] |= mask{1} << t[j];
            }
            for (int j = 0; j < a; ++j) {
                if (support[j] == choice[j]) continue;
                std::vector<atom> body{v.edb};
                for (int i = 0; i < a; ++i)
                    if (choice[i] != full) body.push_back(g.idb_atom(choice[i], v.vars[i]));
                g.add(g.idb_atom(support[j], v.vars[j]), std::move(body));
            }
            int i = a - 1;
            while (i >= 0) {
                choice[i] = choice[i] == full ? 1 : choice[i] + 1;
                if (choice[i] != full) break;
                --i;
            }
            if (i < 0) break;
        }
    }
    for (mask s = 1; s < full; ++s)
        for (mask t = s + 1; t < full; ++t) {
            mask m = s & t;
            if (m == s || m == t) continue;
            g.add(g.idb_atom(m, "x"), {g.idb_atom(s, "x"), g.idb_atom(t, "x")});
        }
}

void build_lam(builder& g) {
    const mask full = g.full();
    for (const auto& v : g.views) {
        const auto& rel = v.rel;
        const int a = rel.arity();
        for (int j = 0; j < a; ++j) {
            mask s = builder::projection(rel, j);
            if (s != full) g.add(g.idb_atom(s, v.vars[j]), {v.edb});
        }
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j) {
                const mask pj = builder::projection(rel, j);
                for (mask t = 1; t < full; ++t) {
                    mask s = builder::image(rel, i, j, t);
                    if ((pj & ~s) == 0) continue;
                    if (i == j && s == t) continue;
                    g.add(g.idb_atom(s, v.vars[j]), {v.edb, g.idb_atom(t, v.vars[i])});
                }
            }
        for (int i = 0; i < a; ++i) {
            const mask outside = full & ~builder::projection(rel, i);
            for (mask t = 1; t <= outside; ++t)
                if ((t & ~outside) == 0) g.add(g.goal_atom(), {v.edb, g.idb_atom(t, v.vars[i])});
        }
    }
}

void build_slam(builder& g) {
    const mask full = g.full();
    for (const auto& v : g.views) {
        const auto& rel = v.rel;
        const int a = rel.arity();
        for (int j = 0; j < a; ++j) {
            const mask pj = builder::projection(rel, j);
            for (mask s = pj; s <= full; ++s)
                if ((pj & ~s) == 0) g.add(g.idb_atom(s, v.vars[j]), {v.edb});
        }
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j) {
                // images of each T under the forward and backward relations
                std::vector<mask> fwd(full + 1), bwd(full + 1);
                for (mask t = 0; t <= full; ++t) {
                    fwd[t] = builder::image(rel, i, j, t);
                    bwd[t] = builder::image(rel, j, i, t);
                }
                for (mask t = 0; t <= full; ++t)
                    for (mask s = 0; s <= full; ++s) {
                        if (i == j && s == t) continue;
                        if ((fwd[t] & ~s) != 0 || (bwd[s] & ~t) != 0) continue;
                        g.add(g.idb_atom(s, v.vars[j]), {v.edb, g.idb_atom(t, v.vars[i])});
                    }
            }
        for (int i = 0; i < a; ++i) {
            const mask outside = full & ~builder::projection(rel, i);
            for (mask t = 1; t <= outside; ++t)
                if ((t & ~outside) == 0) g.add(g.goal_atom(), {v.edb, g.idb_atom(t, v.vars[i])});
        }
    }
}

} // namespace

program canonical_program(const structure& b, fragment f) {
    const int limit = f == fragment::lam ? 16 : 10;
    if (b.size() > limit)
        throw precondition_error("canonical program: domain of " + std::to_string(b.size()) +
                                 " elements exceeds the supported " + std::to_string(limit));
    builder g(b);
    g.make_views();
    switch (f) {
    case fragment::am: build_am(g); break;
    case fragment::lam: build_lam(g); break;
    case fragment::slam: build_slam(g); break;
    }
    g.goal_on_empty();
    return std::move(g.p);
}

bool rule_valid(const rule& r, const structure& b) {
    std::map<std::string, int> var_index;
    for (const auto& at : r.body)
        for (const auto& v : at.args) var_index.emplace(v, static_cast<int>(var_index.size()));
    for (const auto& v : r.head.args)
        if (!var_index.count(v)) return false;
    const int nv = static_cast<int>(var_index.size());
    auto subset_of = [&](const atom& at) {
        auto m = detail::parse_subset_predicate(at.pred, b.size());
        if (!m) throw precondition_error("rule_valid: '" + at.pred + "' does not name a subset");
        return *m;
    };
    auto holds = [&](const atom& at, const std::vector<int>& val) {
        if (at.kind == predicate_kind::goal) return false;
        if (at.kind == predicate_kind::edb) {
            std::vector<int> t;
            for (const auto& v : at.args) t.push_back(val[var_index.at(v)]);
            return b.rel(at.pred).contains(t);
        }
        if (at.args.size() != 1) throw precondition_error("rule_valid: IDB atoms must be monadic");
        return ((subset_of(at) >> val[var_index.at(at.args[0])]) & 1u) != 0;
    };
    if (b.size() == 0 && nv > 0) return true;
    std::vector<int> val(nv, 0);
    while (true) {
        bool body = std::all_of(r.body.begin(), r.body.end(), [&](const atom& at) { return holds(at, val); });
        if (body && !holds(r.head, val)) return false;
        int i = nv - 1;
        while (i >= 0 && ++val[i] == b.size()) val[i--] = 0;
        if (i < 0) break;
    }
    return true;
}

} // namespace slam
