#include <algorithm>
#include <map>

#include "canonical_util.hpp"
#include "slam/datalog.hpp"
#include "slam/error.hpp"

namespace slam {

namespace {

using mask = std::uint64_t;

const atom* find_kind(const rule& r, predicate_kind k) {
    const atom* found = nullptr;
    for (const auto& a : r.body)
        if (a.kind == k) {
            if (found) throw precondition_error("repair: rule '" + render_rule(r) + "' is not linear arc");
            found = &a;
        }
    return found;
}

// Pairs (value of `from`, value of `to`) over the tuples of the EDB atom's relation that
// respect repeated variables.
std::vector<std::pair<int, int>> edb_pairs(const structure& b, const atom& edb, const std::string& from,
                                           const std::string& to) {
    std::vector<std::pair<int, int>> out;
    for (auto t : b.rel(edb.pred)) {
        std::map<std::string, int> val;
        bool ok = true;
        for (std::size_t i = 0; i < edb.args.size() && ok; ++i) {
            auto [it, fresh] = val.emplace(edb.args[i], t[i]);
            ok = fresh || it->second == t[i];
        }
        if (!ok || !val.count(from) || !val.count(to)) continue;
        out.emplace_back(val[from], val[to]);
    }
    return out;
}

mask values_of(const structure& b, const atom& edb, const std::string& var) {
    mask m = 0;
    for (auto [x, y] : edb_pairs(b, edb, var, var)) m |= mask{1} << x;
    return m;
}

void rename(derivation_step& s, atom& a, mask q, int n) {
    a.pred = subset_predicate(q, n);
    s.fact.pred = a.pred;
}

} // namespace

derivation repair_to_symmetric(const derivation& d, const structure& b) {
    return repair_to_symmetric(d, b, canonical_program(b, fragment::slam));
}

derivation repair_to_symmetric(const derivation& d, const structure& b, const program& slam) {
    if (b.size() > 64) throw precondition_error("repair: template too large");
    if (d.steps.empty() || d.steps.back().fact.pred != goal_name)
        throw precondition_error("repair: derivation does not end in goal");
    const int n = b.size();

    std::vector<derivation_step> chain(d.steps.begin(), d.steps.end() - 1);
    derivation_step goal_step = d.steps.back();
    for (const auto& s : chain)
        if (s.used.head.kind != predicate_kind::idb)
            throw precondition_error("repair: goal occurs before the last step");

    // goal :- Pempty(x) is folded into the step that derived the empty predicate
    {
        const atom* e = find_kind(goal_step.used, predicate_kind::edb);
        const atom* i = find_kind(goal_step.used, predicate_kind::idb);
        if (!e && i) {
            if (chain.empty() || detail::parse_subset_predicate(chain.back().fact.pred, n) != mask{0})
                throw precondition_error("repair: goal rule without EDB atom must follow an empty predicate");
            derivation_step folded = chain.back();
            chain.pop_back();
            folded.used.head = {predicate_kind::goal, std::string(goal_name), {}};
            folded.fact = {std::string(goal_name), {}};
            goal_step = std::move(folded);
        }
    }

    const std::size_t len = chain.size();
    std::vector<mask> p(len, 0);
    std::vector<std::vector<std::pair<int, int>>> arrows(len);
    for (std::size_t i = 0; i < len; ++i) {
        const rule& r = chain[i].used;
        const atom* e = find_kind(r, predicate_kind::edb);
        const atom* body_idb = find_kind(r, predicate_kind::idb);
        if (!e || r.head.args.size() != 1) throw precondition_error("repair: unsupported rule '" + render_rule(r) + "'");
        if ((i == 0) != (body_idb == nullptr))
            throw precondition_error("repair: derivation is not a single chain");
        if (i == 0) {
            p[0] = values_of(b, *e, r.head.args[0]);
        } else {
            arrows[i] = edb_pairs(b, *e, body_idb->args.at(0), r.head.args[0]);
            for (auto [x, y] : arrows[i])
                if ((p[i - 1] >> x) & 1u) p[i] |= mask{1} << y;
        }
    }

    std::vector<mask> q = p;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 1; i < len; ++i)
            for (auto [x, y] : arrows[i]) {
                const bool in_x = (q[i - 1] >> x) & 1u, in_y = (q[i] >> y) & 1u;
                if (in_x && !in_y) q[i] |= mask{1} << y, changed = true;
                if (in_y && !in_x) q[i - 1] |= mask{1} << x, changed = true;
            }
    }

    derivation out;
    for (std::size_t i = 0; i < len; ++i) {
        derivation_step s = chain[i];
        rename(s, s.used.head, q[i], n);
        if (i > 0)
            for (auto& a : s.used.body)
                if (a.kind == predicate_kind::idb) a.pred = subset_predicate(q[i - 1], n);
        out.steps.push_back(std::move(s));
    }
    if (len > 0)
        for (auto& a : goal_step.used.body)
            if (a.kind == predicate_kind::idb) a.pred = subset_predicate(q[len - 1], n);
    out.steps.push_back(std::move(goal_step));

    for (std::size_t i = 0; i < out.steps.size(); ++i) {
        auto& s = out.steps[i];
        const bool last = i + 1 == out.steps.size();
        if (!rule_valid(s.used, b)) {
            if (last) throw repair_failed("repaired goal rule '" + render_rule(s.used) + "' is not valid in the template");
            throw repair_failed("repaired rule '" + render_rule(s.used) + "' is not valid in the template");
        }
        auto id = slam.find_rule(s.used);
        if (!id) throw repair_failed("repaired rule '" + render_rule(s.used) + "' is not in the canonical slam program");
        s.rule_id = static_cast<int>(*id);
    }
    return out;
}

} // namespace slam
