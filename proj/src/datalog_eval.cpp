#include <algorithm>
#include <map>
#include <set>

#include "slam/datalog.hpp"
#include "slam/error.hpp"

namespace slam {

namespace {

struct compiled_atom {
    predicate_kind kind;
    int pred; // relation index for EDBs, IDB index otherwise (goal = idb count)
    std::vector<int> vars;
};

struct compiled_rule {
    compiled_atom head;
    std::vector<compiled_atom> body;
    std::vector<std::string> var_names;
    bool has_idb_body = false;
};

struct fact_record {
    int pred;
    std::vector<int> args;
    int rule_id;
    std::vector<int> bindings;
    std::vector<int> parents; // IDB fact ids used in the body
};

class evaluator {
public:
    evaluator(const program& p, const structure& a) : p_(p), a_(a) {
        for (const auto& s : p.edb) {
            auto idx = a.sig().find(s.name);
            if (!idx || a.sig()[*idx].arity != s.arity)
                throw signature_mismatch("program EDB '" + s.name + "/" + std::to_string(s.arity) +
                                         "' is not part of the instance signature");
        }
        for (std::size_t i = 0; i < p.idb.size(); ++i) idb_index_[p.idb[i].name] = static_cast<int>(i);
        goal_ = static_cast<int>(p.idb.size());
        for (const auto& r : p.rules) rules_.push_back(compile(r));
        by_pred_.resize(p.idb.size() + 1);
    }

    evaluation run(bool stop_at_goal) {
        evaluation out;
        int goal_fact = -1;
        std::size_t round_start = 0;
        for (int round = 0;; ++round) {
            const std::size_t known = facts_.size();
            for (std::size_t ri = 0; ri < rules_.size(); ++ri) {
                const auto& cr = rules_[ri];
                if (round > 0 && !cr.has_idb_body) continue;
                matches_.clear();
                if (round == 0) {
                    match(cr, -1, 0, known, known);
                } else {
                    for (std::size_t d = 0; d < cr.body.size(); ++d)
                        if (cr.body[d].kind != predicate_kind::edb) match(cr, static_cast<int>(d), round_start, known, known);
                }
                std::sort(matches_.begin(), matches_.end());
                for (auto& [binding, parents] : matches_) {
                    std::vector<int> args;
                    for (int v : cr.head.vars) args.push_back(binding[v]);
                    int id = add_fact(cr.head.pred, std::move(args), static_cast<int>(ri), binding, parents);
                    if (id >= 0 && cr.head.pred == goal_ && goal_fact < 0) goal_fact = id;
                }
                if (stop_at_goal && goal_fact >= 0) break;
            }
            if (facts_.size() == known || (stop_at_goal && goal_fact >= 0)) break;
            round_start = known;
        }

        for (const auto& f : facts_) out.facts.push_back(to_ground(f));
        out.goal = goal_fact >= 0;
        if (out.goal) {
            // keep goal last in the reported order
            auto it = std::find_if(out.facts.begin(), out.facts.end(),
                                   [&](const ground_fact& g) { return g.pred == goal_name && g.args.empty(); });
            std::rotate(it, it + 1, out.facts.end());
            out.trace = trace(goal_fact);
        }
        return out;
    }

private:
    compiled_rule compile(const rule& r) {
        compiled_rule cr;
        std::map<std::string, int> vars;
        auto var = [&](const std::string& name) {
            auto [it, fresh] = vars.emplace(name, static_cast<int>(cr.var_names.size()));
            if (fresh) cr.var_names.push_back(name);
            return it->second;
        };
        auto conv = [&](const atom& at) {
            compiled_atom c{at.kind, 0, {}};
            if (at.kind == predicate_kind::edb) {
                c.pred = static_cast<int>(a_.sig().index_of(at.pred));
            } else if (at.kind == predicate_kind::goal) {
                c.pred = goal_;
            } else {
                auto it = idb_index_.find(at.pred);
                if (it == idb_index_.end()) throw precondition_error("undeclared IDB '" + at.pred + "'");
                c.pred = it->second;
            }
            for (const auto& v : at.args) c.vars.push_back(var(v));
            return c;
        };
        for (const auto& b : r.body) {
            cr.body.push_back(conv(b));
            if (b.kind != predicate_kind::edb) cr.has_idb_body = true;
        }
        cr.head = conv(r.head);
        return cr;
    }

    // Enumerates body matches. The atom at `delta` uses facts with ids in [lo, hi), other
    // IDB atoms use facts with ids below `all`.
    void match(const compiled_rule& cr, int delta, std::size_t lo, std::size_t hi, std::size_t all) {
        std::vector<int> order;
        if (delta >= 0) order.push_back(delta);
        for (std::size_t i = 0; i < cr.body.size(); ++i)
            if (static_cast<int>(i) != delta && cr.body[i].kind == predicate_kind::edb) order.push_back(static_cast<int>(i));
        for (std::size_t i = 0; i < cr.body.size(); ++i)
            if (static_cast<int>(i) != delta && cr.body[i].kind != predicate_kind::edb) order.push_back(static_cast<int>(i));
        std::vector<int> binding(cr.var_names.size(), -1);
        std::vector<int> parents;
        descend(cr, order, 0, delta, lo, hi, all, binding, parents);
    }

    bool unify(const std::vector<int>& vars, std::span<const int> values, std::vector<int>& binding,
               std::vector<int>& bound_here) {
        for (std::size_t i = 0; i < vars.size(); ++i) {
            int& slot = binding[vars[i]];
            if (slot < 0) {
                slot = values[i];
                bound_here.push_back(vars[i]);
            } else if (slot != values[i]) {
                return false;
            }
        }
        return true;
    }

    void descend(const compiled_rule& cr, const std::vector<int>& order, std::size_t k, int delta, std::size_t lo,
                 std::size_t hi, std::size_t all, std::vector<int>& binding, std::vector<int>& parents) {
        if (k == order.size()) {
            for (int v : cr.head.vars)
                if (binding[v] < 0) return;
            std::vector<int> ps = parents;
            std::sort(ps.begin(), ps.end());
            matches_.emplace_back(binding, std::move(ps));
            return;
        }
        const auto& at = cr.body[order[k]];
        std::vector<int> bound_here;
        auto undo = [&] {
            for (int v : bound_here) binding[v] = -1;
            bound_here.clear();
        };
        if (at.kind == predicate_kind::edb) {
            for (auto t : a_.rel(at.pred)) {
                if (unify(at.vars, t, binding, bound_here)) descend(cr, order, k + 1, delta, lo, hi, all, binding, parents);
                undo();
            }
            return;
        }
        const bool is_delta = order[k] == delta;
        const std::size_t from = is_delta ? lo : 0, to = is_delta ? hi : all;
        if (std::all_of(at.vars.begin(), at.vars.end(), [&](int v) { return binding[v] >= 0; })) {
            std::vector<int> args;
            for (int v : at.vars) args.push_back(binding[v]);
            auto it = index_.find({at.pred, args});
            if (it == index_.end()) return;
            const auto id = static_cast<std::size_t>(it->second);
            if (id < from || id >= to) return;
            parents.push_back(it->second);
            descend(cr, order, k + 1, delta, lo, hi, all, binding, parents);
            parents.pop_back();
            return;
        }
        for (int id : by_pred_[at.pred]) {
            if (static_cast<std::size_t>(id) < from) continue;
            if (static_cast<std::size_t>(id) >= to) break;
            if (unify(at.vars, facts_[id].args, binding, bound_here)) {
                parents.push_back(id);
                descend(cr, order, k + 1, delta, lo, hi, all, binding, parents);
                parents.pop_back();
            }
            undo();
        }
    }

    int add_fact(int pred, std::vector<int> args, int rule_id, const std::vector<int>& binding,
                 const std::vector<int>& parents) {
        auto key = std::make_pair(pred, args);
        if (index_.count(key)) return -1;
        int id = static_cast<int>(facts_.size());
        index_.emplace(std::move(key), id);
        facts_.push_back({pred, std::move(args), rule_id, binding, parents});
        by_pred_[pred].push_back(id);
        return id;
    }

    ground_fact to_ground(const fact_record& f) const {
        return {f.pred == goal_ ? std::string(goal_name) : p_.idb[f.pred].name, f.args};
    }

    derivation trace(int goal_fact) const {
        std::set<int> needed;
        std::vector<int> stack{goal_fact};
        while (!stack.empty()) {
            int id = stack.back();
            stack.pop_back();
            if (!needed.insert(id).second) continue;
            for (int p : facts_[id].parents) stack.push_back(p);
        }
        derivation d;
        for (int id : needed) {
            const auto& f = facts_[id];
            derivation_step s;
            s.fact = to_ground(f);
            s.rule_id = f.rule_id;
            s.used = p_.rules[f.rule_id];
            const auto& names = rules_[f.rule_id].var_names;
            for (std::size_t v = 0; v < names.size(); ++v) s.bindings.emplace_back(names[v], f.bindings[v]);
            d.steps.push_back(std::move(s));
        }
        return d;
    }

    const program& p_;
    const structure& a_;
    std::map<std::string, int> idb_index_;
    int goal_ = 0;
    std::vector<compiled_rule> rules_;
    std::vector<fact_record> facts_;
    std::map<std::pair<int, std::vector<int>>, int> index_;
    std::vector<std::vector<int>> by_pred_;
    std::vector<std::pair<std::vector<int>, std::vector<int>>> matches_;
};

} // namespace

evaluation evaluate(const program& p, const structure& a, bool stop_at_goal) {
    return evaluator(p, a).run(stop_at_goal);
}

} // namespace slam
