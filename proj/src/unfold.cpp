#include <queue>

#include "slam/error.hpp"
#include "slam/structure.hpp"

namespace slam {

namespace {

// Parent pointers of the incidence tree rooted at `root`.
std::vector<int> root_tree(const incidence_graph& g, int root) {
    std::vector<int> parent(g.node_count(), -2);
    std::queue<int> q;
    parent[root] = -1;
    q.push(root);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : g.adjacency[u])
            if (parent[w] == -2) {
                parent[w] = u;
                q.push(w);
            }
    }
    return parent;
}

bool has_ancestor(const std::vector<int>& parent, int node, int ancestor) {
    for (int x = parent[node]; x >= 0; x = parent[x])
        if (x == ancestor) return true;
    return false;
}

} // namespace

unfolding unfold(const structure& t, int a, int b) {
    if (!shape_of(t).tree) throw precondition_error("unfold: input is not an injective tree");
    if (a < 0 || a >= t.size() || b < 0 || b >= t.size()) throw precondition_error("unfold: element out of range");
    if (a == b) throw precondition_error("unfold: a and b must be distinct");
    auto g = make_incidence_graph(t);
    if (g.adjacency[a].size() < 2 || g.adjacency[b].size() < 2)
        throw precondition_error("unfold: a and b must not be leaves");

    const auto towards_b = root_tree(g, b);
    const auto towards_a = root_tree(g, a);

    enum class part { phi_a, phi_b, psi };
    std::vector<part> part_of(g.tuple_nodes.size());
    std::vector<char> interior(t.size(), 0);
    for (std::size_t k = 0; k < g.tuple_nodes.size(); ++k) {
        int node = t.size() + static_cast<int>(k);
        if (has_ancestor(towards_b, node, a))
            part_of[k] = part::phi_a;
        else if (has_ancestor(towards_a, node, b))
            part_of[k] = part::phi_b;
        else {
            part_of[k] = part::psi;
            for (int e : g.adjacency[node])
                if (e != a && e != b) interior[e] = 1;
        }
    }

    // Variables: the original elements outside the middle part keep their names, the
    // middle part is copied three times with suffix-tagged names.
    conjunctive_query q;
    q.sig = t.sig();
    std::vector<int> fold;
    auto add_var = [&](std::string name, int origin) {
        q.vars.push_back(std::move(name));
        fold.push_back(origin);
        return static_cast<int>(q.vars.size()) - 1;
    };
    std::vector<int> base(t.size(), -1);
    for (int e = 0; e < t.size(); ++e)
        if (!interior[e]) base[e] = add_var("v" + std::to_string(e), e);
    int a_prime = add_var("v" + std::to_string(a) + "'", a);
    int b_prime = add_var("v" + std::to_string(b) + "'", b);
    std::vector<std::vector<int>> copy(3, std::vector<int>(t.size(), -1));
    for (int c = 0; c < 3; ++c)
        for (int e = 0; e < t.size(); ++e)
            if (interior[e]) copy[c][e] = add_var("v" + std::to_string(e) + "_" + std::to_string(c + 1), e);
    q.num_free = static_cast<int>(q.vars.size());

    // copy 1 = psi(a, b'), copy 2 = psi(a', b'), copy 3 = psi(a', b)
    const int ends[3][2] = {{base[a], b_prime}, {a_prime, b_prime}, {a_prime, base[b]}};
    for (std::size_t k = 0; k < g.tuple_nodes.size(); ++k) {
        auto [r, i] = g.tuple_nodes[k];
        auto tup = t.rel(r)[i];
        if (part_of[k] != part::psi) {
            std::vector<int> args;
            for (int e : tup) args.push_back(base[e]);
            q.atoms.push_back({r, args});
            continue;
        }
        for (int c = 0; c < 3; ++c) {
            std::vector<int> args;
            for (int e : tup) {
                if (e == a)
                    args.push_back(ends[c][0]);
                else if (e == b)
                    args.push_back(ends[c][1]);
                else
                    args.push_back(copy[c][e]);
            }
            q.atoms.push_back({r, args});
        }
    }

    auto db = canonical_database(q);
    unfolding u;
    u.result = std::move(db.db);
    u.result.set_name(t.name().empty() ? "unfolding" : t.name() + "_unfolded");
    u.a = db.element_of[base[a]];
    u.b = db.element_of[base[b]];
    u.a_prime = db.element_of[a_prime];
    u.b_prime = db.element_of[b_prime];
    u.fold.assign(u.result.size(), -1);
    for (std::size_t v = 0; v < q.vars.size(); ++v) u.fold[db.element_of[v]] = fold[v];
    return u;
}

} // namespace slam
