#include "slam/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "slam/error.hpp"

namespace slam {

signature::signature(std::initializer_list<relation_symbol> symbols)
    : signature(std::vector<relation_symbol>(symbols)) {}

signature::signature(std::vector<relation_symbol> symbols) : symbols_(std::move(symbols)) {
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.arity < 1) throw precondition_error("relation symbol '" + s.name + "' must have arity >= 1");
        if (!seen.insert(s.name).second) throw precondition_error("duplicate relation symbol '" + s.name + "'");
    }
}

std::optional<std::size_t> signature::find(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return i;
    return std::nullopt;
}

std::size_t signature::index_of(std::string_view name) const {
    auto i = find(name);
    if (!i) throw precondition_error("unknown relation symbol '" + std::string(name) + "'");
    return *i;
}

int signature::max_arity() const {
    int m = 0;
    for (const auto& s : symbols_) m = std::max(m, s.arity);
    return m;
}

relation relation::from_flat(int arity, std::vector<int> flat) {
    relation r(arity);
    const std::size_t n = flat.size() / arity;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto tuple_less = [&](std::size_t x, std::size_t y) {
        return std::lexicographical_compare(flat.begin() + x * arity, flat.begin() + (x + 1) * arity,
                                            flat.begin() + y * arity, flat.begin() + (y + 1) * arity);
    };
    std::sort(order.begin(), order.end(), tuple_less);
    r.data_.reserve(flat.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && !tuple_less(order[k - 1], order[k])) continue;
        r.data_.insert(r.data_.end(), flat.begin() + order[k] * arity, flat.begin() + (order[k] + 1) * arity);
    }
    return r;
}

std::size_t relation::lower_bound(std::span<const int> t) const {
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        auto m = (*this)[mid];
        if (std::lexicographical_compare(m.begin(), m.end(), t.begin(), t.end()))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

bool relation::contains(std::span<const int> t) const {
    std::size_t i = lower_bound(t);
    if (i == size()) return false;
    auto m = (*this)[i];
    return std::equal(m.begin(), m.end(), t.begin(), t.end());
}

bool relation::insert(std::span<const int> t) {
    std::size_t i = lower_bound(t);
    if (i < size()) {
        auto m = (*this)[i];
        if (std::equal(m.begin(), m.end(), t.begin(), t.end())) return false;
    }
    data_.insert(data_.begin() + i * arity_, t.begin(), t.end());
    return true;
}

structure::structure(signature sig, int size, std::string name)
    : sig_(std::move(sig)), size_(size), name_(std::move(name)) {
    if (size < 0) throw precondition_error("structure size must be non-negative");
    rels_.reserve(sig_.size());
    for (const auto& s : sig_) rels_.emplace_back(s.arity);
}

void structure::check_tuple(std::size_t rel, std::span<const int> t) const {
    if (rel >= rels_.size()) throw precondition_error("relation index out of range");
    if (static_cast<int>(t.size()) != sig_[rel].arity)
        throw precondition_error("tuple length does not match arity of '" + sig_[rel].name + "'");
    for (int v : t)
        if (v < 0 || v >= size_)
            throw precondition_error("tuple entry " + std::to_string(v) + " outside domain of size " +
                                     std::to_string(size_));
}

void structure::add_tuple(std::size_t rel, std::span<const int> t) {
    check_tuple(rel, t);
    rels_[rel].insert(t);
}

void structure::set_relation(std::size_t rel, relation r) {
    if (rel >= rels_.size()) throw precondition_error("relation index out of range");
    if (r.arity() != sig_[rel].arity) throw precondition_error("relation arity mismatch");
    for (int v : r.flat())
        if (v < 0 || v >= size_) throw precondition_error("relation entry outside domain");
    rels_[rel] = std::move(r);
}

std::size_t structure::tuple_count() const {
    std::size_t n = 0;
    for (const auto& r : rels_) n += r.size();
    return n;
}

structure disjoint_union(const structure& a, const structure& b) {
    if (a.sig() != b.sig()) throw signature_mismatch("disjoint union of structures with different signatures");
    structure u(a.sig(), a.size() + b.size());
    for (std::size_t r = 0; r < a.sig().size(); ++r) {
        std::vector<int> flat = a.rel(r).flat();
        for (int v : b.rel(r).flat()) flat.push_back(v + a.size());
        u.set_relation(r, relation::from_flat(a.sig()[r].arity, std::move(flat)));
    }
    return u;
}

structure induced_substructure(const structure& s, const std::vector<int>& elements) {
    std::vector<int> index(s.size(), -1);
    for (std::size_t i = 0; i < elements.size(); ++i) index[elements[i]] = static_cast<int>(i);
    structure out(s.sig(), static_cast<int>(elements.size()), s.name());
    for (std::size_t r = 0; r < s.sig().size(); ++r) {
        std::vector<int> flat;
        for (auto t : s.rel(r)) {
            bool inside = std::all_of(t.begin(), t.end(), [&](int v) { return index[v] >= 0; });
            if (!inside) continue;
            for (int v : t) flat.push_back(index[v]);
        }
        out.set_relation(r, relation::from_flat(s.sig()[r].arity, std::move(flat)));
    }
    return out;
}

structure image_structure(const structure& s, const std::vector<int>& map, int target_size) {
    structure out(s.sig(), target_size);
    for (std::size_t r = 0; r < s.sig().size(); ++r) {
        std::vector<int> flat;
        flat.reserve(s.rel(r).flat().size());
        for (int v : s.rel(r).flat()) flat.push_back(map[v]);
        out.set_relation(r, relation::from_flat(s.sig()[r].arity, std::move(flat)));
    }
    return out;
}

partition::partition(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

std::size_t partition::find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
        std::size_t next = parent_[x];
        parent_[x] = root;
        x = next;
    }
    return root;
}

bool partition::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
}

std::vector<int> partition::class_ids() {
    std::vector<int> ids(parent_.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
        std::size_t r = find(i);
        if (ids[r] < 0) ids[r] = next++;
        ids[i] = ids[r];
    }
    return ids;
}

std::size_t partition::class_count() {
    std::size_t c = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i)
        if (find(i) == i) ++c;
    return c;
}

structure quotient(const structure& s, const std::vector<int>& class_of, int class_count) {
    return image_structure(s, class_of, class_count);
}

int conjunctive_query::var_index(std::string_view name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return static_cast<int>(i);
    return -1;
}

void conjunctive_query::validate() const {
    if (num_free < 0 || num_free > static_cast<int>(vars.size()))
        throw precondition_error("conjunctive query: bad free-variable count");
    std::set<std::string> names(vars.begin(), vars.end());
    if (names.size() != vars.size()) throw precondition_error("conjunctive query: duplicate variable name");
    const int nv = static_cast<int>(vars.size());
    for (const auto& a : atoms) {
        if (a.symbol >= sig.size()) throw precondition_error("conjunctive query: unknown symbol");
        if (static_cast<int>(a.args.size()) != sig[a.symbol].arity)
            throw precondition_error("conjunctive query: atom arity mismatch for '" + sig[a.symbol].name + "'");
        for (int v : a.args)
            if (v < 0 || v >= nv) throw precondition_error("conjunctive query: undeclared variable");
    }
    for (auto [x, y] : equalities)
        if (x < 0 || x >= nv || y < 0 || y >= nv) throw precondition_error("conjunctive query: undeclared variable");
}

canonical_db canonical_database(const conjunctive_query& q) {
    q.validate();
    partition p(q.vars.size());
    for (auto [x, y] : q.equalities) p.unite(x, y);
    std::vector<int> ids = p.class_ids();
    int n = 0;
    for (int id : ids) n = std::max(n, id + 1);
    canonical_db out{structure(q.sig, n), ids};
    std::vector<std::vector<int>> flats(q.sig.size());
    for (const auto& a : q.atoms)
        for (int v : a.args) flats[a.symbol].push_back(ids[v]);
    for (std::size_t r = 0; r < q.sig.size(); ++r)
        out.db.set_relation(r, relation::from_flat(q.sig[r].arity, std::move(flats[r])));
    return out;
}

conjunctive_query canonical_query(const structure& s) {
    conjunctive_query q;
    q.sig = s.sig();
    q.num_free = s.size();
    for (int i = 0; i < s.size(); ++i) q.vars.push_back("v" + std::to_string(i));
    for (std::size_t r = 0; r < s.sig().size(); ++r)
        for (auto t : s.rel(r)) q.atoms.push_back({r, std::vector<int>(t.begin(), t.end())});
    return q;
}

std::size_t incidence_graph::edge_count() const {
    std::size_t e = 0;
    for (int v = 0; v < num_elements; ++v) e += adjacency[v].size();
    return e;
}

incidence_graph make_incidence_graph(const structure& s) {
    incidence_graph g;
    g.num_elements = s.size();
    g.adjacency.resize(s.size());
    for (std::size_t r = 0; r < s.sig().size(); ++r) {
        for (std::size_t i = 0; i < s.rel(r).size(); ++i) {
            int node = static_cast<int>(g.adjacency.size());
            g.tuple_nodes.emplace_back(r, i);
            auto t = s.rel(r)[i];
            std::vector<int> members(t.begin(), t.end());
            std::sort(members.begin(), members.end());
            members.erase(std::unique(members.begin(), members.end()), members.end());
            g.adjacency.push_back(members);
            for (int v : members) g.adjacency[v].push_back(node);
        }
    }
    return g;
}

} // namespace slam
