#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <set>

#include "slam/error.hpp"
#include "slam/polymorph.hpp"

namespace slam {

namespace {

using projection = std::vector<subset_mask>;

void require_small_domain(const structure& b, int limit) {
    if (b.size() > limit)
        throw precondition_error("set-based construction needs a domain of at most " + std::to_string(limit) +
                                 " elements");
}

projection project(std::span<const int> t) {
    projection p(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) p[j] = subset_mask{1} << t[j];
    return p;
}

// Coordinatewise projections of the nonempty subsets W of r with |W| <= max_size.
std::set<projection> projection_closure(const relation& r, int max_size) {
    std::set<projection> all;
    std::vector<projection> singles;
    for (auto t : r) singles.push_back(project(t));
    std::vector<projection> frontier;
    for (const auto& p : singles)
        if (all.insert(p).second) frontier.push_back(p);
    for (int step = 2; step <= max_size && !frontier.empty(); ++step) {
        std::vector<projection> next;
        for (const auto& p : frontier)
            for (const auto& s : singles) {
                projection u(p.size());
                for (std::size_t j = 0; j < p.size(); ++j) u[j] = p[j] | s[j];
                if (all.insert(u).second) next.push_back(std::move(u));
            }
        frontier = std::move(next);
    }
    return all;
}

} // namespace

int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<int>(r);
}

power_structure subset_power_structure(const structure& b) {
    require_small_domain(b, 16);
    const int count = (1 << b.size()) - 1;
    power_structure out;
    out.result = structure(b.sig(), count, b.name().empty() ? "power" : b.name() + "_power");
    for (int s = 1; s <= count; ++s) out.elements.push_back(static_cast<subset_mask>(s));
    for (std::size_t r = 0; r < b.sig().size(); ++r) {
        std::vector<int> flat;
        for (const auto& p : projection_closure(b.rel(r), std::numeric_limits<int>::max()))
            for (auto m : p) flat.push_back(static_cast<int>(m) - 1);
        out.result.set_relation(r, relation::from_flat(b.rel(r).arity(), std::move(flat)));
    }
    return out;
}

totally_symmetric_result totally_symmetric_check(const structure& b) {
    totally_symmetric_result out;
    out.power = subset_power_structure(b);
    out.map = find_homomorphism(out.power.result, b);
    out.holds = out.map.has_value();
    return out;
}

namespace {

void enumerate_antichains(const std::vector<subset_mask>& candidates, std::size_t from, int n,
                          std::vector<subset_mask>& current, std::vector<std::vector<subset_mask>>& out) {
    if (!current.empty()) out.push_back(current);
    if (static_cast<int>(current.size()) == n) return;
    for (std::size_t i = from; i < candidates.size(); ++i) {
        subset_mask s = candidates[i];
        bool comparable = std::any_of(current.begin(), current.end(), [&](subset_mask t) {
            return (s & t) == s || (s & t) == t;
        });
        if (comparable) continue;
        current.push_back(s);
        enumerate_antichains(candidates, i + 1, n, current, out);
        current.pop_back();
    }
}

// Whether at most n blocks from `blocks` realise the antichains `systems` coordinatewise.
bool realisable(const std::set<projection>& blocks, const std::vector<const std::vector<subset_mask>*>& systems,
                int n) {
    std::vector<std::pair<int, subset_mask>> reqs;
    for (std::size_t j = 0; j < systems.size(); ++j)
        for (auto x : *systems[j]) reqs.emplace_back(static_cast<int>(j), x);
    if (reqs.size() > 24) throw cap_exceeded("set-system requirement count", reqs.size(), 24);
    const std::uint32_t full = (std::uint32_t{1} << reqs.size()) - 1;
    std::vector<std::uint32_t> covers;
    for (const auto& p : blocks) {
        bool compatible = true;
        for (std::size_t j = 0; j < systems.size() && compatible; ++j)
            compatible = std::any_of(systems[j]->begin(), systems[j]->end(),
                                     [&](subset_mask x) { return (x & p[j]) == x; });
        if (!compatible) continue;
        std::uint32_t c = 0;
        for (std::size_t q = 0; q < reqs.size(); ++q)
            if (p[reqs[q].first] == reqs[q].second) c |= std::uint32_t{1} << q;
        if (c) covers.push_back(c);
    }
    std::sort(covers.begin(), covers.end());
    covers.erase(std::unique(covers.begin(), covers.end()), covers.end());
    std::vector<std::uint32_t> layer{0};
    std::vector<char> seen(std::size_t{full} + 1, 0);
    seen[0] = 1;
    for (int used = 1; used <= n && !layer.empty(); ++used) {
        std::vector<std::uint32_t> next;
        for (auto m : layer)
            for (auto c : covers) {
                std::uint32_t u = m | c;
                if (u == full) return true;
                if (!seen[u]) {
                    seen[u] = 1;
                    next.push_back(u);
                }
            }
        layer = std::move(next);
    }
    return false;
}

} // namespace

set_system_structure set_system_structure_of(const structure& b, int k, int n) {
    if (k < 1 || n < 1) throw precondition_error("absorptive parameters must be >= 1");
    require_small_domain(b, 16);
    std::vector<subset_mask> candidates;
    for (subset_mask s = 1; s < (subset_mask{1} << b.size()); ++s)
        if (std::popcount(s) <= k) candidates.push_back(s);
    set_system_structure out;
    std::vector<subset_mask> current;
    enumerate_antichains(candidates, 0, n, current, out.elements);
    const int count = static_cast<int>(out.elements.size());
    out.result = structure(b.sig(), count, b.name().empty() ? "setsystems" : b.name() + "_setsystems");
    for (std::size_t r = 0; r < b.sig().size(); ++r) {
        const auto& rel = b.rel(r);
        const int a = rel.arity();
        if (rel.empty()) continue;
        auto blocks = projection_closure(rel, k);
        auto tuples = checked_power(count, a);
        if (!tuples || *tuples > (std::uint64_t{1} << 26)) throw cap_exceeded("set-system tuple space", SIZE_MAX, 1u << 26);
        std::vector<int> t(a), flat;
        std::vector<const std::vector<subset_mask>*> systems(a);
        for (std::uint64_t code = 0; code < *tuples; ++code) {
            decode_tuple(code, count, t);
            for (int j = 0; j < a; ++j) systems[j] = &out.elements[t[j]];
            if (realisable(blocks, systems, n)) flat.insert(flat.end(), t.begin(), t.end());
        }
        out.result.set_relation(r, relation::from_flat(a, std::move(flat)));
    }
    return out;
}

absorptive_result absorptive_check(const structure& b, int k, int n, absorptive_strategy strategy, std::size_t cap) {
    absorptive_result out;
    if (strategy == absorptive_strategy::dense) {
        out.table = find_polymorphism_satisfying(b, minor_condition::absorptive(k, n), cap);
        out.holds = out.table.has_value();
        return out;
    }
    out.systems = set_system_structure_of(b, k, n);
    out.system_map = find_homomorphism(out.systems->result, b);
    out.holds = out.system_map.has_value();
    return out;
}

namespace {

using order = std::vector<std::vector<char>>;

std::optional<operation_table> bound_table(const order& leq, bool upper) {
    const int n = static_cast<int>(leq.size());
    operation_table t{2, n, std::vector<int>(n * n)};
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int best = -1;
            for (int u = 0; u < n; ++u) {
                bool bound = upper ? (leq[x][u] && leq[y][u]) : (leq[u][x] && leq[u][y]);
                if (!bound) continue;
                bool extremal = true;
                for (int v = 0; v < n && extremal; ++v) {
                    bool other = upper ? (leq[x][v] && leq[y][v]) : (leq[v][x] && leq[v][y]);
                    if (other) extremal = upper ? leq[u][v] : leq[v][u];
                }
                if (extremal) {
                    best = u;
                    break;
                }
            }
            if (best < 0) return std::nullopt;
            t.values[x * n + y] = best;
        }
    return t;
}

bool transitive(const order& leq) {
    const int n = static_cast<int>(leq.size());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (leq[x][y])
                for (int z = 0; z < n; ++z)
                    if (leq[y][z] && !leq[x][z]) return false;
    return true;
}

bool search_orders(const structure& b, order& leq, const std::vector<std::pair<int, int>>& pairs, std::size_t i,
                   std::optional<lattice_pair>& found) {
    if (i == pairs.size()) {
        if (!transitive(leq)) return false;
        auto join = bound_table(leq, true);
        if (!join) return false;
        auto meet = bound_table(leq, false);
        if (!meet) return false;
        if (!is_polymorphism(*join, b) || !is_polymorphism(*meet, b)) return false;
        found = lattice_pair{leq, std::move(*join), std::move(*meet)};
        return true;
    }
    auto [x, y] = pairs[i];
    for (int choice = 0; choice < 3; ++choice) {
        leq[x][y] = choice == 0;
        leq[y][x] = choice == 1;
        if (search_orders(b, leq, pairs, i + 1, found)) return true;
    }
    leq[x][y] = leq[y][x] = 0;
    return false;
}

} // namespace

std::optional<lattice_pair> lattice_polymorphisms(const structure& b) {
    const int n = b.size();
    if (n == 0 || n > 5) return std::nullopt;
    order leq(n, std::vector<char>(n, 0));
    for (int x = 0; x < n; ++x) leq[x][x] = 1;
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
    std::optional<lattice_pair> found;
    search_orders(b, leq, pairs, 0, found);
    return found;
}

} // namespace slam
