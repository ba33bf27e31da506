#include <algorithm>
#include <atomic>
#include <set>

#include "power_stream.hpp"
#include "slam/error.hpp"
#include "slam/polymorph.hpp"

namespace slam {

namespace {

struct table_constraints {
    int domain = 0;
    std::size_t entries = 0;
    // Constraints are checked once their largest entry is assigned.
    std::vector<std::vector<std::size_t>> equal_to;
    struct row_check {
        std::size_t rel;
        std::vector<std::size_t> rows;
    };
    std::vector<std::vector<row_check>> rows_at;
};

table_constraints build_constraints(const structure& b, const minor_condition& c, std::size_t entries) {
    table_constraints tc;
    tc.domain = b.size();
    tc.entries = entries;
    tc.equal_to.resize(entries);
    tc.rows_at.resize(entries);
    std::set<std::pair<tuple_code, tuple_code>> seen;
    for_each_condition_pair(c, b.size(), [&](tuple_code x, tuple_code y) {
        if (x == y) return;
        if (x < y) std::swap(x, y);
        if (seen.insert({x, y}).second) tc.equal_to[x].push_back(y);
    });
    for (std::size_t r = 0; r < b.sig().size(); ++r) {
        const auto& rel = b.rel(r);
        std::set<std::vector<std::size_t>> distinct;
        detail::row_stream s(rel, b.size(), c.arity);
        s.run_all([&](const std::uint64_t* rows) {
            distinct.insert(std::vector<std::size_t>(rows, rows + rel.arity()));
            return true;
        });
        for (auto& rows : distinct) {
            std::size_t last = *std::max_element(rows.begin(), rows.end());
            tc.rows_at[last].push_back({r, rows});
        }
    }
    return tc;
}

bool consistent_at(const table_constraints& tc, const structure& b, const std::vector<int>& values, std::size_t e,
                   std::vector<int>& image) {
    for (auto other : tc.equal_to[e])
        if (values[other] != values[e]) return false;
    for (const auto& rc : tc.rows_at[e]) {
        image.resize(rc.rows.size());
        for (std::size_t j = 0; j < rc.rows.size(); ++j) image[j] = values[rc.rows[j]];
        if (!b.rel(rc.rel).contains(image)) return false;
    }
    return true;
}

bool extend(const table_constraints& tc, const structure& b, std::vector<int>& values, std::size_t e,
            std::vector<int>& image) {
    if (e == tc.entries) return true;
    for (int v = 0; v < tc.domain; ++v) {
        values[e] = v;
        if (consistent_at(tc, b, values, e, image) && extend(tc, b, values, e + 1, image)) return true;
    }
    return false;
}

} // namespace

std::optional<operation_table> brute_force_search(const structure& b, const minor_condition& c,
                                                  std::uint64_t entry_cap, execution exec) {
    auto entries = checked_power(b.size(), c.arity);
    if (!entries || *entries > entry_cap)
        throw cap_exceeded("brute-force table size", entries ? *entries : SIZE_MAX, entry_cap);
    const auto tc = build_constraints(b, c, *entries);
    operation_table out{c.arity, b.size(), std::vector<int>(*entries, 0)};
    if (*entries == 0) return out;
    if (b.size() == 0) return std::nullopt;

    if (exec == execution::serial) {
        std::vector<int> image;
        if (!extend(tc, b, out.values, 0, image)) return std::nullopt;
        return out;
    }

    // Fix a prefix of entries per work item; the smallest successful prefix wins, which
    // is the table the serial search returns.
    std::size_t depth = 0;
    std::uint64_t items = 1;
    while (depth < tc.entries && items < 512) {
        items *= static_cast<std::uint64_t>(b.size());
        ++depth;
    }
    std::atomic<std::int64_t> best{static_cast<std::int64_t>(items)};
    std::vector<int> best_values;
#pragma omp parallel
    {
        std::vector<int> values(tc.entries, 0), image;
#pragma omp for schedule(dynamic)
        for (std::int64_t p = 0; p < static_cast<std::int64_t>(items); ++p) {
            if (p > best.load()) continue;
            std::uint64_t rest = static_cast<std::uint64_t>(p);
            for (std::size_t e = depth; e-- > 0;) {
                values[e] = static_cast<int>(rest % b.size());
                rest /= b.size();
            }
            bool ok = true;
            for (std::size_t e = 0; e < depth && ok; ++e) ok = consistent_at(tc, b, values, e, image);
            if (!ok || !extend(tc, b, values, depth, image)) continue;
#pragma omp critical
            if (p < best.load()) {
                best = p;
                best_values = values;
            }
        }
    }
    if (best_values.empty()) return std::nullopt;
    out.values = std::move(best_values);
    return out;
}

} // namespace slam
