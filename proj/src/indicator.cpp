#include <omp.h>

#include <algorithm>
#include <unordered_set>

#include "power_stream.hpp"
#include "slam/error.hpp"
#include "slam/polymorph.hpp"

namespace slam {

namespace {

int configured_jobs = 0;

// Choose how many leading column choices are fixed per parallel work item.
int split_depth(const relation& r, int m) {
    int depth = 0;
    std::uint64_t items = 1;
    while (depth < m && items < 256) {
        items *= r.size();
        ++depth;
    }
    return depth;
}

} // namespace

void set_jobs(int jobs) {
    configured_jobs = jobs;
    if (jobs > 0) omp_set_num_threads(jobs);
}

int jobs() { return configured_jobs > 0 ? configured_jobs : omp_get_max_threads(); }

relation indicator_relation_image(const relation& r, int domain_size, int arity, const std::vector<int>& class_of,
                                  execution exec) {
    const int a = r.arity();
    int classes = 0;
    for (int c : class_of) classes = std::max(classes, c + 1);
    if (!checked_power(classes, a)) throw cap_exceeded("indicator relation key space", SIZE_MAX, SIZE_MAX);
    auto key_of = [&](const std::uint64_t* rows) {
        std::uint64_t key = 0;
        for (int j = 0; j < a; ++j) key = key * classes + class_of[rows[j]];
        return key;
    };
    auto collect = [&](detail::row_stream& s, int depth, std::uint64_t prefix, std::unordered_set<std::uint64_t>& out) {
        std::uint64_t last = UINT64_MAX;
        s.run(depth, prefix, [&](const std::uint64_t* rows) {
            std::uint64_t key = key_of(rows);
            if (key != last) {
                out.insert(key);
                last = key;
            }
            return true;
        });
    };

    std::unordered_set<std::uint64_t> keys;
    if (exec == execution::serial) {
        detail::row_stream s(r, domain_size, arity);
        collect(s, 0, 0, keys);
    } else {
        const int depth = split_depth(r, arity);
        const std::int64_t items = static_cast<std::int64_t>(detail::row_stream(r, domain_size, arity).prefix_count(depth));
#pragma omp parallel
        {
            std::unordered_set<std::uint64_t> local;
            detail::row_stream s(r, domain_size, arity);
#pragma omp for schedule(dynamic)
            for (std::int64_t p = 0; p < items; ++p) collect(s, depth, static_cast<std::uint64_t>(p), local);
#pragma omp critical
            keys.insert(local.begin(), local.end());
        }
    }

    std::vector<int> flat;
    flat.reserve(keys.size() * a);
    std::vector<int> t(a);
    for (auto key : keys) {
        decode_tuple(key, classes, t);
        flat.insert(flat.end(), t.begin(), t.end());
    }
    return relation::from_flat(a, std::move(flat));
}

indicator indicator_structure(const structure& b, const minor_condition& c, std::size_t cap, execution exec) {
    auto total = checked_power(b.size(), c.arity);
    if (!total || *total > cap)
        throw cap_exceeded("indicator domain " + std::to_string(b.size()) + "^" + std::to_string(c.arity),
                           total ? *total : SIZE_MAX, cap);
    partition p(*total);
    for_each_condition_pair(c, b.size(), [&](tuple_code x, tuple_code y) { p.unite(x, y); });
    indicator out;
    out.class_of = p.class_ids();
    const int classes = static_cast<int>(p.class_count());
    out.result = structure(b.sig(), classes, b.name().empty() ? "indicator" : b.name() + "_indicator");
    for (std::size_t r = 0; r < b.sig().size(); ++r)
        out.result.set_relation(r, indicator_relation_image(b.rel(r), b.size(), c.arity, out.class_of, exec));
    return out;
}

bool is_polymorphism(const operation_table& f, const structure& b) {
    if (f.domain != b.size()) return false;
    std::vector<int> image;
    for (std::size_t r = 0; r < b.sig().size(); ++r) {
        const auto& rel = b.rel(r);
        image.resize(rel.arity());
        detail::row_stream s(rel, b.size(), f.arity);
        bool ok = s.run_all([&](const std::uint64_t* rows) {
            for (int j = 0; j < rel.arity(); ++j) image[j] = f.values[rows[j]];
            return rel.contains(image);
        });
        if (!ok) return false;
    }
    return true;
}

std::optional<operation_table> find_polymorphism_satisfying(const structure& b, const minor_condition& c,
                                                            std::size_t cap) {
    auto ind = indicator_structure(b, c, cap);
    auto h = find_homomorphism(ind.result, b);
    if (!h) return std::nullopt;
    operation_table f{c.arity, b.size(), std::vector<int>(ind.class_of.size())};
    for (std::size_t code = 0; code < ind.class_of.size(); ++code) f.values[code] = (*h)[ind.class_of[code]];
    if (!is_polymorphism(f, b) || !satisfies(f, c))
        throw std::logic_error("indicator homomorphism did not yield a valid polymorphism");
    return f;
}

} // namespace slam
