#include <algorithm>
#include <exception>
#include <random>

#include "slam/classify.hpp"
#include "slam/error.hpp"
#include "slam/homsolver.hpp"

namespace slam {

namespace {

std::uint64_t slot_count(const signature& sig, int size) {
    std::uint64_t slots = 0;
    for (const auto& s : sig) {
        auto c = checked_power(static_cast<std::uint64_t>(size), s.arity);
        if (!c || *c > 63) return 64;
        slots += *c;
        if (slots > 63) return 64;
    }
    return slots;
}

} // namespace

std::uint64_t instance_count(const signature& sig, int size, std::uint64_t budget) {
    if (size < 0) throw precondition_error("instance size must be non-negative");
    const std::uint64_t slots = slot_count(sig, size);
    if (slots >= 63 || (std::uint64_t{1} << slots) > budget)
        throw cap_exceeded("instance enumeration", slots >= 63 ? SIZE_MAX : std::size_t{1} << slots, budget);
    return std::uint64_t{1} << slots;
}

structure instance_at(const signature& sig, int size, std::uint64_t index) {
    structure s(sig, size);
    int bit = 0;
    for (std::size_t r = 0; r < sig.size(); ++r) {
        const int a = sig[r].arity;
        std::vector<int> t(a, 0), flat;
        if (size == 0) continue;
        while (true) {
            if ((index >> bit) & 1u) flat.insert(flat.end(), t.begin(), t.end());
            ++bit;
            int i = a - 1;
            while (i >= 0 && ++t[i] == size) t[i--] = 0;
            if (i < 0) break;
        }
        s.set_relation(r, relation::from_flat(a, std::move(flat)));
    }
    return s;
}

std::vector<structure> enumerate_instances(const signature& sig, int max_size, std::uint64_t budget) {
    std::uint64_t total = 0;
    for (int n = 0; n <= max_size; ++n) {
        total += instance_count(sig, n, budget);
        if (total > budget) throw cap_exceeded("instance enumeration", total, budget);
    }
    std::vector<structure> out;
    out.reserve(total);
    for (int n = 0; n <= max_size; ++n) {
        const std::uint64_t c = instance_count(sig, n, budget);
        for (std::uint64_t i = 0; i < c; ++i) out.push_back(instance_at(sig, n, i));
    }
    return out;
}

std::vector<instance_ref> sweep_instances(const signature& sig, int max_size,
                                          const std::function<bool(const structure&)>& test, execution exec,
                                          std::uint64_t budget, std::uint64_t* checked) {
    std::vector<instance_ref> failures;
    std::uint64_t total = 0;
    for (int n = 0; n <= max_size; ++n) {
        const std::uint64_t c = instance_count(sig, n, budget);
        total += c;
        if (exec == execution::serial) {
            for (std::uint64_t i = 0; i < c; ++i)
                if (!test(instance_at(sig, n, i))) failures.push_back({n, i});
            continue;
        }
        std::exception_ptr err;
        const auto count = static_cast<long long>(c);
#pragma omp parallel
        {
            std::vector<instance_ref> local;
#pragma omp for schedule(dynamic, 256) nowait
            for (long long i = 0; i < count; ++i) {
                try {
                    if (!test(instance_at(sig, n, static_cast<std::uint64_t>(i))))
                        local.push_back({n, static_cast<std::uint64_t>(i)});
                } catch (...) {
#pragma omp critical(slam_sweep_error)
                    if (!err) err = std::current_exception();
                }
            }
#pragma omp critical(slam_sweep_merge)
            failures.insert(failures.end(), local.begin(), local.end());
        }
        if (err) std::rethrow_exception(err);
    }
    std::sort(failures.begin(), failures.end());
    if (checked) *checked = total;
    return failures;
}

namespace {

structure named(const signature& sig, instance_ref ref) {
    structure s = instance_at(sig, ref.size, ref.index);
    s.set_name("n" + std::to_string(ref.size) + "_i" + std::to_string(ref.index));
    return s;
}

} // namespace

verification_report verify_program_solves(const program& p, const structure& b, int size_cap, std::size_t samples,
                                          std::uint64_t seed, execution exec) {
    hom_solver oracle(b);
    auto agrees = [&](const structure& a) { return evaluate(p, a, true).goal != oracle.exists(a); };
    verification_report rep;
    for (auto ref : sweep_instances(b.sig(), size_cap, agrees, exec, default_instance_budget, &rep.checked))
        rep.counterexamples.push_back(named(b.sig(), ref));
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        structure a = random_instance(b.sig(), size_cap + 1, 0.3, rng);
        ++rep.checked;
        if (!agrees(a)) {
            a.set_name("sample" + std::to_string(i));
            rep.counterexamples.push_back(std::move(a));
        }
    }
    return rep;
}

verification_report verify_duality_pair(const std::vector<structure>& obstructions, const structure& b, int size_cap,
                                        execution exec) {
    for (const auto& f : obstructions)
        if (!(f.sig() == b.sig())) throw signature_mismatch("duality pair: obstruction signature differs");
    hom_solver oracle(b);
    auto agrees = [&](const structure& a) {
        hom_solver into(a);
        bool blocked = std::any_of(obstructions.begin(), obstructions.end(),
                                   [&](const structure& f) { return into.exists(f); });
        return blocked != oracle.exists(a);
    };
    verification_report rep;
    for (auto ref : sweep_instances(b.sig(), size_cap, agrees, exec, default_instance_budget, &rep.checked))
        rep.counterexamples.push_back(named(b.sig(), ref));
    return rep;
}

} // namespace slam
