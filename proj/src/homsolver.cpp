#include "slam/homsolver.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>

#include "slam/error.hpp"

namespace slam {

namespace {

using word = std::uint64_t;

void check_signatures(const structure& a, const structure& b) {
    if (a.sig() != b.sig()) throw signature_mismatch("instance and target have different signatures");
}

// Flat search state: one candidate bitset of `words` words per instance element.
class search {
public:
    search(const structure& instance, const structure& target)
        : inst_(instance), tgt_(target), n_(instance.size()), words_((target.size() + 63) / 64) {
        for (std::size_t r = 0; r < instance.sig().size(); ++r) {
            const auto& rel = instance.rel(r);
            for (std::size_t i = 0; i < rel.size(); ++i) constraints_.push_back({r, i});
        }
        by_var_.resize(n_);
        for (std::size_t c = 0; c < constraints_.size(); ++c) {
            auto t = tuple(c);
            for (std::size_t i = 0; i < t.size(); ++i)
                if (std::find(t.begin(), t.begin() + i, t[i]) == t.begin() + i) by_var_[t[i]].push_back(c);
        }
        support_.assign(static_cast<std::size_t>(instance.sig().max_arity()) * words_, 0);
        queued_.assign(constraints_.size(), 0);
    }

    std::vector<word> full_domains() const {
        std::vector<word> dom(n_ * words_, ~word{0});
        const int tail = tgt_.size() % 64;
        if (tail)
            for (int v = 0; v < n_; ++v) dom[v * words_ + words_ - 1] &= (word{1} << tail) - 1;
        return dom;
    }

    bool any_empty(const std::vector<word>& dom) const {
        for (int v = 0; v < n_; ++v)
            if (empty(dom, v)) return true;
        return false;
    }

    // Propagates to the arc-consistency fixpoint; `seed` lists the constraints to
    // start from (all when empty_seed_means_all).
    bool propagate(std::vector<word>& dom, const std::vector<std::size_t>* seed) {
        std::vector<std::size_t> work;
        if (seed) {
            work = *seed;
        } else {
            work.resize(constraints_.size());
            for (std::size_t c = 0; c < constraints_.size(); ++c) work[c] = constraints_.size() - 1 - c;
        }
        for (auto c : work) queued_[c] = 1;
        bool ok = true;
        while (!work.empty()) {
            std::size_t c = work.back();
            work.pop_back();
            queued_[c] = 0;
            if (!ok) continue;
            if (!revise(dom, c, work)) ok = false;
        }
        return ok;
    }

    void enumerate(std::vector<word> dom, const std::function<bool(const homomorphism&)>& on_solution) {
        if (any_empty(dom) || !propagate(dom, nullptr)) return;
        recurse(dom, on_solution);
    }

    int n() const { return n_; }
    std::size_t words() const { return words_; }

    bool test(const std::vector<word>& dom, int v, int value) const {
        return (dom[v * words_ + (value >> 6)] >> (value & 63)) & 1u;
    }

private:
    std::span<const int> tuple(std::size_t c) const {
        return inst_.rel(constraints_[c].first)[constraints_[c].second];
    }

    bool empty(const std::vector<word>& dom, int v) const {
        for (std::size_t w = 0; w < words_; ++w)
            if (dom[v * words_ + w]) return false;
        return true;
    }

    int count_upto2(const std::vector<word>& dom, int v) const {
        int c = 0;
        for (std::size_t w = 0; w < words_ && c < 2; ++w) c += std::popcount(dom[v * words_ + w]);
        return c;
    }

    bool revise(std::vector<word>& dom, std::size_t c, std::vector<std::size_t>& work) {
        auto t = tuple(c);
        const std::size_t r = t.size();
        const auto& rel = tgt_.rel(constraints_[c].first);
        std::fill(support_.begin(), support_.begin() + r * words_, 0);
        for (auto s : rel) {
            bool ok = true;
            for (std::size_t i = 0; i < r && ok; ++i) {
                ok = test(dom, t[i], s[i]);
                for (std::size_t j = 0; j < i && ok; ++j)
                    if (t[j] == t[i]) ok = s[j] == s[i];
            }
            if (!ok) continue;
            for (std::size_t i = 0; i < r; ++i) support_[i * words_ + (s[i] >> 6)] |= word{1} << (s[i] & 63);
        }
        for (std::size_t i = 0; i < r; ++i) {
            const int v = t[i];
            bool changed = false, nonempty = false;
            for (std::size_t w = 0; w < words_; ++w) {
                word old = dom[v * words_ + w];
                word now = old & support_[i * words_ + w];
                if (now != old) {
                    dom[v * words_ + w] = now;
                    changed = true;
                }
                nonempty |= now != 0;
            }
            if (!nonempty) return false;
            if (changed)
                for (auto d : by_var_[v])
                    if (d != c && !queued_[d]) {
                        queued_[d] = 1;
                        work.push_back(d);
                    }
        }
        return true;
    }

    bool recurse(const std::vector<word>& dom, const std::function<bool(const homomorphism&)>& on_solution) {
        int var = -1;
        for (int v = 0; v < n_; ++v)
            if (count_upto2(dom, v) > 1) {
                var = v;
                break;
            }
        if (var < 0) {
            homomorphism h(n_);
            for (int v = 0; v < n_; ++v) {
                for (std::size_t w = 0; w < words_; ++w)
                    if (dom[v * words_ + w]) {
                        h[v] = static_cast<int>(w * 64 + std::countr_zero(dom[v * words_ + w]));
                        break;
                    }
            }
            return on_solution(h);
        }
        for (int value = 0; value < tgt_.size(); ++value) {
            if (!test(dom, var, value)) continue;
            std::vector<word> next = dom;
            for (std::size_t w = 0; w < words_; ++w) next[var * words_ + w] = 0;
            next[var * words_ + (value >> 6)] = word{1} << (value & 63);
            if (!propagate(next, &by_var_[var])) continue;
            if (!recurse(next, on_solution)) return false;
        }
        return true;
    }

    const structure& inst_;
    const structure& tgt_;
    int n_;
    std::size_t words_;
    std::vector<std::pair<std::size_t, std::size_t>> constraints_;
    std::vector<std::vector<std::size_t>> by_var_;
    std::vector<word> support_;
    std::vector<char> queued_;
};

} // namespace

hom_solver::hom_solver(const structure& target) : target_(target) {}

std::optional<candidate_sets> hom_solver::arc_consistency(const structure& instance) const {
    check_signatures(instance, target_);
    search s(instance, target_);
    auto dom = s.full_domains();
    if (s.any_empty(dom) || !s.propagate(dom, nullptr)) return std::nullopt;
    candidate_sets out{target_.size(), {}};
    for (int v = 0; v < s.n(); ++v) {
        bitset b(target_.size());
        for (int x = 0; x < target_.size(); ++x)
            if (s.test(dom, v, x)) b.set(x);
        out.sets.push_back(std::move(b));
    }
    return out;
}

std::optional<homomorphism> hom_solver::find(const structure& instance) const {
    check_signatures(instance, target_);
    search s(instance, target_);
    std::optional<homomorphism> found;
    s.enumerate(s.full_domains(), [&](const homomorphism& h) {
        found = h;
        return false;
    });
    return found;
}

std::optional<homomorphism> hom_solver::find(const structure& instance, const std::vector<bitset>& initial) const {
    check_signatures(instance, target_);
    if (static_cast<int>(initial.size()) != instance.size())
        throw precondition_error("initial candidate sets must cover every instance element");
    search s(instance, target_);
    std::vector<word> dom(instance.size() * s.words(), 0);
    for (int v = 0; v < instance.size(); ++v) {
        const auto& w = initial[v].words();
        std::copy(w.begin(), w.end(), dom.begin() + v * s.words());
    }
    std::optional<homomorphism> found;
    s.enumerate(std::move(dom), [&](const homomorphism& h) {
        found = h;
        return false;
    });
    return found;
}

std::vector<homomorphism> hom_solver::enumerate(const structure& instance, std::size_t limit) const {
    check_signatures(instance, target_);
    std::vector<homomorphism> out;
    if (limit == 0) return out;
    search s(instance, target_);
    s.enumerate(s.full_domains(), [&](const homomorphism& h) {
        out.push_back(h);
        return out.size() < limit;
    });
    return out;
}

std::optional<candidate_sets> arc_consistency(const structure& a, const structure& b) {
    return hom_solver(b).arc_consistency(a);
}

std::optional<homomorphism> find_homomorphism(const structure& a, const structure& b) {
    return hom_solver(b).find(a);
}

std::vector<homomorphism> enumerate_homomorphisms(const structure& a, const structure& b, std::size_t limit) {
    return hom_solver(b).enumerate(a, limit);
}

bool hom_equivalent(const structure& a, const structure& b) {
    check_signatures(a, b);
    return find_homomorphism(a, b).has_value() && find_homomorphism(b, a).has_value();
}

bool is_homomorphism(const homomorphism& h, const structure& a, const structure& b) {
    if (a.sig() != b.sig() || static_cast<int>(h.size()) != a.size()) return false;
    for (int v : h)
        if (v < 0 || v >= b.size()) return false;
    std::vector<int> image;
    for (std::size_t r = 0; r < a.sig().size(); ++r) {
        for (auto t : a.rel(r)) {
            image.clear();
            for (int v : t) image.push_back(h[v]);
            if (!b.rel(r).contains(image)) return false;
        }
    }
    return true;
}

namespace {

std::optional<homomorphism> non_surjective_endomorphism(const structure& s) {
    hom_solver solver(s);
    for (int missing = 0; missing < s.size(); ++missing) {
        std::vector<bitset> initial(s.size(), bitset(s.size(), true));
        for (auto& b : initial) b.reset(missing);
        if (auto h = solver.find(s, initial)) return h;
    }
    return std::nullopt;
}

} // namespace

core_result core_of(const structure& b) {
    core_result out{b, std::vector<int>(b.size())};
    for (int i = 0; i < b.size(); ++i) out.retraction[i] = i;
    while (auto h = non_surjective_endomorphism(out.core)) {
        std::vector<int> image = *h;
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        std::vector<int> index(out.core.size(), -1);
        for (std::size_t i = 0; i < image.size(); ++i) index[image[i]] = static_cast<int>(i);
        out.core = induced_substructure(out.core, image);
        for (int& x : out.retraction) x = index[(*h)[x]];
    }
    out.core.set_name(b.name().empty() ? "core" : b.name() + "_core");
    return out;
}

bool is_core(const structure& b) { return !non_surjective_endomorphism(b).has_value(); }

} // namespace slam
