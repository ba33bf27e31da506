#pragma once

#include <random>
#include <vector>

namespace slam {

template <class Rng>
structure random_instance(const signature& sig, int size, double density, Rng& rng) {
    structure s(sig, size);
    std::bernoulli_distribution coin(density);
    for (std::size_t r = 0; r < sig.size(); ++r) {
        const int a = sig[r].arity;
        std::vector<int> t(a, 0), flat;
        if (size == 0) continue;
        while (true) {
            if (coin(rng)) flat.insert(flat.end(), t.begin(), t.end());
            int i = a - 1;
            while (i >= 0 && ++t[i] == size) t[i--] = 0;
            if (i < 0) break;
        }
        s.set_relation(r, relation::from_flat(a, std::move(flat)));
    }
    return s;
}

} // namespace slam
