#pragma once

#include <random>

#include "stacky/lambdaring.hpp"
#include "stacky/scalar.hpp"

namespace stacky::testing {

inline ExactScalar Q(long long a, long long b = 1) { return ExactScalar(make_rat(a, b)); }

// Random small scalar; with rich = true it mixes in half-integer q-powers,
// roots of unity and 1/(q-1).
inline ExactScalar random_scalar(std::mt19937_64& rng, bool rich) {
    long long a = static_cast<long long>(rng() % 7) - 3;
    long long b = 1 + static_cast<long long>(rng() % 3);
    ExactScalar v = Q(a, b);
    if (!rich) return v;
    switch (rng() % 4) {
        case 0: return v * q_power(make_rat(static_cast<long long>(rng() % 5) - 2, 2));
        case 1: return v * root_of_unity(make_rat(static_cast<long long>(rng() % 6), 6));
        case 2: return v * ExactScalar::inv_q_power_minus_one(1);
        default: return v;
    }
}

// Random counting function; zero_value fixes f(0) at every level.
inline CountingFunction random_function(const MonoidPtr& m, Truncation t, std::mt19937_64& rng, long long zero_value,
                                        bool rich, int density_percent = 70) {
    Element z = m->zero();
    return CountingFunction::from(m, t, [&](const Element& x, int) {
        if (x == z) return Q(zero_value);
        if (static_cast<int>(rng() % 100) >= density_percent) return ExactScalar();
        return random_scalar(rng, rich);
    });
}

}  // namespace stacky::testing
