#pragma once

#include "qcb/gauge.hpp"
#include "qcb/rational_function.hpp"

#include <random>

namespace qcb::testing {

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240711ULL);
    return gen;
}

inline long rand_int(long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return d(rng());
}

/// Random sparse polynomial: up to `max_terms` monomials of degree at most
/// `max_deg` per variable, small rational coefficients.
inline Polynomial random_polynomial(const Space& s, int max_terms = 4, int max_deg = 2,
                                    bool allow_zero = true) {
    Polynomial p(s);
    int nterms = static_cast<int>(rand_int(allow_zero ? 0 : 1, max_terms));
    for (int t = 0; t < nterms; ++t) {
        Mono m(s->var_count(), 0);
        for (auto& e : m) e = static_cast<int>(rand_int(0, max_deg));
        Rat c(rand_int(-6, 6), rand_int(1, 3));
        p += Polynomial::monomial(s, m, c);
    }
    return p;
}

inline Polynomial random_nonzero_polynomial(const Space& s, int max_terms = 4, int max_deg = 2) {
    for (int tries = 0; tries < 64; ++tries) {
        Polynomial p = random_polynomial(s, max_terms, max_deg, false);
        if (!p.is_zero()) return p;
    }
    return Polynomial::one(s);
}

inline RationalFunction random_rational_function(const Space& s) {
    return RationalFunction(random_polynomial(s, 3, 2), random_nonzero_polynomial(s, 2, 1));
}

inline Coweight random_coweight(int rank, long bound) {
    Coweight v(rank);
    for (auto& x : v) x = rand_int(-bound, bound);
    return v;
}

inline GaugeTheory random_theory(int max_rank = 3, int max_weights = 5, long entry_bound = 1) {
    int r = static_cast<int>(rand_int(1, max_rank));
    int n = static_cast<int>(rand_int(0, max_weights));
    std::vector<IntVec> matter;
    for (int j = 0; j < n; ++j) matter.push_back(random_coweight(r, entry_bound));
    return GaugeTheory(r, std::move(matter));
}

} // namespace qcb::testing
