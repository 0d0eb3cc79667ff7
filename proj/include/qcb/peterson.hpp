#pragma once

#include "qcb/diffop.hpp"
#include "qcb/root_system.hpp"

#include <map>
#include <sstream>
#include <tuple>

namespace qcb {

/// Formal quantum-cohomology class of a partial flag variety: terms
/// indexed by a pi_1(P) Novikov class and a minimal W/W_P coset word.
struct QHClass {
    using Key = std::pair<std::vector<Int>, std::vector<int>>;
    std::map<Key, RationalFunction> terms;

    bool is_zero() const { return terms.empty(); }

    void add(const std::vector<Int>& novikov, const std::vector<int>& word,
             const RationalFunction& c) {
        if (c.is_zero()) return;
        auto key = std::make_pair(novikov, word);
        auto it = terms.find(key);
        if (it == terms.end())
            terms.emplace(key, c);
        else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    std::string str() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [k, c] : terms) {
            if (!first) os << " + ";
            first = false;
            if (!c.is_one()) os << "(" << c.str() << ")*";
            os << "q^[";
            for (std::size_t i = 0; i < k.first.size(); ++i) {
                if (i) os << ",";
                os << k.first[i].str();
            }
            os << "]*s[";
            for (std::size_t i = 0; i < k.second.size(); ++i) {
                if (i) os << ",";
                os << k.second[i];
            }
            os << "]";
        }
        return os.str();
    }
};

/// The P-allowed condition on lambda: for every alpha in R_P^+,
/// <alpha, lambda^-> is 0 when w_lambda(alpha) < 0 and -1 when > 0.
inline bool is_p_allowed(const RootDatum& datum, const Parabolic& P, const Coweight& lam) {
    auto [lm, w] = datum.antidominant(lam);
    for (auto& alpha : P.positive_roots) {
        IntVec wa = datum.act_weight(*w, alpha);
        long long p = pairing(alpha, lm);
        if (datum.is_negative_root(wa)) {
            if (p != 0) return false;
        } else {
            if (p != -1) return false;
        }
    }
    return true;
}

/// The flag-variety Seidel image of [C_{<= lambda}]: a single quantum
/// Schubert monomial q^{lambda_P^-} sigma(w_lambda) when lambda is
/// P-allowed, zero otherwise.
inline QHClass psi_flag(const RootDatum& datum, const Parabolic& P, const Coweight& lam,
                        const Space& s) {
    QHClass out;
    if (!is_p_allowed(datum, P, lam)) return out;
    auto [lm, w] = datum.antidominant(lam);
    Pi1Quotient pi1 = pi1_parabolic(datum, P);
    auto [rep, lp] = coset_data(datum, P, *w);
    out.add(pi1.project(lm), rep->word, RationalFunction::one(s));
    return out;
}

/// dim C_lambda = -sum_{alpha in R+} <alpha, lambda^-> - |R+| + l(w_lambda).
inline long long dim_cell(const RootDatum& datum, const Coweight& lam) {
    auto [lm, w] = datum.antidominant(lam);
    long long d = 0;
    for (auto& alpha : datum.positive_roots()) d -= pairing(alpha, lm);
    d -= static_cast<long long>(datum.positive_roots().size());
    d += w->length();
    return d;
}

/// Zero-virtual-dimension identity from the flag-variety computation:
/// dim C_lambda + dim G/P + sum_{R+ \ R_P+} <alpha, lambda^-> - l_P(w_lambda).
inline long long virtual_dimension(const RootDatum& datum, const Parabolic& P,
                                   const Coweight& lam) {
    auto [lm, w] = datum.antidominant(lam);
    long long d = dim_cell(datum, lam);
    d += static_cast<long long>(P.dim_partial_flag(datum));
    for (auto& alpha : datum.positive_roots()) {
        bool in_p = std::find(P.positive_roots.begin(), P.positive_roots.end(), alpha) !=
                    P.positive_roots.end();
        if (!in_p) d += pairing(alpha, lm);
    }
    auto [rep, lp] = coset_data(datum, P, *w);
    d -= lp;
    return d;
}

struct MatterPetersonResult {
    long long n0 = 0;
    Coweight shifted_lambda;
    QHClass image;
};

/// Peterson image with matter: shift lambda by a central cocharacter rho
/// until the dual-matter bundle vanishes on the whole Weyl orbit, then
/// apply the pure-gauge formula.
inline MatterPetersonResult matter_peterson(const RootDatum& datum, const Parabolic& P,
                                            const GaugeTheory& T, const Coweight& rho,
                                            bool positive, const Coweight& lam,
                                            const Space& s) {
    if (datum.rank() != T.rank) throw InputError("root datum and theory rank mismatch");
    for (auto& alpha : datum.positive_roots())
        if (pairing(alpha, rho) != 0) throw InputError("rho is not central");
    long long min_abs = 0;
    for (std::size_t j = 0; j < T.matter.size(); ++j) {
        long long p = pairing(T.matter[j], rho);
        if (positive ? p <= 0 : p >= 0)
            throw InputError("matter weights must pair strictly " +
                             std::string(positive ? "positively" : "negatively") + " with rho");
        long long a = p < 0 ? -p : p;
        if (j == 0 || a < min_abs) min_abs = a;
    }

    GaugeTheory dual = dualize(T);
    auto vanishes = [&](const Coweight& mu) {
        for (auto& w : datum.weyl()) {
            Coweight wmu = datum.act(w, mu);
            if (d_lambda(dual, wmu) != 0) return false;
        }
        return true;
    };

    long long bound = 1;
    if (!T.matter.empty()) {
        long long worst = 0;
        for (auto& w : datum.weyl()) {
            Coweight wl = datum.act(w, lam);
            for (auto& eta : T.matter) {
                long long p = pairing(eta, wl);
                if (p < 0) p = -p;
                if (p > worst) worst = p;
            }
        }
        bound = worst / min_abs + 1;
    }

    MatterPetersonResult res;
    for (long long n = 0;; ++n) {
        Coweight mu = lam;
        for (int i = 0; i < datum.rank(); ++i) mu[i] += (positive ? -n : n) * rho[i];
        if (vanishes(mu)) {
            res.n0 = n;
            res.shifted_lambda = mu;
            break;
        }
        if (n > bound) throw Error("internal: matter_peterson termination bound exceeded");
    }
    res.image = psi_flag(datum, P, res.shifted_lambda, s);
    return res;
}

} // namespace qcb
