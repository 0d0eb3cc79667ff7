#pragma once

#include "qcb/rational_function.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

namespace qcb {

using IntVec = std::vector<long long>;
using Coweight = IntVec;

enum class HbarConvention { Classical, Shift0, Shift1 };

inline const char* convention_name(HbarConvention c) {
    switch (c) {
        case HbarConvention::Classical: return "classical";
        case HbarConvention::Shift0: return "shift0";
        case HbarConvention::Shift1: return "shift1";
    }
    return "?";
}

/// <eta, lambda> for vectors of equal length.
inline long long pairing(const IntVec& eta, const IntVec& lambda) {
    if (eta.size() != lambda.size()) throw InputError("pairing: length mismatch");
    long long s = 0;
    for (std::size_t i = 0; i < eta.size(); ++i) s += eta[i] * lambda[i];
    return s;
}

/// A gauge theory (T, N): torus rank, matter weights, and an optional
/// flavour extension recorded as integer charges per matter weight.
struct GaugeTheory {
    int rank = 0;
    int flavour_rank = 0;
    std::vector<IntVec> matter;          // each of length rank
    std::vector<IntVec> flavour_charges; // per matter weight, length flavour_rank

    GaugeTheory() = default;
    GaugeTheory(int r, std::vector<IntVec> weights, int f = 0,
                std::vector<IntVec> charges = {})
        : rank(r), flavour_rank(f), matter(std::move(weights)),
          flavour_charges(std::move(charges)) {
        validate();
    }

    void validate() const {
        if (rank < 0 || flavour_rank < 0) throw InputError("negative rank");
        for (auto& w : matter)
            if (static_cast<int>(w.size()) != rank)
                throw InputError("matter weight length does not match rank");
        if (flavour_rank > 0) {
            if (flavour_charges.size() != matter.size())
                throw InputError("flavour charges must cover every matter weight");
            for (auto& c : flavour_charges)
                if (static_cast<int>(c.size()) != flavour_rank)
                    throw InputError("flavour charge length does not match flavour rank");
        } else if (!flavour_charges.empty()) {
            throw InputError("flavour charges given without flavour rank");
        }
    }

    Space space(std::vector<std::string> aux = {}) const {
        return make_space(rank, flavour_rank, std::move(aux));
    }

    /// Pairing of matter weight j with a coweight of length rank (gauge
    /// part only) or rank + flavour_rank (hatted coweight).
    long long matter_pairing(std::size_t j, const Coweight& lambda) const {
        const IntVec& eta = matter[j];
        if (lambda.size() == eta.size()) return pairing(eta, lambda);
        if (flavour_rank > 0 &&
            lambda.size() == eta.size() + static_cast<std::size_t>(flavour_rank)) {
            long long s = pairing(eta, Coweight(lambda.begin(), lambda.begin() + rank));
            for (int k = 0; k < flavour_rank; ++k)
                s += flavour_charges[j][k] * lambda[rank + k];
            return s;
        }
        throw InputError("pairing: length mismatch");
    }

    /// The weight eta_j as a linear form in a's and m's.
    Polynomial weight_form(std::size_t j, const Space& s) const {
        Polynomial p(s);
        for (int i = 0; i < rank; ++i)
            if (matter[j][i] != 0)
                p += Polynomial::variable(s, s->equiv_index(i), Rat(matter[j][i]));
        if (flavour_rank > 0)
            for (int k = 0; k < flavour_rank; ++k)
                if (flavour_charges[j][k] != 0)
                    p += Polynomial::variable(s, s->flavour_index(k), Rat(flavour_charges[j][k]));
        return p;
    }
};

/// d_lambda = rank of the stratified quotient bundle over the fixed point:
/// sum of max(0, -<eta_j, lambda>).
inline long long d_lambda(const GaugeTheory& T, const Coweight& lambda) {
    long long d = 0;
    for (std::size_t j = 0; j < T.matter.size(); ++j) {
        long long p = T.matter_pairing(j, lambda);
        if (p < 0) d -= p;
    }
    return d;
}

/// Euler class of the fibre S_{t^lambda}: for each weight with
/// m = -<eta, lambda> > 0 it contributes a product of m linear factors,
/// with the loop-rotation offsets fixed by the convention.
inline Polynomial euler_S(const GaugeTheory& T, const Coweight& lambda, HbarConvention conv,
                          const Space& s) {
    Polynomial e = Polynomial::one(s);
    Polynomial h = Polynomial::hbar(s);
    for (std::size_t j = 0; j < T.matter.size(); ++j) {
        long long p = T.matter_pairing(j, lambda);
        if (p >= 0) continue;
        long long m = -p;
        Polynomial eta = T.weight_form(j, s);
        switch (conv) {
            case HbarConvention::Classical:
                e *= eta.pow(m);
                break;
            case HbarConvention::Shift0:
                for (long long c = 0; c < m; ++c) e *= eta - h * Rat(c);
                break;
            case HbarConvention::Shift1:
                for (long long c = 1; c <= m; ++c) e *= eta - h * Rat(c);
                break;
        }
    }
    return e;
}

inline Polynomial euler_S(const GaugeTheory& T, const Coweight& lambda,
                          HbarConvention conv = HbarConvention::Shift1) {
    return euler_S(T, lambda, conv, T.space());
}

/// No nonzero matter weight is a negative rational multiple of another
/// (flavour charges included in the comparison when present).
inline bool is_gluable(const GaugeTheory& T) {
    auto hatted = [&](std::size_t j) {
        IntVec v = T.matter[j];
        if (T.flavour_rank > 0)
            v.insert(v.end(), T.flavour_charges[j].begin(), T.flavour_charges[j].end());
        return v;
    };
    std::vector<IntVec> ws;
    for (std::size_t j = 0; j < T.matter.size(); ++j) {
        IntVec v = hatted(j);
        bool zero = std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
        if (!zero) ws.push_back(v);
    }
    for (std::size_t i = 0; i < ws.size(); ++i)
        for (std::size_t j = 0; j < ws.size(); ++j) {
            if (i == j) continue;
            // ws[i] = -k * ws[j] for rational k > 0: proportional with all
            // nonzero coordinates of opposite sign.
            const IntVec &u = ws[i], &v = ws[j];
            bool proportional = true;
            for (std::size_t a = 0; a < u.size() && proportional; ++a)
                for (std::size_t b = a + 1; b < u.size() && proportional; ++b)
                    if (u[a] * v[b] != u[b] * v[a]) proportional = false;
            if (!proportional) continue;
            bool opposite = true, support_match = true;
            for (std::size_t a = 0; a < u.size(); ++a) {
                if ((u[a] == 0) != (v[a] == 0)) support_match = false;
                if (u[a] != 0 && v[a] != 0 && (u[a] > 0) == (v[a] > 0)) opposite = false;
            }
            if (proportional && support_match && opposite) return false;
        }
    return true;
}

inline GaugeTheory dualize(const GaugeTheory& T) {
    GaugeTheory D = T;
    for (auto& w : D.matter)
        for (auto& x : w) x = -x;
    for (auto& c : D.flavour_charges)
        for (auto& x : c) x = -x;
    return D;
}

inline GaugeTheory direct_sum(const GaugeTheory& A, const GaugeTheory& B) {
    if (A.rank != B.rank || A.flavour_rank != B.flavour_rank)
        throw InputError("direct_sum: rank mismatch");
    GaugeTheory S = A;
    S.matter.insert(S.matter.end(), B.matter.begin(), B.matter.end());
    S.flavour_charges.insert(S.flavour_charges.end(), B.flavour_charges.begin(),
                             B.flavour_charges.end());
    return S;
}

/// Append the flavour charges as extra torus coordinates, producing the
/// hatted weights of rank r + f with no residual flavour.
inline GaugeTheory flavour_embed(const GaugeTheory& T) {
    GaugeTheory E;
    E.rank = T.rank + T.flavour_rank;
    E.flavour_rank = 0;
    for (std::size_t j = 0; j < T.matter.size(); ++j) {
        IntVec w = T.matter[j];
        if (T.flavour_rank > 0)
            w.insert(w.end(), T.flavour_charges[j].begin(), T.flavour_charges[j].end());
        E.matter.push_back(std::move(w));
    }
    return E;
}

/// The theory with one extra dilation flavour acting by scaling on all of N.
inline GaugeTheory dilation_flavoured(const GaugeTheory& T) {
    GaugeTheory D = T;
    D.flavour_rank = T.flavour_rank + 1;
    D.flavour_charges.clear();
    for (std::size_t j = 0; j < T.matter.size(); ++j) {
        IntVec c = T.flavour_rank > 0 ? T.flavour_charges[j] : IntVec{};
        c.push_back(1);
        D.flavour_charges.push_back(std::move(c));
    }
    return D;
}

} // namespace qcb
