#pragma once

#include "qcb/polynomial.hpp"

#include <vector>

namespace qcb {

Polynomial poly_gcd(const Polynomial& p, const Polynomial& q);

namespace detail {

/// View of p as a univariate polynomial in variable `var`, coefficients
/// polynomials not involving `var`.  Index = exponent of `var`.
inline std::vector<Polynomial> univariate_view(const Polynomial& p, std::size_t var) {
    long d = p.degree_in(var);
    if (d < 0) return {};
    std::vector<Polynomial> out(static_cast<std::size_t>(d + 1), Polynomial::zero(p.space()));
    for (auto& [m, c] : p.terms()) {
        Mono mm = m;
        int e = mm[var];
        mm[var] = 0;
        out[e] += Polynomial::monomial(p.space(), mm, c);
    }
    return out;
}

inline Polynomial from_univariate(std::vector<Polynomial> coeffs, std::size_t var,
                                  const Space& s) {
    Polynomial p(s);
    Mono vm(s->var_count(), 0);
    vm[var] = 1;
    Polynomial v = Polynomial::monomial(s, vm, 1);
    for (std::size_t e = coeffs.size(); e-- > 0;) p = p * v + coeffs[e];
    return p;
}

/// Pseudo-remainder of A by B in `var` (up to a factor of lc(B)^k, which
/// the primitive PRS removes anyway).  Requires deg_var A >= deg_var B >= 1.
inline Polynomial pseudo_rem(const Polynomial& A, const Polynomial& B, std::size_t var) {
    const Space& s = A.space();
    std::vector<Polynomial> r = univariate_view(A, var);
    std::vector<Polynomial> b = univariate_view(B, var);
    std::size_t db = b.size() - 1;
    const Polynomial& lb = b.back();
    while (!r.empty() && r.size() - 1 >= db) {
        std::size_t dr = r.size() - 1;
        Polynomial lr = r.back();
        for (auto& c : r) c *= lb;
        for (std::size_t i = 0; i <= db; ++i) r[dr - db + i] -= lr * b[i];
        while (!r.empty() && r.back().is_zero()) r.pop_back();
    }
    return from_univariate(std::move(r), var, s);
}

/// gcd of a list of polynomials (used for contents).
inline Polynomial list_gcd(const std::vector<Polynomial>& v, const Space& s) {
    Polynomial g = Polynomial::zero(s);
    for (auto& p : v) {
        g = poly_gcd(g, p);
        if (g.is_one()) break;
    }
    if (g.is_zero()) return Polynomial::one(s);
    return g;
}

} // namespace detail

/// Greatest common divisor, canonicalized monic under graded lex.
/// Recursive content extraction in the most significant occurring
/// variable plus a primitive pseudo-remainder sequence.
inline Polynomial poly_gcd(const Polynomial& p, const Polynomial& q) {
    check_same_space(p.space(), q.space());
    const Space& s = p.space();
    if (p.is_zero()) return q.monic();
    if (q.is_zero()) return p.monic();
    if (p.is_constant() || q.is_constant()) return Polynomial::one(s);

    // Main variable: the last variable occurring in either polynomial.
    std::size_t var = 0;
    for (std::size_t i = s->var_count(); i-- > 0;) {
        if (p.involves(i) || q.involves(i)) {
            var = i;
            break;
        }
    }

    Polynomial cont_p = detail::list_gcd(detail::univariate_view(p, var), s);
    Polynomial cont_q = detail::list_gcd(detail::univariate_view(q, var), s);
    Polynomial g_cont = poly_gcd(cont_p, cont_q);

    Polynomial A = *p.divide_exact(cont_p);
    Polynomial B = *q.divide_exact(cont_q);
    if (A.degree_in(var) < B.degree_in(var)) std::swap(A, B);

    while (!B.is_zero()) {
        if (B.is_constant() || B.degree_in(var) == 0) {
            // var-free primitive part: the primitive gcd in var is trivial.
            A = Polynomial::one(s);
            break;
        }
        Polynomial R = detail::pseudo_rem(A, B, var);
        A = B;
        if (R.is_zero()) {
            B = R;
        } else {
            Polynomial cont_r = detail::list_gcd(detail::univariate_view(R, var), s);
            B = *R.divide_exact(cont_r);
        }
    }
    if (!A.is_constant()) {
        Polynomial cont_a = detail::list_gcd(detail::univariate_view(A, var), s);
        A = *A.divide_exact(cont_a);
    }
    return (g_cont * A).monic();
}

/// Divisibility with witness quotient.
inline std::optional<Polynomial> divides(const Polynomial& d, const Polynomial& p) {
    if (d.is_zero()) throw MathError("divisibility by zero polynomial");
    return p.divide_exact(d);
}

} // namespace qcb
