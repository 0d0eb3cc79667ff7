#pragma once

#include "qcb/gcd.hpp"
#include "qcb/polynomial.hpp"

#include <map>
#include <string>
#include <vector>

namespace qcb {

/// Normalized ratio of polynomials: gcd(num, den) = 1, den monic under
/// graded lex, zero stored as 0/1.
class RationalFunction {
public:
    explicit RationalFunction(Space s)
        : num_(Polynomial::zero(s)), den_(Polynomial::one(s)) {}

    RationalFunction(Polynomial num, Polynomial den)
        : num_(std::move(num)), den_(std::move(den)) {
        check_same_space(num_.space(), den_.space());
        normalize();
    }

    /* implicit */ RationalFunction(const Polynomial& p)
        : num_(p), den_(Polynomial::one(p.space())) {}

    static RationalFunction zero(const Space& s) { return RationalFunction(s); }
    static RationalFunction one(const Space& s) {
        return RationalFunction(Polynomial::one(s));
    }
    static RationalFunction constant(const Space& s, const Rat& c) {
        return RationalFunction(Polynomial::constant(s, c));
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    const Space& space() const { return num_.space(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }

    RationalFunction operator-() const { return make_normalized(-num_, den_); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        check_same_space(a.space(), b.space());
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        check_same_space(a.space(), b.space());
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        check_same_space(a.space(), b.space());
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        check_same_space(a.space(), b.space());
        if (b.is_zero()) throw MathError("zero denominator");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    RationalFunction inverse() const {
        if (is_zero()) throw MathError("zero denominator");
        return RationalFunction(den_, num_);
    }

    RationalFunction pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        RationalFunction r = one(space());
        RationalFunction base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base = (e >>= 1) ? base * base : base;
        }
        return r;
    }

    bool operator==(const RationalFunction& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    std::string str() const {
        if (den_.is_one()) return num_.str();
        std::string n = num_.str();
        if (num_.terms().size() > 1) n = "(" + n + ")";
        std::string d = den_.str();
        if (den_.terms().size() > 1) d = "(" + d + ")";
        return n + "/" + d;
    }

private:
    // Trusted normalized inputs (same space, coprime, monic den).
    static RationalFunction make_normalized(Polynomial n, Polynomial d) {
        RationalFunction r(n.space());
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }

    void normalize() {
        if (den_.is_zero()) throw MathError("zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial::one(space());
            return;
        }
        if (!den_.is_one()) {
            Polynomial g = poly_gcd(num_, den_);
            if (!g.is_one()) {
                num_ = *num_.divide_exact(g);
                den_ = *den_.divide_exact(g);
            }
        }
        Rat lc = den_.leading_coeff();
        if (lc != 1) {
            Rat inv = Rat(1) / lc;
            num_ = num_ * inv;
            den_ = den_ * inv;
        }
    }

    Polynomial num_;
    Polynomial den_;

    friend RationalFunction phi_shift(const RationalFunction&, const std::vector<long long>&);
};

/// Exact evaluation / partial specialization of a polynomial, variables
/// mapped to rational functions.
inline RationalFunction substitute(const Polynomial& p,
                                   const std::map<std::size_t, RationalFunction>& assignment) {
    const Space& s = p.space();
    RationalFunction result = RationalFunction::zero(s);
    for (auto& [m, c] : p.terms()) {
        RationalFunction term = RationalFunction::constant(s, c);
        Mono rest(m.size(), 0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            auto it = assignment.find(i);
            if (it == assignment.end())
                rest[i] = m[i];
            else
                term *= it->second.pow(m[i]);
        }
        term *= RationalFunction(Polynomial::monomial(s, rest, 1));
        result += term;
    }
    return result;
}

/// Specialization of a rational function; raises when the denominator
/// vanishes identically under the assignment.
inline RationalFunction substitute(const RationalFunction& x,
                                   const std::map<std::size_t, RationalFunction>& assignment) {
    RationalFunction d = substitute(x.den(), assignment);
    if (d.is_zero())
        throw MathError("pole at specialization: denominator " + x.den().str() + " vanishes");
    return substitute(x.num(), assignment) / d;
}

/// The twisting automorphism of H_{T x C*_h}(pt): a_i -> a_i + shift_i * h.
/// Flavour and auxiliary variables are untouched.
inline Polynomial phi_shift(const Polynomial& p, const std::vector<long long>& shift) {
    const Space& s = p.space();
    if (static_cast<int>(shift.size()) != s->equiv_count())
        throw InputError("phi_shift: shift length does not match equivariant variable count");
    Polynomial result = p;
    for (std::size_t i = 0; i < shift.size(); ++i) {
        if (shift[i] == 0) continue;
        std::size_t ai = s->equiv_index(static_cast<int>(i));
        if (!result.involves(ai)) continue;
        Polynomial repl = Polynomial::variable(s, ai) +
                          Polynomial::variable(s, s->hbar_index(), Rat(shift[i]));
        result = result.substitute_var(ai, repl);
    }
    return result;
}

inline RationalFunction phi_shift(const RationalFunction& x, const std::vector<long long>& shift) {
    // A ring automorphism: coprimality survives, only re-monic the denominator.
    Polynomial n = phi_shift(x.num(), shift);
    Polynomial d = phi_shift(x.den(), shift);
    Rat lc = d.leading_coeff();
    if (lc != 1) {
        Rat inv = Rat(1) / lc;
        n = n * inv;
        d = d * inv;
    }
    return RationalFunction::make_normalized(std::move(n), std::move(d));
}

} // namespace qcb
