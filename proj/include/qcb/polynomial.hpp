#pragma once

#include "qcb/rational.hpp"
#include "qcb/varspace.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

namespace qcb {

using Mono = std::vector<int>;

inline long mono_degree(const Mono& m) {
    return std::accumulate(m.begin(), m.end(), 0L);
}

/// Graded lexicographic order over the declared variable order.
struct GrlexLess {
    bool operator()(const Mono& x, const Mono& y) const {
        long dx = mono_degree(x), dy = mono_degree(y);
        if (dx != dy) return dx < dy;
        return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    }
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// Invariant: no zero coefficients are stored; all exponent vectors have
/// arity equal to the variable count of the space.
class Polynomial {
public:
    using TermMap = std::map<Mono, Rat, GrlexLess>;

    explicit Polynomial(Space space) : space_(std::move(space)) {}

    static Polynomial zero(const Space& s) { return Polynomial(s); }

    static Polynomial constant(const Space& s, const Rat& c) {
        Polynomial p(s);
        if (c != 0) p.terms_[Mono(s->var_count(), 0)] = c;
        return p;
    }

    static Polynomial one(const Space& s) { return constant(s, 1); }

    static Polynomial variable(const Space& s, std::size_t index, const Rat& coeff = 1) {
        Polynomial p(s);
        if (index >= s->var_count()) throw InputError("variable index out of range");
        if (coeff != 0) {
            Mono m(s->var_count(), 0);
            m[index] = 1;
            p.terms_[m] = coeff;
        }
        return p;
    }

    static Polynomial hbar(const Space& s) { return variable(s, s->hbar_index()); }

    static Polynomial monomial(const Space& s, Mono m, const Rat& coeff) {
        Polynomial p(s);
        if (m.size() != s->var_count()) throw InputError("monomial arity mismatch");
        for (int e : m)
            if (e < 0) throw InputError("negative exponent in monomial");
        if (coeff != 0) p.terms_[std::move(m)] = coeff;
        return p;
    }

    const Space& space() const { return space_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && mono_degree(terms_.begin()->first) == 0);
    }

    bool is_one() const { return is_constant() && constant_value() == 1; }

    /// Value when constant (zero polynomial gives 0).
    Rat constant_value() const {
        if (terms_.empty()) return 0;
        return terms_.begin()->second;
    }

    long total_degree() const {
        if (terms_.empty()) return -1;
        return mono_degree(terms_.rbegin()->first);
    }

    long degree_in(std::size_t var) const {
        long d = -1;
        for (auto& [m, c] : terms_) d = std::max(d, static_cast<long>(m[var]));
        return d;
    }

    bool involves(std::size_t var) const {
        for (auto& [m, c] : terms_)
            if (m[var] > 0) return true;
        return false;
    }

    const Mono& leading_mono() const {
        if (terms_.empty()) throw Error("leading term of zero polynomial");
        return terms_.rbegin()->first;
    }

    const Rat& leading_coeff() const {
        if (terms_.empty()) throw Error("leading term of zero polynomial");
        return terms_.rbegin()->second;
    }

    Polynomial operator-() const {
        Polynomial r(space_);
        for (auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_same_space(space_, o.space_);
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        check_same_space(space_, o.space_);
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        check_same_space(a.space_, b.space_);
        Polynomial r(a.space_);
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) {
                Mono m(ma.size());
                for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        return r;
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend Polynomial operator*(const Polynomial& a, const Rat& c) {
        Polynomial r(a.space_);
        if (c != 0)
            for (auto& [m, k] : a.terms_) r.terms_[m] = k * c;
        return r;
    }
    friend Polynomial operator*(const Rat& c, const Polynomial& a) { return a * c; }

    Polynomial pow(long e) const {
        if (e < 0) throw InputError("negative power of a polynomial");
        Polynomial r = one(space_);
        Polynomial base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base = (e >>= 1) ? base * base : base;
        }
        return r;
    }

    bool operator==(const Polynomial& o) const {
        return *space_ == *o.space_ && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    /// Exact quotient by d, or nullopt when d does not divide this.
    std::optional<Polynomial> divide_exact(const Polynomial& d) const {
        check_same_space(space_, d.space_);
        if (d.is_zero()) throw MathError("division by zero polynomial");
        Polynomial q(space_), r = *this;
        const Mono& dl = d.leading_mono();
        const Rat& dc = d.leading_coeff();
        while (!r.is_zero()) {
            const Mono& rl = r.leading_mono();
            Mono t(rl.size());
            for (std::size_t i = 0; i < t.size(); ++i) {
                t[i] = rl[i] - dl[i];
                if (t[i] < 0) return std::nullopt;
            }
            Rat c = r.leading_coeff() / dc;
            Polynomial piece = monomial(space_, t, c);
            q += piece;
            r -= piece * d;
        }
        return q;
    }

    /// Monic under the graded-lex order (zero stays zero).
    Polynomial monic() const {
        if (is_zero()) return *this;
        return *this * (Rat(1) / leading_coeff());
    }

    Polynomial derivative(std::size_t var) const {
        Polynomial r(space_);
        for (auto& [m, c] : terms_) {
            if (m[var] == 0) continue;
            Mono mm = m;
            mm[var] -= 1;
            r.add_term(mm, c * m[var]);
        }
        return r;
    }

    /// Substitute variable `var` by a polynomial (e.g. a_i -> a_i + n*h).
    Polynomial substitute_var(std::size_t var, const Polynomial& repl) const {
        check_same_space(space_, repl.space_);
        // Group by exponent of `var`, then Horner in repl.
        std::map<int, Polynomial> by_exp;
        for (auto& [m, c] : terms_) {
            Mono mm = m;
            int e = mm[var];
            mm[var] = 0;
            auto it = by_exp.find(e);
            if (it == by_exp.end()) it = by_exp.emplace(e, Polynomial(space_)).first;
            it->second.add_term(mm, c);
        }
        Polynomial result(space_);
        int prev = -1;
        Polynomial acc(space_);
        for (auto it = by_exp.rbegin(); it != by_exp.rend(); ++it) {
            if (prev < 0)
                acc = it->second;
            else {
                for (int k = 0; k < prev - it->first; ++k) acc *= repl;
                acc += it->second;
            }
            prev = it->first;
        }
        if (prev < 0) return result;
        for (int k = 0; k < prev; ++k) acc *= repl;
        return acc;
    }

    /// Linear change of the equivariant variables: a_i -> sum_j M[i][j] a_j.
    Polynomial substitute_equiv_linear(const std::vector<std::vector<long long>>& M) const {
        int r = space_->equiv_count();
        if (static_cast<int>(M.size()) != r) throw InputError("substitution matrix rank mismatch");
        std::vector<Polynomial> images;
        for (int i = 0; i < r; ++i) {
            Polynomial li(space_);
            for (int j = 0; j < r; ++j)
                if (M[i][j] != 0)
                    li += variable(space_, space_->equiv_index(j), Rat(M[i][j]));
            images.push_back(li);
        }
        Polynomial result(space_);
        for (auto& [m, c] : terms_) {
            Polynomial t = constant(space_, c);
            Mono rest = m;
            for (int i = 0; i < r; ++i) {
                for (int k = 0; k < m[space_->equiv_index(i)]; ++k) t *= images[i];
                rest[space_->equiv_index(i)] = 0;
            }
            t *= monomial(space_, rest, 1);
            result += t;
        }
        return result;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // Highest terms first.
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            Rat a = c;
            if (first) {
                if (a < 0) {
                    os << "-";
                    a = -a;
                }
            } else {
                os << (a < 0 ? "-" : "+");
                if (a < 0) a = -a;
            }
            first = false;
            bool has_vars = mono_degree(m) > 0;
            if (a != 1 || !has_vars) {
                os << to_string(a);
                if (has_vars) os << "*";
            }
            bool firstv = true;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                if (!firstv) os << "*";
                firstv = false;
                os << space_->name(i);
                if (m[i] > 1) os << "^" << m[i];
            }
        }
        return os.str();
    }

private:
    void add_term(const Mono& m, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Space space_;
    TermMap terms_;
};

} // namespace qcb
