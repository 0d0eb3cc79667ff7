#pragma once

#include "qcb/gauge.hpp"
#include "qcb/root_system.hpp"

#include <map>
#include <memory>
#include <sstream>
#include <utility>
#include <vector>

namespace qcb {

/// Element of the localized twisted group algebra C(t)(h)[T^]: a finite
/// sum of rational-function coefficients against cocharacter monomials
/// t^lambda.  Coweight keys have length equal to the gauge rank.
class DiffOp {
public:
    using TermMap = std::map<Coweight, RationalFunction>;

    DiffOp(std::shared_ptr<const GaugeTheory> theory, Space space)
        : theory_(std::move(theory)), space_(std::move(space)) {}

    explicit DiffOp(std::shared_ptr<const GaugeTheory> theory)
        : theory_(theory), space_(theory->space()) {}

    static DiffOp zero(std::shared_ptr<const GaugeTheory> t, Space s) {
        return DiffOp(std::move(t), std::move(s));
    }

    static DiffOp term(std::shared_ptr<const GaugeTheory> t, Space s, Coweight lam,
                       RationalFunction coeff) {
        DiffOp d(std::move(t), std::move(s));
        d.add(lam, std::move(coeff));
        return d;
    }

    static DiffOp t_power(std::shared_ptr<const GaugeTheory> t, Space s, Coweight lam) {
        RationalFunction one = RationalFunction::one(s);
        return term(std::move(t), std::move(s), std::move(lam), std::move(one));
    }

    const TermMap& terms() const { return terms_; }
    const GaugeTheory& theory() const { return *theory_; }
    std::shared_ptr<const GaugeTheory> theory_ptr() const { return theory_; }
    const Space& space() const { return space_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Coweight& lam, const RationalFunction& coeff) {
        if (static_cast<int>(lam.size()) != theory_->rank)
            throw InputError("coweight length does not match theory rank");
        check_same_space(space_, coeff.space());
        if (coeff.is_zero()) return;
        auto [it, inserted] = terms_.emplace(lam, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    DiffOp operator-() const {
        DiffOp r(theory_, space_);
        for (auto& [l, c] : terms_) r.terms_.emplace(l, -c);
        return r;
    }

    friend DiffOp operator+(DiffOp a, const DiffOp& b) {
        a.check_compatible(b);
        for (auto& [l, c] : b.terms_) a.add(l, c);
        return a;
    }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) {
        a.check_compatible(b);
        for (auto& [l, c] : b.terms_) a.add(l, -c);
        return a;
    }

    friend DiffOp operator*(const DiffOp& a, const RationalFunction& s) {
        DiffOp r(a.theory_, a.space_);
        for (auto& [l, c] : a.terms_) r.add(l, c * s);
        return r;
    }
    friend DiffOp operator*(const RationalFunction& s, const DiffOp& a) { return a * s; }

    bool operator==(const DiffOp& o) const {
        return terms_ == o.terms_;
    }
    bool operator!=(const DiffOp& o) const { return !(*this == o); }

    void check_compatible(const DiffOp& o) const {
        if (theory_->rank != o.theory_->rank || theory_->matter != o.theory_->matter ||
            theory_->flavour_charges != o.theory_->flavour_charges)
            throw InputError("theory mismatch");
        check_same_space(space_, o.space_);
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [l, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            bool is_z0 = true;
            for (long long x : l)
                if (x != 0) is_z0 = false;
            std::string cs = c.str();
            if (is_z0) {
                os << cs;
                continue;
            }
            if (c.is_one()) {
                // bare monomial
            } else if (c.num().terms().size() > 1 || !c.is_polynomial()) {
                os << "(" << cs << ")*";
            } else {
                os << cs << "*";
            }
            os << "z[";
            for (std::size_t i = 0; i < l.size(); ++i) {
                if (i) os << ",";
                os << l[i];
            }
            os << "]";
        }
        return os.str();
    }

private:
    std::shared_ptr<const GaugeTheory> theory_;
    Space space_;
    TermMap terms_;
};

/// Bilinear extension of (c t^lambda)(c' t^mu) = c Phi_lambda(c') t^{lambda+mu}.
inline DiffOp twisted_product(const DiffOp& x, const DiffOp& y) {
    x.check_compatible(y);
    DiffOp r(x.theory_ptr(), x.space());
    for (auto& [l, c] : x.terms())
        for (auto& [m, d] : y.terms()) {
            Coweight s(l.size());
            for (std::size_t i = 0; i < s.size(); ++i) s[i] = l[i] + m[i];
            r.add(s, c * phi_shift(d, l));
        }
    return r;
}

inline DiffOp power(const DiffOp& x, long e) {
    if (e < 0) throw InputError("negative power of a general algebra element");
    DiffOp r = DiffOp::t_power(x.theory_ptr(), x.space(), Coweight(x.theory().rank, 0));
    for (long k = 0; k < e; ++k) r = twisted_product(r, x);
    return r;
}

/// The basis element e(S_{t^lambda}) t^lambda.
inline DiffOp basis_element(const std::shared_ptr<const GaugeTheory>& T, const Space& s,
                            const Coweight& lam, HbarConvention conv) {
    return DiffOp::term(T, s, lam, RationalFunction(euler_S(*T, lam, conv, s)));
}

struct MembershipResult {
    bool member = true;
    // lambda -> quotient with coefficient = quotient * euler_S(lambda).
    std::map<Coweight, Polynomial> witness;
    std::vector<Coweight> failures;
};

/// Basis/membership criterion: every coefficient is a polynomial divisible
/// by the matter Euler class of its cocharacter.
inline MembershipResult membership(const DiffOp& x, HbarConvention conv) {
    MembershipResult res;
    for (auto& [lam, c] : x.terms()) {
        if (!c.is_polynomial()) {
            res.member = false;
            res.failures.push_back(lam);
            continue;
        }
        Polynomial e = euler_S(x.theory(), lam, conv, x.space());
        auto q = divides(e, c.num());
        if (!q) {
            res.member = false;
            res.failures.push_back(lam);
        } else {
            res.witness.emplace(lam, std::move(*q));
        }
    }
    return res;
}

/// Formal sum of pure tensors over H_{T x C*_h}(pt), scalars moved to the
/// left factor: canonical form is a map (lambda, mu) -> coefficient.
using TensorDiffOp = std::map<std::pair<Coweight, Coweight>, RationalFunction>;

/// Delta(c t^lambda) = (c t^lambda) (x) t^lambda, extended linearly.
inline TensorDiffOp coproduct(const DiffOp& x) {
    TensorDiffOp t;
    for (auto& [lam, c] : x.terms())
        if (!c.is_zero()) t.emplace(std::make_pair(lam, lam), c);
    return t;
}

struct CoproductFactors {
    bool compatible = false; // both factors land in the factor algebras
    std::vector<std::tuple<DiffOp, DiffOp>> pairs;
};

/// Re-expression of Delta(x) for x in A_{T, N1 (+) N2}: each term becomes
/// (p_lambda e^{N1}(lambda) t^lambda) (x) (e^{N2}(lambda) t^lambda).
/// The split takes the first n1 matter weights as N1.
inline CoproductFactors coproduct_factors(const DiffOp& x, std::size_t n1, HbarConvention conv) {
    const GaugeTheory& T = x.theory();
    if (n1 > T.matter.size()) throw InputError("split mismatch: N1 larger than matter");
    auto T1 = std::make_shared<const GaugeTheory>(
        T.rank, std::vector<IntVec>(T.matter.begin(), T.matter.begin() + n1), T.flavour_rank,
        T.flavour_rank
            ? std::vector<IntVec>(T.flavour_charges.begin(), T.flavour_charges.begin() + n1)
            : std::vector<IntVec>{});
    auto T2 = std::make_shared<const GaugeTheory>(
        T.rank, std::vector<IntVec>(T.matter.begin() + n1, T.matter.end()), T.flavour_rank,
        T.flavour_rank
            ? std::vector<IntVec>(T.flavour_charges.begin() + n1, T.flavour_charges.end())
            : std::vector<IntVec>{});

    CoproductFactors out;
    MembershipResult mem = membership(x, conv);
    if (!mem.member) return out;
    out.compatible = true;
    for (auto& [lam, q] : mem.witness) {
        Polynomial e1 = euler_S(*T1, lam, conv, x.space());
        Polynomial e2 = euler_S(*T2, lam, conv, x.space());
        DiffOp left = DiffOp::term(T1, x.space(), lam, RationalFunction(q * e1));
        DiffOp right = DiffOp::term(T2, x.space(), lam, RationalFunction(e2));
        if (!membership(left, conv).member || !membership(right, conv).member) {
            out.compatible = false;
        }
        out.pairs.emplace_back(std::move(left), std::move(right));
    }
    return out;
}

/// Canonical balanced-tensor form of a list of pure tensors: all scalar
/// coefficients moved to the left factor.
inline TensorDiffOp balanced_form(const std::vector<std::tuple<DiffOp, DiffOp>>& pairs) {
    TensorDiffOp t;
    for (auto& [a, b] : pairs)
        for (auto& [la, ca] : a.terms())
            for (auto& [lb, cb] : b.terms()) {
                auto key = std::make_pair(la, lb);
                auto it = t.find(key);
                RationalFunction v = ca * cb;
                if (it == t.end())
                    t.emplace(key, v);
                else {
                    it->second += v;
                    if (it->second.is_zero()) t.erase(it);
                }
            }
    return t;
}

/// Poisson bracket on classical representatives: (x*y - y*x)/h at h = 0.
inline DiffOp poisson_bracket(const DiffOp& x, const DiffOp& y) {
    const Space& s = x.space();
    std::size_t hi = s->hbar_index();
    for (auto* p : {&x, &y})
        for (auto& [l, c] : p->terms())
            if (!c.is_polynomial() || c.num().involves(hi))
                throw InputError("poisson_bracket requires h-free polynomial coefficients");
    DiffOp comm = twisted_product(x, y) - twisted_product(y, x);
    DiffOp r(x.theory_ptr(), s);
    Polynomial h = Polynomial::hbar(s);
    for (auto& [l, c] : comm.terms()) {
        auto q = c.num().divide_exact(h);
        if (!q) throw Error("internal: twisted commutator not divisible by h");
        // Set the remaining h to zero.
        Polynomial q0 = q->substitute_var(hi, Polynomial::zero(s));
        r.add(l, RationalFunction(q0));
    }
    return r;
}

/// w . (c t^lambda) = (w . c) t^{w lambda}, coefficients transformed by the
/// inverse matrix on the equivariant variables.
inline DiffOp weyl_apply(const DiffOp& x, const RootDatum& datum, const WeylElement& w) {
    if (datum.rank() != x.theory().rank) throw InputError("action inconsistent with theory rank");
    const WeylElement& winv = datum.inverse(w);
    DiffOp r(x.theory_ptr(), x.space());
    for (auto& [lam, c] : x.terms()) {
        Coweight wl = datum.act(w, lam);
        Polynomial num = c.num().substitute_equiv_linear(winv.matrix);
        Polynomial den = c.den().substitute_equiv_linear(winv.matrix);
        r.add(wl, RationalFunction(num, den));
    }
    return r;
}

inline DiffOp weyl_symmetrize(const DiffOp& x, const RootDatum& datum) {
    DiffOp r(x.theory_ptr(), x.space());
    for (auto& w : datum.weyl()) r = r + weyl_apply(x, datum, w);
    return r;
}

inline bool is_weyl_invariant(const DiffOp& x, const RootDatum& datum) {
    // Exact equality under each generator suffices.
    for (std::size_t i = 0; i < datum.num_simple(); ++i) {
        std::vector<IntVec> M = datum.reflection_matrix(static_cast<int>(i));
        const WeylElement& s = datum.weyl()[datum.index_of(M)];
        if (weyl_apply(x, datum, s) != x) return false;
    }
    return true;
}

struct LargestSubspaceResult {
    bool in_subspace = true;
    std::vector<Coweight> failures;
};

/// The largest-subspace criterion at the abelian level: for each support
/// cocharacter there must exist a flavour lift of the coefficient whose
/// Seidel image needs no localization.  Realized with a fresh dilation
/// parameter: strip from the dilation-deformed Euler class every factor
/// shared with the positive-weight numerator, specialize the dilation
/// parameter away, and test divisibility of the coefficient.
inline LargestSubspaceResult largest_subspace_check(const DiffOp& x, HbarConvention conv) {
    LargestSubspaceResult res;
    const GaugeTheory& T = x.theory();
    GaugeTheory That = dilation_flavoured(T);
    const Space& xs = x.space();
    std::vector<std::string> aux;
    for (std::size_t k = 0; k < xs->aux_count(); ++k)
        aux.push_back(xs->name(xs->aux_index(static_cast<int>(k))));
    Space hs = make_space(T.rank, T.flavour_rank + 1, aux);
    std::size_t dil = hs->flavour_index(T.flavour_rank);

    auto restrict_back = [&](const Polynomial& p) {
        Polynomial out(xs);
        for (auto& [m, c] : p.terms()) {
            Mono mm(xs->var_count(), 0);
            for (std::size_t i = 0; i < hs->var_count(); ++i) {
                if (m[i] == 0) continue;
                int j = xs->find(hs->name(i));
                if (j < 0) throw Error("internal: dilation variable survived specialization");
                mm[j] = m[i];
            }
            out += Polynomial::monomial(xs, mm, c);
        }
        return out;
    };

    for (auto& [lam, c] : x.terms()) {
        if (!c.is_polynomial()) {
            res.in_subspace = false;
            res.failures.push_back(lam);
            continue;
        }
        Polynomial denom = euler_S(That, lam, conv, hs);
        // Positive-pairing numerator of the deformed Seidel image: the
        // dual theory turns positive pairings into Euler factors.
        Polynomial numer = euler_S(dualize(That), lam, conv, hs);
        Polynomial stripped = denom;
        while (!stripped.is_constant()) {
            Polynomial g = poly_gcd(stripped, numer);
            if (g.is_one()) break;
            stripped = *stripped.divide_exact(g);
        }
        // A lift divisible by the stripped class exists iff its dilation
        // specialization divides the coefficient.
        Polynomial at_zero = stripped.substitute_var(dil, Polynomial::zero(hs));
        if (!divides(restrict_back(at_zero), c.num())) {
            res.in_subspace = false;
            res.failures.push_back(lam);
        }
    }
    return res;
}

} // namespace qcb
