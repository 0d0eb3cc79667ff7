#pragma once

#include "qcb/rational_function.hpp"

#include <map>
#include <sstream>
#include <vector>

namespace qcb {

using NExp = std::vector<long long>; // exponent in the curve-class lattice

/// Element of the group algebra of a curve-class lattice with
/// rational-function coefficients: a finite sum  sum_m  c_m q^m.
class NovikovSum {
public:
    NovikovSum(Space space, std::size_t curve_rank)
        : space_(std::move(space)), rank_(curve_rank) {}

    static NovikovSum scalar(Space space, std::size_t curve_rank, RationalFunction c) {
        NovikovSum n(std::move(space), curve_rank);
        n.add(NExp(curve_rank, 0), std::move(c));
        return n;
    }

    static NovikovSum monomial(Space space, NExp e, RationalFunction c) {
        NovikovSum n(std::move(space), e.size());
        n.add(std::move(e), std::move(c));
        return n;
    }

    std::size_t curve_rank() const { return rank_; }
    const Space& space() const { return space_; }
    const std::map<NExp, RationalFunction>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const NExp& e, const RationalFunction& c) {
        if (e.size() != rank_) throw InputError("Novikov exponent arity mismatch");
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    NovikovSum operator-() const {
        NovikovSum r(space_, rank_);
        for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    friend NovikovSum operator+(NovikovSum a, const NovikovSum& b) {
        a.check(b);
        for (auto& [e, c] : b.terms_) a.add(e, c);
        return a;
    }
    friend NovikovSum operator-(NovikovSum a, const NovikovSum& b) {
        a.check(b);
        for (auto& [e, c] : b.terms_) a.add(e, -c);
        return a;
    }
    friend NovikovSum operator*(const NovikovSum& a, const NovikovSum& b) {
        a.check(b);
        NovikovSum r(a.space_, a.rank_);
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                NExp e(a.rank_);
                for (std::size_t i = 0; i < a.rank_; ++i) e[i] = ea[i] + eb[i];
                r.add(e, ca * cb);
            }
        return r;
    }
    friend NovikovSum operator*(const NovikovSum& a, const RationalFunction& s) {
        NovikovSum r(a.space_, a.rank_);
        for (auto& [e, c] : a.terms_) r.add(e, c * s);
        return r;
    }
    friend NovikovSum operator*(const RationalFunction& s, const NovikovSum& a) { return a * s; }

    NovikovSum& operator+=(const NovikovSum& o) { return *this = *this + o; }
    NovikovSum& operator-=(const NovikovSum& o) { return *this = *this - o; }

    /// Multiply by q^shift.
    NovikovSum shifted(const NExp& shift) const {
        NovikovSum r(space_, rank_);
        for (auto& [e, c] : terms_) {
            NExp ee(rank_);
            for (std::size_t i = 0; i < rank_; ++i) ee[i] = e[i] + shift[i];
            r.add(ee, c);
        }
        return r;
    }

    /// Apply a function to every coefficient.
    template <typename F>
    NovikovSum map_coeffs(F&& f) const {
        NovikovSum r(space_, rank_);
        for (auto& [e, c] : terms_) r.add(e, f(c));
        return r;
    }

    bool operator==(const NovikovSum& o) const {
        return rank_ == o.rank_ && terms_ == o.terms_;
    }
    bool operator!=(const NovikovSum& o) const { return !(*this == o); }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [e, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            bool zero_exp = true;
            for (long long x : e)
                if (x != 0) zero_exp = false;
            std::string cs = c.str();
            if (zero_exp) {
                os << cs;
                continue;
            }
            if (c.is_one()) {
                // bare q monomial
            } else if (c.num().terms().size() > 1 || !c.is_polynomial()) {
                os << "(" << cs << ")*";
            } else {
                os << cs << "*";
            }
            os << "q[";
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (i) os << ",";
                os << e[i];
            }
            os << "]";
        }
        return os.str();
    }

private:
    void check(const NovikovSum& o) const {
        if (rank_ != o.rank_) throw InputError("Novikov rank mismatch");
        check_same_space(space_, o.space_);
    }

    Space space_;
    std::size_t rank_;
    std::map<NExp, RationalFunction> terms_;
};

/// Additive lattice map between curve-class lattices (e.g. the base change
/// from T-equivariant to G-equivariant Novikov variables).
struct NovikovMap {
    std::size_t in_rank = 0;
    std::size_t out_rank = 0;
    std::vector<NExp> matrix; // out_rank rows of length in_rank

    static NovikovMap identity(std::size_t rank) {
        NovikovMap m;
        m.in_rank = m.out_rank = rank;
        m.matrix.assign(rank, NExp(rank, 0));
        for (std::size_t i = 0; i < rank; ++i) m.matrix[i][i] = 1;
        return m;
    }

    NExp apply(const NExp& e) const {
        if (e.size() != in_rank) throw InputError("Novikov map arity mismatch");
        NExp out(out_rank, 0);
        for (std::size_t i = 0; i < out_rank; ++i)
            for (std::size_t j = 0; j < in_rank; ++j) out[i] += matrix[i][j] * e[j];
        return out;
    }

    NovikovSum push(const NovikovSum& n) const {
        NovikovSum r(n.space(), out_rank);
        for (auto& [e, c] : n.terms()) r.add(apply(e), c);
        return r;
    }
};

} // namespace qcb
