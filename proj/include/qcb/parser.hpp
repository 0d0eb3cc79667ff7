#pragma once

#include "qcb/diffop.hpp"
#include "qcb/novikov.hpp"

#include <cctype>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qcb {

/// What an expression may mention: z-monomials of a given arity (the
/// twisted algebra sector) and q-monomials of a given arity (Novikov
/// sector).  Arity -1 disables the sector.
struct ExprContext {
    Space space;
    int z_arity = -1;
    int q_arity = -1;
};

/// Parsed value: finite sum of (z-exponent, q-exponent) monomials with
/// rational-function coefficients.  Multiplication is twisted in the
/// z-sector: z^lambda moves coefficients through Phi_lambda.
class ExprValue {
public:
    using Key = std::pair<Coweight, NExp>;

    explicit ExprValue(const ExprContext& ctx) : ctx_(&ctx) {}

    static ExprValue scalar(const ExprContext& ctx, RationalFunction c) {
        ExprValue v(ctx);
        v.add(Coweight(std::max(ctx.z_arity, 0), 0), NExp(std::max(ctx.q_arity, 0), 0),
              std::move(c));
        return v;
    }

    void add(const Coweight& z, const NExp& q, const RationalFunction& c) {
        if (c.is_zero()) return;
        auto key = std::make_pair(z, q);
        auto it = terms_.find(key);
        if (it == terms_.end())
            terms_.emplace(key, c);
        else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    const std::map<Key, RationalFunction>& terms() const { return terms_; }

    ExprValue operator-() const {
        ExprValue r(*ctx_);
        for (auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }

    friend ExprValue operator+(ExprValue a, const ExprValue& b) {
        for (auto& [k, c] : b.terms_) a.add(k.first, k.second, c);
        return a;
    }
    friend ExprValue operator-(ExprValue a, const ExprValue& b) {
        for (auto& [k, c] : b.terms_) a.add(k.first, k.second, -c);
        return a;
    }
    friend ExprValue operator*(const ExprValue& a, const ExprValue& b) {
        ExprValue r(*a.ctx_);
        for (auto& [ka, ca] : a.terms_)
            for (auto& [kb, cb] : b.terms_) {
                Coweight z(ka.first.size());
                for (std::size_t i = 0; i < z.size(); ++i) z[i] = ka.first[i] + kb.first[i];
                NExp q(ka.second.size());
                for (std::size_t i = 0; i < q.size(); ++i) q[i] = ka.second[i] + kb.second[i];
                RationalFunction c = cb;
                if (!ka.first.empty()) c = phi_shift(c, ka.first);
                r.add(z, q, ca * c);
            }
        return r;
    }

    bool is_scalar() const {
        if (terms_.empty()) return true;
        if (terms_.size() > 1) return false;
        auto& k = terms_.begin()->first;
        for (auto x : k.first)
            if (x) return false;
        for (auto x : k.second)
            if (x) return false;
        return true;
    }

    bool is_single_term() const { return terms_.size() == 1; }

    RationalFunction scalar_value() const {
        if (terms_.empty()) return RationalFunction::zero(ctx_->space);
        return terms_.begin()->second;
    }

    /// Inverse of a single-term value: (c z^l q^m)^-1 = Phi_{-l}(1/c) z^-l q^-m.
    ExprValue inverse(std::size_t err_pos) const {
        if (terms_.size() != 1)
            throw ParseError("inverse of a sum is not supported", err_pos);
        auto& [k, c] = *terms_.begin();
        Coweight z = k.first;
        for (auto& x : z) x = -x;
        NExp q = k.second;
        for (auto& x : q) x = -x;
        RationalFunction ci = c.inverse();
        if (!z.empty()) ci = phi_shift(ci, z);
        ExprValue r(*ctx_);
        r.add(z, q, ci);
        return r;
    }

    ExprValue pow(long e, std::size_t err_pos) const {
        ExprValue base = *this;
        if (e < 0) {
            base = base.inverse(err_pos);
            e = -e;
        }
        ExprValue r = scalar(*ctx_, RationalFunction::one(ctx_->space));
        for (long i = 0; i < e; ++i) r = r * base;
        return r;
    }

    const ExprContext& ctx() const { return *ctx_; }

private:
    const ExprContext* ctx_;
    std::map<Key, RationalFunction> terms_;
};

/// Recursive-descent parser for the expression grammar
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := primary ('^' int)?
///   primary:= ident | int | zmono | qmono | '(' expr ')'
/// with z[i,...] / q[i,...] monomials.  Whitespace-insensitive, errors
/// carry 1-based column positions.
class ExpressionParser {
public:
    ExpressionParser(std::string text, const ExprContext& ctx)
        : text_(std::move(text)), ctx_(ctx) {}

    ExprValue parse() {
        ExprValue v = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) throw ParseError("unexpected trailing input", pos_ + 1);
        return v;
    }

private:
    std::size_t err_col() const { return std::min(pos_ + 1, std::max<std::size_t>(text_.size(), 1)); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected ") + what, err_col());
    }

    long parse_int() {
        skip_ws();
        std::size_t start = pos_;
        bool neg = false;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            neg = text_[pos_] == '-';
            ++pos_;
        }
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw ParseError("expected integer", err_col());
        long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            if (v > 1000000000L) throw ParseError("integer literal too large", start + 1);
            ++pos_;
        }
        return neg ? -v : v;
    }

    std::vector<long long> parse_bracket_list(int arity, const char* what) {
        expect('[', "'['");
        std::vector<long long> v;
        v.push_back(parse_int());
        while (accept(',')) v.push_back(parse_int());
        expect(']', "',' or ']'");
        if (arity >= 0 && static_cast<int>(v.size()) != arity)
            throw ParseError(std::string("arity mismatch in ") + what + " (expected " +
                                 std::to_string(arity) + " entries)",
                             err_col());
        return v;
    }

    ExprValue parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", err_col());
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprValue v = parse_expr();
            expect(')', "')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long n = parse_int();
            return ExprValue::scalar(ctx_, RationalFunction::constant(ctx_.space, Rat(n)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            if (name == "z" && peek('[')) {
                if (ctx_.z_arity < 0)
                    throw ParseError("z-monomials are not allowed here", start + 1);
                auto lam = parse_bracket_list(ctx_.z_arity, "z[...]");
                ExprValue v(ctx_);
                v.add(lam, NExp(std::max(ctx_.q_arity, 0), 0),
                      RationalFunction::one(ctx_.space));
                return v;
            }
            if (name == "q" && peek('[')) {
                if (ctx_.q_arity < 0)
                    throw ParseError("q-monomials are not allowed here", start + 1);
                auto e = parse_bracket_list(ctx_.q_arity, "q[...]");
                ExprValue v(ctx_);
                v.add(Coweight(std::max(ctx_.z_arity, 0), 0), e,
                      RationalFunction::one(ctx_.space));
                return v;
            }
            int idx = ctx_.space->find(name);
            if (idx < 0) throw ParseError("unknown identifier '" + name + "'", start + 1);
            return ExprValue::scalar(
                ctx_, RationalFunction(Polynomial::variable(ctx_.space, idx)));
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", err_col());
    }

    ExprValue parse_factor() {
        ExprValue v = parse_primary();
        if (accept('^')) {
            std::size_t at = pos_;
            long e = parse_int();
            v = v.pow(e, at);
        }
        return v;
    }

    ExprValue parse_term() {
        ExprValue v = parse_factor();
        while (true) {
            if (accept('*')) {
                v = v * parse_factor();
            } else if (accept('/')) {
                std::size_t at = pos_;
                ExprValue d = parse_factor();
                if (!d.is_scalar() || d.scalar_value().is_zero()) {
                    if (d.scalar_value().is_zero() && d.is_scalar())
                        throw MathError("zero denominator");
                    throw ParseError("division by a non-scalar", at);
                }
                v = v * ExprValue::scalar(ctx_, d.scalar_value().inverse());
            } else {
                break;
            }
        }
        return v;
    }

    ExprValue parse_expr() {
        bool neg = false;
        skip_ws();
        if (accept('-')) neg = true;
        ExprValue v = parse_term();
        if (neg) v = -v;
        while (true) {
            if (accept('+'))
                v = v + parse_term();
            else if (accept('-'))
                v = v - parse_term();
            else
                break;
        }
        return v;
    }

    std::string text_;
    const ExprContext& ctx_;
    std::size_t pos_ = 0;
};

inline ExprValue parse_value(const std::string& text, const ExprContext& ctx) {
    ExpressionParser p(text, ctx);
    return p.parse();
}

/// Parse a pure scalar expression (no z, no q).
inline RationalFunction parse_rational(const std::string& text, const Space& space) {
    ExprContext ctx{space, -1, -1};
    return parse_value(text, ctx).scalar_value();
}

/// Parse an element of the twisted algebra over a gauge theory.
inline DiffOp parse_diffop(const std::string& text,
                           const std::shared_ptr<const GaugeTheory>& theory, const Space& space) {
    ExprContext ctx{space, theory->rank, -1};
    ExprValue v = parse_value(text, ctx);
    DiffOp d(theory, space);
    for (auto& [k, c] : v.terms()) d.add(k.first, c);
    return d;
}

/// Parse a Novikov sum (q-monomials, no z).
inline NovikovSum parse_novikov(const std::string& text, const Space& space,
                                std::size_t curve_rank) {
    ExprContext ctx{space, -1, static_cast<int>(curve_rank)};
    ExprValue v = parse_value(text, ctx);
    NovikovSum n(space, curve_rank);
    for (auto& [k, c] : v.terms()) n.add(k.second, c);
    return n;
}

} // namespace qcb
