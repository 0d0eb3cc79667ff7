#pragma once

#include "qcb/diffop.hpp"
#include "qcb/novikov.hpp"

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qcb {

/// Localization model of a target with isolated torus fixed points:
/// tangent weights per point, a curve-class lattice with section classes,
/// and optional named divisor classes given by restriction.
struct FixedPointModel {
    Space space;
    int rank = 0;    // torus rank (length of tangent weight vectors)
    int points = 0;  // number of fixed points
    std::size_t curve_rank = 0;
    std::vector<std::vector<IntVec>> tangent_weights; // [point][weight]

    /// Section classes for the standard basis cocharacters e_1..e_r;
    /// extended additively to all of the cocharacter lattice.
    std::vector<std::vector<NExp>> basis_sections; // [i][point]

    struct Divisor {
        std::string name;
        std::vector<RationalFunction> values; // restriction per point
        NExp pairing;                         // <D, -> on the curve lattice
    };
    std::vector<Divisor> divisors;

    /// Optional module basis for expanding localized classes (e.g. 1, x):
    /// names plus restrictions per point.
    std::vector<std::pair<std::string, std::vector<RationalFunction>>> basis;

    void validate() const {
        if (rank <= 0 || points <= 0) throw InputError("model must have positive rank and points");
        if (static_cast<int>(tangent_weights.size()) != points)
            throw InputError("tangent weights must cover every point");
        for (auto& pw : tangent_weights)
            for (auto& w : pw) {
                if (static_cast<int>(w.size()) != rank)
                    throw InputError("tangent weight length does not match rank");
                bool zero = true;
                for (auto x : w)
                    if (x != 0) zero = false;
                if (zero) throw InputError("zero tangent weight");
            }
        if (static_cast<int>(basis_sections.size()) != rank)
            throw InputError("sections must be given for each basis cocharacter");
        for (auto& per_point : basis_sections) {
            if (static_cast<int>(per_point.size()) != points)
                throw InputError("sections must cover every point");
            for (auto& e : per_point)
                if (e.size() != curve_rank) throw InputError("section class arity mismatch");
        }
        for (auto& d : divisors) {
            if (static_cast<int>(d.values.size()) != points)
                throw InputError("divisor restrictions must cover every point");
            if (d.pairing.size() != curve_rank)
                throw InputError("divisor pairing arity mismatch");
        }
    }

    NExp section(const Coweight& lam, int point) const {
        if (static_cast<int>(lam.size()) != rank)
            throw InputError("coweight length does not match model rank");
        NExp e(curve_rank, 0);
        for (int i = 0; i < rank; ++i)
            for (std::size_t k = 0; k < curve_rank; ++k)
                e[k] += lam[i] * basis_sections[i][point][k];
        return e;
    }

    const Divisor* find_divisor(const std::string& name) const {
        for (auto& d : divisors)
            if (d.name == name) return &d;
        return nullptr;
    }

    /// The X = N model of a gauge theory: one fixed point at the origin,
    /// tangent weights the matter weights, section classes the identity.
    static FixedPointModel from_theory(const GaugeTheory& T) {
        FixedPointModel m;
        m.space = T.space();
        m.rank = T.rank;
        m.points = 1;
        m.curve_rank = T.rank;
        m.tangent_weights.push_back({});
        for (auto& w : T.matter) {
            bool zero = true;
            for (auto x : w)
                if (x != 0) zero = false;
            if (zero) throw InputError("X = N model needs nonzero matter weights");
            m.tangent_weights[0].push_back(w);
        }
        for (int i = 0; i < T.rank; ++i) {
            NExp e(T.rank, 0);
            e[i] = 1;
            m.basis_sections.push_back({e});
        }
        return m;
    }
};

/// Class in localized equivariant cohomology in fixed-point coordinates:
/// one Novikov sum per fixed point.
struct LocalizedClass {
    std::vector<NovikovSum> values;

    static LocalizedClass unit(const FixedPointModel& m) {
        LocalizedClass c;
        for (int k = 0; k < m.points; ++k)
            c.values.push_back(
                NovikovSum::scalar(m.space, m.curve_rank, RationalFunction::one(m.space)));
        return c;
    }

    static LocalizedClass zero_like(const LocalizedClass& o) {
        LocalizedClass c;
        for (auto& v : o.values) c.values.push_back(NovikovSum(v.space(), v.curve_rank()));
        return c;
    }

    bool operator==(const LocalizedClass& o) const { return values == o.values; }
    bool operator!=(const LocalizedClass& o) const { return !(*this == o); }
};

/// Euler factor of the K-theory difference class at an isolated fixed
/// point: per weight alpha with p = alpha(lambda),
///   p > 0 multiplies prod_{c=0}^{p-1} (alpha + c h),
///   p < 0 divides  prod_{c=p}^{-1} (alpha + c h).
inline RationalFunction euler_delta(const Space& s, const std::vector<IntVec>& weights,
                                    const Coweight& lam) {
    Polynomial num = Polynomial::one(s);
    Polynomial den = Polynomial::one(s);
    Polynomial h = Polynomial::hbar(s);
    for (auto& w : weights) {
        bool zero = true;
        for (auto x : w)
            if (x != 0) zero = false;
        if (zero) throw InputError("zero weight in euler_delta");
        long long p = pairing(w, lam);
        if (p == 0) continue;
        Polynomial alpha(s);
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] != 0)
                alpha += Polynomial::variable(s, s->equiv_index(static_cast<int>(i)), Rat(w[i]));
        if (p > 0) {
            for (long long c = 0; c < p; ++c) num *= alpha + h * Rat(c);
        } else {
            for (long long c = p; c < 0; ++c) den *= alpha + h * Rat(c);
        }
    }
    return RationalFunction(std::move(num), std::move(den));
}

/// Givental-space shift operator: S_lambda = (q^section * euler_delta) o
/// Phi_lambda componentwise; `twisted = false` gives the untwisted variant.
inline LocalizedClass shift_S(const FixedPointModel& m, const Coweight& lam,
                              const LocalizedClass& alpha, bool twisted = true) {
    if (static_cast<int>(alpha.values.size()) != m.points)
        throw InputError("class arity does not match model");
    LocalizedClass out;
    for (int k = 0; k < m.points; ++k) {
        RationalFunction delta = euler_delta(m.space, m.tangent_weights[k], lam);
        NovikovSum v = alpha.values[k];
        if (twisted)
            v = v.map_coeffs([&](const RationalFunction& c) { return phi_shift(c, lam); });
        v = v * delta;
        out.values.push_back(v.shifted(m.section(lam, k)));
    }
    return out;
}

/// S_{lambda+mu} = S_lambda o S_mu on the unit class and on every divisor.
inline bool module_check(const FixedPointModel& m, const Coweight& lam, const Coweight& mu) {
    Coweight sum(lam.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = lam[i] + mu[i];
    std::vector<LocalizedClass> probes{LocalizedClass::unit(m)};
    for (auto& d : m.divisors) {
        LocalizedClass c;
        for (int k = 0; k < m.points; ++k)
            c.values.push_back(NovikovSum::scalar(m.space, m.curve_rank, d.values[k]));
        probes.push_back(std::move(c));
    }
    for (auto& probe : probes) {
        LocalizedClass lhs = shift_S(m, sum, probe);
        LocalizedClass rhs = shift_S(m, lam, shift_S(m, mu, probe));
        if (lhs != rhs) return false;
    }
    return true;
}

/// Externally supplied values of the full shift operators on 1.
struct OperatorTable {
    Space space;
    int rank = 0;
    int points = 0;
    std::size_t curve_rank = 0;
    std::map<Coweight, LocalizedClass> entries;
    std::optional<NovikovMap> novikov_map;

    const LocalizedClass& at(const Coweight& lam) const {
        auto it = entries.find(lam);
        if (it == entries.end()) {
            std::string key = "[";
            for (std::size_t i = 0; i < lam.size(); ++i)
                key += (i ? "," : "") + std::to_string(lam[i]);
            throw InputError("missing table entry for " + key + "]");
        }
        return it->second;
    }
};

/// Localization assembler: Gamma = sum c_lambda t^lambda applied through a
/// table of operator values, Novikov exponents pushed through the base
/// change.  Output lives over the target lattice of `nm`.
inline LocalizedClass assemble_shift(const DiffOp& gamma, const OperatorTable& table,
                                     const NovikovMap& nm) {
    check_same_space(gamma.space(), table.space);
    LocalizedClass out;
    for (int k = 0; k < table.points; ++k)
        out.values.push_back(NovikovSum(table.space, nm.out_rank));
    for (auto& [lam, c] : gamma.terms()) {
        const LocalizedClass& entry = table.at(lam);
        for (int k = 0; k < table.points; ++k)
            out.values[k] += nm.push(entry.values[k]) * c;
    }
    return out;
}

inline LocalizedClass assemble_shift(const DiffOp& gamma, const OperatorTable& table) {
    NovikovMap nm =
        table.novikov_map ? *table.novikov_map : NovikovMap::identity(table.curve_rank);
    return assemble_shift(gamma, table, nm);
}

/// Expansion of a localized class in the model's declared module basis:
/// per Novikov exponent, solve  sum_i c_i * basis_i|_k = value_k.
struct BasisExpansion {
    std::vector<std::string> names;
    std::map<NExp, std::vector<RationalFunction>> coefficients;
};

namespace detail {

inline std::vector<RationalFunction> solve_basis(const FixedPointModel& m,
                                                 const std::vector<RationalFunction>& rhs) {
    std::size_t n = m.basis.size();
    if (n == 0 || static_cast<int>(n) > m.points)
        throw InputError("model basis unavailable or overdetermined");
    // Gaussian elimination over the rational function field.
    std::vector<std::vector<RationalFunction>> M;
    for (int k = 0; k < m.points; ++k) {
        std::vector<RationalFunction> row;
        for (std::size_t i = 0; i < n; ++i) row.push_back(m.basis[i].second[k]);
        row.push_back(rhs[k]);
        M.push_back(std::move(row));
    }
    std::size_t rows = M.size();
    std::size_t row = 0;
    std::vector<int> pivot(n, -1);
    for (std::size_t col = 0; col < n && row < rows; ++col) {
        std::size_t p = row;
        while (p < rows && M[p][col].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(M[p], M[row]);
        RationalFunction inv = M[row][col].inverse();
        for (auto& x : M[row]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || M[i][col].is_zero()) continue;
            RationalFunction f = M[i][col];
            for (std::size_t j = col; j <= n; ++j) M[i][j] -= f * M[row][j];
        }
        pivot[col] = static_cast<int>(row);
        ++row;
    }
    for (std::size_t i = row; i < rows; ++i)
        if (!M[i][n].is_zero())
            throw MathError("class does not lie in the span of the model basis");
    std::vector<RationalFunction> c;
    for (std::size_t i = 0; i < n; ++i) {
        if (pivot[i] < 0) throw InputError("model basis restrictions are dependent");
        c.push_back(M[pivot[i]][n]);
    }
    return c;
}

} // namespace detail

inline BasisExpansion expand_in_basis(const FixedPointModel& m, const LocalizedClass& cls) {
    BasisExpansion out;
    for (auto& b : m.basis) out.names.push_back(b.first);
    // Collect all Novikov exponents.
    std::map<NExp, std::vector<RationalFunction>> rhs;
    for (int k = 0; k < m.points; ++k)
        for (auto& [e, c] : cls.values[k].terms()) {
            auto it = rhs.find(e);
            if (it == rhs.end())
                it = rhs.emplace(e, std::vector<RationalFunction>(
                                        m.points, RationalFunction::zero(m.space))).first;
            it->second[k] = c;
        }
    for (auto& [e, v] : rhs) out.coefficients.emplace(e, detail::solve_basis(m, v));
    return out;
}

/// Specialization of all equivariant parameters to zero.  When the model
/// declares a basis the limit is taken on basis coefficients; otherwise
/// pointwise.  Raises MathError("no non-equivariant limit ...") on poles.
struct NoneqLimit {
    bool used_basis = false;
    std::vector<std::string> basis_names;
    // Basis route: coefficients per Novikov exponent.
    std::map<NExp, std::vector<RationalFunction>> coefficients;
    // Pointwise route.
    std::vector<NovikovSum> values;
};

inline RationalFunction set_equiv_to_zero(const RationalFunction& c) {
    const Space& s = c.space();
    std::map<std::size_t, RationalFunction> zero_map;
    for (int i = 0; i < s->equiv_count(); ++i)
        zero_map.emplace(s->equiv_index(i), RationalFunction::zero(s));
    try {
        return substitute(c, zero_map);
    } catch (const MathError&) {
        throw MathError("no non-equivariant limit: pole at " + c.den().str());
    }
}

inline NoneqLimit noneq_limit(const FixedPointModel& m, const LocalizedClass& cls) {
    NoneqLimit out;
    if (!m.basis.empty()) {
        out.used_basis = true;
        BasisExpansion exp = expand_in_basis(m, cls);
        out.basis_names = exp.names;
        for (auto& [e, coeffs] : exp.coefficients) {
            std::vector<RationalFunction> limited;
            for (auto& c : coeffs) limited.push_back(set_equiv_to_zero(c));
            bool all_zero = true;
            for (auto& c : limited)
                if (!c.is_zero()) all_zero = false;
            if (!all_zero) out.coefficients.emplace(e, std::move(limited));
        }
        return out;
    }
    for (auto& v : cls.values)
        out.values.push_back(
            v.map_coeffs([](const RationalFunction& c) { return set_equiv_to_zero(c); }));
    return out;
}

/// The abelian Seidel image of the basis element e(S_{t^lambda}) t^lambda:
/// the Novikov monomial q^lambda times the positive-pairing weight product.
/// Computed through the localized route (Euler-class ratio) so that the
/// displayed monomial is a genuine cancellation statement.
inline std::pair<Coweight, Polynomial> seidel_linear_rep(const GaugeTheory& T,
                                                         const Coweight& lam, const Space& s) {
    Polynomial e = euler_S(T, lam, HbarConvention::Classical, s);
    Polynomial num = Polynomial::one(s);
    for (std::size_t j = 0; j < T.matter.size(); ++j) {
        long long p = T.matter_pairing(j, lam);
        if (p > 0) num *= T.weight_form(j, s).pow(p);
    }
    // Localized value of the basis element: e(S) times the positive-weight
    // product, divided exactly by e(S).
    auto q = (e * num).divide_exact(e);
    if (!q) throw Error("internal: abelian Seidel image not polynomial");
    return {lam, *q};
}

/// Operator matrix over the localized fixed-point basis with Novikov
/// coefficients, acting as  (A v)_k = sum_j A[k][j] * v_j.
using OperatorMatrix = std::vector<std::vector<NovikovSum>>;

inline OperatorMatrix operator_matrix_product(const OperatorMatrix& A, const OperatorMatrix& B) {
    std::size_t n = A.size();
    OperatorMatrix C;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<NovikovSum> row;
        for (std::size_t j = 0; j < n; ++j) {
            NovikovSum acc(A[i][j].space(), A[i][j].curve_rank());
            for (std::size_t k = 0; k < n; ++k) acc += A[i][k] * B[k][j];
            row.push_back(std::move(acc));
        }
        C.push_back(std::move(row));
    }
    return C;
}

/// Matrix of the Givental-space operator S_lambda (diagonal; the Phi twist
/// is tracked separately by callers).
inline OperatorMatrix shift_matrix(const FixedPointModel& m, const Coweight& lam) {
    OperatorMatrix M;
    for (int i = 0; i < m.points; ++i) {
        std::vector<NovikovSum> row;
        for (int j = 0; j < m.points; ++j) {
            NovikovSum v(m.space, m.curve_rank);
            if (i == j) {
                RationalFunction delta = euler_delta(m.space, m.tangent_weights[i], lam);
                v.add(m.section(lam, i), delta);
            }
            row.push_back(std::move(v));
        }
        M.push_back(std::move(row));
    }
    return M;
}

/// Commutation of the assembled operator with the quantum connection in a
/// divisor direction, checked per support cocharacter:
///   Dq(M_mu) + h^{-1} (P M_mu - M_mu Phi_mu(P)) = 0,
/// where Dq scales a Novikov term q^beta by <D, beta> and P is the
/// user-supplied product-by-D matrix.
inline bool connection_commute_check(const FixedPointModel& m,
                                     const FixedPointModel::Divisor& D,
                                     const OperatorMatrix& product_by_D,
                                     const std::map<Coweight, OperatorMatrix>& operators,
                                     std::size_t novikov_cutoff = 64) {
    const Space& s = m.space;
    RationalFunction hinv =
        RationalFunction(Polynomial::one(s), Polynomial::hbar(s));
    for (auto& [mu, M] : operators) {
        std::size_t n = M.size();
        // Dq-weighted matrix.
        OperatorMatrix dq;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<NovikovSum> row;
            for (std::size_t j = 0; j < n; ++j) {
                NovikovSum v(s, m.curve_rank);
                for (auto& [e, c] : M[i][j].terms()) {
                    long long w = 0;
                    for (std::size_t k = 0; k < e.size(); ++k) {
                        w += D.pairing[k] * e[k];
                        if (static_cast<std::size_t>(std::abs(e[k])) > novikov_cutoff)
                            throw Error("Novikov cutoff exceeded without determination");
                    }
                    v.add(e, c * RationalFunction::constant(s, Rat(w)));
                }
                row.push_back(std::move(v));
            }
            dq.push_back(std::move(row));
        }
        OperatorMatrix shifted_P;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<NovikovSum> row;
            for (std::size_t j = 0; j < n; ++j)
                row.push_back(product_by_D[i][j].map_coeffs(
                    [&](const RationalFunction& c) { return phi_shift(c, mu); }));
            shifted_P.push_back(std::move(row));
        }
        OperatorMatrix left = operator_matrix_product(product_by_D, M);
        OperatorMatrix right = operator_matrix_product(M, shifted_P);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                NovikovSum total = dq[i][j] + (left[i][j] - right[i][j]) * hinv;
                if (!total.is_zero()) return false;
            }
    }
    return true;
}

} // namespace qcb
