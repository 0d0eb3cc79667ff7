#pragma once

#include "qcb/error.hpp"
#include "qcb/gauge.hpp"
#include "qcb/smith.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qcb {

namespace detail {

/// Solve M c = b exactly over Q, where M is given by columns.  Returns
/// nullopt when inconsistent.  Columns are assumed linearly independent.
inline std::optional<std::vector<Rat>> solve_columns(const std::vector<IntVec>& columns,
                                                     const IntVec& b) {
    std::size_t n = b.size();
    std::size_t k = columns.size();
    std::vector<std::vector<Rat>> M(n, std::vector<Rat>(k + 1, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) M[i][j] = Rat(columns[j][i]);
        M[i][k] = Rat(b[i]);
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < k && row < n; ++col) {
        std::size_t p = row;
        while (p < n && M[p][col] == 0) ++p;
        if (p == n) continue;
        std::swap(M[p], M[row]);
        Rat inv = Rat(1) / M[row][col];
        for (auto& x : M[row]) x *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || M[i][col] == 0) continue;
            Rat f = M[i][col];
            for (std::size_t j = col; j <= k; ++j) M[i][j] -= f * M[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    // Consistency: rows below the pivots must have zero rhs.
    for (std::size_t i = row; i < n; ++i)
        if (M[i][k] != 0) return std::nullopt;
    if (pivot_col.size() != k) return std::nullopt; // dependent columns unsupported
    std::vector<Rat> c(k, 0);
    for (std::size_t i = 0; i < k; ++i) c[pivot_col[i]] = M[i][k];
    return c;
}

} // namespace detail

/// Weyl group element: reduced word in simple reflections plus the
/// induced integer matrix acting on the coweight lattice.
struct WeylElement {
    std::vector<int> word; // 1-based simple reflection indices
    std::vector<IntVec> matrix; // rank x rank, coweights as column vectors
    int length() const { return static_cast<int>(word.size()); }
};

inline Coweight apply_matrix(const std::vector<IntVec>& M, const Coweight& v) {
    Coweight r(M.size(), 0);
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r[i] += M[i][j] * v[j];
    return r;
}

inline std::vector<IntVec> matrix_mul(const std::vector<IntVec>& A, const std::vector<IntVec>& B) {
    std::size_t n = A.size();
    std::vector<IntVec> C(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (A[i][k] != 0)
                for (std::size_t j = 0; j < n; ++j) C[i][j] += A[i][k] * B[k][j];
    return C;
}

/// Root datum for a connected reductive group: rank, simple roots and
/// coroots in a fixed splitting of the torus, all positive roots, and the
/// fully enumerated Weyl group.
class RootDatum {
public:
    static constexpr std::size_t kWeylGuard = 1152;
    static constexpr std::size_t kRootGuard = 400;

    RootDatum(int rank, std::vector<IntVec> simple_roots, std::vector<IntVec> simple_coroots)
        : rank_(rank), simple_roots_(std::move(simple_roots)),
          simple_coroots_(std::move(simple_coroots)) {
        validate_cartan();
        generate_roots();
        enumerate_weyl();
    }

    int rank() const { return rank_; }
    std::size_t num_simple() const { return simple_roots_.size(); }
    const std::vector<IntVec>& simple_roots() const { return simple_roots_; }
    const std::vector<IntVec>& simple_coroots() const { return simple_coroots_; }
    const std::vector<IntVec>& positive_roots() const { return positive_roots_; }
    const std::vector<WeylElement>& weyl() const { return elements_; }
    std::size_t weyl_order() const { return elements_.size(); }
    const WeylElement& identity() const { return elements_[0]; }

    /// s_i on coweights: lambda - <alpha_i, lambda> alpha_i^vee.
    Coweight reflect_coweight(int i, const Coweight& lam) const {
        long long p = pairing(simple_roots_[i], lam);
        Coweight r = lam;
        for (int k = 0; k < rank_; ++k) r[k] -= p * simple_coroots_[i][k];
        return r;
    }

    /// s_i on weights: eta - <eta, alpha_i^vee> alpha_i.
    IntVec reflect_weight(int i, const IntVec& eta) const {
        long long p = pairing(eta, simple_coroots_[i]);
        IntVec r = eta;
        for (int k = 0; k < rank_; ++k) r[k] -= p * simple_roots_[i][k];
        return r;
    }

    Coweight act(const WeylElement& w, const Coweight& lam) const {
        return apply_matrix(w.matrix, lam);
    }

    /// Action on weights (linear forms): eta . w^{-1}, computed through
    /// the reduced word.
    IntVec act_weight(const WeylElement& w, const IntVec& eta) const {
        IntVec r = eta;
        for (auto it = w.word.rbegin(); it != w.word.rend(); ++it)
            r = reflect_weight(*it - 1, r);
        return r;
    }

    const WeylElement& multiply(const WeylElement& a, const WeylElement& b) const {
        return elements_[index_of(matrix_mul(a.matrix, b.matrix))];
    }

    const WeylElement& inverse(const WeylElement& w) const {
        // Reverse word.
        std::vector<IntVec> M = identity_matrix();
        for (auto it = w.word.rbegin(); it != w.word.rend(); ++it)
            M = matrix_mul(M, reflection_matrix(*it - 1));
        return elements_[index_of(M)];
    }

    /// #{alpha in R+ : w(alpha) < 0}; equals word length for reduced words.
    int inversion_count(const WeylElement& w) const {
        int n = 0;
        for (auto& alpha : positive_roots_)
            if (is_negative_root(act_weight(w, alpha))) ++n;
        return n;
    }

    bool is_negative_root(const IntVec& root) const {
        auto c = detail::solve_columns(simple_roots_, root);
        if (!c) throw Error("vector is not in the root lattice span");
        bool nonneg = true, nonpos = true;
        for (auto& x : *c) {
            if (x < 0) nonneg = false;
            if (x > 0) nonpos = false;
        }
        if (nonpos && !nonneg) return true;
        if (nonneg && !nonpos) return false;
        throw Error("vector is not a root");
    }

    bool is_dominant(const Coweight& lam) const {
        for (auto& alpha : simple_roots_)
            if (pairing(alpha, lam) < 0) return false;
        return true;
    }

    bool is_antidominant(const Coweight& lam) const {
        for (auto& alpha : simple_roots_)
            if (pairing(alpha, lam) > 0) return false;
        return true;
    }

    /// lambda = w_lambda(lambda^-) with lambda^- antidominant and w_lambda
    /// the longest element of its Stab_W(lambda^-)-coset.
    std::pair<Coweight, const WeylElement*> antidominant(const Coweight& lam) const {
        check_rank(lam);
        Coweight lm = lam;
        bool moved = true;
        std::size_t guard = 0;
        while (moved) {
            moved = false;
            for (std::size_t i = 0; i < simple_roots_.size(); ++i)
                if (pairing(simple_roots_[i], lm) > 0) {
                    lm = reflect_coweight(static_cast<int>(i), lm);
                    moved = true;
                }
            if (++guard > 100000) throw Error("antidominant descent failed to terminate");
        }
        const WeylElement* best = nullptr;
        for (auto& w : elements_)
            if (act(w, lm) == lam)
                if (!best || w.length() > best->length()) best = &w;
        // The longest coset representative is unique.
        int count = 0;
        for (auto& w : elements_)
            if (act(w, lm) == lam && w.length() == best->length()) ++count;
        if (count != 1) throw Error("longest coset representative is not unique");
        return {lm, best};
    }

    Coweight dominant_translate(const Coweight& lam) const {
        Coweight lm = lam;
        for (auto& x : lm) x = -x;
        auto [ad, w] = antidominant(lm);
        for (auto& x : ad) x = -x;
        return ad;
    }

    /// mu <= lambda in the dominant order: lambda - mu^+ is a nonnegative
    /// integer combination of simple coroots.  Requires lambda dominant.
    bool dominance_leq(const Coweight& mu, const Coweight& lambda) const {
        check_rank(mu);
        check_rank(lambda);
        if (!is_dominant(lambda))
            throw InputError("unsupported order: lambda is not dominant");
        Coweight mp = dominant_translate(mu);
        IntVec diff(rank_);
        for (int i = 0; i < rank_; ++i) diff[i] = lambda[i] - mp[i];
        auto c = detail::solve_columns(simple_coroots_, diff);
        if (!c) return false;
        for (auto& x : *c)
            if (x < 0 || denominator(x) != 1) return false;
        return true;
    }

    std::size_t index_of(const std::vector<IntVec>& M) const {
        auto it = index_.find(M);
        if (it == index_.end()) throw Error("matrix is not a Weyl group element");
        return it->second;
    }

    std::vector<IntVec> identity_matrix() const {
        std::vector<IntVec> M(rank_, IntVec(rank_, 0));
        for (int i = 0; i < rank_; ++i) M[i][i] = 1;
        return M;
    }

    std::vector<IntVec> reflection_matrix(int i) const {
        std::vector<IntVec> M = identity_matrix();
        for (int r = 0; r < rank_; ++r)
            for (int c = 0; c < rank_; ++c)
                M[r][c] -= simple_coroots_[i][r] * simple_roots_[i][c];
        return M;
    }

private:
    void check_rank(const Coweight& v) const {
        if (static_cast<int>(v.size()) != rank_)
            throw InputError("coweight length does not match rank");
    }

    void validate_cartan() const {
        if (rank_ <= 0) throw InputError("rank must be positive");
        if (simple_roots_.size() != simple_coroots_.size())
            throw InputError("simple roots and coroots must match");
        for (auto& v : simple_roots_)
            if (static_cast<int>(v.size()) != rank_)
                throw InputError("simple root length does not match rank");
        for (auto& v : simple_coroots_)
            if (static_cast<int>(v.size()) != rank_)
                throw InputError("simple coroot length does not match rank");
        std::size_t n = simple_roots_.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                long long a = pairing(simple_roots_[j], simple_coroots_[i]);
                if (i == j && a != 2) throw InputError("Cartan matrix diagonal must be 2");
                if (i != j) {
                    if (a > 0) throw InputError("Cartan matrix off-diagonal must be <= 0");
                    long long b = pairing(simple_roots_[i], simple_coroots_[j]);
                    if ((a == 0) != (b == 0))
                        throw InputError("Cartan matrix zero pattern must be symmetric");
                    if (a * b > 3) throw InputError("non-finite Cartan type");
                }
            }
    }

    void generate_roots() {
        std::set<IntVec> roots(simple_roots_.begin(), simple_roots_.end());
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<IntVec> snapshot(roots.begin(), roots.end());
            for (auto& r : snapshot)
                for (std::size_t i = 0; i < simple_roots_.size(); ++i) {
                    IntVec s = reflect_weight(static_cast<int>(i), r);
                    if (roots.insert(s).second) grew = true;
                }
            if (roots.size() > 2 * kRootGuard) throw InputError("non-finite type: root guard exceeded");
        }
        for (auto& r : roots)
            if (!is_negative_root_unchecked(r)) positive_roots_.push_back(r);
        std::sort(positive_roots_.begin(), positive_roots_.end());
    }

    bool is_negative_root_unchecked(const IntVec& root) const {
        auto c = detail::solve_columns(simple_roots_, root);
        if (!c) throw Error("generated root outside simple-root span");
        for (auto& x : *c)
            if (x > 0) return false;
        return true;
    }

    void enumerate_weyl() {
        WeylElement e{{}, identity_matrix()};
        elements_.push_back(e);
        index_[e.matrix] = 0;
        std::size_t head = 0;
        while (head < elements_.size()) {
            WeylElement w = elements_[head++];
            for (std::size_t i = 0; i < simple_roots_.size(); ++i) {
                std::vector<IntVec> M = matrix_mul(reflection_matrix(static_cast<int>(i)), w.matrix);
                if (index_.count(M)) continue;
                WeylElement nw;
                nw.word = w.word;
                nw.word.insert(nw.word.begin(), static_cast<int>(i) + 1);
                nw.matrix = M;
                index_[M] = elements_.size();
                elements_.push_back(std::move(nw));
                if (elements_.size() > kWeylGuard)
                    throw InputError("Weyl group size guard exceeded");
            }
        }
        // BFS explores by word length, so stored words are reduced.
        std::stable_sort(elements_.begin(), elements_.end(),
                         [](const WeylElement& a, const WeylElement& b) {
                             return a.word.size() < b.word.size();
                         });
        index_.clear();
        for (std::size_t k = 0; k < elements_.size(); ++k) index_[elements_[k].matrix] = k;
    }

    int rank_;
    std::vector<IntVec> simple_roots_;
    std::vector<IntVec> simple_coroots_;
    std::vector<IntVec> positive_roots_;
    std::vector<WeylElement> elements_;
    std::map<std::vector<IntVec>, std::size_t> index_;
};

/// Standard parabolic: a subset of simple-root indices, the induced
/// positive-root subset and enumerated Weyl subgroup.
struct Parabolic {
    std::vector<int> subset; // 0-based simple indices, sorted
    std::vector<IntVec> positive_roots; // R_P^+
    std::vector<std::size_t> subgroup;  // indices into datum.weyl()

    Parabolic(const RootDatum& datum, std::vector<int> simple_subset)
        : subset(std::move(simple_subset)) {
        std::sort(subset.begin(), subset.end());
        for (int i : subset)
            if (i < 0 || i >= static_cast<int>(datum.num_simple()))
                throw InputError("parabolic subset index out of range");
        // R_P^+ = positive roots supported on the subset's simple roots.
        for (auto& alpha : datum.positive_roots()) {
            auto c = detail::solve_columns(datum.simple_roots(), alpha);
            bool in_levi = true;
            for (std::size_t j = 0; j < c->size() && in_levi; ++j)
                if ((*c)[j] != 0 &&
                    !std::binary_search(subset.begin(), subset.end(), static_cast<int>(j)))
                    in_levi = false;
            if (in_levi) positive_roots.push_back(alpha);
        }
        // W_P by orbit of the generators.
        std::set<std::size_t> members{0};
        std::vector<std::size_t> frontier{0};
        while (!frontier.empty()) {
            std::vector<std::size_t> next;
            for (std::size_t idx : frontier)
                for (int i : subset) {
                    std::vector<IntVec> M = matrix_mul(datum.reflection_matrix(i),
                                                       datum.weyl()[idx].matrix);
                    std::size_t k = datum.index_of(M);
                    if (members.insert(k).second) next.push_back(k);
                }
            frontier = std::move(next);
        }
        subgroup.assign(members.begin(), members.end());
    }

    std::size_t dim_partial_flag(const RootDatum& datum) const {
        return datum.positive_roots().size() - positive_roots.size();
    }
};

/// Minimal-length representative of v W_P and its length.
inline std::pair<const WeylElement*, int> coset_data(const RootDatum& datum, const Parabolic& P,
                                                     const WeylElement& v) {
    const WeylElement* best = nullptr;
    for (std::size_t idx : P.subgroup) {
        const WeylElement& vu = datum.multiply(v, datum.weyl()[idx]);
        if (!best || vu.length() < best->length()) best = &vu;
    }
    return {best, best->length()};
}

/// Presentation of Lambda / (coroot lattice of the Levi of P) via Smith
/// normal form: invariant factors, free rank, and the projection map.
struct Pi1Quotient {
    int rank;                 // rank of Lambda
    std::vector<Int> torsion; // invariant factors > 1 may appear here as given
    int free_rank;
    IMat U; // unimodular: coordinates y = U * lambda

    std::vector<Int> project(const Coweight& lam) const {
        std::vector<Int> y(rank, 0);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) y[i] += U[i][j] * Int(lam[j]);
        for (std::size_t i = 0; i < torsion.size(); ++i) {
            Int d = torsion[i];
            Int m = y[i] % d;
            if (m < 0) m += d;
            y[i] = m;
        }
        return y;
    }

    std::string describe() const {
        std::string s;
        for (auto& d : torsion) {
            if (d == 1) continue;
            if (!s.empty()) s += " + ";
            s += "Z/" + d.str();
        }
        if (free_rank > 0) {
            if (!s.empty()) s += " + ";
            s += "Z^" + std::to_string(free_rank);
        }
        if (s.empty()) s = "0";
        return s;
    }
};

inline Pi1Quotient pi1_parabolic(const RootDatum& datum, const Parabolic& P) {
    int r = datum.rank();
    Pi1Quotient Q;
    Q.rank = r;
    if (P.subset.empty()) {
        Q.free_rank = r;
        Q.U = identity_imat(r);
        return Q;
    }
    // Columns = simple coroots of the subset.
    IMat A(r, std::vector<Int>(P.subset.size(), 0));
    for (std::size_t j = 0; j < P.subset.size(); ++j)
        for (int i = 0; i < r; ++i) A[i][j] = Int(datum.simple_coroots()[P.subset[j]][i]);
    SmithResult S = smith_normal_form(std::move(A));
    Q.U = S.U;
    Q.torsion = S.invariant_factors;
    Q.free_rank = r - static_cast<int>(S.invariant_factors.size());
    return Q;
}

} // namespace qcb
