#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbkp/diffalg.hpp"

namespace cbkp {

enum class Orientation : std::uint8_t { d1, d2 };

inline Axis main_axis(Orientation o) { return o == Orientation::d1 ? Axis::d1 : Axis::d2; }
inline Axis aux_axis(Orientation o) { return o == Orientation::d1 ? Axis::d2 : Axis::d1; }
inline Orientation flip(Orientation o) {
    return o == Orientation::d1 ? Orientation::d2 : Orientation::d1;
}

struct OpKey {
    int main;
    int aux;
    bool operator==(const OpKey&) const = default;
};

// Canonical term order: main exponent descending, aux ascending.
struct OpKeyLess {
    bool operator()(const OpKey& a, const OpKey& b) const {
        if (a.main != b.main) return a.main > b.main;
        return a.aux < b.aux;
    }
};

// A truncated pseudodifferential operator: a Laurent series in the main
// derivation with coefficients polynomial in the auxiliary derivation,
// stored coefficient-left (sum of c_ij d_main^i d_aux^j). The precision
// floor mu is explicit: coefficients at main exponents >= mu are exact,
// anything below is unrepresented and unknown. A missing floor means the
// operator is exact (all unstored coefficients are truly zero).
class PsiDO {
  public:
    using TermMap = std::map<OpKey, DiffPoly, OpKeyLess>;

    explicit PsiDO(Orientation o, std::optional<int> mu = std::nullopt) : orient_(o), mu_(mu) {}

    static PsiDO term(Orientation o, int main, int aux, DiffPoly c,
                      std::optional<int> mu = std::nullopt) {
        PsiDO p(o, mu);
        p.add_term({main, aux}, std::move(c));
        return p;
    }
    static PsiDO constant(Orientation o, DiffPoly c) { return term(o, 0, 0, std::move(c)); }
    static PsiDO main_power(Orientation o, int k, std::optional<int> mu = std::nullopt) {
        return term(o, k, 0, DiffPoly::one(), mu);
    }
    static PsiDO zero(Orientation o, std::optional<int> mu = std::nullopt) { return PsiDO(o, mu); }

    Orientation orientation() const { return orient_; }
    std::optional<int> precision() const { return mu_; }
    bool exact() const { return !mu_.has_value(); }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool aux_free() const {
        for (const auto& [k, c] : terms_)
            if (k.aux != 0) return false;
        return true;
    }

    // Largest / smallest stored main exponent.
    std::optional<int> ord_main() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->first.main;
    }
    std::optional<int> min_main() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first.main;
    }

    // Grading where both derivations grade 1 and coefficients grade 0.
    std::optional<int> diff_order() const {
        std::optional<int> d;
        for (const auto& [k, c] : terms_) {
            int g = k.main + k.aux;
            if (!d || g > *d) d = g;
        }
        return d;
    }

    void add_term(OpKey key, DiffPoly c) {
        if (mu_ && key.main < *mu_) return;
        if (c.is_zero()) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    // Forget coefficients below new_mu. Deepening beyond what is known is
    // an error rather than silently zero.
    PsiDO truncated(std::optional<int> new_mu) const {
        if (!new_mu) {
            if (mu_) throw InsufficientPrecision("cannot extend a truncated operator to exact");
            return *this;
        }
        if (mu_ && *new_mu < *mu_)
            throw InsufficientPrecision("cannot deepen precision from " + std::to_string(*mu_) +
                                        " to " + std::to_string(*new_mu));
        PsiDO out(orient_, new_mu);
        for (const auto& [k, c] : terms_)
            if (k.main >= *new_mu) out.terms_.emplace(k, c);
        return out;
    }

    const DiffPoly* find(OpKey key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? nullptr : &it->second;
    }

    // Structural equality: orientation, precision and stored terms.
    bool operator==(const PsiDO& o) const {
        return orient_ == o.orient_ && mu_ == o.mu_ && terms_ == o.terms_;
    }

  private:
    Orientation orient_;
    std::optional<int> mu_;
    TermMap terms_;
};

namespace detail {
// max(a, b) where a missing floor counts as minus infinity.
inline std::optional<int> prec_max(std::optional<int> a, std::optional<int> b) {
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
}
// Highest main exponent the true operator can carry: the top stored term
// or, when truncated, one below the floor (the unknown tail).
inline std::optional<int> true_top(const PsiDO& p) {
    std::optional<int> t = p.ord_main();
    if (p.precision()) t = prec_max(t, *p.precision() - 1);
    return t;
}
}  // namespace detail

inline void require_same_orientation(const PsiDO& a, const PsiDO& b, const char* who) {
    if (a.orientation() != b.orientation())
        throw OrientationMismatch(std::string(who) + ": operands oriented differently");
}

inline PsiDO operator+(const PsiDO& a, const PsiDO& b) {
    require_same_orientation(a, b, "op_add");
    PsiDO out(a.orientation(), detail::prec_max(a.precision(), b.precision()));
    for (const auto& [k, c] : a.terms()) out.add_term(k, c);
    for (const auto& [k, c] : b.terms()) out.add_term(k, c);
    return out;
}

inline PsiDO operator-(const PsiDO& p) {
    PsiDO out(p.orientation(), p.precision());
    for (const auto& [k, c] : p.terms()) out.add_term(k, -c);
    return out;
}

inline PsiDO operator-(const PsiDO& a, const PsiDO& b) { return a + (-b); }

// Left multiplication by an element of the coefficient algebra.
inline PsiDO scale_left(const DiffPoly& c, const PsiDO& p) {
    PsiDO out(p.orientation(), p.precision());
    for (const auto& [k, d] : p.terms()) out.add_term(k, c * d);
    return out;
}

inline PsiDO scale(const Scalar& s, const PsiDO& p) {
    PsiDO out(p.orientation(), p.precision());
    for (const auto& [k, d] : p.terms()) out.add_term(k, s * d);
    return out;
}

// Product in the operator algebra. Moving d_main^i past a coefficient
// expands by the generalized Leibniz identity with binomials C(i, t) for
// i in Z; the expansion is infinite for i < 0 and is truncated below the
// result precision floor, which follows the rule
//   mu = max(mu_P + ord_main(Q), mu_Q + ord_main(P)).
inline PsiDO mul(const PsiDO& p, const PsiDO& q, const RelationTable& table) {
    require_same_orientation(p, q, "op_mul");
    const Orientation o = p.orientation();
    const Axis amain = main_axis(o);
    const Axis aaux = aux_axis(o);

    std::optional<int> mu;
    if (p.precision()) {
        auto top_q = detail::true_top(q);
        if (top_q) mu = detail::prec_max(mu, *p.precision() + *top_q);
    }
    if (q.precision()) {
        auto top_p = detail::true_top(p);
        if (top_p) mu = detail::prec_max(mu, *q.precision() + *top_p);
    }

    PsiDO out(o, mu);
    for (const auto& [qk, d] : q.terms()) {
        // d_aux^s then d_main^t chains of the coefficient, shared across
        // all left-hand terms
        std::vector<std::vector<DiffPoly>> chains{{d}};
        auto chain_at = [&](int s, int t) -> const DiffPoly& {
            while (static_cast<int>(chains.size()) <= s)
                chains.emplace_back(1, derive(chains.back().front(), aaux, table));
            auto& row = chains[s];
            while (static_cast<int>(row.size()) <= t)
                row.push_back(derive(row.back(), amain, table));
            return row[t];
        };
        for (const auto& [pk, c] : p.terms()) {
            const int i = pk.main, j = pk.aux;
            const int k = qk.main, l = qk.aux;
            for (int s = 0; s <= j; ++s) {
                const DiffPoly& e0 = chain_at(s, 0);
                if (e0.is_zero()) continue;
                if (!mu && i < 0 && !e0.is_constant())
                    throw InsufficientPrecision(
                        "op_mul: exact product with a Laurent tail requires a truncation floor");
                const Scalar binj{binomial(j, s)};
                for (int t = 0;; ++t) {
                    if (i >= 0 && t > i) break;
                    if (mu && i - t + k < *mu) break;
                    const DiffPoly& e = chain_at(s, t);
                    if (e.is_zero()) break;
                    Scalar coef = binj * Scalar(binomial(i, t));
                    out.add_term({i - t + k, j - s + l}, coef * (c * e));
                }
            }
        }
    }
    return out;
}

// Adjoint: the unique linear antihomomorphism with d^* = -d and c^* = c.
// Precision is preserved: the output coefficient at exponent e only
// involves input coefficients at exponents >= e.
inline PsiDO adjoint(const PsiDO& p, const RelationTable& table) {
    const Orientation o = p.orientation();
    const Axis amain = main_axis(o);
    const Axis aaux = aux_axis(o);
    PsiDO out(o, p.precision());
    for (const auto& [k, c] : p.terms()) {
        const int i = k.main, j = k.aux;
        const Scalar sign{(((i + j) % 2) + 2) % 2 == 0 ? 1 : -1};
        // (c d_m^i d_a^j)^* = (-1)^{i+j} d_a^j d_m^i c, then normalize.
        DiffPoly f = c;
        for (int t = 0;; ++t) {
            if (i >= 0 && t > i) break;
            if (p.precision() && i - t < *p.precision()) break;
            if (f.is_zero()) break;
            if (!p.precision() && i < 0 && !c.is_constant())
                throw InsufficientPrecision("adjoint: exact Laurent tail requires truncation");
            const Scalar bit{binomial(i, t)};
            DiffPoly g = f;
            for (int s = 0; s <= j; ++s) {
                if (g.is_zero()) break;
                Scalar coef = sign * bit * Scalar(binomial(j, s));
                out.add_term({i - t, j - s}, coef * g);
                if (s + 1 <= j) g = derive(g, aaux, table);
            }
            if (i >= 0 && t + 1 > i) break;
            if (p.precision() && i - (t + 1) < *p.precision()) break;
            f = derive(f, amain, table);
        }
    }
    return out;
}

// Differential-operator part and strict Laurent tail: P = P_+ + P_-.
inline std::pair<PsiDO, PsiDO> split_parts(const PsiDO& p) {
    std::optional<int> mu_plus;
    if (p.precision() && *p.precision() > 0) mu_plus = p.precision();
    PsiDO plus(p.orientation(), mu_plus);
    PsiDO minus(p.orientation(), p.precision());
    for (const auto& [k, c] : p.terms()) {
        if (k.main >= 0)
            plus.add_term(k, c);
        else
            minus.add_term(k, c);
    }
    return {plus, minus};
}

// Action of a differential operator on an element of the algebra.
inline DiffPoly apply(const PsiDO& p, const DiffPoly& a, const RelationTable& table) {
    if (auto mn = p.min_main(); mn && *mn < 0)
        throw NegativeExponent("apply: operator has a Laurent tail");
    DiffPoly out;
    for (const auto& [k, c] : p.terms()) {
        DiffPoly da = derive_n(a, aux_axis(p.orientation()), k.aux, table);
        da = derive_n(da, main_axis(p.orientation()), k.main, table);
        out += c * da;
    }
    return out;
}

// The involution extended to operators: swaps the two derivations, maps
// coefficients by tau. Exponent bookkeeping is untouched: the main
// exponent now refers to the other derivation.
inline PsiDO tau(const PsiDO& p) {
    PsiDO out(flip(p.orientation()), p.precision());
    for (const auto& [k, c] : p.terms()) out.add_term(k, tau(c));
    return out;
}

inline DiffPoly coeff_at(const PsiDO& p, int main, int aux = 0) {
    if (p.precision() && main < *p.precision())
        throw InsufficientPrecision("coeff_at: exponent " + std::to_string(main) +
                                    " below precision floor " + std::to_string(*p.precision()));
    const DiffPoly* c = p.find({main, aux});
    return c ? *c : DiffPoly::zero();
}

// Lossless orientation swap for differential operators:
// c d1^i d2^j = c d2^j d1^i.
inline PsiDO reorient_differential(const PsiDO& p) {
    if (!p.exact())
        throw InsufficientPrecision("reorient: only exact differential operators reorient");
    if (auto mn = p.min_main(); mn && *mn < 0)
        throw NegativeExponent("reorient: operator has a Laurent tail");
    PsiDO out(flip(p.orientation()));
    for (const auto& [k, c] : p.terms()) out.add_term({k.aux, k.main}, c);
    return out;
}

// Compare two operators on the exponent window both know exactly.
inline bool equal_within_precision(const PsiDO& a, const PsiDO& b) {
    require_same_orientation(a, b, "equal_within_precision");
    std::optional<int> floor = detail::prec_max(a.precision(), b.precision());
    for (const auto& [k, c] : a.terms()) {
        if (floor && k.main < *floor) continue;
        const DiffPoly* d = b.find(k);
        if (!d || !(*d == c)) return false;
    }
    for (const auto& [k, c] : b.terms()) {
        if (floor && k.main < *floor) continue;
        if (!a.find(k)) return false;
    }
    return true;
}

// Writes an aux-free self-adjoint operator of order <= 0 in the
// symmetric form  X = sum_m d^-m s_m d^-m  and returns s_0..s_M.
// The slot forced to vanish between consecutive s_m must be zero.
inline std::vector<DiffPoly> symmetric_extract(const PsiDO& x, unsigned count,
                                                const RelationTable& table) {
    if (!x.aux_free()) throw NotSelfAdjoint("symmetric_extract: operator is not aux-free");
    if (auto top = x.ord_main(); top && *top > 0)
        throw NotSelfAdjoint("symmetric_extract: positive differential order");
    if (x.precision() && *x.precision() > -2 * static_cast<int>(count))
        throw InsufficientPrecision("symmetric_extract: floor " +
                                    std::to_string(*x.precision()) + " too shallow for " +
                                    std::to_string(count) + " entries");
    const Axis amain = main_axis(x.orientation());
    PsiDO rest = x;
    std::vector<DiffPoly> out;
    out.reserve(count + 1);
    for (unsigned m = 0; m <= count; ++m) {
        DiffPoly s = coeff_at(rest, -2 * static_cast<int>(m));
        out.push_back(s);
        // subtract d^-m s d^-m = sum_l C(-m, l) d^l(s) d^{-2m-l}
        if (!s.is_zero()) {
            const int mm = static_cast<int>(m);
            if (!rest.precision() && mm > 0 && !s.is_constant())
                throw InsufficientPrecision(
                    "symmetric_extract: exact operator cannot hold a nonconstant sandwich tail");
            PsiDO sandwich(x.orientation(), rest.precision());
            DiffPoly ds = s;
            for (int l = 0;; ++l) {
                if (mm == 0 && l > 0) break;
                if (rest.precision() && -2 * mm - l < *rest.precision()) break;
                if (ds.is_zero()) break;
                sandwich.add_term({-2 * mm - l, 0}, Scalar(binomial(-mm, l)) * ds);
                if (mm == 0) break;
                if (rest.precision() && -2 * mm - (l + 1) < *rest.precision()) break;
                ds = derive(ds, amain, table);
            }
            rest = rest - sandwich;
        }
        const int odd = -2 * static_cast<int>(m) - 1;
        if (!rest.precision() || odd >= *rest.precision()) {
            if (!coeff_at(rest, odd).is_zero())
                throw NotSelfAdjoint("symmetric_extract: forced-zero slot at exponent " +
                                     std::to_string(odd) + " is nonzero");
        }
    }
    return out;
}

}  // namespace cbkp
