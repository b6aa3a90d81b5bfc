#pragma once

#include <random>
#include <utility>
#include <vector>

#include "cbkp/psido.hpp"

namespace cbkp {

// The coupling Schrodinger operator H_a = d1 d2 + a, in either
// orientation (two terms, self-adjoint).
inline PsiDO make_schrodinger(Orientation o, DiffPoly potential = DiffPoly::u()) {
    PsiDO h(o);
    h.add_term({1, 1}, DiffPoly::one());
    h.add_term({0, 0}, std::move(potential));
    return h;
}

// One side's Lax series, truncated after generator index K:
//   L_i = d^-1 (d^2 + g_0 + d^-1 g_1 d^-1 + d^-2 g_2 d^-2 + ...)
// with g = v for i = 1 and g = w for i = 2, in normal form. Exact down
// to the floor -(2K+2); the first omitted generator enters at -(2K+3).
struct LOperator {
    int which;       // 1 or 2
    unsigned depth;  // K
    PsiDO op;
};

inline LOperator build_L(int which, unsigned depth) {
    const Orientation o = which == 1 ? Orientation::d1 : Orientation::d2;
    const int mu = -(2 * static_cast<int>(depth) + 2);
    PsiDO op(o, mu);
    op.add_term({1, 0}, DiffPoly::one());
    for (unsigned m = 0; m <= depth; ++m) {
        // d^-(m+1) g_m d^-m, leading exponent -(2m+1)
        const int lead = -(2 * static_cast<int>(m) + 1);
        for (int l = 0; lead - l >= mu; ++l) {
            DiffPoly dg = which == 1 ? DiffPoly::v(m, l) : DiffPoly::w(m, l);
            op.add_term({lead - l, 0},
                        Scalar(binomial(-(static_cast<long long>(m) + 1), l)) * dg);
        }
    }
    return {which, depth, op};
}

// A_{i,n} = (L_i^{2n+1})_+, an exact differential operator in d_i.
// Powers go by iterated multiplication so the precision floor moves by
// one per factor; K >= n keeps the positive part exact.
inline PsiDO compute_A(int which, unsigned n, unsigned depth, const RelationTable& table) {
    LOperator L = build_L(which, depth);
    PsiDO acc = L.op;
    for (unsigned k = 0; k < 2 * n; ++k) acc = mul(acc, L.op, table);
    if (acc.precision() && *acc.precision() > 0)
        throw InsufficientPrecision("compute_A: truncation depth " + std::to_string(depth) +
                                    " cannot expose the differential part at n = " +
                                    std::to_string(n));
    return split_parts(acc).first;
}

// Lemma-style division by H_a: the unique Q with P - Q H_a free of the
// auxiliary derivation. Peels the top aux-degree component P_N via
// Q += P_N d_aux^{N-1} d_main^-1; with rng set the level is peeled in
// random chunks instead (the remainder must not depend on the order).
struct ReduceResult {
    PsiDO r;
    PsiDO q;
};

inline ReduceResult reduce_mod_h(const PsiDO& p, const DiffPoly& potential,
                                 const RelationTable& table,
                                 std::optional<int> working_floor = std::nullopt,
                                 std::mt19937_64* rng = nullptr) {
    std::optional<int> mu;
    if (p.precision()) {
        if (working_floor && *working_floor < *p.precision())
            throw InsufficientPrecision("reduce_mod_h: requested floor below the operand's");
        mu = working_floor ? std::max(*working_floor, *p.precision()) : *p.precision();
    } else {
        if (p.aux_free()) return {p, PsiDO::zero(p.orientation())};
        if (!working_floor)
            throw InsufficientPrecision(
                "reduce_mod_h: an exact operand with aux terms needs a working floor");
        mu = working_floor;
    }

    const Orientation o = p.orientation();
    PsiDO work = p.truncated(mu);
    PsiDO q(o, *mu - 1);
    const PsiDO pot = PsiDO::constant(o, potential);

    for (;;) {
        int top_aux = 0;
        for (const auto& [k, c] : work.terms()) top_aux = std::max(top_aux, k.aux);
        if (top_aux == 0) break;

        std::vector<std::pair<OpKey, DiffPoly>> level;
        for (const auto& [k, c] : work.terms())
            if (k.aux == top_aux) level.emplace_back(k, c);
        if (rng && level.size() > 1) {
            std::shuffle(level.begin(), level.end(), *rng);
            const std::size_t keep =
                1 + static_cast<std::size_t>((*rng)() % level.size());
            level.resize(keep);
        }

        PsiDO qstep(o, *mu - 1);
        PsiDO removed(o, *mu);
        for (const auto& [k, c] : level) {
            qstep.add_term({k.main - 1, k.aux - 1}, c);
            removed.add_term(k, c);
        }
        q = q + qstep;
        // qstep * H = removed + qstep * potential
        work = (work - removed) - mul(qstep, pot, table);
    }
    return {work, q};
}

// B_{i,n}: the aux-free remainder of A of the opposite index divided by
// H, reoriented to main = d_i. Carried to the floor -(2K+4) so flows and
// adjoint checks at depth K stay inside the window.
inline PsiDO compute_B(int which, unsigned n, unsigned depth, const RelationTable& table) {
    const int opposite = which == 1 ? 2 : 1;
    PsiDO a_opp = compute_A(opposite, n, depth, table);
    PsiDO reor = reorient_differential(a_opp);
    const int floor = -(2 * static_cast<int>(depth) + 4);
    ReduceResult red = reduce_mod_h(reor, DiffPoly::u(), table, floor);
    return red.r;
}

// ---------------------------------------------------------------------
// Flows

enum class FlowIndex : std::uint8_t { t1 = 1, t2 = 2, reduced = 3 };

// The action of one evolutionary derivation on the canonical generators.
struct FlowValue {
    FlowIndex which{FlowIndex::t1};
    unsigned n{0};
    DiffPoly u_value;
    std::vector<DiffPoly> v_values;  // index 0..depth
    std::vector<DiffPoly> w_values;

    long depth() const { return static_cast<long>(v_values.size()) - 1; }

    const DiffPoly& value(GenKind kind, std::uint32_t index) const {
        switch (kind) {
            case GenKind::U: return u_value;
            case GenKind::V:
                if (index >= v_values.size())
                    throw DepthExceeded("flow value for v_" + std::to_string(index) +
                                        " not computed (depth " + std::to_string(depth()) + ")");
                return v_values[index];
            case GenKind::W:
                if (index >= w_values.size())
                    throw DepthExceeded("flow value for w_" + std::to_string(index) +
                                        " not computed (depth " + std::to_string(depth()) + ")");
                return w_values[index];
        }
        throw std::logic_error("unreachable");
    }
};

namespace detail {

inline PsiDO commutator(const PsiDO& a, const PsiDO& b, const RelationTable& table) {
    return mul(a, b, table) - mul(b, a, table);
}

// d_i [X, L_i] for the flow of the generator family carried by L_i.
inline PsiDO flow_extraction_operand(const PsiDO& x, const LOperator& l,
                                     const RelationTable& table) {
    PsiDO comm = commutator(x, l.op, table);
    return mul(PsiDO::main_power(l.op.orientation(), 1), comm, table);
}

}  // namespace detail

// du/dt_{i,n} = -A*_{i,n}(u)
inline DiffPoly flow_on_u(int which, unsigned n, unsigned depth, const RelationTable& table) {
    PsiDO a = compute_A(which, n, depth, table);
    return -apply(adjoint(a, table), DiffPoly::u(), table);
}

// The self-adjoint operand whose symmetric form lists dv_m/dt_{i,n}
// (family == 1) or dw_l/dt_{i,n} (family == 2).
inline PsiDO flow_operand(int which, int family, unsigned n, unsigned depth,
                          const RelationTable& table) {
    LOperator l = build_L(family, depth);
    PsiDO x = which == family ? compute_A(which, n, depth, table)
                              : compute_B(family, n, depth, table);
    return detail::flow_extraction_operand(x, l, table);
}

inline DiffPoly flow_on_generator(int which, unsigned n, GenKind kind, std::uint32_t index,
                                  unsigned depth, const RelationTable& table) {
    if (kind == GenKind::U) return flow_on_u(which, n, depth, table);
    const int family = kind == GenKind::V ? 1 : 2;
    PsiDO x = flow_operand(which, family, n, depth, table);
    auto entries = symmetric_extract(x, index, table);
    return entries.at(index);
}

// All generator values of d/dt_{i,n} down to the deepest index the
// truncation exposes on both families.
inline FlowValue flow_values(FlowIndex fi, unsigned n, unsigned depth,
                             const RelationTable& table) {
    if (fi == FlowIndex::reduced) {
        FlowValue a = flow_values(FlowIndex::t1, n, depth, table);
        FlowValue b = flow_values(FlowIndex::t2, n, depth, table);
        FlowValue out;
        out.which = FlowIndex::reduced;
        out.n = n;
        out.u_value = a.u_value + b.u_value;
        const std::size_t d = std::min(a.v_values.size(), b.v_values.size());
        for (std::size_t m = 0; m < d; ++m) {
            out.v_values.push_back(a.v_values[m] + b.v_values[m]);
            out.w_values.push_back(a.w_values[m] + b.w_values[m]);
        }
        return out;
    }
    const int which = fi == FlowIndex::t1 ? 1 : 2;
    FlowValue out;
    out.which = fi;
    out.n = n;
    out.u_value = flow_on_u(which, n, depth, table);
    PsiDO xv = flow_operand(which, 1, n, depth, table);
    PsiDO xw = flow_operand(which, 2, n, depth, table);
    auto cap = [](const PsiDO& x) {
        return x.precision() ? static_cast<unsigned>(std::max(0, -*x.precision() / 2))
                             : 0u;  // exact operands do not occur here
    };
    const unsigned d = std::min(cap(xv), cap(xw));
    out.v_values = symmetric_extract(xv, d, table);
    out.w_values = symmetric_extract(xw, d, table);
    return out;
}

// Extends a flow to the whole algebra: evolutionary derivations commute
// with d1 and d2 and satisfy the Leibniz rule.
inline DiffPoly flow_derivation(const FlowValue& fv, const DiffPoly& p,
                                const RelationTable& table) {
    DiffPoly out;
    for (const auto& [mono, coef] : p.terms()) {
        for (std::size_t f = 0; f < mono.factors.size(); ++f) {
            const auto& [j, pw] = mono.factors[f];
            Monomial rest;
            for (std::size_t g = 0; g < mono.factors.size(); ++g) {
                if (g == f) {
                    if (pw > 1) rest.factors.emplace_back(j, pw - 1);
                } else {
                    rest.factors.push_back(mono.factors[g]);
                }
            }
            DiffPoly dj = derive_n(derive_n(fv.value(j.kind, j.index), Axis::d1, j.d1, table),
                                   Axis::d2, j.d2, table);
            Scalar scale = coef * Scalar(static_cast<long long>(pw));
            for (const auto& [mj, cj] : dj.terms()) out.add_term(mj * rest, cj * scale);
        }
    }
    return out;
}

inline DiffPoly reduced_flow(unsigned n, GenKind kind, std::uint32_t index, unsigned depth,
                             const RelationTable& table) {
    return flow_on_generator(1, n, kind, index, depth, table) +
           flow_on_generator(2, n, kind, index, depth, table);
}

// ---------------------------------------------------------------------
// Commutator decomposition  D = P d1 + Q d2 + a + R H  (all exact)

struct Decomposition {
    PsiDO p;      // aux-free, D's orientation
    PsiDO q;      // aux-free, flipped orientation
    DiffPoly a;
    PsiDO r;      // D's orientation
};

inline Decomposition decompose_commutator(const PsiDO& d, const DiffPoly& potential,
                                          const RelationTable& table) {
    if (!d.exact()) throw InsufficientPrecision("decompose_commutator: operand must be exact");
    if (auto mn = d.min_main(); mn && *mn < 0)
        throw NegativeExponent("decompose_commutator: operand must be differential");
    const Orientation o = d.orientation();
    const PsiDO pot = PsiDO::constant(o, potential);
    PsiDO work = d;
    PsiDO r(o);
    for (;;) {
        const DiffPoly* best = nullptr;
        OpKey best_key{0, 0};
        for (const auto& [k, c] : work.terms()) {
            if (k.main >= 1 && k.aux >= 1 &&
                (!best || k.main + k.aux > best_key.main + best_key.aux)) {
                best = &c;
                best_key = k;
            }
        }
        if (!best) break;
        const DiffPoly c = *best;
        PsiDO rstep = PsiDO::term(o, best_key.main - 1, best_key.aux - 1, c);
        r = r + rstep;
        // rstep * H = c d^i d^j + rstep * potential
        work = work - PsiDO::term(o, best_key.main, best_key.aux, c) - mul(rstep, pot, table);
    }
    Decomposition out{PsiDO::zero(o), PsiDO::zero(flip(o)), DiffPoly::zero(), r};
    for (const auto& [k, c] : work.terms()) {
        if (k.main == 0 && k.aux == 0)
            out.a = c;
        else if (k.aux == 0)
            out.p.add_term({k.main - 1, 0}, c);
        else if (k.main == 0)
            out.q.add_term({k.aux - 1, 0}, c);
        else
            throw std::logic_error("decompose_commutator: mixed term survived stripping");
    }
    return out;
}

}  // namespace cbkp
