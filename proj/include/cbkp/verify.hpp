#pragma once

#include <array>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <tuple>

#include "cbkp/relations.hpp"
#include "cbkp/serialize.hpp"

namespace cbkp {

enum class CheckStatus : std::uint8_t { pass, fail, insufficient_precision };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::insufficient_precision: return "insufficient_precision";
    }
    return "?";
}

// One verified instance of a lemma / proposition / theorem, with the
// truncation parameters used. A fail carries a reproducible residual.
struct CheckReport {
    std::string check_id;
    json params;
    CheckStatus status{CheckStatus::pass};
    std::optional<json> witness;
    double elapsed_ms{0.0};
    std::optional<unsigned> retried_from;
};

inline json to_json(const CheckReport& r) {
    json out{{"check_id", r.check_id},
             {"params", r.params},
             {"status", to_string(r.status)},
             {"elapsed_ms", r.elapsed_ms}};
    if (r.witness) out["witness"] = *r.witness;
    if (r.retried_from) out["retried_from_depth"] = *r.retried_from;
    return out;
}

// Shared, memoized build products for a verification run. The relation
// table and the derived operators are immutable once built; the caches
// are guarded so checks may fan out concurrently.
class Workspace {
  public:
    const RelationTable& table(unsigned depth) {
        std::scoped_lock lock(mutex_);
        auto it = tables_.find(depth);
        if (it == tables_.end())
            it = tables_.emplace(depth, std::make_unique<RelationTable>(build_relation_table(depth)))
                     .first;
        return *it->second;
    }

    const PsiDO& A(int which, unsigned n, unsigned depth) {
        const auto key = std::make_tuple(which, n, depth);
        std::scoped_lock lock(mutex_);
        auto it = a_cache_.find(key);
        if (it == a_cache_.end())
            it = a_cache_.emplace(key, compute_A(which, n, depth, table_unlocked(depth))).first;
        return it->second;
    }

    const PsiDO& B(int which, unsigned n, unsigned depth) {
        const auto key = std::make_tuple(which, n, depth);
        std::scoped_lock lock(mutex_);
        auto it = b_cache_.find(key);
        if (it == b_cache_.end())
            it = b_cache_.emplace(key, compute_B(which, n, depth, table_unlocked(depth))).first;
        return it->second;
    }

    const FlowValue& flows(FlowIndex fi, unsigned n, unsigned depth) {
        const auto key = std::make_tuple(static_cast<int>(fi), n, depth);
        std::scoped_lock lock(mutex_);
        auto it = flow_cache_.find(key);
        if (it == flow_cache_.end())
            it = flow_cache_.emplace(key, flow_values(fi, n, depth, table_unlocked(depth))).first;
        return it->second;
    }

  private:
    const RelationTable& table_unlocked(unsigned depth) {
        auto it = tables_.find(depth);
        if (it == tables_.end())
            it = tables_.emplace(depth, std::make_unique<RelationTable>(build_relation_table(depth)))
                     .first;
        return *it->second;
    }

    std::recursive_mutex mutex_;
    std::map<unsigned, std::unique_ptr<RelationTable>> tables_;
    std::map<std::tuple<int, unsigned, unsigned>, PsiDO> a_cache_, b_cache_;
    std::map<std::tuple<int, unsigned, unsigned>, FlowValue> flow_cache_;
};

namespace detail {

inline Orientation orient_of(int which) { return which == 1 ? Orientation::d1 : Orientation::d2; }

inline CheckReport run_check(const std::string& id, json params,
                             const std::function<std::optional<json>()>& body) {
    using Clock = std::chrono::steady_clock;
    CheckReport r;
    r.check_id = id;
    r.params = std::move(params);
    const auto start = Clock::now();
    try {
        r.witness = body();
        r.status = r.witness ? CheckStatus::fail : CheckStatus::pass;
    } catch (const InsufficientPrecision& e) {
        r.status = CheckStatus::insufficient_precision;
        r.witness = json{{"error", e.what()}};
    } catch (const DepthExceeded& e) {
        r.status = CheckStatus::insufficient_precision;
        r.witness = json{{"error", e.what()}};
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return r;
}

inline json psido_witness(const char* label, const PsiDO& p) {
    return json{{label, to_json(p)}};
}

// Applies an evolutionary derivation to an operator coefficient-wise.
inline PsiDO flow_of_operator(const FlowValue& fv, const PsiDO& p, const RelationTable& table) {
    PsiDO out(p.orientation(), p.precision());
    for (const auto& [k, c] : p.terms()) out.add_term(k, flow_derivation(fv, c, table));
    return out;
}

}  // namespace detail

// Lemma: A_{i,n} d_i^-1 is a self-adjoint differential operator.
inline CheckReport check_lemma2(Workspace& ws, int i, unsigned n, unsigned depth) {
    return detail::run_check(
        "lemma2", json{{"i", i}, {"n", n}, {"K", depth}}, [&]() -> std::optional<json> {
            const RelationTable& t = ws.table(depth);
            const PsiDO& a = ws.A(i, n, depth);
            PsiDO shifted = mul(a, PsiDO::main_power(a.orientation(), -1), t);
            if (auto mn = shifted.min_main(); mn && *mn < 0)
                return detail::psido_witness("A_times_inverse", shifted);
            PsiDO resid = shifted - adjoint(shifted, t);
            if (!resid.is_zero()) return detail::psido_witness("self_adjoint_residual", resid);
            return std::nullopt;
        });
}

// Lemma: H A_{i,n} + A*_{i,n} H = A*_{i,n}(u) exactly.
inline CheckReport check_lemma3(Workspace& ws, int i, unsigned n, unsigned depth) {
    return detail::run_check(
        "lemma3", json{{"i", i}, {"n", n}, {"K", depth}}, [&]() -> std::optional<json> {
            const RelationTable& t = ws.table(depth);
            const Orientation o = detail::orient_of(i);
            const PsiDO& a = ws.A(i, n, depth);
            PsiDO h = make_schrodinger(o);
            PsiDO astar = adjoint(a, t);
            DiffPoly rhs = apply(astar, DiffPoly::u(), t);
            PsiDO resid = mul(h, a, t) + mul(astar, h, t) - PsiDO::constant(o, rhs);
            if (!resid.is_zero()) return detail::psido_witness("residual", resid);
            return std::nullopt;
        });
}

// Lemma: d_i B_{i,n} is self-adjoint within the precision floor.
inline CheckReport check_lemma4(Workspace& ws, int i, unsigned n, unsigned depth) {
    return detail::run_check(
        "lemma4", json{{"i", i}, {"n", n}, {"K", depth}}, [&]() -> std::optional<json> {
            const RelationTable& t = ws.table(depth);
            const PsiDO& b = ws.B(i, n, depth);
            PsiDO x = mul(PsiDO::main_power(b.orientation(), 1), b, t);
            PsiDO resid = x - adjoint(x, t);
            if (!resid.is_zero()) return detail::psido_witness("self_adjoint_residual", resid);
            return std::nullopt;
        });
}

// Lemma: dA_{i,n}/dt_{j,m} - dA_{j,m}/dt_{i,n} + [A_{i,n}, A_{j,m}]
// decomposes as R H with R skew-adjoint, and R = 0 when i = j.
inline CheckReport check_zero_curvature(Workspace& ws, int i, unsigned n, int j, unsigned m,
                                        unsigned depth) {
    return detail::run_check(
        "zero_curvature", json{{"i", i}, {"n", n}, {"j", j}, {"m", m}, {"K", depth}},
        [&]() -> std::optional<json> {
            const RelationTable& t = ws.table(depth);
            PsiDO a_in = ws.A(i, n, depth);
            PsiDO a_jm = ws.A(j, m, depth);
            if (i != j) {
                if (i == 2) a_in = reorient_differential(a_in);
                if (j == 2) a_jm = reorient_differential(a_jm);
            }
            const FlowValue& fv_jm = ws.flows(j == 1 ? FlowIndex::t1 : FlowIndex::t2, m, depth);
            const FlowValue& fv_in = ws.flows(i == 1 ? FlowIndex::t1 : FlowIndex::t2, n, depth);
            PsiDO z = detail::flow_of_operator(fv_jm, a_in, t) -
                      detail::flow_of_operator(fv_in, a_jm, t) +
                      (mul(a_in, a_jm, t) - mul(a_jm, a_in, t));
            Decomposition dec = decompose_commutator(z, DiffPoly::u(), t);
            json w;
            if (!dec.p.is_zero()) w["P"] = to_json(dec.p);
            if (!dec.q.is_zero()) w["Q"] = to_json(dec.q);
            if (!dec.a.is_zero()) w["a"] = to_json(dec.a);
            PsiDO skew = dec.r + adjoint(dec.r, t);
            if (!skew.is_zero()) w["R_plus_R_star"] = to_json(skew);
            if (i == j && !dec.r.is_zero()) w["R"] = to_json(dec.r);
            if (!w.empty()) return w;
            return std::nullopt;
        });
}

// Theorem instance: the two flows commute on the given generators.
inline CheckReport check_commutativity(Workspace& ws, int i, unsigned n, int j, unsigned m,
                                       const std::vector<std::pair<GenKind, std::uint32_t>>& gens,
                                       unsigned depth) {
    json gnames = json::array();
    for (const auto& [kind, index] : gens) gnames.push_back(generator_name(kind, index));
    return detail::run_check(
        "commutativity",
        json{{"i", i}, {"n", n}, {"j", j}, {"m", m}, {"gens", gnames}, {"K", depth}},
        [&]() -> std::optional<json> {
            const RelationTable& t = ws.table(depth);
            const FlowValue& fv_in = ws.flows(i == 1 ? FlowIndex::t1 : FlowIndex::t2, n, depth);
            const FlowValue& fv_jm = ws.flows(j == 1 ? FlowIndex::t1 : FlowIndex::t2, m, depth);
            json w;
            for (const auto& [kind, index] : gens) {
                DiffPoly lhs = flow_derivation(fv_jm, fv_in.value(kind, index), t);
                DiffPoly rhs = flow_derivation(fv_in, fv_jm.value(kind, index), t);
                if (!(lhs == rhs)) w[generator_name(kind, index)] = to_json(lhs - rhs);
            }
            if (!w.empty()) return w;
            return std::nullopt;
        });
}

// The involution intertwines the two sides and fixes the reduced flows.
inline CheckReport check_tau(Workspace& ws, unsigned n, unsigned depth) {
    return detail::run_check(
        "tau", json{{"n", n}, {"K", depth}}, [&]() -> std::optional<json> {
            json w;
            PsiDO ta = tau(ws.A(1, n, depth));
            if (!(ta == ws.A(2, n, depth))) w["tau_A"] = to_json(ta - ws.A(2, n, depth));
            PsiDO tb = tau(ws.B(1, n, depth));
            if (!equal_within_precision(tb, ws.B(2, n, depth)))
                w["tau_B"] = to_json(tb - ws.B(2, n, depth));
            const FlowValue& red = ws.flows(FlowIndex::reduced, n, depth);
            if (!(tau(red.u_value) == red.u_value)) w["tau_flow_u"] = to_json(tau(red.u_value));
            const std::size_t d = std::min(red.v_values.size(), red.w_values.size());
            for (std::size_t k = 0; k < d; ++k) {
                if (!(tau(red.v_values[k]) == red.w_values[k]))
                    w["tau_flow_v" + std::to_string(k)] =
                        to_json(tau(red.v_values[k]) - red.w_values[k]);
            }
            if (!w.empty()) return w;
            return std::nullopt;
        });
}

// The defining relation in commutator form: [L_i, d_aux + d_i^-1 u] = 0
// down to the floor -2K-2.
inline CheckReport check_defrel(Workspace& ws, int i, unsigned depth) {
    return detail::run_check(
        "defrel", json{{"i", i}, {"K", depth}}, [&]() -> std::optional<json> {
            const RelationTable& t = ws.table(depth);
            const Orientation o = detail::orient_of(i);
            LOperator l = build_L(i, depth);
            PsiDO op = PsiDO::term(o, 0, 1, DiffPoly::one()) +
                       mul(PsiDO::main_power(o, -1, -(2 * static_cast<int>(depth) + 3)),
                           PsiDO::constant(o, DiffPoly::u()), t);
            PsiDO resid = mul(l.op, op, t) - mul(op, l.op, t);
            if (!resid.is_zero()) return detail::psido_witness("residual", resid);
            return std::nullopt;
        });
}

// First reduced flow against the target evolution equation: term-for-term
// match after the substitution v = 3 v_0, and the constraint line matches
// the first rewriting rule.
inline CheckReport derive_nv(Workspace& ws, unsigned depth) {
    return detail::run_check(
        "nv_recovery", json{{"K", depth}}, [&]() -> std::optional<json> {
            const RelationTable& t = ws.table(depth);
            const FlowValue& red = ws.flows(FlowIndex::reduced, 1, depth);
            auto d1 = [&](const DiffPoly& p) { return derive(p, Axis::d1, t); };
            auto d2 = [&](const DiffPoly& p) { return derive(p, Axis::d2, t); };
            const DiffPoly u = DiffPoly::u();
            const DiffPoly v0 = DiffPoly::v(0);
            const DiffPoly w0 = DiffPoly::w(0);
            json w;

            // du/dt_1 = (d1^3 + d2^3)(u) + 3 d1(v0 u) + 3 d2(w0 u)
            DiffPoly line1 = d1(d1(d1(u))) + d2(d2(d2(u))) + Scalar(3) * d1(v0 * u) +
                             Scalar(3) * d2(w0 * u);
            if (!(red.u_value == line1)) w["du_dt1"] = to_json(red.u_value - line1);

            // dv0/dt_1 = (d1^3 + d2^3)(v0) + 6 v0 d1(v0) + 3 d1(u w0) + 3 d1(v1)
            DiffPoly line2 = d1(d1(d1(v0))) + d2(d2(d2(v0))) + Scalar(6) * (v0 * d1(v0)) +
                             Scalar(3) * d1(u * w0) + Scalar(3) * d1(DiffPoly::v(1));
            if (!(red.v_values.at(0) == line2)) w["dv0_dt1"] = to_json(red.v_values.at(0) - line2);

            // the evolution equation at E = 0 with v = 3 v0, vbar = 3 w0,
            // dz = d1, dzbar = d2
            DiffPoly big_v = Scalar(3) * v0;
            DiffPoly big_vbar = Scalar(3) * w0;
            DiffPoly nv_rhs = d1(d1(d1(u))) + d2(d2(d2(u))) + d1(u * big_v) + d2(u * big_vbar);
            if (!(red.u_value == nv_rhs)) w["nv_equation"] = to_json(red.u_value - nv_rhs);

            // constraint 3 dz(u) = dzbar(v): both sides rewrite to 3 d1(u)
            DiffPoly constraint = Scalar(3) * d1(u) - d2(big_v);
            if (!constraint.is_zero()) w["constraint"] = to_json(constraint);
            return std::nullopt;
        });
}

// ---------------------------------------------------------------------
// Randomized identity checks (seed-fixed)

namespace prop {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

inline Scalar rand_scalar(Rng& rng) {
    Rational re(rng.range(-3, 3));
    Rational im = rng.range(0, 3) == 0 ? Rational(rng.range(-2, 2)) : Rational(0);
    return Scalar(re, im);
}

inline Jet rand_jet(Rng& rng) {
    switch (rng.range(0, 2)) {
        case 0: return jet_u(rng.range(0, 1), rng.range(0, 1));
        case 1: return jet_v(rng.range(0, 2), rng.range(0, 1));
        default: return jet_w(rng.range(0, 2), rng.range(0, 1));
    }
}

inline Monomial rand_monomial(Rng& rng) {
    Monomial m = Monomial::unit();
    const int nf = rng.range(0, 2);
    for (int f = 0; f < nf; ++f) m = m * Monomial::jet(rand_jet(rng), rng.range(1, 2));
    return m;
}

inline DiffPoly rand_poly(Rng& rng) {
    DiffPoly p;
    const int nt = rng.range(0, 2);
    for (int t = 0; t < nt; ++t) p.add_term(rand_monomial(rng), rand_scalar(rng));
    return p;
}

inline PsiDO rand_psido(Rng& rng, Orientation o, int floor = -4) {
    PsiDO p(o, floor);
    const int nt = rng.range(1, 2);
    for (int t = 0; t < nt; ++t)
        p.add_term({rng.range(-2, 2), rng.range(0, 1)}, rand_poly(rng));
    return p;
}

}  // namespace prop

inline CheckReport check_properties_diffalg(Workspace& ws, std::uint64_t seed, unsigned cases) {
    return detail::run_check(
        "properties_diffalg", json{{"seed", seed}, {"cases", cases}},
        [&]() -> std::optional<json> {
            const RelationTable& t = ws.table(3);
            prop::Rng rng(seed);
            for (unsigned c = 0; c < cases; ++c) {
                DiffPoly p = prop::rand_poly(rng);
                DiffPoly q = prop::rand_poly(rng);
                json fail{{"case", c}, {"p", to_json(p)}, {"q", to_json(q)}};
                for (Axis ax : {Axis::d1, Axis::d2}) {
                    DiffPoly lhs = derive(p * q, ax, t);
                    DiffPoly rhs = derive(p, ax, t) * q + p * derive(q, ax, t);
                    if (!(lhs == rhs)) {
                        fail["law"] = "leibniz";
                        return fail;
                    }
                }
                if (!(derive(derive(p, Axis::d1, t), Axis::d2, t) ==
                      derive(derive(p, Axis::d2, t), Axis::d1, t))) {
                    fail["law"] = "commuting_derivations";
                    return fail;
                }
                if (!(tau(tau(p)) == p)) {
                    fail["law"] = "tau_involutive";
                    return fail;
                }
                if (!(tau(p * q) == tau(p) * tau(q))) {
                    fail["law"] = "tau_multiplicative";
                    return fail;
                }
                if (!(tau(derive(p, Axis::d1, t)) == derive(tau(p), Axis::d2, t))) {
                    fail["law"] = "tau_intertwines_derivations";
                    return fail;
                }
                DiffPoly zc = p - DiffPoly::constant(p.constant_term());
                if (!zc.is_zero() && derive(zc, Axis::d2, t).is_zero()) {
                    fail["law"] = "constants_are_scalars";
                    return fail;
                }
            }
            return std::nullopt;
        });
}

inline CheckReport check_properties_psido(Workspace& ws, std::uint64_t seed, unsigned cases) {
    return detail::run_check(
        "properties_psido", json{{"seed", seed}, {"cases", cases}},
        [&]() -> std::optional<json> {
            const RelationTable& t = ws.table(3);
            prop::Rng rng(seed);
            for (unsigned c = 0; c < cases; ++c) {
                const Orientation o = rng.range(0, 1) == 0 ? Orientation::d1 : Orientation::d2;
                PsiDO p = prop::rand_psido(rng, o);
                PsiDO q = prop::rand_psido(rng, o);
                PsiDO r = prop::rand_psido(rng, o);
                json fail{{"case", c}};
                PsiDO pq = mul(p, q, t);
                if (!equal_within_precision(mul(pq, r, t), mul(p, mul(q, r, t), t))) {
                    fail["law"] = "associativity";
                    return fail;
                }
                if (!equal_within_precision(adjoint(pq, t),
                                            mul(adjoint(q, t), adjoint(p, t), t))) {
                    fail["law"] = "adjoint_antihomomorphism";
                    return fail;
                }
                if (!equal_within_precision(adjoint(adjoint(p, t), t), p)) {
                    fail["law"] = "adjoint_involutive";
                    return fail;
                }
                // precision soundness: redo the product from a shallower floor
                // and compare on the shallow window
                PsiDO shallow = mul(p.truncated(-3), q.truncated(-3), t);
                const PsiDO& deep = pq;
                for (const auto& [k, cc] : shallow.terms()) {
                    if (shallow.precision() && k.main < *shallow.precision()) continue;
                    DiffPoly dc = coeff_at(deep, k.main, k.aux);
                    if (!(dc == cc)) {
                        fail["law"] = "precision_soundness";
                        return fail;
                    }
                }
                for (const auto& [k, cc] : deep.terms()) {
                    if (shallow.precision() && k.main < *shallow.precision()) continue;
                    if (!(coeff_at(shallow, k.main, k.aux) == cc)) {
                        fail["law"] = "precision_soundness";
                        return fail;
                    }
                }
                // order grading: the top graded component of a product is
                // the product of top symbols, nonzero over a domain
                if (!p.is_zero() && !q.is_zero()) {
                    if (!deep.diff_order() ||
                        *deep.diff_order() != *p.diff_order() + *q.diff_order()) {
                        fail["law"] = "order_grading";
                        return fail;
                    }
                }
            }
            return std::nullopt;
        });
}

// Lemma-style division: remainder free of the auxiliary derivation,
// identity P = r + Q H within precision, and r independent of the
// peeling order.
inline CheckReport check_reduction(Workspace& ws, std::uint64_t seed, unsigned cases) {
    return detail::run_check(
        "properties_reduction", json{{"seed", seed}, {"cases", cases}},
        [&]() -> std::optional<json> {
            const RelationTable& t = ws.table(3);
            prop::Rng rng(seed);
            for (unsigned c = 0; c < cases; ++c) {
                const Orientation o = rng.range(0, 1) == 0 ? Orientation::d1 : Orientation::d2;
                PsiDO p = prop::rand_psido(rng, o, -6);
                json fail{{"case", c}, {"p", to_json(p)}};
                ReduceResult red = reduce_mod_h(p, DiffPoly::u(), t);
                if (!red.r.aux_free()) {
                    fail["law"] = "remainder_aux_free";
                    return fail;
                }
                PsiDO recon = red.r + mul(red.q, make_schrodinger(o), t);
                if (!equal_within_precision(recon, p)) {
                    fail["law"] = "division_identity";
                    return fail;
                }
                std::mt19937_64 peel(seed ^ (c * 977u + 13u));
                ReduceResult red2 = reduce_mod_h(p, DiffPoly::u(), t, std::nullopt, &peel);
                if (!equal_within_precision(red.r, red2.r)) {
                    fail["law"] = "remainder_unique";
                    return fail;
                }
            }
            return std::nullopt;
        });
}

// ---------------------------------------------------------------------
// Suites

enum class Suite : std::uint8_t { all, lemmas, theorem, tau, nv, properties };

inline std::optional<Suite> suite_from_string(const std::string& s) {
    if (s == "all") return Suite::all;
    if (s == "lemmas") return Suite::lemmas;
    if (s == "theorem") return Suite::theorem;
    if (s == "tau") return Suite::tau;
    if (s == "nv") return Suite::nv;
    if (s == "properties") return Suite::properties;
    return std::nullopt;
}

struct SuiteOptions {
    unsigned depth = 6;
    std::uint64_t seed = 0;
    unsigned property_cases = 200;
    bool retry_deeper = true;  // retry once at K+2 on insufficient precision
};

namespace detail {

template <typename Fn>
inline CheckReport with_retry(const SuiteOptions& opt, Fn fn) {
    CheckReport first = fn(opt.depth);
    if (first.status != CheckStatus::insufficient_precision || !opt.retry_deeper) return first;
    CheckReport second = fn(opt.depth + 2);
    second.retried_from = opt.depth;
    return second;
}

}  // namespace detail

inline std::vector<CheckReport> run_suite(Workspace& ws, Suite suite, const SuiteOptions& opt) {
    std::vector<CheckReport> out;
    auto add = [&](auto fn) { out.push_back(detail::with_retry(opt, fn)); };

    const bool lemmas = suite == Suite::all || suite == Suite::lemmas;
    const bool theorem = suite == Suite::all || suite == Suite::theorem;
    const bool tau_suite = suite == Suite::all || suite == Suite::tau;
    const bool nv = suite == Suite::all || suite == Suite::nv;
    const bool props = suite == Suite::all || suite == Suite::properties;

    if (lemmas) {
        for (int i : {1, 2})
            for (unsigned n : {0u, 1u, 2u}) {
                add([&, i, n](unsigned k) { return check_lemma2(ws, i, n, k); });
                add([&, i, n](unsigned k) { return check_lemma3(ws, i, n, k); });
                add([&, i, n](unsigned k) { return check_lemma4(ws, i, n, k); });
            }
        for (unsigned n : {0u, 1u})
            for (unsigned m : {0u, 1u})
                add([&, n, m](unsigned k) { return check_zero_curvature(ws, 1, n, 2, m, k); });
        add([&](unsigned k) { return check_zero_curvature(ws, 1, 0, 1, 1, k); });
        add([&](unsigned k) { return check_zero_curvature(ws, 2, 0, 2, 1, k); });
        add([&](unsigned k) { return check_zero_curvature(ws, 1, 1, 1, 2, k); });
        for (int i : {1, 2}) add([&, i](unsigned k) { return check_defrel(ws, i, k); });
    }
    if (theorem) {
        const std::vector<std::pair<GenKind, std::uint32_t>> gens = {
            {GenKind::U, 0}, {GenKind::V, 0}, {GenKind::V, 1}, {GenKind::W, 0}, {GenKind::W, 1}};
        const std::vector<std::array<unsigned, 4>> tuples = {
            {1, 1, 2, 1}, {1, 1, 2, 0}, {1, 2, 2, 1}, {1, 1, 1, 2}};
        for (const auto& tu : tuples)
            add([&, tu](unsigned k) {
                return check_commutativity(ws, static_cast<int>(tu[0]), tu[1],
                                           static_cast<int>(tu[2]), tu[3], gens, k);
            });
    }
    if (tau_suite)
        for (unsigned n : {0u, 1u, 2u}) add([&, n](unsigned k) { return check_tau(ws, n, k); });
    if (nv) add([&](unsigned k) { return derive_nv(ws, k); });
    if (props) {
        out.push_back(check_properties_diffalg(ws, opt.seed, opt.property_cases));
        out.push_back(check_properties_psido(ws, opt.seed, opt.property_cases));
        out.push_back(check_reduction(ws, opt.seed, std::max(1u, opt.property_cases / 10)));
    }

    std::stable_sort(out.begin(), out.end(), [](const CheckReport& a, const CheckReport& b) {
        if (a.check_id != b.check_id) return a.check_id < b.check_id;
        return a.params.dump() < b.params.dump();
    });
    return out;
}

inline int suite_exit_code(const std::vector<CheckReport>& reports) {
    bool insufficient = false;
    for (const auto& r : reports) {
        if (r.status == CheckStatus::fail) return 1;
        if (r.status == CheckStatus::insufficient_precision) insufficient = true;
    }
    return insufficient ? 2 : 0;
}

}  // namespace cbkp
