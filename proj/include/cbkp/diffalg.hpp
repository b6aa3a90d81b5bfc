#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "cbkp/errors.hpp"
#include "cbkp/scalar.hpp"

namespace cbkp {

enum class Axis : std::uint8_t { d1 = 1, d2 = 2 };

inline Axis other_axis(Axis a) { return a == Axis::d1 ? Axis::d2 : Axis::d1; }

enum class GenKind : std::uint8_t { U = 0, V = 1, W = 2 };

// A jet d1^a d2^b(g) of a generator, treated as an independent
// polynomial variable. Canonical jets only: v-jets carry no d2
// derivatives and w-jets no d1 derivatives; the eliminated directions
// are supplied by a RelationTable.
struct Jet {
    GenKind kind{GenKind::U};
    std::uint32_t index{0};  // m for v(m), l for w(l); always 0 for u
    std::uint32_t d1{0};
    std::uint32_t d2{0};

    auto operator<=>(const Jet&) const = default;

    bool canonical() const {
        switch (kind) {
            case GenKind::U: return index == 0;
            case GenKind::V: return d2 == 0;
            case GenKind::W: return d1 == 0;
        }
        return false;
    }
};

inline Jet jet_u(std::uint32_t p = 0, std::uint32_t q = 0) { return Jet{GenKind::U, 0, p, q}; }
inline Jet jet_v(std::uint32_t m, std::uint32_t n = 0) { return Jet{GenKind::V, m, n, 0}; }
inline Jet jet_w(std::uint32_t l, std::uint32_t k = 0) { return Jet{GenKind::W, l, 0, k}; }

// Product of jet powers, factors sorted by the jet order.
struct Monomial {
    std::vector<std::pair<Jet, std::uint32_t>> factors;

    static Monomial unit() { return {}; }
    static Monomial jet(const Jet& j, std::uint32_t pow = 1) {
        Monomial m;
        if (pow > 0) m.factors.emplace_back(j, pow);
        return m;
    }

    bool is_unit() const { return factors.empty(); }

    std::uint32_t degree() const {
        std::uint32_t d = 0;
        for (const auto& [j, p] : factors) d += p;
        return d;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial out;
        out.factors.reserve(a.factors.size() + b.factors.size());
        auto ia = a.factors.begin(), ib = b.factors.begin();
        while (ia != a.factors.end() && ib != b.factors.end()) {
            if (ia->first < ib->first)
                out.factors.push_back(*ia++);
            else if (ib->first < ia->first)
                out.factors.push_back(*ib++);
            else {
                out.factors.emplace_back(ia->first, ia->second + ib->second);
                ++ia;
                ++ib;
            }
        }
        out.factors.insert(out.factors.end(), ia, a.factors.end());
        out.factors.insert(out.factors.end(), ib, b.factors.end());
        return out;
    }

    auto operator<=>(const Monomial& o) const {
        return std::lexicographical_compare_three_way(
            factors.begin(), factors.end(), o.factors.begin(), o.factors.end());
    }
    bool operator==(const Monomial& o) const { return factors == o.factors; }
};

class RelationTable;

// A differential polynomial: sparse sum of monomials in canonical jets
// with Gaussian-rational coefficients. Zero coefficients are never
// stored, so structural equality is semantic equality.
class DiffPoly {
  public:
    using TermMap = std::map<Monomial, Scalar>;

    DiffPoly() = default;
    explicit DiffPoly(Scalar c) { add_term(Monomial::unit(), std::move(c)); }

    static DiffPoly zero() { return DiffPoly(); }
    static DiffPoly one() { return DiffPoly(Scalar(1)); }
    static DiffPoly constant(Scalar c) { return DiffPoly(std::move(c)); }
    static DiffPoly jet(const Jet& j) {
        DiffPoly p;
        p.add_term(Monomial::jet(j), Scalar(1));
        return p;
    }
    static DiffPoly u(std::uint32_t p = 0, std::uint32_t q = 0) { return jet(jet_u(p, q)); }
    static DiffPoly v(std::uint32_t m, std::uint32_t n = 0) { return jet(jet_v(m, n)); }
    static DiffPoly w(std::uint32_t l, std::uint32_t k = 0) { return jet(jet_w(l, k)); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
    }
    Scalar constant_term() const {
        auto it = terms_.find(Monomial::unit());
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    void add_term(const Monomial& m, Scalar c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    DiffPoly& operator+=(const DiffPoly& o) {
        for (const auto& [m, c] : o.terms_) {
            auto [it, fresh] = terms_.emplace(m, c);
            if (!fresh) {
                it->second += c;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }
        return *this;
    }
    DiffPoly& operator-=(const DiffPoly& o) {
        for (const auto& [m, c] : o.terms_) {
            auto [it, fresh] = terms_.emplace(m, -c);
            if (!fresh) {
                it->second -= c;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }
        return *this;
    }
    DiffPoly operator-() const {
        DiffPoly out;
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }
    DiffPoly& operator*=(const Scalar& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator*(const Scalar& s, DiffPoly p) { return p *= s; }

    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
        if (a.terms_.empty() || b.terms_.empty()) return DiffPoly();
        if (a.is_constant()) {
            DiffPoly out = b;
            return out *= a.constant_term();
        }
        if (b.is_constant()) {
            DiffPoly out = a;
            return out *= b.constant_term();
        }
        DiffPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
        return out;
    }
    DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }

    DiffPoly pow(unsigned n) const {
        DiffPoly out = one();
        for (unsigned k = 0; k < n; ++k) out *= *this;
        return out;
    }

    bool operator==(const DiffPoly& o) const { return terms_ == o.terms_; }

    // Largest generator index of the given kind occurring, or -1.
    long max_index(GenKind kind) const {
        long mx = -1;
        for (const auto& [m, c] : terms_)
            for (const auto& [j, p] : m.factors)
                if (j.kind == kind) mx = std::max(mx, static_cast<long>(j.index));
        return mx;
    }

  private:
    TermMap terms_;
};

// The involution: v-jets and w-jets swap (with d1 <-> d2), u-jets
// transpose their derivative exponents, scalars conjugate.
inline Jet tau_jet(const Jet& j) {
    switch (j.kind) {
        case GenKind::U: return jet_u(j.d2, j.d1);
        case GenKind::V: return jet_w(j.index, j.d1);
        case GenKind::W: return jet_v(j.index, j.d2);
    }
    return j;
}

inline DiffPoly tau(const DiffPoly& p) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
        Monomial im = Monomial::unit();
        for (const auto& [j, pw] : m.factors) im = im * Monomial::jet(tau_jet(j), pw);
        out.add_term(im, c.conj());
    }
    return out;
}

// Rewriting rules for the eliminated jet directions: dv[m] = d2(v_m) and
// dw[l] = d1(w_l), to a fixed depth. Frozen after construction; the jet
// chains d1^n(dv[m]) / d2^k(dw[l]) are memoized internally.
class RelationTable {
  public:
    RelationTable() : depth_(-1) {}
    RelationTable(std::vector<DiffPoly> dv, std::vector<DiffPoly> dw)
        : depth_(static_cast<long>(dv.size()) - 1), dv_(std::move(dv)), dw_(std::move(dw)) {
        if (dv_.size() != dw_.size())
            throw std::invalid_argument("RelationTable: dv/dw size mismatch");
        if (depth_ >= 0) {
            if (!(dv_[0] == DiffPoly::u(1, 0)))
                throw std::logic_error("RelationTable: d2(v_0) != d1(u)");
            if (!(dw_[0] == DiffPoly::u(0, 1)))
                throw std::logic_error("RelationTable: d1(w_0) != d2(u)");
        }
        if (depth_ >= 1) {
            // Forced by the defining relation at the d1^-3 slot:
            // d2(v_1) = u d1(v_0) - d1(u) v_0.
            DiffPoly expect = DiffPoly::u() * DiffPoly::v(0, 1) - DiffPoly::u(1, 0) * DiffPoly::v(0);
            if (!(dv_[1] == expect))
                throw std::logic_error("RelationTable: d2(v_1) does not match the defining relations");
        }
        // dv entries live in the u/v subalgebra and dw entries in u/w, so
        // the memoized jet chains never re-enter the table.
        for (const auto& p : dv_)
            if (p.max_index(GenKind::W) >= 0)
                throw std::invalid_argument("RelationTable: w jet in a d2(v) entry");
        for (const auto& p : dw_)
            if (p.max_index(GenKind::V) >= 0)
                throw std::invalid_argument("RelationTable: v jet in a d1(w) entry");
    }

    RelationTable(RelationTable&& o) noexcept
        : depth_(o.depth_),
          dv_(std::move(o.dv_)),
          dw_(std::move(o.dw_)),
          memo_dv_(std::move(o.memo_dv_)),
          memo_dw_(std::move(o.memo_dw_)) {}

    static const RelationTable& empty() {
        static const RelationTable t;
        return t;
    }

    long depth() const { return depth_; }

    const DiffPoly& dv(std::uint32_t m) const {
        if (static_cast<long>(m) > depth_)
            throw DepthExceeded("relation table depth " + std::to_string(depth_) +
                                " < v index " + std::to_string(m));
        return dv_[m];
    }
    const DiffPoly& dw(std::uint32_t l) const {
        if (static_cast<long>(l) > depth_)
            throw DepthExceeded("relation table depth " + std::to_string(depth_) +
                                " < w index " + std::to_string(l));
        return dw_[l];
    }

    // d1^n(d2(v_m)) and d2^k(d1(w_l)); memoized, safe for concurrent reads.
    const DiffPoly& dv_jet(std::uint32_t m, std::uint32_t n) const;
    const DiffPoly& dw_jet(std::uint32_t l, std::uint32_t k) const;

  private:
    long depth_;
    std::vector<DiffPoly> dv_, dw_;
    mutable std::mutex memo_mutex_;
    mutable std::map<std::pair<std::uint32_t, std::uint32_t>, DiffPoly> memo_dv_, memo_dw_;
};

DiffPoly derive(const DiffPoly& p, Axis axis, const RelationTable& table);

// Derivative of a single jet as a polynomial.
inline DiffPoly derive_jet(const Jet& j, Axis axis, const RelationTable& table) {
    switch (j.kind) {
        case GenKind::U:
            return axis == Axis::d1 ? DiffPoly::u(j.d1 + 1, j.d2) : DiffPoly::u(j.d1, j.d2 + 1);
        case GenKind::V:
            if (axis == Axis::d1) return DiffPoly::v(j.index, j.d1 + 1);
            return table.dv_jet(j.index, j.d1);
        case GenKind::W:
            if (axis == Axis::d2) return DiffPoly::w(j.index, j.d2 + 1);
            return table.dw_jet(j.index, j.d2);
    }
    return DiffPoly::zero();
}

// Leibniz rule over the factors of each monomial.
inline DiffPoly derive(const DiffPoly& p, Axis axis, const RelationTable& table) {
    DiffPoly out;
    for (const auto& [mono, coef] : p.terms()) {
        for (std::size_t f = 0; f < mono.factors.size(); ++f) {
            const auto& [j, pw] = mono.factors[f];
            Monomial rest;
            rest.factors.reserve(mono.factors.size());
            for (std::size_t g = 0; g < mono.factors.size(); ++g) {
                if (g == f) {
                    if (pw > 1) rest.factors.emplace_back(j, pw - 1);
                } else {
                    rest.factors.push_back(mono.factors[g]);
                }
            }
            DiffPoly dj = derive_jet(j, axis, table);
            Scalar scale = coef * Scalar(static_cast<long long>(pw));
            for (const auto& [mj, cj] : dj.terms()) out.add_term(mj * rest, cj * scale);
        }
    }
    return out;
}

inline DiffPoly derive_n(DiffPoly p, Axis axis, unsigned n, const RelationTable& table) {
    for (unsigned k = 0; k < n; ++k) p = derive(p, axis, table);
    return p;
}

inline const DiffPoly& RelationTable::dv_jet(std::uint32_t m, std::uint32_t n) const {
    if (static_cast<long>(m) > depth_)
        throw DepthExceeded("relation table depth " + std::to_string(depth_) + " < v index " +
                            std::to_string(m));
    std::scoped_lock lock(memo_mutex_);
    const DiffPoly* prev = nullptr;
    for (std::uint32_t k = 0; k <= n; ++k) {
        auto it = memo_dv_.find(std::make_pair(m, k));
        if (it == memo_dv_.end()) {
            DiffPoly val = (k == 0) ? dv_[m] : derive(*prev, Axis::d1, *this);
            it = memo_dv_.emplace(std::make_pair(m, k), std::move(val)).first;
        }
        prev = &it->second;
    }
    return *prev;
}

inline const DiffPoly& RelationTable::dw_jet(std::uint32_t l, std::uint32_t k) const {
    if (static_cast<long>(l) > depth_)
        throw DepthExceeded("relation table depth " + std::to_string(depth_) + " < w index " +
                            std::to_string(l));
    std::scoped_lock lock(memo_mutex_);
    const DiffPoly* prev = nullptr;
    for (std::uint32_t s = 0; s <= k; ++s) {
        auto it = memo_dw_.find(std::make_pair(l, s));
        if (it == memo_dw_.end()) {
            DiffPoly val = (s == 0) ? dw_[l] : derive(*prev, Axis::d2, *this);
            it = memo_dw_.emplace(std::make_pair(l, s), std::move(val)).first;
        }
        prev = &it->second;
    }
    return *prev;
}

}  // namespace cbkp
