#pragma once

#include <json.hpp>
#include <sstream>
#include <string>

#include "cbkp/hierarchy.hpp"

namespace cbkp {

using nlohmann::json;

// ---------------------------------------------------------------------
// JSON

inline json to_json(const Scalar& s) {
    return json{{"re", rational_to_string(s.re)}, {"im", rational_to_string(s.im)}};
}

inline Scalar scalar_from_json(const json& j) {
    return Scalar(rational_from_string(j.at("re").get<std::string>()),
                  rational_from_string(j.at("im").get<std::string>()));
}

inline json to_json(const Monomial& m) {
    json out = json::array();
    for (const auto& [j, pw] : m.factors) {
        switch (j.kind) {
            case GenKind::U: out.push_back(json::array({"u", j.d1, j.d2, pw})); break;
            case GenKind::V: out.push_back(json::array({"v", j.index, j.d1, j.d2, pw})); break;
            case GenKind::W: out.push_back(json::array({"w", j.index, j.d1, j.d2, pw})); break;
        }
    }
    return out;
}

inline json to_json(const DiffPoly& p) {
    json terms = json::array();
    for (const auto& [m, c] : p.terms()) terms.push_back(json{{"c", to_json(c)}, {"m", to_json(m)}});
    return json{{"terms", terms}};
}

inline DiffPoly poly_from_json(const json& j) {
    DiffPoly out;
    for (const auto& t : j.at("terms")) {
        Scalar c = scalar_from_json(t.at("c"));
        Monomial m;
        for (const auto& f : t.at("m")) {
            const std::string kind = f.at(0).get<std::string>();
            Jet jet;
            std::uint32_t pw = 0;
            if (kind == "u") {
                jet = jet_u(f.at(1).get<std::uint32_t>(), f.at(2).get<std::uint32_t>());
                pw = f.at(3).get<std::uint32_t>();
            } else if (kind == "v") {
                jet = jet_v(f.at(1).get<std::uint32_t>(), f.at(2).get<std::uint32_t>());
                if (f.at(3).get<std::uint32_t>() != 0)
                    throw std::invalid_argument("poly_from_json: non-canonical v jet");
                pw = f.at(4).get<std::uint32_t>();
            } else if (kind == "w") {
                jet = jet_w(f.at(1).get<std::uint32_t>(), f.at(3).get<std::uint32_t>());
                if (f.at(2).get<std::uint32_t>() != 0)
                    throw std::invalid_argument("poly_from_json: non-canonical w jet");
                pw = f.at(4).get<std::uint32_t>();
            } else {
                throw std::invalid_argument("poly_from_json: unknown generator kind " + kind);
            }
            m = m * Monomial::jet(jet, pw);
        }
        out.add_term(m, c);
    }
    return out;
}

inline json to_json(const PsiDO& p) {
    json terms = json::array();
    for (const auto& [k, c] : p.terms())
        terms.push_back(json{{"main", k.main}, {"aux", k.aux}, {"coeff", to_json(c)}});
    json out{{"orientation", p.orientation() == Orientation::d1 ? "d1" : "d2"},
             {"terms", terms}};
    if (p.precision())
        out["precision"] = *p.precision();
    else
        out["precision"] = nullptr;
    return out;
}

inline PsiDO psido_from_json(const json& j) {
    const std::string o = j.at("orientation").get<std::string>();
    if (o != "d1" && o != "d2") throw std::invalid_argument("psido_from_json: bad orientation");
    std::optional<int> mu;
    if (!j.at("precision").is_null()) mu = j.at("precision").get<int>();
    PsiDO out(o == "d1" ? Orientation::d1 : Orientation::d2, mu);
    for (const auto& t : j.at("terms"))
        out.add_term({t.at("main").get<int>(), t.at("aux").get<int>()},
                     poly_from_json(t.at("coeff")));
    return out;
}

inline std::string generator_name(GenKind kind, std::uint32_t index) {
    switch (kind) {
        case GenKind::U: return "u";
        case GenKind::V: return "v" + std::to_string(index);
        case GenKind::W: return "w" + std::to_string(index);
    }
    return "?";
}

inline json to_json(const FlowValue& fv) {
    json values;
    values["u"] = to_json(fv.u_value);
    for (std::size_t m = 0; m < fv.v_values.size(); ++m)
        values["v" + std::to_string(m)] = to_json(fv.v_values[m]);
    for (std::size_t l = 0; l < fv.w_values.size(); ++l)
        values["w" + std::to_string(l)] = to_json(fv.w_values[l]);
    json out;
    if (fv.which == FlowIndex::reduced)
        out["i"] = "reduced";
    else
        out["i"] = fv.which == FlowIndex::t1 ? 1 : 2;
    out["n"] = fv.n;
    out["values"] = values;
    return out;
}

inline FlowValue flow_value_from_json(const json& j) {
    FlowValue fv;
    if (j.at("i").is_string()) {
        if (j.at("i").get<std::string>() != "reduced")
            throw std::invalid_argument("flow_value_from_json: bad index");
        fv.which = FlowIndex::reduced;
    } else {
        fv.which = j.at("i").get<int>() == 1 ? FlowIndex::t1 : FlowIndex::t2;
    }
    fv.n = j.at("n").get<unsigned>();
    const json& values = j.at("values");
    fv.u_value = poly_from_json(values.at("u"));
    for (std::size_t m = 0; values.contains("v" + std::to_string(m)); ++m)
        fv.v_values.push_back(poly_from_json(values.at("v" + std::to_string(m))));
    for (std::size_t l = 0; values.contains("w" + std::to_string(l)); ++l)
        fv.w_values.push_back(poly_from_json(values.at("w" + std::to_string(l))));
    return fv;
}

// ---------------------------------------------------------------------
// Text and LaTeX

namespace detail {

inline std::string exp_suffix_text(const char* sym, std::uint32_t e) {
    if (e == 0) return "";
    std::string s = sym;
    if (e > 1) s += "^" + std::to_string(e);
    return s;
}

inline std::string exp_suffix_latex(const char* sym, std::uint32_t e) {
    if (e == 0) return "";
    std::string s = sym;
    if (e > 1) s += "^{" + std::to_string(e) + "}";
    return s;
}

}  // namespace detail

inline std::string to_text(const Jet& j) {
    std::string base;
    switch (j.kind) {
        case GenKind::U: base = "u"; break;
        case GenKind::V: base = "v" + std::to_string(j.index); break;
        case GenKind::W: base = "w" + std::to_string(j.index); break;
    }
    std::string ds = detail::exp_suffix_text("d1", j.d1) + detail::exp_suffix_text("d2", j.d2);
    if (ds.empty()) return base;
    return ds + "(" + base + ")";
}

inline std::string to_latex(const Jet& j) {
    std::string base;
    switch (j.kind) {
        case GenKind::U: base = "u"; break;
        case GenKind::V: base = "v_{" + std::to_string(j.index) + "}"; break;
        case GenKind::W: base = "w_{" + std::to_string(j.index) + "}"; break;
    }
    std::string ds = detail::exp_suffix_latex("\\partial_1", j.d1) +
                     detail::exp_suffix_latex("\\partial_2", j.d2);
    if (ds.empty()) return base;
    return ds + "(" + base + ")";
}

inline std::string to_text(const Monomial& m) {
    if (m.is_unit()) return "1";
    std::string s;
    for (const auto& [j, pw] : m.factors) {
        if (!s.empty()) s += "*";
        s += to_text(j);
        if (pw > 1) s += "^" + std::to_string(pw);
    }
    return s;
}

inline std::string to_latex(const Monomial& m) {
    if (m.is_unit()) return "1";
    std::string s;
    for (const auto& [j, pw] : m.factors) {
        if (!s.empty()) s += " ";
        std::string f = to_latex(j);
        if (pw > 1) {
            if (j.d1 == 0 && j.d2 == 0)
                f += "^{" + std::to_string(pw) + "}";
            else
                f = "(" + f + ")^{" + std::to_string(pw) + "}";
        }
        s += f;
    }
    return s;
}

namespace detail {

inline std::string scalar_text(const Scalar& s) { return s.str(); }

inline std::string rational_latex(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    std::string num = numerator(r).str();
    bool neg = false;
    if (!num.empty() && num[0] == '-') {
        neg = true;
        num = num.substr(1);
    }
    return (neg ? std::string("-") : std::string()) + "\\tfrac{" + num + "}{" +
           denominator(r).str() + "}";
}

inline std::string scalar_latex(const Scalar& s) {
    if (s.im == 0) return rational_latex(s.re);
    std::string out;
    if (s.re != 0) {
        out += rational_latex(s.re);
        if (s.im > 0) out += "+";
    }
    if (s.im == -1)
        out += "-";
    else if (s.im != 1)
        out += rational_latex(s.im);
    return out + "i";
}

// Shared sign-aware term joiner. Each term supplies (coefficient,
// body); the coefficient merges into a leading sign when real.
struct TermWriter {
    std::string out;
    bool latex = false;

    void add(const Scalar& c, const std::string& body) {
        Scalar coef = c;
        std::string sep;
        if (!out.empty()) sep = " + ";
        if (coef.is_real() && coef.re < 0) {
            sep = out.empty() ? "-" : " - ";
            coef = -coef;
        }
        std::string cs;
        if (!coef.is_one()) {
            cs = latex ? scalar_latex(coef) : scalar_text(coef);
            if (!coef.is_real() && coef.re != 0) cs = "(" + cs + ")";
        }
        std::string piece;
        if (body.empty() || body == "1")
            piece = cs.empty() ? "1" : cs;
        else if (cs.empty())
            piece = body;
        else
            piece = latex ? cs + " " + body : cs + "*" + body;
        out += sep + piece;
    }

    std::string finish() const { return out.empty() ? "0" : out; }
};

}  // namespace detail

inline std::string to_text(const DiffPoly& p) {
    detail::TermWriter w;
    for (const auto& [m, c] : p.terms()) w.add(c, m.is_unit() ? "" : to_text(m));
    return w.finish();
}

inline std::string to_latex(const DiffPoly& p) {
    detail::TermWriter w;
    w.latex = true;
    for (const auto& [m, c] : p.terms()) w.add(c, m.is_unit() ? "" : to_latex(m));
    return w.finish();
}

namespace detail {

inline std::string op_symbol_text(Orientation o, bool main) {
    const bool d1 = (o == Orientation::d1) == main;
    return d1 ? "d1" : "d2";
}
inline std::string op_symbol_latex(Orientation o, bool main) {
    const bool d1 = (o == Orientation::d1) == main;
    return d1 ? "\\partial_1" : "\\partial_2";
}

}  // namespace detail

inline std::string to_text(const PsiDO& p) {
    detail::TermWriter w;
    for (const auto& [k, c] : p.terms()) {
        std::string op;
        if (k.main != 0) {
            op = detail::op_symbol_text(p.orientation(), true);
            if (k.main != 1) op += "^" + std::to_string(k.main);
        }
        if (k.aux != 0) {
            if (!op.empty()) op += "*";
            op += detail::op_symbol_text(p.orientation(), false);
            if (k.aux != 1) op += "^" + std::to_string(k.aux);
        }
        if (c.terms().size() == 1) {
            const auto& [m, s] = *c.terms().begin();
            std::string body = m.is_unit() ? "" : to_text(m);
            if (!op.empty()) body = body.empty() ? op : body + "*" + op;
            w.add(s, body);
        } else {
            w.add(Scalar(1), "(" + to_text(c) + ")" + (op.empty() ? "" : "*" + op));
        }
    }
    std::string s = w.finish();
    if (p.precision())
        s += " + O(" + detail::op_symbol_text(p.orientation(), true) + "^" +
             std::to_string(*p.precision() - 1) + ")";
    return s;
}

inline std::string to_latex(const PsiDO& p) {
    detail::TermWriter w;
    w.latex = true;
    for (const auto& [k, c] : p.terms()) {
        std::string op;
        if (k.main != 0) {
            op = detail::op_symbol_latex(p.orientation(), true);
            if (k.main != 1) op += "^{" + std::to_string(k.main) + "}";
        }
        if (k.aux != 0) {
            op += detail::op_symbol_latex(p.orientation(), false);
            if (k.aux != 1) op += "^{" + std::to_string(k.aux) + "}";
        }
        if (c.terms().size() == 1) {
            const auto& [m, s] = *c.terms().begin();
            std::string body = m.is_unit() ? "" : to_latex(m);
            if (!op.empty()) body = body.empty() ? op : body + " " + op;
            w.add(s, body);
        } else {
            w.add(Scalar(1), "(" + to_latex(c) + ")" + op);
        }
    }
    std::string s = w.finish();
    if (p.precision())
        s += " + O(" + detail::op_symbol_latex(p.orientation(), true) + "^{" +
             std::to_string(*p.precision() - 1) + "})";
    return s;
}

}  // namespace cbkp
