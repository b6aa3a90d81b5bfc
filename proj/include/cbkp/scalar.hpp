#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cbkp {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "p", "-p" or "p/q". Built via division so that a negative
// denominator normalizes (the two-argument cpp_rational constructor
// rejects it).
inline Rational rational_from_string(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(s)));
    BigInt num{std::string(s.substr(0, slash))};
    BigInt den{std::string(s.substr(slash + 1))};
    if (den == 0) throw std::invalid_argument("rational_from_string: zero denominator");
    return Rational(num) / Rational(den);
}

inline std::string rational_to_string(const Rational& r) {
    return r.str();
}

// An exact Gaussian rational re + im*i. The base field of the engine:
// every displayed formula of the hierarchy has integer coefficients, and
// the real involution conjugates scalars.
struct Scalar {
    Rational re{};
    Rational im{};

    Scalar() = default;
    Scalar(long long n) : re(n) {}  // NOLINT(google-explicit-constructor)
    explicit Scalar(Rational r) : re(std::move(r)) {}
    Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static Scalar unit_im() { return Scalar(Rational(0), Rational(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_real() const { return im == 0; }

    Scalar conj() const { return Scalar(re, -im); }

    Scalar operator-() const { return Scalar(-re, -im); }

    Scalar& operator+=(const Scalar& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Scalar& operator*=(const Scalar& o) {
        Rational nre = re * o.re - im * o.im;
        Rational nim = re * o.im + im * o.re;
        re = std::move(nre);
        im = std::move(nim);
        return *this;
    }
    Scalar& operator/=(const Scalar& o) {
        Rational n = o.re * o.re + o.im * o.im;
        if (n == 0) throw std::invalid_argument("Scalar: division by zero");
        Rational nre = (re * o.re + im * o.im) / n;
        Rational nim = (im * o.re - re * o.im) / n;
        re = std::move(nre);
        im = std::move(nim);
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re == b.re && a.im == b.im;
    }

    // "3", "-1/2", "i", "-i", "2i", "1+i", "1/2-3i"
    std::string str() const {
        if (im == 0) return re.str();
        std::string s;
        if (re != 0) {
            s += re.str();
            if (im > 0) s += "+";
        }
        if (im == -1)
            s += "-";
        else if (im != 1)
            s += im.str() + "*";
        s += "i";
        return s;
    }
};

// Generalized binomial C(k, l) for integer k (possibly negative) and
// l >= 0, by the product formula k(k-1)...(k-l+1)/l!.
inline Rational binomial(long long k, unsigned long l) {
    BigInt num = 1;
    BigInt den = 1;
    for (unsigned long j = 0; j < l; ++j) {
        num *= BigInt(k) - BigInt(j);
        den *= BigInt(j + 1);
    }
    return Rational(num) / Rational(den);
}

}  // namespace cbkp
