// Exact arithmetic in the cyclotomic field Q(w), where w is a primitive cube
// root of unity. Every scalar of the engine lives here: the deformation
// parameter q is identified with w, so q^3 = 1 and 1 + q + q^2 = 0.
//
// A CycNum is stored on the basis {1, w} with gcd-reduced rational slots, so
// equality of scalars is structural equality. Rendering prefers the q/q2
// spelling used everywhere else in the library; parse accepts q, q2 and w.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace glq {

using Rational = boost::multiprecision::cpp_rational;

struct CycNum {
    Rational re;  // coefficient of 1
    Rational om;  // coefficient of w

    CycNum() = default;
    CycNum(long v) : re(v) {}
    explicit CycNum(const Rational& r) : re(r) {}
    CycNum(Rational r, Rational o) : re(std::move(r)), om(std::move(o)) {}

    bool is_zero() const { return re == 0 && om == 0; }

    friend bool operator==(const CycNum&, const CycNum&) = default;

    CycNum& operator+=(const CycNum& rhs) {
        re += rhs.re;
        om += rhs.om;
        return *this;
    }
    CycNum& operator-=(const CycNum& rhs) {
        re -= rhs.re;
        om -= rhs.om;
        return *this;
    }
    friend CycNum operator+(CycNum lhs, const CycNum& rhs) { return lhs += rhs; }
    friend CycNum operator-(CycNum lhs, const CycNum& rhs) { return lhs -= rhs; }
    friend CycNum operator-(const CycNum& x) { return CycNum(-x.re, -x.om); }

    // (a + b w)(c + d w) = ac + (ad + bc) w + bd w^2, and w^2 = -1 - w.
    friend CycNum operator*(const CycNum& x, const CycNum& y) {
        return CycNum(x.re * y.re - x.om * y.om,
                      x.re * y.om + x.om * y.re - x.om * y.om);
    }
    CycNum& operator*=(const CycNum& rhs) { return *this = *this * rhs; }
};

inline CycNum omega() { return CycNum(Rational(0), Rational(1)); }

// q^n with the exponent reduced mod 3; negative exponents are fine.
inline CycNum q_power(long n) {
    switch (((n % 3) + 3) % 3) {
        case 0: return CycNum(1);
        case 1: return omega();
        default: return CycNum(Rational(-1), Rational(-1));
    }
}

// Multiplying by the conjugate a + b w^2 clears w from the denominator:
// (a + b w)(a + b w^2) = a^2 - ab + b^2, the field norm.
inline CycNum cyc_inv(const CycNum& x) {
    if (x.is_zero())
        throw std::domain_error("cyc_inv: division by zero");
    Rational norm = x.re * x.re - x.re * x.om + x.om * x.om;
    return CycNum((x.re - x.om) / norm, -x.om / norm);
}

inline CycNum cyc_add(const CycNum& x, const CycNum& y) { return x + y; }
inline CycNum cyc_sub(const CycNum& x, const CycNum& y) { return x - y; }
inline CycNum cyc_mul(const CycNum& x, const CycNum& y) { return x * y; }

namespace detail {

inline std::string rat_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// Magnitude of a rational times a symbol: "q", "3*q", "1/2*q2", ...
inline std::string coeff_sym(const Rational& c, const char* sym) {
    if (c == 1) return sym;
    if (c == -1) return std::string("-") + sym;
    return rat_str(c) + "*" + sym;
}

}  // namespace detail

// Canonical one-line rendering. Pure multiples of 1, q and q2 keep their
// short spelling; mixed values are two-term with the q part leading whenever
// that makes the leading sign positive ("q-1" rather than "-1+q").
inline std::string pretty(const CycNum& x) {
    using detail::coeff_sym;
    using detail::rat_str;
    if (x.om == 0) return rat_str(x.re);
    if (x.re == x.om) return coeff_sym(-x.re, "q2");  // r*q2 = -r - r*w
    if (x.re == 0) return coeff_sym(x.om, "q");
    if (x.om > 0) {
        std::string s = coeff_sym(x.om, "q");
        return s + (x.re > 0 ? "+" : "-") + rat_str(abs(x.re));
    }
    return rat_str(x.re) + "-" + coeff_sym(-x.om, "q");
}

// Parses the output of pretty() and hand-written spellings: a sign-separated
// sum of terms, each "RAT", "RAT*SYM" or "SYM" with SYM one of q, q2, w.
inline CycNum parse_cyc(const std::string& text) {
    size_t i = 0;
    auto fail = [&](const char* why) {
        throw std::invalid_argument("parse_cyc: " + std::string(why) + " at offset " +
                                    std::to_string(i) + " in \"" + text + "\"");
    };
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto parse_digits = [&]() -> boost::multiprecision::cpp_int {
        size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (start == i) fail("expected digits");
        return boost::multiprecision::cpp_int(text.substr(start, i - start));
    };

    CycNum total;
    bool first = true;
    skip_ws();
    if (i == text.size()) fail("empty input");
    while (i < text.size()) {
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;

        Rational value(1);
        bool have_number = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            boost::multiprecision::cpp_int num = parse_digits();
            boost::multiprecision::cpp_int den = 1;
            if (i < text.size() && text[i] == '/') {
                ++i;
                den = parse_digits();
                if (den == 0) fail("zero denominator");
            }
            value = Rational(num, den);
            have_number = true;
        }

        const char* sym = nullptr;
        bool want_sym = !have_number;
        if (have_number && i < text.size() && text[i] == '*') {
            ++i;
            want_sym = true;
        }
        if (want_sym) {
            if (text.compare(i, 2, "q2") == 0) {
                sym = "q2";
                i += 2;
            } else if (i < text.size() && (text[i] == 'q' || text[i] == 'w')) {
                sym = "q";
                i += 1;
            } else {
                fail("expected q, q2 or w");
            }
        }

        if (sign < 0) value = -value;
        if (sym == nullptr)
            total.re += value;
        else if (sym[1] == '2') {  // q2 = -1 - w
            total.re -= value;
            total.om -= value;
        } else {
            total.om += value;
        }
        skip_ws();
    }
    return total;
}

// Solves a x = b by exact Gauss-Jordan elimination over Q(w). The right-hand
// side entries only need scalar multiplication and subtraction, so b may hold
// scalars or algebra elements alike. Overdetermined systems are fine as long
// as they are consistent and of full column rank; anything else throws
// std::domain_error.
template <class V>
std::vector<V> solve_linear(std::vector<std::vector<CycNum>> a, std::vector<V> b) {
    const std::size_t m = b.size();
    const std::size_t n = m == 0 ? 0 : a.front().size();
    if (m < n) throw std::domain_error("solve_linear: underdetermined system");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < m && a[pivot][col].is_zero()) ++pivot;
        if (pivot == m) throw std::domain_error("solve_linear: singular system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        CycNum inv = cyc_inv(a[col][col]);
        for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
        b[col] = inv * b[col];
        for (std::size_t row = 0; row < m; ++row) {
            if (row == col || a[row][col].is_zero()) continue;
            CycNum f = a[row][col];
            for (std::size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
            b[row] -= f * b[col];
        }
    }
    for (std::size_t row = n; row < m; ++row)
        if (!b[row].is_zero()) throw std::domain_error("solve_linear: inconsistent system");
    b.resize(n);
    return b;
}

}  // namespace glq
