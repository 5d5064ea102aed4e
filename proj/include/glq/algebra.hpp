// The free Z3-graded algebra underneath the quantum-group engine.
//
// Seventeen generators: the inverse determinant z, the coordinates a, b, g,
// d of the 2x2 matrix, their first and second differentials, and the four
// Maurer-Cartan one-forms. Words are strings of generators; elements are
// finite Q(w)-linear combinations of words. Nothing here knows about the
// commutation relations; rewriting lives in a separate layer on top.
//
// Generator ids double as the letter order of the normal form, so sorted
// words read z^k (second differentials) (first differentials) (coordinates)
// (forms) from left to right.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glq/cyclotomic.hpp"

namespace glq {

enum class Gen : unsigned char {
    z,                     // inverse quantum determinant
    d2a, d2b, d2g, d2d,    // second differentials
    da, db, dg, dd,        // first differentials
    a, b, g, d,            // matrix coordinates
    w1, w2, w3, w4,        // Maurer-Cartan one-forms
};

inline constexpr int kGenCount = 17;

enum class LetterClass { InvDet, Diff2, Diff1, Coordinate, Form };

namespace detail {

struct GenInfo {
    const char* name;
    int grade;  // Z3 degree
    LetterClass cls;
};

inline constexpr GenInfo kGenInfo[kGenCount] = {
    {"z", 0, LetterClass::InvDet},
    {"d2a", 2, LetterClass::Diff2},
    {"d2b", 1, LetterClass::Diff2},
    {"d2g", 0, LetterClass::Diff2},
    {"d2d", 2, LetterClass::Diff2},
    {"da", 1, LetterClass::Diff1},
    {"db", 0, LetterClass::Diff1},
    {"dg", 2, LetterClass::Diff1},
    {"dd", 1, LetterClass::Diff1},
    {"a", 0, LetterClass::Coordinate},
    {"b", 2, LetterClass::Coordinate},
    {"g", 1, LetterClass::Coordinate},
    {"d", 0, LetterClass::Coordinate},
    {"w1", 1, LetterClass::Form},
    {"w2", 0, LetterClass::Form},
    {"w3", 2, LetterClass::Form},
    {"w4", 1, LetterClass::Form},
};

}  // namespace detail

inline const char* gen_name(Gen x) { return detail::kGenInfo[static_cast<int>(x)].name; }
inline int grade(Gen x) { return detail::kGenInfo[static_cast<int>(x)].grade; }
inline LetterClass letter_class(Gen x) { return detail::kGenInfo[static_cast<int>(x)].cls; }

// One application of the differential to a single letter: coordinates map
// to their first differentials, those to the second ones, and second
// differentials to zero (nullopt). Neither z nor the Maurer-Cartan forms
// are in the domain of the differential.
inline std::optional<Gen> diff_letter(Gen x) {
    switch (letter_class(x)) {
        case LetterClass::Coordinate:
        case LetterClass::Diff1:
            return static_cast<Gen>(static_cast<int>(x) - 4);
        case LetterClass::Diff2:
            return std::nullopt;
        default:
            throw std::domain_error(std::string("cannot differentiate ") + gen_name(x));
    }
}

inline Gen gen_from_name(std::string_view name) {
    for (int i = 0; i < kGenCount; ++i)
        if (name == detail::kGenInfo[i].name) return static_cast<Gen>(i);
    throw std::invalid_argument("unknown generator \"" + std::string(name) + "\"");
}

using Word = std::vector<Gen>;

inline int word_grade(const Word& w) {
    int s = 0;
    for (Gen x : w) s += grade(x);
    return s % 3;
}

inline std::string word_str(const Word& w) {
    if (w.empty()) return "1";
    std::string s = gen_name(w.front());
    for (std::size_t i = 1; i < w.size(); ++i) {
        s += '*';
        s += gen_name(w[i]);
    }
    return s;
}

// Graded lexicographic order: length first. Every relation of the algebra
// replaces a word by same-length words that are smaller in this order, which
// is what makes the rewriting terminate.
struct WordLess {
    bool operator()(const Word& x, const Word& y) const {
        if (x.size() != y.size()) return x.size() < y.size();
        return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    }
};

// A finite Q(w)-linear combination of words. Terms with coefficient zero are
// never stored, so operator== is exact equality in the free algebra.
class Element {
  public:
    using TermMap = std::map<Word, CycNum, WordLess>;

    Element() = default;

    static Element zero() { return Element(); }
    static Element one() { return from_word(Word{}); }
    static Element from_gen(Gen x) { return from_word(Word{x}); }
    static Element from_word(Word w, CycNum c = CycNum(1)) {
        Element e;
        e.add(std::move(w), c);
        return e;
    }

    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add(Word w, const CycNum& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(std::move(w), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Element& operator+=(const Element& rhs) {
        for (const auto& [w, c] : rhs.terms_) add(w, c);
        return *this;
    }
    Element& operator-=(const Element& rhs) {
        for (const auto& [w, c] : rhs.terms_) add(w, -c);
        return *this;
    }
    Element& operator*=(const CycNum& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [w, c] : terms_) c *= s;
        return *this;
    }

    friend Element operator+(Element x, const Element& y) { return x += y; }
    friend Element operator-(Element x, const Element& y) { return x -= y; }
    friend Element operator-(const Element& x) {
        Element r;
        for (const auto& [w, c] : x.terms_) r.terms_.emplace(w, -c);
        return r;
    }
    friend Element operator*(const CycNum& s, Element x) { return x *= s; }
    friend Element operator*(Element x, const CycNum& s) { return x *= s; }

    // Free product: concatenate every pair of words.
    friend Element operator*(const Element& x, const Element& y) {
        Element r;
        for (const auto& [wx, cx] : x.terms_)
            for (const auto& [wy, cy] : y.terms_) {
                Word w = wx;
                w.insert(w.end(), wy.begin(), wy.end());
                r.add(std::move(w), cx * cy);
            }
        return r;
    }
    Element& operator*=(const Element& rhs) { return *this = *this * rhs; }

    friend bool operator==(const Element&, const Element&) = default;

  private:
    TermMap terms_;
};

inline bool is_homogeneous(const Element& e) {
    int deg = -1;
    for (const auto& [w, c] : e.terms()) {
        int g = word_grade(w);
        if (deg == -1) deg = g;
        else if (g != deg) return false;
    }
    return true;
}

// Component of each Z3 degree; the three parts sum back to the input.
inline std::array<Element, 3> split_by_grade(const Element& e) {
    std::array<Element, 3> parts;
    for (const auto& [w, c] : e.terms()) parts[word_grade(w)].add(w, c);
    return parts;
}

inline std::string render(const Element& e) {
    if (e.is_zero()) return "0";
    std::string s;
    for (const auto& [w, c] : e.terms()) {
        if (!s.empty()) s += " + ";
        s += "(" + pretty(c) + ") " + word_str(w);
    }
    return s;
}

// N-fold tensor product of free-algebra elements over Q(w). Multiplication
// is graded: moving a factor of total degree p past one of degree r costs
// q^{p r}, so (x1 (x) x2)(y1 (x) y2) = q^{p(x2) p(y1)} (x1 y1 (x) x2 y2).
template <std::size_t N>
class Tensor {
  public:
    using Key = std::array<Word, N>;
    struct KeyLess {
        bool operator()(const Key& x, const Key& y) const {
            WordLess lt;
            for (std::size_t i = 0; i < N; ++i) {
                if (lt(x[i], y[i])) return true;
                if (lt(y[i], x[i])) return false;
            }
            return false;
        }
    };
    using TermMap = std::map<Key, CycNum, KeyLess>;

    Tensor() = default;

    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add(Key k, const CycNum& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(std::move(k), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Tensor& operator+=(const Tensor& rhs) {
        for (const auto& [k, c] : rhs.terms_) add(k, c);
        return *this;
    }
    Tensor& operator-=(const Tensor& rhs) {
        for (const auto& [k, c] : rhs.terms_) add(k, -c);
        return *this;
    }
    friend Tensor operator+(Tensor x, const Tensor& y) { return x += y; }
    friend Tensor operator-(Tensor x, const Tensor& y) { return x -= y; }
    friend Tensor operator-(const Tensor& x) {
        Tensor r;
        for (const auto& [k, c] : x.terms_) r.terms_.emplace(k, -c);
        return r;
    }
    friend Tensor operator*(const CycNum& s, Tensor x) {
        if (s.is_zero()) return Tensor();
        for (auto& [k, c] : x.terms_) c *= s;
        return x;
    }

    friend Tensor operator*(const Tensor& x, const Tensor& y) {
        Tensor r;
        for (const auto& [kx, cx] : x.terms_)
            for (const auto& [ky, cy] : y.terms_) {
                long twist = 0;
                for (std::size_t i = 1; i < N; ++i)
                    for (std::size_t j = 0; j < i; ++j)
                        twist += word_grade(kx[i]) * word_grade(ky[j]);
                Key k;
                for (std::size_t i = 0; i < N; ++i) {
                    k[i] = kx[i];
                    k[i].insert(k[i].end(), ky[i].begin(), ky[i].end());
                }
                r.add(std::move(k), cx * cy * q_power(twist));
            }
        return r;
    }

    friend bool operator==(const Tensor&, const Tensor&) = default;

  private:
    TermMap terms_;
};

using Tensor2 = Tensor<2>;
using Tensor3 = Tensor<3>;

inline Tensor2 tensor2(const Element& x, const Element& y) {
    Tensor2 r;
    for (const auto& [wx, cx] : x.terms())
        for (const auto& [wy, cy] : y.terms()) r.add({wx, wy}, cx * cy);
    return r;
}

inline Tensor3 tensor3(const Element& x, const Element& y, const Element& z) {
    Tensor3 r;
    for (const auto& [wx, cx] : x.terms())
        for (const auto& [wy, cy] : y.terms())
            for (const auto& [wz, cz] : z.terms()) r.add({wx, wy, wz}, cx * cy * cz);
    return r;
}

template <std::size_t N>
inline std::string render(const Tensor<N>& t) {
    if (t.is_zero()) return "0";
    std::string s;
    for (const auto& [k, c] : t.terms()) {
        if (!s.empty()) s += " + ";
        s += "(" + pretty(c) + ") ";
        for (std::size_t i = 0; i < N; ++i) {
            if (i) s += " (x) ";
            s += word_str(k[i]);
        }
    }
    return s;
}

}  // namespace glq
