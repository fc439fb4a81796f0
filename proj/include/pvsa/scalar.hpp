// Exact scalar coefficients: Laurent polynomials in named formal parameters
// (such as the level k) with rational coefficients.
#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvsa {

using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Parses "3", "-3", "3/2", "-3/2".
inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline int parity_sign(long e) { return (e % 2 == 0) ? 1 : -1; }

// Binomial coefficient for integer (possibly negative) n and r >= 0.
inline Rational binomial(long n, long r) {
    if (r < 0) return 0;
    Rational acc = 1;
    for (long t = 0; t < r; ++t) acc *= Rational(n - t, t + 1);
    acc.canonicalize();
    return acc;
}

class ScalarError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sparse Laurent polynomial over Q. Exponent vectors are indexed by the
// owning context's parameter list and stored with trailing zeros trimmed, so
// the zero-parameter case degenerates to a plain rational.
class Scalar {
public:
    using Expo = std::vector<int>;

    Scalar() = default;

    static Scalar from_rational(const Rational& r) {
        Scalar s;
        if (r != 0) s.t_[{}] = r;
        return s;
    }
    static Scalar integer(long n) { return from_rational(Rational(n)); }
    static Scalar one() { return integer(1); }

    static Scalar parameter(int index, int power = 1) {
        if (index < 0) throw ScalarError("parameter index out of range");
        Scalar s;
        if (power != 0) {
            Expo e(static_cast<size_t>(index) + 1, 0);
            e[static_cast<size_t>(index)] = power;
            s.t_[std::move(e)] = 1;
        } else {
            s.t_[{}] = 1;
        }
        return s;
    }

    static Scalar monomial(const Rational& r, Expo e) {
        Scalar s;
        if (r != 0) {
            trim(e);
            s.t_[std::move(e)] = r;
        }
        return s;
    }

    bool is_zero() const { return t_.empty(); }
    bool is_one() const { return is_rational() && rational_value() == 1; }
    bool is_rational() const {
        return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty());
    }
    Rational rational_value() const {
        if (t_.empty()) return 0;
        if (!is_rational()) throw ScalarError("scalar is not a plain rational");
        return t_.begin()->second;
    }
    bool is_monomial() const { return t_.size() == 1; }
    size_t term_count() const { return t_.size(); }

    Scalar operator-() const {
        Scalar r;
        for (auto& [e, c] : t_) r.t_[e] = -c;
        return r;
    }

    Scalar& operator+=(const Scalar& o) {
        for (auto& [e, c] : o.t_) {
            auto it = t_.find(e);
            if (it == t_.end()) {
                t_.emplace(e, c);
            } else {
                it->second += c;
                if (it->second == 0) t_.erase(it);
            }
        }
        return *this;
    }
    Scalar& operator-=(const Scalar& o) { return *this += -o; }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        Scalar r;
        for (auto& [ea, ca] : a.t_)
            for (auto& [eb, cb] : b.t_) {
                Expo e = add_expo(ea, eb);
                Rational c = ca * cb;
                auto it = r.t_.find(e);
                if (it == r.t_.end()) {
                    if (c != 0) r.t_.emplace(std::move(e), std::move(c));
                } else {
                    it->second += c;
                    if (it->second == 0) r.t_.erase(it);
                }
            }
        return r;
    }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    friend Scalar operator*(const Scalar& a, const Rational& b) {
        return a * from_rational(b);
    }
    friend Scalar operator*(const Rational& a, const Scalar& b) {
        return from_rational(a) * b;
    }

    Scalar pow(int n) const {
        if (n < 0) return monomial_inverse().pow(-n);
        Scalar r = one();
        for (int i = 0; i < n; ++i) r *= *this;
        return r;
    }

    // Inverse of a single-term scalar; the only division the ring supports.
    Scalar monomial_inverse() const {
        if (t_.size() != 1) throw ScalarError("scalar is not an invertible monomial");
        auto& [e, c] = *t_.begin();
        Expo inv(e.size());
        for (size_t i = 0; i < e.size(); ++i) inv[i] = -e[i];
        return monomial(1 / c, std::move(inv));
    }

    Scalar divide_by_monomial(const Scalar& d) const { return *this * d.monomial_inverse(); }

    bool operator==(const Scalar& o) const { return t_ == o.t_; }

    const std::map<Expo, Rational>& terms() const { return t_; }

    // Total degree in the parameters, counting negative exponents; 0 for 0.
    long total_degree() const {
        long deg = 0;
        for (auto& [e, c] : t_)
            for (int x : e) deg = std::max(deg, static_cast<long>(std::abs(x)));
        return deg;
    }

    std::string to_string(const std::vector<std::string>& param_names) const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [e, c] : t_) {
            Rational a = c;
            if (!first) {
                os << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            first = false;
            bool unit = (a == 1);
            bool have_params = false;
            for (int x : e)
                if (x != 0) have_params = true;
            if (!unit || !have_params) {
                if (a.get_den() == 1)
                    os << a;
                else
                    os << "(" << a << ")";
                if (have_params) os << "*";
            }
            bool sep = false;
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (sep) os << "*";
                sep = true;
                os << (i < param_names.size() ? param_names[i] : "p" + std::to_string(i));
                if (e[i] != 1) os << "^" << e[i];
            }
        }
        return os.str();
    }

private:
    static void trim(Expo& e) {
        while (!e.empty() && e.back() == 0) e.pop_back();
    }
    static Expo add_expo(const Expo& a, const Expo& b) {
        Expo e(std::max(a.size(), b.size()), 0);
        for (size_t i = 0; i < a.size(); ++i) e[i] += a[i];
        for (size_t i = 0; i < b.size(); ++i) e[i] += b[i];
        trim(e);
        return e;
    }

    std::map<Expo, Rational> t_;
};

}  // namespace pvsa
