// Formal series in the outer indeterminates: lambda-series for PVSA brackets
// and (lambda, chi)-series for SUSY Lambda-brackets, with explicit truncation
// floors for the non-local case. Normal form keeps DiffPoly coefficients to
// the left of lambda^n chi^i, with chi^2 -> -lambda and D chi = -chi D + 2 lambda.
#pragma once

#include <climits>
#include <functional>
#include <map>
#include <optional>

#include "pvsa/diffpoly.hpp"

namespace pvsa {

class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr int kDefaultFloor = -8;
constexpr int kNoFloor = INT_MIN / 2;

struct SKey {
    int pow = 0;
    int chi = 0;  // 0 or 1
    auto operator<=>(const SKey&) const = default;
};

class Series {
public:
    Series() = default;
    explicit Series(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static Series zero(ContextPtr ctx) { return Series(std::move(ctx)); }

    static Series from_poly(const DiffPoly& p, int pow = 0, int chi = 0) {
        Series s(p.context());
        s.add_term(SKey{pow, chi}, p);
        return s;
    }

    static Series monomial(ContextPtr ctx, Scalar c, int pow, int chi = 0) {
        return from_poly(DiffPoly::constant(std::move(ctx), std::move(c)), pow, chi);
    }

    const ContextPtr& context() const { return ctx_; }
    bool is_zero() const { return c_.empty() && !truncated_; }
    bool has_no_known_terms() const { return c_.empty(); }
    bool truncated() const { return truncated_; }
    int floor() const { return truncated_ ? floor_ : kNoFloor; }
    const std::map<SKey, DiffPoly>& terms() const { return c_; }

    // Exact coefficient; throws if it lies below the truncation floor.
    DiffPoly at(int pow, int chi = 0) const {
        if (truncated_ && pow < floor_)
            throw TruncationError("coefficient below truncation floor");
        auto it = c_.find(SKey{pow, chi});
        return it == c_.end() ? DiffPoly::zero(ctx_) : it->second;
    }

    int max_pow() const {  // over known terms, chi bump included
        int m = kNoFloor;
        for (auto& [k, v] : c_) m = std::max(m, k.pow + k.chi);
        return m;
    }
    int min_pow() const {
        int m = -kNoFloor;
        for (auto& [k, v] : c_) m = std::min(m, k.pow);
        return m;
    }

    Series operator-() const {
        Series r = *this;
        for (auto& [k, v] : r.c_) v = -v;
        return r;
    }
    Series& operator+=(const Series& o) {
        if (!ctx_) ctx_ = o.ctx_;
        merge_floor(o);
        for (auto& [k, v] : o.c_) add_term(k, v);
        drop_below_floor();
        return *this;
    }
    Series& operator-=(const Series& o) { return *this += -o; }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }

    friend Series operator*(const Series& a, const Scalar& s) {
        Series r = a;
        std::map<SKey, DiffPoly> out;
        for (auto& [k, v] : r.c_) {
            DiffPoly w = v * s;
            if (!w.is_zero()) out.emplace(k, std::move(w));
        }
        r.c_ = std::move(out);
        return r;
    }

    // Left multiplication by a coefficient polynomial (no Koszul sign: the
    // lambda^n chi^i monomial stays to the right).
    Series lmul(const DiffPoly& p) const {
        Series r(ctx_ ? ctx_ : p.context());
        r.copy_floor(*this);
        for (auto& [k, v] : c_) r.add_term(k, p * v);
        r.drop_below_floor();
        return r;
    }

    // Right multiplication: (g lambda^n chi^i) c = (-1)^{i p(c)} (g c) lambda^n chi^i.
    Series rmul(const DiffPoly& p) const {
        Series r(ctx_ ? ctx_ : p.context());
        r.copy_floor(*this);
        for (Parity pp : {Parity::Even, Parity::Odd}) {
            DiffPoly part = p.parity_part(pp);
            if (part.is_zero()) continue;
            int ps = parity_of(pp);
            for (auto& [k, v] : c_) {
                DiffPoly w = v * part;
                if ((k.chi & ps) & 1) w = -w;
                r.add_term(k, w);
            }
        }
        r.drop_below_floor();
        return r;
    }

    // chi . S  (left multiplication by the odd indeterminate).
    Series mul_chi_left() const {
        Series r(ctx_);
        for (auto& [k, v] : c_) {
            for (Parity pp : {Parity::Even, Parity::Odd}) {
                DiffPoly part = v.parity_part(pp);
                if (part.is_zero()) continue;
                if (parity_of(pp)) part = -part;
                if (k.chi == 0)
                    r.add_term(SKey{k.pow, 1}, part);
                else
                    r.add_term(SKey{k.pow + 1, 0}, -part);
            }
        }
        if (truncated_) {
            r.truncated_ = true;
            r.floor_ = floor_ + 1;  // chi^2 bumps unknown powers by one
        }
        r.drop_below_floor();
        return r;
    }

    // (chi + D) S.
    Series apply_chi_d() const {
        const Context* cx = require_ctx();
        if (!cx->susy()) throw ContextError("chi+D needs a SUSY context");
        Series r(ctx_);
        for (auto& [k, v] : c_) {
            r.add_term(k, v.derivative());  // D acting on the coefficient
            for (Parity pp : {Parity::Even, Parity::Odd}) {
                DiffPoly part = v.parity_part(pp);
                if (part.is_zero()) continue;
                int sg = parity_of(pp) ? -1 : 1;
                if (k.chi == 0) {
                    r.add_term(SKey{k.pow, 1}, sg < 0 ? -part : part);
                } else {
                    // chi chi = -lambda, and D chi -> 2 lambda on the unit.
                    r.add_term(SKey{k.pow + 1, 0}, part * Scalar::integer(-sg));
                    r.add_term(SKey{k.pow + 1, 0}, part * Scalar::integer(2 * sg));
                }
            }
        }
        if (truncated_) {
            r.truncated_ = true;
            r.floor_ = floor_ + 1;
        }
        r.drop_below_floor();
        return r;
    }

    // (lambda + d)^n S; negative n expands the tail down to floor_budget.
    Series apply_lambda_shift(int n, int floor_budget) const {
        Series r(ctx_);
        bool cut = false;
        for (auto& [k, v] : c_) {
            if (n >= 0) {
                DiffPoly dv = v;
                for (int t = 0; t <= n; ++t) {
                    Rational b = binomial(n, t);
                    if (b != 0) r.add_term(SKey{k.pow + n - t, k.chi},
                                           dv * Scalar::from_rational(b));
                    if (t < n) dv = dv.even_derivative();
                }
            } else {
                DiffPoly dv = v;
                for (int t = 0;; ++t) {
                    int pow = k.pow + n - t;
                    if (pow < floor_budget) {
                        if (!dv.is_zero()) cut = true;
                        break;
                    }
                    if (dv.is_zero()) break;
                    r.add_term(SKey{pow, k.chi}, dv * Scalar::from_rational(binomial(n, t)));
                    dv = dv.even_derivative();
                }
            }
        }
        if (cut) r.raise_floor(floor_budget);
        if (truncated_) r.raise_floor(floor_ + std::max(n, 0));
        r.drop_below_floor();
        return r;
    }

    // (lambda + d)^n (chi + D)^i S.
    Series apply_shift(int n, int chi, int floor_budget) const {
        Series s = chi ? apply_chi_d() : *this;
        return s.apply_lambda_shift(n, floor_budget);
    }

    // F(Lambda + nabla) G, the rightward substitution used everywhere.
    static Series compose(const Series& f, const Series& g, int floor_budget) {
        ContextPtr ctx = f.ctx_ ? f.ctx_ : g.ctx_;
        Series r(ctx);
        for (auto& [k, v] : f.c_) {
            Series term = g.apply_shift(k.pow, k.chi, floor_budget).lmul(v);
            r += term;
        }
        if (f.truncated_ && !g.c_.empty())
            r.raise_floor(f.floor_ + g.max_pow() + 1);
        r.drop_below_floor();
        return r;
    }

    // left arrow substitution: sum (-lambda-d)^n (-chi-D)^i S_{(n|i)} with the
    // coefficients read in scalar-left convention. In our coefficient-left
    // normal form this coincides with the formal adjoint.
    Series left_substitute(int floor_budget) const { return adjoint(floor_budget); }

    // Formal adjoint: (-lambda-d)^n on plain terms, with the extra
    // coefficient-parity sign on chi-terms from the SUSY adjoint formula.
    Series adjoint(int floor_budget) const {
        Series r(ctx_);
        for (auto& [k, v] : c_) {
            for (Parity pp : {Parity::Even, Parity::Odd}) {
                DiffPoly part = v.parity_part(pp);
                if (part.is_zero()) continue;
                Series shifted = Series::from_poly(part).apply_shift(k.pow, k.chi, floor_budget);
                int sign = ((k.pow + k.chi) & 1) ? -1 : 1;
                if (k.chi && parity_of(pp)) sign = -sign;
                if (sign < 0) shifted = -shifted;
                r += shifted;
            }
        }
        if (truncated_) r.raise_floor(floor_ + (require_ctx()->susy() ? 1 : 0));
        r.drop_below_floor();
        return r;
    }

    Series parity_part(Parity want) const {
        Series r(ctx_);
        r.copy_floor(*this);
        for (auto& [k, v] : c_) {
            DiffPoly part = v.parity_part(parity_from_int(parity_of(want) ^ k.chi));
            if (!part.is_zero()) r.add_term(k, part);
        }
        return r;
    }

    std::optional<Parity> parity() const {
        std::optional<Parity> p;
        const Context* cx = require_ctx();
        for (auto& [k, v] : c_)
            for (auto& [m, c] : v.terms()) {
                Parity mp = parity_from_int(
                    parity_of(DiffPoly::monomial_parity(*cx, m)) ^ k.chi);
                if (!p)
                    p = mp;
                else if (*p != mp)
                    return std::nullopt;
            }
        if (!p) return Parity::Even;
        return p;
    }

    struct Comparison {
        bool equal = false;   // on the mutually known window
        bool exact = false;   // both operands exact
        int window_floor = kNoFloor;
    };

    static Comparison compare(const Series& a, const Series& b) {
        Comparison res;
        res.exact = !a.truncated_ && !b.truncated_;
        res.window_floor = std::max(a.floor(), b.floor());
        Series diff = a - b;
        res.equal = true;
        for (auto& [k, v] : diff.c_)
            if (k.pow >= res.window_floor && !v.is_zero()) res.equal = false;
        return res;
    }

    bool is_zero_on_window() const {
        for (auto& [k, v] : c_)
            if (!v.is_zero()) return false;
        return true;
    }

    void add_term(const SKey& k, const DiffPoly& p) {
        if (p.is_zero()) return;
        if (truncated_ && k.pow < floor_) return;
        auto it = c_.find(k);
        if (it == c_.end()) {
            c_.emplace(k, p);
        } else {
            it->second += p;
            if (it->second.is_zero()) c_.erase(it);
        }
    }

    void raise_floor(int f) {
        if (!truncated_) {
            truncated_ = true;
            floor_ = f;
        } else {
            floor_ = std::max(floor_, f);
        }
        drop_below_floor();
    }

private:
    const Context* require_ctx() const {
        if (!ctx_) throw ContextError("series needs an algebra context");
        return ctx_.get();
    }
    void copy_floor(const Series& o) {
        truncated_ = o.truncated_;
        floor_ = o.floor_;
    }
    void merge_floor(const Series& o) {
        if (o.truncated_) raise_floor(o.floor_);
    }
    void drop_below_floor() {
        if (!truncated_) return;
        for (auto it = c_.begin(); it != c_.end();)
            it = (it->first.pow < floor_) ? c_.erase(it) : std::next(it);
    }

    ContextPtr ctx_;
    std::map<SKey, DiffPoly> c_;
    bool truncated_ = false;
    int floor_ = 0;
};

// Convenience: the rightward action F(lambda + d) t for a plain polynomial
// target; returns the expanded series (a DiffPoly when no lambda remains).
inline Series substitute_arrow(const Series& f, const DiffPoly& target,
                               int floor_budget = kDefaultFloor) {
    return Series::compose(f, Series::from_poly(target), floor_budget);
}

}  // namespace pvsa
