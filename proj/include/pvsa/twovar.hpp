// Series in (lambda, mu) with optional chi/gamma flags, used to compare the
// three terms of (SUSY) Jacobi identities and to certify admissibility via
// the iota_{mu,lambda} geometric expansion.
#pragma once

#include "pvsa/series.hpp"

namespace pvsa {

struct TKey {
    int a = 0;  // lambda power
    int b = 0;  // mu power
    int chi = 0;
    int gam = 0;
    auto operator<=>(const TKey&) const = default;
};

class TwoVar {
public:
    TwoVar() = default;
    explicit TwoVar(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    const ContextPtr& context() const { return ctx_; }
    const std::map<TKey, DiffPoly>& terms() const { return c_; }

    bool lambda_truncated() const { return ltrunc_; }
    bool mu_truncated() const { return mtrunc_; }
    bool diag_truncated() const { return dtrunc_; }
    int lambda_floor() const { return ltrunc_ ? lfloor_ : kNoFloor; }
    int mu_floor() const { return mtrunc_ ? mfloor_ : kNoFloor; }
    int diag_floor() const { return dtrunc_ ? dfloor_ : kNoFloor; }
    bool exact() const { return !ltrunc_ && !mtrunc_ && !dtrunc_; }

    void raise_lambda_floor(int f) {
        lfloor_ = ltrunc_ ? std::max(lfloor_, f) : f;
        ltrunc_ = true;
        drop_unknown();
    }
    void raise_mu_floor(int f) {
        mfloor_ = mtrunc_ ? std::max(mfloor_, f) : f;
        mtrunc_ = true;
        drop_unknown();
    }
    void raise_diag_floor(int f) {
        dfloor_ = dtrunc_ ? std::max(dfloor_, f) : f;
        dtrunc_ = true;
        drop_unknown();
    }

    bool known(const TKey& k) const {
        if (ltrunc_ && k.a < lfloor_) return false;
        if (mtrunc_ && k.b < mfloor_) return false;
        if (dtrunc_ && k.a + k.b < dfloor_) return false;
        return true;
    }

    void add_term(const TKey& k, const DiffPoly& p) {
        if (p.is_zero() || !known(k)) return;
        auto it = c_.find(k);
        if (it == c_.end()) {
            c_.emplace(k, p);
        } else {
            it->second += p;
            if (it->second.is_zero()) c_.erase(it);
        }
    }

    TwoVar operator-() const {
        TwoVar r = *this;
        for (auto& [k, v] : r.c_) v = -v;
        return r;
    }
    TwoVar& operator+=(const TwoVar& o) {
        if (!ctx_) ctx_ = o.ctx_;
        if (o.ltrunc_) raise_lambda_floor(o.lfloor_);
        if (o.mtrunc_) raise_mu_floor(o.mfloor_);
        if (o.dtrunc_) raise_diag_floor(o.dfloor_);
        for (auto& [k, v] : o.c_) add_term(k, v);
        return *this;
    }
    TwoVar& operator-=(const TwoVar& o) { return *this += -o; }
    friend TwoVar operator+(TwoVar a, const TwoVar& b) { return a += b; }
    friend TwoVar operator-(TwoVar a, const TwoVar& b) { return a -= b; }

    TwoVar lmul(const DiffPoly& p) const {
        TwoVar r = shell();
        for (auto& [k, v] : c_) r.add_term(k, p * v);
        return r;
    }

    // Attach chi/gamma flags to flag-free terms (right multiplication by the
    // odd unit, which costs no sign in normal form).
    TwoVar with_flag(int chi, int gam) const {
        TwoVar r = shell();
        for (auto& [k, v] : c_) {
            if (k.chi || k.gam) throw ContextError("with_flag expects flag-free terms");
            r.add_term(TKey{k.a, k.b, chi, gam}, v);
        }
        return r;
    }

    TwoVar scale(int sign) const {
        if (sign >= 0) return *this;
        return -*this;
    }

    // Left multiplication by lambda^n chi^e with a sign, moving the monomial
    // into normal order (coefficients left, chi before gamma).
    TwoVar mul_prefix_lambda_chi(int n, int e, int sign) const {
        TwoVar r = shell();
        if (e) r.bump_floors_for_chi();
        for (auto& [k, v] : c_) {
            for (Parity pp : {Parity::Even, Parity::Odd}) {
                DiffPoly part = v.parity_part(pp);
                if (part.is_zero()) continue;
                int s = sign;
                TKey key = k;
                key.a += n;
                if (e) {
                    if (parity_of(pp)) s = -s;  // chi past the coefficient
                    if (k.chi) {
                        key.a += 1;  // chi chi = -lambda
                        key.chi = 0;
                        s = -s;
                    } else {
                        key.chi = 1;
                    }
                }
                r.add_term(key, s < 0 ? -part : part);
            }
        }
        return r;
    }

    // Full product of normal-form terms; gamma gamma = -mu, chi gamma = -gamma chi.
    friend TwoVar operator*(const TwoVar& x, const TwoVar& y) {
        TwoVar r(x.ctx_ ? x.ctx_ : y.ctx_);
        r.inherit_product_floors(x, y);
        for (auto& [ka, va] : x.c_)
            for (auto& [kb, vb] : y.c_) {
                for (Parity pb : {Parity::Even, Parity::Odd}) {
                    DiffPoly part = vb.parity_part(pb);
                    if (part.is_zero()) continue;
                    int s = 1;
                    if ((ka.chi + ka.gam) & parity_of(pb) & 1) s = -s;
                    // gamma_a past chi_b
                    if (ka.gam & kb.chi & 1) s = -s;
                    TKey key;
                    key.a = ka.a + kb.a;
                    key.b = ka.b + kb.b;
                    int chi = ka.chi + kb.chi;
                    int gam = ka.gam + kb.gam;
                    if (chi == 2) { chi = 0; key.a += 1; s = -s; }
                    if (gam == 2) { gam = 0; key.b += 1; s = -s; }
                    key.chi = chi;
                    key.gam = gam;
                    DiffPoly w = va * part;
                    if (s < 0) w = -w;
                    r.add_term(key, w);
                }
            }
        return r;
    }

    // iota_{mu,lambda}((lambda+mu)^m), exact for m >= 0, else truncated at
    // mu powers below m - order.
    static TwoVar iota_pow(ContextPtr ctx, int m, int order) {
        TwoVar r(std::move(ctx));
        int jmax = (m >= 0) ? m : order;
        for (int j = 0; j <= jmax; ++j) {
            Rational b = binomial(m, j);
            if (b != 0)
                r.add_term(TKey{j, m - j, 0, 0},
                           DiffPoly::constant(r.ctx_, Scalar::from_rational(b)));
        }
        if (m < 0) r.raise_mu_floor(m - order);
        return r;
    }

    // (lambda + d)^n acting on every term (d = the even derivation).
    TwoVar apply_lambda_shift(int n, int floor_budget) const {
        return apply_shift_impl(n, floor_budget, true);
    }
    TwoVar apply_mu_shift(int n, int floor_budget) const {
        return apply_shift_impl(n, floor_budget, false);
    }

    // F(lambda + mu + d) acting rightward, for a one-variable series F with
    // nonnegative powers and no chi part.
    static TwoVar compose_lambda_mu(const Series& f, const TwoVar& target, int floor_budget) {
        TwoVar r(target.ctx_ ? target.ctx_ : f.context());
        r.copy_floors(target);
        for (auto& [k, v] : f.terms()) {
            if (k.chi) throw ContextError("lambda+mu substitution is non-SUSY only");
            if (k.pow < 0) throw TruncationError("negative power in lambda+mu substitution");
            TwoVar t = target;
            for (int i = 0; i < k.pow; ++i) t = t.lambda_mu_d_once(floor_budget);
            r += t.lmul(v);
        }
        if (f.truncated()) throw TruncationError("truncated series in lambda+mu substitution");
        return r;
    }

    struct Comparison {
        bool equal = false;
        bool exact = false;
        int lambda_floor = kNoFloor;
        int mu_floor = kNoFloor;
        int diag_floor = kNoFloor;
    };

    static Comparison compare(const TwoVar& a, const TwoVar& b) {
        Comparison res;
        res.exact = a.exact() && b.exact();
        TwoVar diff = a - b;
        res.lambda_floor = diff.lambda_floor();
        res.mu_floor = diff.mu_floor();
        res.diag_floor = diff.diag_floor();
        res.equal = diff.c_.empty();
        return res;
    }

    bool is_zero_on_window() const { return c_.empty(); }

private:
    TwoVar shell() const {
        TwoVar r(ctx_);
        r.copy_floors(*this);
        return r;
    }
    void drop_unknown() {
        for (auto it = c_.begin(); it != c_.end();)
            it = known(it->first) ? std::next(it) : c_.erase(it);
    }
    void copy_floors(const TwoVar& o) {
        ltrunc_ = o.ltrunc_; lfloor_ = o.lfloor_;
        mtrunc_ = o.mtrunc_; mfloor_ = o.mfloor_;
        dtrunc_ = o.dtrunc_; dfloor_ = o.dfloor_;
    }
    void bump_floors_for_chi() {
        if (ltrunc_) lfloor_ += 1;
        if (dtrunc_) dfloor_ += 1;
    }
    void inherit_product_floors(const TwoVar& x, const TwoVar& y) {
        // Unknown regions shift by the partner's known maximal powers.
        auto max_a = [](const TwoVar& t) {
            int m = 0;
            for (auto& [k, v] : t.c_) m = std::max(m, k.a + k.chi);
            return m;
        };
        auto max_b = [](const TwoVar& t) {
            int m = 0;
            for (auto& [k, v] : t.c_) m = std::max(m, k.b + k.gam);
            return m;
        };
        if (x.ltrunc_) raise_lambda_floor(x.lfloor_ + max_a(y) + 1);
        if (y.ltrunc_) raise_lambda_floor(y.lfloor_ + max_a(x) + 1);
        if (x.mtrunc_) raise_mu_floor(x.mfloor_ + max_b(y) + 1);
        if (y.mtrunc_) raise_mu_floor(y.mfloor_ + max_b(x) + 1);
        if (x.dtrunc_) raise_diag_floor(x.dfloor_ + max_a(y) + max_b(y) + 1);
        if (y.dtrunc_) raise_diag_floor(y.dfloor_ + max_a(x) + max_b(x) + 1);
    }

    TwoVar lambda_mu_d_once(int /*floor_budget*/) const {
        TwoVar r = shell();
        if (r.ltrunc_) r.lfloor_ += 1;
        if (r.mtrunc_) r.mfloor_ += 1;
        if (r.dtrunc_) r.dfloor_ += 1;
        for (auto& [k, v] : c_) {
            TKey ka = k; ka.a += 1;
            TKey kb = k; kb.b += 1;
            r.add_term(ka, v);
            r.add_term(kb, v);
            r.add_term(k, v.even_derivative());
        }
        return r;
    }

    TwoVar apply_shift_impl(int n, int floor_budget, bool lambda_slot) const {
        TwoVar r(ctx_);
        r.copy_floors(*this);
        if (lambda_slot) {
            if (r.ltrunc_) r.lfloor_ += std::max(n, 0);
            if (r.dtrunc_) r.dfloor_ += std::max(n, 0);
        } else {
            if (r.mtrunc_) r.mfloor_ += std::max(n, 0);
            if (r.dtrunc_) r.dfloor_ += std::max(n, 0);
        }
        bool cut = false;
        for (auto& [k, v] : c_) {
            if (n >= 0) {
                DiffPoly dv = v;
                for (int t = 0; t <= n; ++t) {
                    TKey key = k;
                    (lambda_slot ? key.a : key.b) += n - t;
                    r.add_term(key, dv * Scalar::from_rational(binomial(n, t)));
                    if (t < n) dv = dv.even_derivative();
                }
            } else {
                DiffPoly dv = v;
                for (int t = 0;; ++t) {
                    int pow = (lambda_slot ? k.a : k.b) + n - t;
                    int lim = lambda_slot ? (ltrunc_ ? lfloor_ : floor_budget)
                                          : (mtrunc_ ? mfloor_ : floor_budget);
                    lim = std::max(lim, floor_budget);
                    if (pow < lim) {
                        if (!dv.is_zero()) cut = true;
                        break;
                    }
                    if (dv.is_zero()) break;
                    TKey key = k;
                    (lambda_slot ? key.a : key.b) = pow;
                    r.add_term(key, dv * Scalar::from_rational(binomial(n, t)));
                    dv = dv.even_derivative();
                }
            }
        }
        if (cut) {
            if (lambda_slot)
                r.raise_lambda_floor(floor_budget);
            else
                r.raise_mu_floor(floor_budget);
        }
        return r;
    }

    ContextPtr ctx_;
    std::map<TKey, DiffPoly> c_;
    bool ltrunc_ = false, mtrunc_ = false, dtrunc_ = false;
    int lfloor_ = 0, mfloor_ = 0, dfloor_ = 0;
};

enum class Verdict { Pass, Fail, Inconclusive };

// Certifies that a two-variable series is compatible with membership in
// R[[1/lambda, 1/mu, 1/(lambda+mu)]][lambda, mu] up to the tested order: on
// every antidiagonal the sign-rectified coefficient sequence must satisfy a
// polynomial recurrence of degree <= order on its deep tail.
inline Verdict admissibility_check(const TwoVar& s, int order, std::string* detail = nullptr) {
    // chi/gamma components are tested independently with the same rule, so
    // the diagonals are keyed by (d, chi, gam) flattened into d plus flags.
    std::map<std::tuple<int, int, int>, std::map<int, DiffPoly>> diag;
    for (auto& [k, v] : s.terms()) {
        auto& row = diag[{k.a + k.b, k.chi, k.gam}];
        auto it = row.find(k.a);
        if (it == row.end())
            row.emplace(k.a, v);
        else
            it->second += v;
    }
    bool inconclusive = false;
    for (auto& [dk, row] : diag) {
        int d = std::get<0>(dk);
        // Window of lambda powers available on this diagonal.
        int hi = row.rbegin()->first;
        if (s.mu_truncated()) hi = std::max(hi, d - s.mu_floor());
        int lo = row.begin()->first;
        if (s.exact()) hi = row.rbegin()->first + order + 2;  // pad known zeros
        std::vector<DiffPoly> u;
        ContextPtr ctx = s.context();
        for (int p = lo; p <= hi; ++p) {
            auto it = row.find(p);
            TKey probe{p, d - p, std::get<1>(dk), std::get<2>(dk)};
            if (!s.known(probe) && it == row.end()) continue;  // outside window
            DiffPoly v = (it == row.end()) ? DiffPoly::zero(ctx) : it->second;
            if (p & 1) v = -v;  // rectify (-1)^p
            u.push_back(v);
        }
        if (static_cast<int>(u.size()) < order + 2) {
            inconclusive = true;
            continue;
        }
        // keep only the tail
        size_t keep = std::min(u.size(), static_cast<size_t>(2 * order + 4));
        std::vector<DiffPoly> tail(u.end() - static_cast<long>(keep), u.end());
        for (int step = 0; step <= order; ++step) {
            std::vector<DiffPoly> next;
            for (size_t i = 1; i < tail.size(); ++i) next.push_back(tail[i] - tail[i - 1]);
            tail = std::move(next);
        }
        bool bad = false;
        for (auto& v : tail)
            if (!v.is_zero()) bad = true;
        if (bad) {
            if (detail)
                *detail = "diagonal " + std::to_string(d) + " is not geometric-compatible";
            return Verdict::Fail;
        }
    }
    if (inconclusive) {
        if (detail) *detail = "window too short to certify at this order";
        return Verdict::Inconclusive;
    }
    return Verdict::Pass;
}

}  // namespace pvsa
