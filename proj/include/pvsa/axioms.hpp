// Axiom verification for (SUSY) lambda-brackets: sesquilinearity,
// skewsymmetry, Leibniz rules and the Jacobi identity compared inside the
// two-variable space via the iota identification.
#pragma once

#include <functional>
#include <random>

#include "pvsa/bracket.hpp"
#include "pvsa/twovar.hpp"

namespace pvsa {

using BracketFn = std::function<Series(const DiffPoly&, const DiffPoly&)>;

struct CheckItem {
    std::string axiom;
    std::string instance;
    Verdict verdict = Verdict::Pass;
    std::string detail;  // residual or truncation certificate
};

struct CheckReport {
    std::vector<CheckItem> items;
    bool ok(bool allow_truncated = true) const {
        for (auto& it : items) {
            if (it.verdict == Verdict::Fail) return false;
            if (!allow_truncated && it.verdict != Verdict::Pass) return false;
        }
        return true;
    }
    void append(CheckReport other) {
        for (auto& it : other.items) items.push_back(std::move(it));
    }
};

inline Verdict series_verdict(const Series& residual) {
    if (!residual.is_zero_on_window()) return Verdict::Fail;
    return residual.truncated() ? Verdict::Inconclusive : Verdict::Pass;
}

inline Verdict twovar_verdict(const TwoVar& residual) {
    if (!residual.is_zero_on_window()) return Verdict::Fail;
    return residual.exact() ? Verdict::Pass : Verdict::Inconclusive;
}

inline std::string truncation_note(const Series& r) {
    return r.truncated() ? "verified for lambda powers >= " + std::to_string(r.floor()) : "exact";
}

inline std::string truncation_note(const TwoVar& r) {
    if (r.exact()) return "exact";
    std::string s = "verified on window";
    if (r.lambda_truncated()) s += " lambda>=" + std::to_string(r.lambda_floor());
    if (r.mu_truncated()) s += " mu>=" + std::to_string(r.mu_floor());
    if (r.diag_truncated()) s += " total>=" + std::to_string(r.diag_floor());
    return s;
}

// ---- single-axiom residuals -------------------------------------------------

inline Series sesquilinearity_first_residual(const BracketFn& br, const DiffPoly& a,
                                             const DiffPoly& b, bool susy, int floor_budget) {
    if (susy) {
        // [Da _L b] = chi [a _L b]
        return br(a.derivative(), b) - br(a, b).mul_chi_left();
    }
    // [da _l b] = -lambda [a _l b]
    Series base = br(a, b);
    Series shifted(base.context());
    if (base.truncated()) shifted.raise_floor(base.floor() + 1);
    for (auto& [k, v] : base.terms()) shifted.add_term(SKey{k.pow + 1, k.chi}, v);
    (void)floor_budget;
    return br(a.derivative(), b) + shifted;
}

inline Series sesquilinearity_second_residual(const BracketFn& br, const DiffPoly& a,
                                              const DiffPoly& b, bool susy, int floor_budget) {
    Series base = br(a, b);
    if (susy) {
        // [a _L Db] = -(-1)^{p(a)} (D + chi) [a _L b]
        Series rhs = base.apply_shift(0, 1, floor_budget);
        Series out(base.context());
        for (Parity ap : {Parity::Even, Parity::Odd}) {
            DiffPoly part = a.parity_part(ap);
            if (part.is_zero()) continue;
            Series r = br(part, b.derivative()) +
                       (parity_of(ap) ? -br(part, b).apply_shift(0, 1, floor_budget)
                                      : br(part, b).apply_shift(0, 1, floor_budget));
            out += r;
        }
        return out;
    }
    // [a _l db] = (lambda + d) [a _l b]
    return br(a, b.derivative()) - base.apply_lambda_shift(1, floor_budget);
}

inline Series skewsymmetry_residual(const BracketFn& br, const DiffPoly& a, const DiffPoly& b,
                                    bool susy, int floor_budget) {
    Series out;
    for (Parity ap : {Parity::Even, Parity::Odd})
        for (Parity bp : {Parity::Even, Parity::Odd}) {
            DiffPoly pa = a.parity_part(ap), pb = b.parity_part(bp);
            if (pa.is_zero() || pb.is_zero()) continue;
            int sgn = parity_of(ap) & parity_of(bp);  // (-1)^{ab}
            Series r;
            if (susy) {
                // [a_L b] = (-1)^{ab} <-[b_{-L-nabla} a]
                Series ls = br(pb, pa).left_substitute(floor_budget);
                r = br(pa, pb) - (sgn ? -ls : ls);
            } else {
                // [b_l a] = -(-1)^{ab} <-[a_{-l-d} b]
                Series ls = br(pa, pb).left_substitute(floor_budget);
                r = br(pb, pa) + (sgn ? -ls : ls);
            }
            if (out.context())
                out += r;
            else
                out = r;
        }
    return out;
}

inline Series leibniz_left_residual(const BracketFn& br, const DiffPoly& a, const DiffPoly& b,
                                    const DiffPoly& c, bool susy) {
    Series out;
    for (Parity ap : {Parity::Even, Parity::Odd})
        for (Parity bp : {Parity::Even, Parity::Odd}) {
            DiffPoly pa = a.parity_part(ap), pb = b.parity_part(bp);
            if (pa.is_zero() || pb.is_zero()) continue;
            int e = parity_of(ap) * parity_of(bp);
            if (susy) e += parity_of(bp);  // (-1)^{ab + b} for Lambda-brackets
            Series r = br(pa, pb * c) - br(pa, pb).rmul(c);
            Series t = br(pa, c).lmul(pb);
            r -= (e & 1) ? -t : t;
            if (out.context())
                out += r;
            else
                out = r;
        }
    return out;
}

// Right Leibniz for PVSA: {ab _l c} = (-1)^{bc} {a _{l+d} c}-> b + (-1)^{a(b+c)} {b _{l+d} c}-> a.
inline Series leibniz_right_residual(const BracketFn& br, const DiffPoly& a, const DiffPoly& b,
                                     const DiffPoly& c, int floor_budget) {
    Series out;
    for (Parity ap : {Parity::Even, Parity::Odd})
        for (Parity bp : {Parity::Even, Parity::Odd})
            for (Parity cp : {Parity::Even, Parity::Odd}) {
                DiffPoly pa = a.parity_part(ap), pb = b.parity_part(bp), pc = c.parity_part(cp);
                if (pa.is_zero() || pb.is_zero() || pc.is_zero()) continue;
                Series r = br(pa * pb, pc);
                Series t1 = Series::compose(br(pa, pc), Series::from_poly(pb), floor_budget);
                if (parity_of(bp) & parity_of(cp)) t1 = -t1;
                Series t2 = Series::compose(br(pb, pc), Series::from_poly(pa), floor_budget);
                if (parity_of(ap) & (parity_of(bp) ^ parity_of(cp))) t2 = -t2;
                r = r - t1 - t2;
                if (out.context())
                    out += r;
                else
                    out = r;
            }
    return out;
}

// ---- Jacobi assembly in the two-variable space ------------------------------

// [a_L [b_G c]] with (lambda,chi) from the outer bracket, (mu,gamma) inner.
inline TwoVar jacobi_term_outer_inner(const BracketFn& br, const DiffPoly& a, const DiffPoly& b,
                                      const DiffPoly& c, int pa) {
    Series inner = br(b, c);
    TwoVar out(inner.context());
    if (inner.truncated()) out.raise_mu_floor(inner.floor());
    for (auto& [ik, y] : inner.terms()) {
        for (Parity yp : {Parity::Even, Parity::Odd}) {
            DiffPoly ypart = y.parity_part(yp);
            if (ypart.is_zero()) continue;
            int pre = ik.chi * parity_of(yp);  // coefficient-left -> scalar-left
            Series outer = br(a, ypart);
            if (outer.truncated()) out.raise_lambda_floor(outer.floor());
            for (auto& [ok, w] : outer.terms()) {
                for (Parity wp : {Parity::Even, Parity::Odd}) {
                    DiffPoly part = w.parity_part(wp);
                    if (part.is_zero()) continue;
                    int e = pre + ik.chi * ((pa + 1) & 1) + ik.chi * parity_of(wp) +
                            ok.chi * ik.chi;
                    TKey key{ok.pow, ik.pow, ok.chi, ik.chi};
                    out.add_term(key, (e & 1) ? -part : part);
                }
            }
        }
    }
    return out;
}

// [b_G [a_L c]]: inner bracket carries (lambda, chi), outer (mu, gamma).
inline TwoVar jacobi_term_inner_outer(const BracketFn& br, const DiffPoly& a, const DiffPoly& b,
                                      const DiffPoly& c, int pb) {
    Series inner = br(a, c);
    TwoVar out(inner.context());
    if (inner.truncated()) out.raise_lambda_floor(inner.floor());
    for (auto& [ik, z] : inner.terms()) {
        for (Parity zp : {Parity::Even, Parity::Odd}) {
            DiffPoly zpart = z.parity_part(zp);
            if (zpart.is_zero()) continue;
            int pre = ik.chi * parity_of(zp);  // coefficient-left -> scalar-left
            Series outer = br(b, zpart);
            if (outer.truncated()) out.raise_mu_floor(outer.floor());
            for (auto& [ok, w] : outer.terms()) {
                for (Parity wp : {Parity::Even, Parity::Odd}) {
                    DiffPoly part = w.parity_part(wp);
                    if (part.is_zero()) continue;
                    int e = pre + ik.chi * ((pb + 1) & 1) + ik.chi * parity_of(wp);
                    TKey key{ik.pow, ok.pow, ik.chi, ok.chi};
                    out.add_term(key, (e & 1) ? -part : part);
                }
            }
        }
    }
    return out;
}

// [[a_L b]_{L+G} c] expanded through iota_{mu,lambda}.
inline TwoVar jacobi_term_composed(const BracketFn& br, const DiffPoly& a, const DiffPoly& b,
                                   const DiffPoly& c, int floor_budget) {
    Series inner = br(a, b);
    TwoVar out(inner.context());
    int observed_top = 0;
    for (auto& [ik, z] : inner.terms()) {
        for (Parity zp : {Parity::Even, Parity::Odd}) {
            DiffPoly zpart = z.parity_part(zp);
            if (zpart.is_zero()) continue;
            int pre = ik.chi * parity_of(zp) + ik.chi;  // scalar-left and (-chi)^i
            Series val = br(zpart, c);
            observed_top = std::max(observed_top, val.has_no_known_terms() ? 0 : val.max_pow());
            if (val.truncated()) out.raise_diag_floor(val.floor() + ik.pow + ik.chi + 2);
            for (auto& [vk, w] : val.terms()) {
                // w (lambda+mu)^{vk.pow} (chi+gamma)^{vk.chi}, then the prefix.
                int order = std::max(0, vk.pow - floor_budget);
                TwoVar base =
                    TwoVar::iota_pow(w.context(), vk.pow, order).lmul(w);
                TwoVar piece(w.context());
                if (vk.chi == 0) {
                    piece = base;
                } else {
                    piece = base.with_flag(1, 0) + base.with_flag(0, 1);
                }
                piece = piece.mul_prefix_lambda_chi(ik.pow, ik.chi, (pre & 1) ? -1 : 1);
                out += piece;
            }
        }
    }
    if (inner.truncated()) {
        // Unknown deep-tail coefficients of [a_L b] re-enter a bracket whose
        // top power is not bounded a priori, so no finite window is sound.
        (void)observed_top;
        out.raise_diag_floor(-kNoFloor);
    }
    return out;
}

inline TwoVar jacobi_residual(const BracketFn& br, const DiffPoly& a, const DiffPoly& b,
                              const DiffPoly& c, bool susy, int floor_budget) {
    TwoVar out;
    bool first = true;
    for (Parity ap : {Parity::Even, Parity::Odd})
        for (Parity bp : {Parity::Even, Parity::Odd}) {
            DiffPoly pa = a.parity_part(ap), pb = b.parity_part(bp);
            if (pa.is_zero() || pb.is_zero()) continue;
            int ia = parity_of(ap), ib = parity_of(bp);
            TwoVar t1 = jacobi_term_outer_inner(br, pa, pb, c, ia);
            TwoVar t2 = jacobi_term_composed(br, pa, pb, c, floor_budget);
            TwoVar t3 = jacobi_term_inner_outer(br, pa, pb, c, ib);
            TwoVar r;
            if (susy) {
                // [a[b c]] + (-1)^a [[a b] c] = (-1)^{(a+1)(b+1)} [b [a c]]
                r = t1 + t2.scale(ia ? -1 : 1) - t3.scale(((ia + 1) & (ib + 1) & 1) ? -1 : 1);
            } else {
                // [a[b c]] = [[a b] c] + (-1)^{ab} [b [a c]]
                r = t1 - t2 - t3.scale((ia & ib) ? -1 : 1);
            }
            if (first) {
                out = r;
                first = false;
            } else {
                out += r;
            }
        }
    return out;
}

// ---- deterministic random sampling -----------------------------------------

class Sampler {
public:
    Sampler(ContextPtr ctx, unsigned seed) : ctx_(std::move(ctx)), rng_(seed) {}

    DiffPoly random_poly(int max_terms = 2, int max_deg = 3, int max_order = 2) {
        DiffPoly p(ctx_);
        int terms = 1 + next(static_cast<unsigned>(max_terms));
        for (int t = 0; t < terms; ++t) {
            DiffPoly mono = DiffPoly::constant(ctx_, random_scalar());
            int deg = 1 + next(static_cast<unsigned>(max_deg));
            for (int d = 0; d < deg; ++d)
                mono = mono * DiffPoly::var(ctx_, next(static_cast<unsigned>(
                                                      ctx_->num_generators())),
                                            next(static_cast<unsigned>(max_order + 1)));
            p += mono;
        }
        return p;
    }

    Scalar random_scalar() {
        long c = static_cast<long>(next(4)) - 2;
        if (c == 0) c = 1;
        Scalar s = Scalar::integer(c);
        if (!ctx_->parameters().empty() && next(2))
            s *= Scalar::parameter(0, 1 + static_cast<int>(next(2)));
        return s;
    }

    unsigned next(unsigned bound) { return bound ? static_cast<unsigned>(rng_() % bound) : 0; }

private:
    ContextPtr ctx_;
    std::mt19937 rng_;
};

// ---- axiom suites -----------------------------------------------------------

struct SuiteOptions {
    unsigned seed = 12345;
    int random_instances = 50;
    int max_order = 2;
    bool include_jacobi = true;
};

inline CheckReport check_axioms(const Engine& engine, const BracketFn& br,
                                const SuiteOptions& opt = {}) {
    CheckReport rep;
    const ContextPtr& ctx = engine.algebra;
    bool susy = ctx->susy();
    int floor_budget = engine.trunc_floor;
    int n = ctx->num_generators();

    std::vector<std::pair<DiffPoly, std::string>> samples;
    for (int i = 0; i < n; ++i)
        samples.push_back({DiffPoly::var(ctx, i), ctx->gen(i).name});
    Sampler smp(ctx, opt.seed);
    for (int t = 0; t < opt.random_instances; ++t)
        samples.push_back({smp.random_poly(2, 3, opt.max_order), "rnd" + std::to_string(t)});

    auto push = [&](const std::string& axiom, const std::string& inst, const Series& residual) {
        rep.items.push_back({axiom, inst, series_verdict(residual), truncation_note(residual)});
    };

    // Pairwise axioms on generator pairs plus a slice of random pairs.
    size_t pair_limit = samples.size();
    for (size_t i = 0; i < pair_limit; ++i)
        for (size_t j = 0; j < pair_limit; ++j) {
            bool generator_pair = i < static_cast<size_t>(n) && j < static_cast<size_t>(n);
            bool random_pair = !generator_pair && (i + j) % 7 == 0;  // thin the quadratic set
            if (!generator_pair && !random_pair) continue;
            const auto& [ai, an] = samples[i];
            const auto& [bj, bn] = samples[j];
            std::string inst = an + "," + bn;
            push("sesquilinearity-1", inst,
                 sesquilinearity_first_residual(br, ai, bj, susy, floor_budget));
            push("sesquilinearity-2", inst,
                 sesquilinearity_second_residual(br, ai, bj, susy, floor_budget));
            push("skewsymmetry", inst, skewsymmetry_residual(br, ai, bj, susy, floor_budget));
        }

    // Leibniz and Jacobi on generator triples plus seeded random triples.
    std::vector<std::array<size_t, 3>> triples;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                triples.push_back({static_cast<size_t>(a), static_cast<size_t>(b),
                                   static_cast<size_t>(c)});
    Sampler tri(ctx, opt.seed + 1);
    for (int t = 0; t < opt.random_instances; ++t) {
        size_t m = samples.size();
        triples.push_back({tri.next(static_cast<unsigned>(m)), tri.next(static_cast<unsigned>(m)),
                           tri.next(static_cast<unsigned>(m))});
    }
    for (auto& [ia, ib, ic] : triples) {
        const auto& [pa, na] = samples[ia];
        const auto& [pb, nb] = samples[ib];
        const auto& [pc, nc] = samples[ic];
        std::string inst = na + "," + nb + "," + nc;
        push("leibniz-left", inst, leibniz_left_residual(br, pa, pb, pc, susy));
        if (!susy)
            push("leibniz-right", inst, leibniz_right_residual(br, pa, pb, pc, floor_budget));
        if (opt.include_jacobi) {
            TwoVar res = jacobi_residual(br, pa, pb, pc, susy, floor_budget);
            rep.items.push_back(
                {"jacobi", inst, twovar_verdict(res), truncation_note(res)});
        }
    }
    return rep;
}

inline CheckReport check_engine_axioms(const Engine& engine, const SuiteOptions& opt = {}) {
    BracketFn br = [&engine](const DiffPoly& x, const DiffPoly& y) {
        return engine.bracket(x, y);
    };
    return check_axioms(engine, br, opt);
}

}  // namespace pvsa
