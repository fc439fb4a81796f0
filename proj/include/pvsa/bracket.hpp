// Lambda-bracket engines: bracket tables on free differential superalgebras,
// the master-formula extension (PVSA and SUSY variants), affine
// constructions from a Lie superalgebra, and the SUSY -> PVSA functor.
#pragma once

#include "pvsa/lie.hpp"
#include "pvsa/series.hpp"

namespace pvsa {

class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BracketTable {
    std::vector<std::vector<Series>> entry;  // entry[i][j] = {u_i L u_j}

    bool local() const {
        for (auto& row : entry)
            for (auto& s : row)
                if (s.truncated() || (!s.has_no_known_terms() && s.min_pow() < 0)) return false;
        return true;
    }
};

// A free differential superalgebra together with a generator bracket table.
struct Engine {
    ContextPtr algebra;
    BracketTable table;
    int trunc_floor = kDefaultFloor;

    bool susy() const { return algebra->susy(); }

    const Series& generator_bracket(int i, int j) const {
        if (i < 0 || j < 0 || i >= algebra->num_generators() || j >= algebra->num_generators())
            throw BracketError("unknown generator pair");
        return table.entry[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }

    Series bracket(const DiffPoly& f, const DiffPoly& g) const {
        return susy() ? susy_master_bracket(f, g) : master_bracket(f, g);
    }

    // Master formula for PVSA lambda-brackets.
    Series master_bracket(const DiffPoly& f, const DiffPoly& g) const {
        if (susy()) throw BracketError("master_bracket needs an even-derivation context");
        Series out(algebra);
        for (Parity fp : {Parity::Even, Parity::Odd}) {
            DiffPoly fpart = f.parity_part(fp);
            if (fpart.is_zero()) continue;
            for (Parity gp : {Parity::Even, Parity::Odd}) {
                DiffPoly gpart = g.parity_part(gp);
                if (gpart.is_zero()) continue;
                out += master_homogeneous(fpart, parity_of(fp), gpart, parity_of(gp));
            }
        }
        return out;
    }

    // Master formula for SUSY Lambda-brackets.
    Series susy_master_bracket(const DiffPoly& a, const DiffPoly& b) const {
        if (!susy()) throw BracketError("susy_master_bracket needs an odd-derivation context");
        Series out(algebra);
        for (Parity ap : {Parity::Even, Parity::Odd}) {
            DiffPoly apart = a.parity_part(ap);
            if (apart.is_zero()) continue;
            for (Parity bp : {Parity::Even, Parity::Odd}) {
                DiffPoly bpart = b.parity_part(bp);
                if (bpart.is_zero()) continue;
                out += susy_master_homogeneous(apart, parity_of(ap), bpart, parity_of(bp));
            }
        }
        return out;
    }

private:
    Series master_homogeneous(const DiffPoly& f, int pf, const DiffPoly& g, int pg) const {
        Series out(algebra);
        for (const VarKey& vf : f.variables()) {
            DiffPoly df = f.partial(vf);
            if (df.is_zero()) continue;
            for (const VarKey& vg : g.variables()) {
                DiffPoly dg = g.partial(vg);
                if (dg.is_zero()) continue;
                int pi = algebra->gen(vf.gen).parity == Parity::Odd ? 1 : 0;
                int pj = algebra->gen(vg.gen).parity == Parity::Odd ? 1 : 0;
                int sign_exp = pf * pg + pi * pj + pg * pj + pj;
                Series v = Series::from_poly(df).apply_lambda_shift(vf.order, trunc_floor);
                if (vf.order & 1) v = -v;  // (-lambda-d)^m
                v = Series::compose(generator_bracket(vf.gen, vg.gen), v, trunc_floor);
                v = v.apply_lambda_shift(vg.order, trunc_floor);
                v = v.lmul(dg);
                if (sign_exp & 1) v = -v;
                out += v;
            }
        }
        return out;
    }

    Series susy_master_homogeneous(const DiffPoly& a, int pa, const DiffPoly& b, int pb) const {
        Series out(algebra);
        for (const VarKey& va : a.variables()) {
            DiffPoly da = a.partial(va);
            if (da.is_zero()) continue;
            for (const VarKey& vb : b.variables()) {
                DiffPoly db = b.partial(vb);
                if (db.is_zero()) continue;
                int m = va.order, n = vb.order;
                int pi = algebra->gen(va.gen).parity == Parity::Odd ? 1 : 0;
                int pj = algebra->gen(vb.gen).parity == Parity::Odd ? 1 : 0;
                int pu_jn = (pj + n) & 1;
                int pa_im = (pa + pi + m) & 1;
                int pb_jn = (pb + pj + n) & 1;
                int sign_exp = pb_jn + pb_jn * ((pu_jn + pa) & 1) + pa_im * pu_jn;
                sign_exp += n * (pi + m + 1) + m * (pi + pj + 1) + (m * (m - 1)) / 2;
                Series v = Series::from_poly(da);
                for (int t = 0; t < m; ++t) v = v.apply_chi_d();
                v = Series::compose(generator_bracket(va.gen, vb.gen), v, trunc_floor);
                for (int t = 0; t < n; ++t) v = v.apply_chi_d();
                v = v.lmul(db);
                if (sign_exp & 1) v = -v;
                out += v;
            }
        }
        return out;
    }
};

inline DiffPoly elem_to_poly(const ContextPtr& ctx, const Elem& v) {
    DiffPoly p(ctx);
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            p += DiffPoly::var(ctx, static_cast<int>(i)) * Scalar::from_rational(v[i]);
    return p;
}

// Affine PVSA V^k(g): {a L b} = [a,b] + k lambda (a|b) on generators.
inline Engine make_affine_pvsa(const LieSuperalgebra& g, int trunc_floor = kDefaultFloor) {
    auto rep = g.validate();
    if (!rep.ok())
        throw BracketError("algebra fails its axioms: " + rep.failures.front().axiom + " at " +
                           rep.failures.front().witness);
    Engine e;
    e.algebra = make_context(Derivation::Even, g.basis, g.parameters);
    e.trunc_floor = trunc_floor;
    int kidx = e.algebra->param_index("k");
    if (kidx < 0) throw BracketError("affine construction needs parameter k");
    int n = g.dim();
    e.table.entry.assign(static_cast<size_t>(n), std::vector<Series>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Series s = Series::from_poly(
                elem_to_poly(e.algebra, g.brackets[static_cast<size_t>(i)][static_cast<size_t>(j)]));
            Rational fij = g.form.at(static_cast<size_t>(i), static_cast<size_t>(j));
            if (fij != 0)
                s += Series::monomial(e.algebra, Scalar::parameter(kidx) * Scalar::from_rational(fij), 1, 0);
            e.table.entry[static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
        }
    return e;
}

// Affine SUSY PVA V^k(bar g): {bar a L bar b} = (-1)^{p(a)} ([a,b]bar + k chi (a|b)).
inline Engine make_affine_susy(const LieSuperalgebra& g, int trunc_floor = kDefaultFloor) {
    auto rep = g.validate();
    if (!rep.ok())
        throw BracketError("algebra fails its axioms: " + rep.failures.front().axiom + " at " +
                           rep.failures.front().witness);
    Engine e;
    std::vector<GeneratorInfo> gens = g.basis;
    for (auto& gen : gens)  // parity reversal bar g
        gen.parity = gen.parity == Parity::Even ? Parity::Odd : Parity::Even;
    e.algebra = make_context(Derivation::Odd, std::move(gens), g.parameters);
    e.trunc_floor = trunc_floor;
    int kidx = e.algebra->param_index("k");
    if (kidx < 0) throw BracketError("affine construction needs parameter k");
    int n = g.dim();
    e.table.entry.assign(static_cast<size_t>(n), std::vector<Series>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Series s = Series::from_poly(
                elem_to_poly(e.algebra, g.brackets[static_cast<size_t>(i)][static_cast<size_t>(j)]));
            Rational fij = g.form.at(static_cast<size_t>(i), static_cast<size_t>(j));
            if (fij != 0)
                s += Series::monomial(e.algebra, Scalar::parameter(kidx) * Scalar::from_rational(fij), 0, 1);
            if (g.parity(i)) s = -s;
            e.table.entry[static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
        }
    return e;
}

// ---- SUSY -> PVSA coefficient functor --------------------------------------

// A SUSY PVA is a PVSA via {a _l b} := sum lambda^n a_{(n|1)} b. The PVSA
// lives on the doubled generator set {u_i, D u_i} with derivation d = D^2.
struct ChiFunctorResult {
    Engine pvsa;                 // even-derivation engine on doubled generators
    ContextPtr susy_algebra;     // the source context

    // u_i^{[r]}  ->  d^{r/2} of (u_i or D u_i).
    DiffPoly transport(const DiffPoly& p) const {
        DiffPoly out(pvsa.algebra);
        for (auto& [mono, c] : p.terms()) {
            DiffPoly acc = DiffPoly::constant(pvsa.algebra, c);
            for (auto& v : mono.vars) {
                DiffPoly img =
                    DiffPoly::var(pvsa.algebra, 2 * v.gen + (v.order & 1), v.order / 2);
                acc = acc * img;
            }
            out += acc;
        }
        return out;
    }

    Series transport(const Series& s) const {
        Series out(pvsa.algebra);
        if (s.truncated()) out.raise_floor(s.floor());
        for (auto& [k, v] : s.terms()) {
            if (k.chi) throw BracketError("chi coefficient survived extraction");
            out.add_term(k, transport(v));
        }
        return out;
    }
};

inline ChiFunctorResult chi_coefficient_functor(const Engine& susy_engine) {
    if (!susy_engine.susy()) throw BracketError("functor input must be a SUSY engine");
    const ContextPtr& sctx = susy_engine.algebra;
    std::vector<GeneratorInfo> gens;
    for (int i = 0; i < sctx->num_generators(); ++i) {
        gens.push_back(sctx->gen(i));
        gens.push_back({"D" + sctx->gen(i).name,
                        sctx->gen(i).parity == Parity::Even ? Parity::Odd : Parity::Even});
    }
    ChiFunctorResult res;
    res.susy_algebra = sctx;
    res.pvsa.algebra = make_context(Derivation::Even, std::move(gens), sctx->parameters());
    res.pvsa.trunc_floor = susy_engine.trunc_floor;
    int n2 = res.pvsa.algebra->num_generators();
    res.pvsa.table.entry.assign(static_cast<size_t>(n2), std::vector<Series>(static_cast<size_t>(n2)));
    for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j) {
            DiffPoly x = DiffPoly::var(sctx, i / 2, i % 2);
            DiffPoly y = DiffPoly::var(sctx, j / 2, j % 2);
            Series lam = susy_engine.susy_master_bracket(x, y);
            Series chi_part(sctx);
            if (lam.truncated()) chi_part.raise_floor(lam.floor());
            for (auto& [k, v] : lam.terms())
                if (k.chi) chi_part.add_term(SKey{k.pow, 0}, v);
            res.pvsa.table.entry[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                res.transport(chi_part);
        }
    return res;
}

// The chi-part bracket evaluated inside the SUSY algebra itself (no renaming).
inline Series chi_part_bracket(const Engine& susy_engine, const DiffPoly& a, const DiffPoly& b) {
    Series lam = susy_engine.susy_master_bracket(a, b);
    Series out(susy_engine.algebra);
    if (lam.truncated()) out.raise_floor(lam.floor());
    for (auto& [k, v] : lam.terms())
        if (k.chi) out.add_term(SKey{k.pow, 0}, v);
    return out;
}

}  // namespace pvsa
