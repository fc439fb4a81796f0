// Finite-dimensional Lie superalgebra data: structure constants, invariant
// bilinear form, sl2 / osp(1|2) triple data, ad-eigenvalue gradings, dual
// bases and the sharp projection used by the W-algebra constructions.
#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "pvsa/diffpoly.hpp"
#include "pvsa/linalg.hpp"

namespace pvsa {

using Elem = std::vector<Rational>;  // coordinates over the algebra basis

inline Elem elem_scale(const Elem& v, const Rational& c) {
    Elem r = v;
    for (auto& x : r) x *= c;
    return r;
}
inline Elem elem_add(const Elem& a, const Elem& b) {
    Elem r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}
inline bool elem_is_zero(const Elem& v) {
    for (auto& x : v)
        if (x != 0) return false;
    return true;
}

struct AxiomFailure {
    std::string axiom;
    std::string witness;
};

struct ValidationReport {
    std::vector<AxiomFailure> failures;
    bool ok() const { return failures.empty(); }
};

class LieError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TripleData {
    Elem E, H, F;
    std::optional<Elem> e, f;  // odd pair for the osp(1|2) case
    bool susy() const { return e.has_value(); }
};

class LieSuperalgebra {
public:
    std::string name;
    std::vector<std::string> parameters{"k"};
    std::vector<GeneratorInfo> basis;
    // brackets[i][j] = coordinates of [b_i, b_j]
    std::vector<std::vector<Elem>> brackets;
    QMatrix form;
    std::optional<TripleData> triple;

    int dim() const { return static_cast<int>(basis.size()); }

    int parity(int i) const { return parity_of(basis[static_cast<size_t>(i)].parity); }

    std::optional<int> elem_parity(const Elem& v) const {
        std::optional<int> p;
        for (int i = 0; i < dim(); ++i) {
            if (v[static_cast<size_t>(i)] == 0) continue;
            if (!p)
                p = parity(i);
            else if (*p != parity(i))
                return std::nullopt;
        }
        return p ? p : std::optional<int>(0);
    }

    Elem zero_elem() const { return Elem(static_cast<size_t>(dim()), Rational(0)); }
    Elem basis_elem(int i) const {
        Elem v = zero_elem();
        v[static_cast<size_t>(i)] = 1;
        return v;
    }

    Elem bracket(const Elem& x, const Elem& y) const {
        Elem r = zero_elem();
        for (int i = 0; i < dim(); ++i) {
            if (x[static_cast<size_t>(i)] == 0) continue;
            for (int j = 0; j < dim(); ++j) {
                if (y[static_cast<size_t>(j)] == 0) continue;
                Rational c = x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)];
                const Elem& b = brackets[static_cast<size_t>(i)][static_cast<size_t>(j)];
                for (int t = 0; t < dim(); ++t) r[static_cast<size_t>(t)] += c * b[static_cast<size_t>(t)];
            }
        }
        return r;
    }

    Rational form_value(const Elem& x, const Elem& y) const {
        Rational r = 0;
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j)
                r += x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)] *
                     form.at(static_cast<size_t>(i), static_cast<size_t>(j));
        return r;
    }

    QMatrix ad(const Elem& x) const {
        QMatrix m(static_cast<size_t>(dim()), static_cast<size_t>(dim()));
        for (int j = 0; j < dim(); ++j) {
            Elem col = bracket(x, basis_elem(j));
            for (int i = 0; i < dim(); ++i) m.at(static_cast<size_t>(i), static_cast<size_t>(j)) = col[static_cast<size_t>(i)];
        }
        return m;
    }

    std::string elem_to_string(const Elem& v) const {
        std::string s;
        for (int i = 0; i < dim(); ++i) {
            const Rational& c = v[static_cast<size_t>(i)];
            if (c == 0) continue;
            if (!s.empty()) s += " + ";
            if (c != 1) s += c.get_str() + "*";
            s += basis[static_cast<size_t>(i)].name;
        }
        return s.empty() ? "0" : s;
    }

    ValidationReport validate() const {
        ValidationReport rep;
        int n = dim();
        auto pname = [&](int i) { return basis[static_cast<size_t>(i)].name; };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Elem lhs = brackets[static_cast<size_t>(i)][static_cast<size_t>(j)];
                Elem rhs = elem_scale(brackets[static_cast<size_t>(j)][static_cast<size_t>(i)],
                                      Rational((parity(i) & parity(j)) ? -1 : 1));
                if (!elem_is_zero(elem_add(lhs, rhs)))
                    rep.failures.push_back({"skewsymmetry", "[" + pname(i) + "," + pname(j) + "]"});
                int pb = 0;
                for (int t = 0; t < n; ++t)
                    if (lhs[static_cast<size_t>(t)] != 0) pb |= 1 << parity(t);
                int want = (parity(i) + parity(j)) & 1;
                if (pb & (1 << (1 - want)))
                    rep.failures.push_back({"grading", "[" + pname(i) + "," + pname(j) + "] parity"});
            }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    auto term = [&](int x, int y, int z) {
                        Elem v = bracket(basis_elem(x), bracket(basis_elem(y), basis_elem(z)));
                        int s = (parity(z) & parity(x)) ? -1 : 1;
                        return elem_scale(v, Rational(s));
                    };
                    Elem sum = elem_add(elem_add(term(a, b, c), term(b, c, a)), term(c, a, b));
                    if (!elem_is_zero(sum))
                        rep.failures.push_back(
                            {"jacobi", "(" + pname(a) + "," + pname(b) + "," + pname(c) + ")"});
                }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational fij = form.at(static_cast<size_t>(i), static_cast<size_t>(j));
                if (parity(i) != parity(j) && fij != 0)
                    rep.failures.push_back({"form-even", "(" + pname(i) + "|" + pname(j) + ")"});
                Rational fji = form.at(static_cast<size_t>(j), static_cast<size_t>(i));
                if (fij != Rational((parity(i) & parity(j)) ? -1 : 1) * fji)
                    rep.failures.push_back({"form-supersymmetric", "(" + pname(i) + "|" + pname(j) + ")"});
            }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    Rational lhs = form_value(bracket(basis_elem(a), basis_elem(b)), basis_elem(c));
                    Rational rhs = form_value(basis_elem(a), bracket(basis_elem(b), basis_elem(c)));
                    if (lhs != rhs)
                        rep.failures.push_back(
                            {"form-invariant", "(" + pname(a) + "," + pname(b) + "," + pname(c) + ")"});
                }
        if (form.rank() != static_cast<size_t>(n))
            rep.failures.push_back({"form-nondegenerate", "rank " + std::to_string(form.rank())});
        if (triple) {
            auto expect = [&](const Elem& got, const Elem& want, const std::string& what) {
                if (!elem_is_zero(elem_add(got, elem_scale(want, Rational(-1)))))
                    rep.failures.push_back({"triple", what});
            };
            expect(bracket(triple->H, triple->E), elem_scale(triple->E, 2), "[H,E]=2E");
            expect(bracket(triple->H, triple->F), elem_scale(triple->F, -2), "[H,F]=-2F");
            expect(bracket(triple->E, triple->F), triple->H, "[E,F]=H");
            if (form_value(triple->E, triple->F) != 1)
                rep.failures.push_back({"triple", "(E|F)=1"});
            if (triple->susy()) {
                expect(bracket(*triple->e, *triple->e), elem_scale(triple->E, 2), "[e,e]=2E");
                expect(bracket(*triple->f, *triple->f), elem_scale(triple->F, -2), "[f,f]=-2F");
                expect(bracket(triple->H, *triple->e), *triple->e, "[H,e]=e");
                expect(bracket(triple->H, *triple->f), elem_scale(*triple->f, -1), "[H,f]=-f");
            }
        }
        return rep;
    }
};

// ad(H/2) (equivalently ad x) eigenvalues; the loaded basis must already be
// an eigenbasis, otherwise this errors out.
struct GradedDecomposition {
    std::vector<Rational> degree;  // per basis element

    Rational elem_degree(const LieSuperalgebra& g, const Elem& v) const {
        std::optional<Rational> d;
        for (int i = 0; i < g.dim(); ++i) {
            if (v[static_cast<size_t>(i)] == 0) continue;
            if (!d)
                d = degree[static_cast<size_t>(i)];
            else if (*d != degree[static_cast<size_t>(i)])
                throw LieError("element is not grading homogeneous");
        }
        return d ? *d : Rational(0);
    }
};

inline GradedDecomposition build_grading(const LieSuperalgebra& g, const TripleData& t) {
    Elem x = elem_scale(t.H, Rational(1, 2));
    QMatrix adx = g.ad(x);
    GradedDecomposition dec;
    dec.degree.resize(static_cast<size_t>(g.dim()));
    for (int j = 0; j < g.dim(); ++j) {
        Rational eig = adx.at(static_cast<size_t>(j), static_cast<size_t>(j));
        for (int i = 0; i < g.dim(); ++i)
            if (i != j && adx.at(static_cast<size_t>(i), static_cast<size_t>(j)) != 0)
                throw LieError("basis does not diagonalize ad(H/2); supply an eigenbasis");
        dec.degree[static_cast<size_t>(j)] = eig;
    }
    return dec;
}

// Decomposition g = ker(ad s_minus) + im(ad s_plus) and the associated
// projection onto the kernel ("sharp").
struct SharpProjection {
    std::vector<Elem> kernel_basis;   // basis of g^{s_minus}
    QMatrix to_components;            // inverse of [kernel | image] basis matrix
    size_t kernel_dim = 0;

    // Full-space coordinates of the projection.
    Elem project(const LieSuperalgebra& g, const Elem& v) const {
        std::vector<Rational> comp = to_components.apply(v);
        Elem out = g.zero_elem();
        for (size_t t = 0; t < kernel_dim; ++t)
            out = elem_add(out, elem_scale(kernel_basis[t], comp[t]));
        return out;
    }

    // Coefficients over the kernel basis.
    std::vector<Rational> kernel_coords(const Elem& v) const {
        std::vector<Rational> comp = to_components.apply(v);
        comp.resize(kernel_dim);
        return comp;
    }
};

inline SharpProjection build_sharp(const LieSuperalgebra& g, const Elem& s_minus,
                                   const Elem& s_plus) {
    size_t n = static_cast<size_t>(g.dim());
    SharpProjection sp;
    QMatrix ad_minus = g.ad(s_minus);
    sp.kernel_basis = ad_minus.kernel();
    sp.kernel_dim = sp.kernel_basis.size();

    QMatrix ad_plus = g.ad(s_plus);
    QMatrix copy = ad_plus;
    auto pivots = copy.rref();
    std::vector<Elem> image_basis;
    for (size_t p : pivots) {
        Elem col(n);
        for (size_t i = 0; i < n; ++i) col[i] = ad_plus.at(i, p);
        image_basis.push_back(std::move(col));
    }
    if (sp.kernel_dim + image_basis.size() != n)
        throw LieError("kernel/image dimensions do not fill the algebra");
    QMatrix basis(n, n);
    for (size_t j = 0; j < sp.kernel_dim; ++j)
        for (size_t i = 0; i < n; ++i) basis.at(i, j) = sp.kernel_basis[j][i];
    for (size_t j = 0; j < image_basis.size(); ++j)
        for (size_t i = 0; i < n; ++i) basis.at(i, sp.kernel_dim + j) = image_basis[j][i];
    if (!basis.invert(sp.to_components))
        throw LieError("kernel + image is not a direct sum");
    return sp;
}

// Dual basis package: a basis {q_i} of ker(ad s_minus) with integer labels of
// matching parity, the pairing-dual basis {q^i} of ker(ad s_plus), heights,
// and the two ad-generated families with exactly solved normalizers.
struct DualBasisData {
    bool susy = false;
    std::vector<Elem> ker_minus;           // q_i (resp. r_i)
    std::vector<Elem> ker_plus;            // q^i (resp. r^i)
    std::vector<int> label;                // integer index, parity-matching
    std::vector<Rational> height;          // alpha_i (resp. beta_i)
    std::vector<int> steps;                // 2 alpha_i (resp. 4 beta_i)
    std::vector<std::vector<Elem>> lowered;  // q^i_m = (ad s_minus)^m q^i
    std::vector<std::vector<Elem>> raised;   // q_i^m = k_{i,m} (ad s_plus)^m q_i
    std::vector<std::vector<Rational>> normalizer;  // k_{i,m}

    int count() const { return static_cast<int>(ker_minus.size()); }
};

inline DualBasisData build_dual_bases(const LieSuperalgebra& g, const GradedDecomposition& grading,
                                      const Elem& s_minus, const Elem& s_plus, bool susy) {
    DualBasisData d;
    d.susy = susy;
    QMatrix ad_minus = g.ad(s_minus);
    QMatrix ad_plus = g.ad(s_plus);
    d.ker_minus = ad_minus.kernel();
    std::vector<Elem> ker_plus_raw = ad_plus.kernel();
    if (d.ker_minus.size() != ker_plus_raw.size())
        throw LieError("centralizer dimensions differ for the triple");

    // Deterministic order: ascending grading degree, then coordinates.
    std::sort(d.ker_minus.begin(), d.ker_minus.end(), [&](const Elem& a, const Elem& b) {
        Rational da = grading.elem_degree(g, a), db = grading.elem_degree(g, b);
        if (da != db) return da < db;
        return a < b;
    });

    // Integer labels: even elements get 0,2,4,..., odd get 1,3,5,...
    int next_even = 0, next_odd = 1;
    for (auto& q : d.ker_minus) {
        auto p = g.elem_parity(q);
        if (!p) throw LieError("centralizer basis element is not parity homogeneous");
        if (*p == 0) {
            d.label.push_back(next_even);
            next_even += 2;
        } else {
            d.label.push_back(next_odd);
            next_odd += 2;
        }
    }

    // Dual basis in ker(ad s_plus): (q^i | q_j) = delta_ij.
    size_t m = d.ker_minus.size();
    QMatrix pair(m, m);
    for (size_t t = 0; t < m; ++t)
        for (size_t j = 0; j < m; ++j)
            pair.at(j, t) = g.form_value(ker_plus_raw[t], d.ker_minus[j]);
    QMatrix pair_inv;
    if (!pair.invert(pair_inv))
        throw LieError("pairing between the two centralizers is singular");
    for (size_t i = 0; i < m; ++i) {
        Elem qi = g.zero_elem();
        for (size_t t = 0; t < m; ++t)
            qi = elem_add(qi, elem_scale(ker_plus_raw[t], pair_inv.at(t, i)));
        d.ker_plus.push_back(std::move(qi));
    }

    int unit = susy ? 4 : 2;  // steps per unit of height
    for (size_t i = 0; i < m; ++i) {
        Rational h = grading.elem_degree(g, d.ker_plus[i]);
        d.height.push_back(h);
        Rational steps_q = Rational(unit) * h;
        if (steps_q.get_den() != 1 || steps_q < 0)
            throw LieError("height does not give an integral ladder length");
        int steps = static_cast<int>(steps_q.get_num().get_si());
        d.steps.push_back(steps);

        std::vector<Elem> low{d.ker_plus[i]};
        for (int t = 1; t <= steps; ++t) low.push_back(g.bracket(s_minus, low.back()));
        d.lowered.push_back(low);

        std::vector<Elem> raw{d.ker_minus[i]};
        for (int t = 1; t <= steps; ++t) raw.push_back(g.bracket(s_plus, raw.back()));
        std::vector<Elem> raised;
        std::vector<Rational> norm;
        for (int t = 0; t <= steps; ++t) {
            Rational p = g.form_value(low[static_cast<size_t>(t)], raw[static_cast<size_t>(t)]);
            if (p == 0) throw LieError("ladder pairing vanished; bad triple or degenerate form");
            norm.push_back(1 / p);
            raised.push_back(elem_scale(raw[static_cast<size_t>(t)], 1 / p));
        }
        d.raised.push_back(std::move(raised));
        d.normalizer.push_back(std::move(norm));
    }

    // Defining property (q^i_m | q_j^n) = delta_mn delta_ij on all in-range pairs.
    for (size_t i = 0; i < m; ++i)
        for (int a = 0; a <= d.steps[i]; ++a)
            for (size_t j = 0; j < m; ++j)
                for (int b = 0; b <= d.steps[j]; ++b) {
                    Rational v = g.form_value(d.lowered[i][static_cast<size_t>(a)],
                                              d.raised[j][static_cast<size_t>(b)]);
                    Rational want = (i == j && a == b) ? 1 : 0;
                    if (v != want) throw LieError("dual family pairing is not orthonormal");
                }
    return d;
}

// ---- JSON loading ----------------------------------------------------------

inline Rational json_rational(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw LieError("coefficients must be integers or rational strings");
}

inline LieSuperalgebra load_algebra(const nlohmann::json& j) {
    LieSuperalgebra g;
    g.name = j.value("name", "unnamed");
    if (j.contains("parameters")) {
        g.parameters.clear();
        for (auto& p : j.at("parameters")) g.parameters.push_back(p.get<std::string>());
    }
    for (auto& b : j.at("basis")) {
        GeneratorInfo info;
        info.name = b.at("name").get<std::string>();
        std::string par = b.at("parity").get<std::string>();
        if (par == "even")
            info.parity = Parity::Even;
        else if (par == "odd")
            info.parity = Parity::Odd;
        else
            throw LieError("parity must be \"even\" or \"odd\"");
        g.basis.push_back(info);
    }
    int n = g.dim();
    g.brackets.assign(static_cast<size_t>(n), std::vector<Elem>(static_cast<size_t>(n), g.zero_elem()));
    auto resolve = [&](const nlohmann::json& x) -> int {
        int id = -1;
        if (x.is_number_integer()) {
            id = x.get<int>();
        } else if (x.is_string()) {
            std::string s = x.get<std::string>();
            for (int i = 0; i < n; ++i)
                if (g.basis[static_cast<size_t>(i)].name == s) id = i;
        }
        if (id < 0 || id >= n) throw LieError("unknown basis reference in algebra file");
        return id;
    };
    for (auto& row : j.at("brackets")) {
        int a = resolve(row.at(0)), b = resolve(row.at(1));
        Elem v = g.zero_elem();
        for (auto& term : row.at(2)) {
            int t = resolve(term.at(0));
            v[static_cast<size_t>(t)] += json_rational(term.at(1));
        }
        g.brackets[static_cast<size_t>(a)][static_cast<size_t>(b)] = v;
        // fill the mirror entry by skewsymmetry unless the file provides it
    }
    for (auto& row : j.at("brackets")) {
        int a = resolve(row.at(0)), b = resolve(row.at(1));
        if (elem_is_zero(g.brackets[static_cast<size_t>(b)][static_cast<size_t>(a)]) && a != b) {
            int s = (g.parity(a) & g.parity(b)) ? 1 : -1;
            g.brackets[static_cast<size_t>(b)][static_cast<size_t>(a)] =
                elem_scale(g.brackets[static_cast<size_t>(a)][static_cast<size_t>(b)], Rational(s));
        }
    }
    g.form = QMatrix(static_cast<size_t>(n), static_cast<size_t>(n));
    for (auto& row : j.at("form")) {
        int a = resolve(row.at(0)), b = resolve(row.at(1));
        Rational c = json_rational(row.at(2));
        g.form.at(static_cast<size_t>(a), static_cast<size_t>(b)) = c;
        if (g.form.at(static_cast<size_t>(b), static_cast<size_t>(a)) == 0)
            g.form.at(static_cast<size_t>(b), static_cast<size_t>(a)) =
                (g.parity(a) & g.parity(b)) ? -c : c;
    }
    if (j.contains("triple")) {
        TripleData t;
        auto& jt = j.at("triple");
        t.E = g.basis_elem(resolve(jt.at("E")));
        t.H = g.basis_elem(resolve(jt.at("H")));
        t.F = g.basis_elem(resolve(jt.at("F")));
        if (jt.contains("e")) {
            t.e = g.basis_elem(resolve(jt.at("e")));
            t.f = g.basis_elem(resolve(jt.at("f")));
        }
        g.triple = t;
    }
    return g;
}

inline LieSuperalgebra load_algebra_text(const std::string& text) {
    return load_algebra(nlohmann::json::parse(text));
}

// Shipped presets.
inline const char* preset_sl2_json() {
    return R"JSON({
  "name": "sl2",
  "parameters": ["k"],
  "basis": [
    {"id": 0, "name": "E", "parity": "even"},
    {"id": 1, "name": "H", "parity": "even"},
    {"id": 2, "name": "F", "parity": "even"}
  ],
  "brackets": [
    ["H", "E", [["E", 2]]],
    ["H", "F", [["F", -2]]],
    ["E", "F", [["H", 1]]]
  ],
  "form": [
    ["E", "F", 1],
    ["H", "H", 2]
  ],
  "triple": {"E": "E", "H": "H", "F": "F"}
})JSON";
}

inline const char* preset_osp12_json() {
    return R"JSON({
  "name": "osp12",
  "parameters": ["k"],
  "basis": [
    {"id": 0, "name": "E", "parity": "even"},
    {"id": 1, "name": "e", "parity": "odd"},
    {"id": 2, "name": "H", "parity": "even"},
    {"id": 3, "name": "f", "parity": "odd"},
    {"id": 4, "name": "F", "parity": "even"}
  ],
  "brackets": [
    ["H", "E", [["E", 2]]],
    ["H", "F", [["F", -2]]],
    ["E", "F", [["H", 1]]],
    ["H", "e", [["e", 1]]],
    ["H", "f", [["f", -1]]],
    ["E", "f", [["e", -1]]],
    ["F", "e", [["f", -1]]],
    ["e", "e", [["E", 2]]],
    ["f", "f", [["F", -2]]],
    ["e", "f", [["H", 1]]]
  ],
  "form": [
    ["E", "F", 1],
    ["H", "H", 2],
    ["e", "f", 2]
  ],
  "triple": {"E": "E", "H": "H", "F": "F", "e": "e", "f": "f"}
})JSON";
}

inline LieSuperalgebra preset_algebra(const std::string& name) {
    if (name == "sl2" || name == "sl2.json") return load_algebra_text(preset_sl2_json());
    if (name == "osp12" || name == "osp12.json") return load_algebra_text(preset_osp12_json());
    throw LieError("unknown preset algebra: " + name);
}

}  // namespace pvsa
