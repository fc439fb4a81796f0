// Free differential superalgebras: C[u_i^(m)] with an even derivation or
// C[u_i^[n]] with an odd derivation, over Laurent-polynomial scalars.
#pragma once

#include <algorithm>
#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pvsa/scalar.hpp"

namespace pvsa {

enum class Parity : int { Even = 0, Odd = 1 };

inline int parity_of(Parity p) { return static_cast<int>(p); }
inline Parity parity_from_int(int i) { return (i & 1) ? Parity::Odd : Parity::Even; }

enum class Derivation { Even, Odd };  // d (order-raising, even) vs D (odd)

struct GeneratorInfo {
    std::string name;
    Parity parity = Parity::Even;
};

class ContextError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable description of one free differential superalgebra: its
// generators, the derivation kind, and the scalar parameter names.
class Context {
public:
    Context(Derivation kind, std::vector<GeneratorInfo> gens, std::vector<std::string> params)
        : kind_(kind), gens_(std::move(gens)), params_(std::move(params)) {}

    Derivation derivation() const { return kind_; }
    bool susy() const { return kind_ == Derivation::Odd; }

    int num_generators() const { return static_cast<int>(gens_.size()); }
    const GeneratorInfo& gen(int id) const { return gens_.at(static_cast<size_t>(id)); }
    int find_generator(std::string_view name) const {
        for (size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name == name) return static_cast<int>(i);
        return -1;
    }

    const std::vector<std::string>& parameters() const { return params_; }
    int param_index(std::string_view name) const {
        for (size_t i = 0; i < params_.size(); ++i)
            if (params_[i] == name) return static_cast<int>(i);
        return -1;
    }

    // Parity of u_g^(m) (even derivation leaves parity alone, D flips per order).
    int var_parity(int gen, int order) const {
        int p = parity_of(this->gen(gen).parity);
        if (kind_ == Derivation::Odd) p = (p + order) & 1;
        return p;
    }

private:
    Derivation kind_;
    std::vector<GeneratorInfo> gens_;
    std::vector<std::string> params_;
};

using ContextPtr = std::shared_ptr<const Context>;

inline ContextPtr make_context(Derivation kind, std::vector<GeneratorInfo> gens,
                               std::vector<std::string> params = {"k"}) {
    return std::make_shared<const Context>(kind, std::move(gens), std::move(params));
}

struct VarKey {
    int gen = 0;
    int order = 0;
    auto operator<=>(const VarKey&) const = default;
};

// Canonically ordered product of derivative variables. Even variables may
// repeat; odd variables square to zero.
struct Monomial {
    std::vector<VarKey> vars;
    auto operator<=>(const Monomial&) const = default;
    bool empty() const { return vars.empty(); }
    size_t degree() const { return vars.size(); }
};

class DiffPoly {
public:
    DiffPoly() = default;
    explicit DiffPoly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static DiffPoly zero(ContextPtr ctx) { return DiffPoly(std::move(ctx)); }

    static DiffPoly constant(ContextPtr ctx, Scalar s) {
        DiffPoly p(std::move(ctx));
        if (!s.is_zero()) p.t_[Monomial{}] = std::move(s);
        return p;
    }
    static DiffPoly one(ContextPtr ctx) { return constant(std::move(ctx), Scalar::one()); }

    static DiffPoly var(ContextPtr ctx, int gen, int order = 0) {
        if (gen < 0 || gen >= ctx->num_generators()) throw ContextError("unknown generator id");
        DiffPoly p(ctx);
        p.t_[Monomial{{VarKey{gen, order}}}] = Scalar::one();
        return p;
    }

    const ContextPtr& context() const { return ctx_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const {
        return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty());
    }
    Scalar constant_value() const {
        if (t_.empty()) return Scalar();
        if (!is_constant()) throw ContextError("polynomial is not constant");
        return t_.begin()->second;
    }

    bool operator==(const DiffPoly& o) const { return t_ == o.t_; }

    DiffPoly operator-() const {
        DiffPoly r(ctx_);
        for (auto& [m, c] : t_) r.t_[m] = -c;
        return r;
    }

    DiffPoly& operator+=(const DiffPoly& o) {
        adopt_context(o);
        for (auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    DiffPoly& operator-=(const DiffPoly& o) { return *this += -o; }
    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }

    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r(a.ctx_ ? a.ctx_ : b.ctx_);
        const Context* cx = r.require_ctx();
        for (auto& [ma, ca] : a.t_)
            for (auto& [mb, cb] : b.t_) {
                int sign = 1;
                Monomial m;
                if (!merge_monomials(*cx, ma, mb, m, sign)) continue;
                Scalar c = ca * cb;
                if (sign < 0) c = -c;
                r.add_term(m, c);
            }
        return r;
    }
    DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }

    friend DiffPoly operator*(const DiffPoly& a, const Scalar& s) {
        DiffPoly r(a.ctx_);
        if (s.is_zero()) return r;
        for (auto& [m, c] : a.t_) {
            Scalar v = c * s;
            if (!v.is_zero()) r.t_[m] = std::move(v);
        }
        return r;
    }
    friend DiffPoly operator*(const Scalar& s, const DiffPoly& a) { return a * s; }

    // One application of the context derivation (d or D).
    DiffPoly derivative() const {
        const Context* cx = require_ctx();
        bool odd = cx->derivation() == Derivation::Odd;
        DiffPoly r(ctx_);
        for (auto& [m, c] : t_) {
            int prefix = 0;  // parity of vars to the left, for the odd case
            for (size_t i = 0; i < m.vars.size(); ++i) {
                std::vector<VarKey> vars = m.vars;
                vars[i] = VarKey{vars[i].gen, vars[i].order + 1};
                int sign = (odd && (prefix & 1)) ? -1 : 1;
                Monomial cm;
                int csign = 1;
                if (canonicalize(*cx, std::move(vars), cm, csign)) {
                    Scalar v = c;
                    if (sign * csign < 0) v = -v;
                    r.add_term(cm, v);
                }
                prefix += cx->var_parity(m.vars[i].gen, m.vars[i].order);
            }
        }
        return r;
    }

    DiffPoly derivative(int times) const {
        DiffPoly r = *this;
        for (int i = 0; i < times; ++i) r = r.derivative();
        return r;
    }

    // The even derivation on a SUSY context: D^2. On an even context, d itself.
    DiffPoly even_derivative() const {
        return context()->susy() ? derivative().derivative() : derivative();
    }
    DiffPoly even_derivative(int times) const {
        DiffPoly r = *this;
        for (int i = 0; i < times; ++i) r = r.even_derivative();
        return r;
    }

    // Graded partial derivative, left convention: the variable is commuted to
    // the front of the monomial (collecting Koszul signs) and removed there.
    DiffPoly partial(VarKey v) const {
        const Context* cx = require_ctx();
        int vp = cx->var_parity(v.gen, v.order);
        DiffPoly r(ctx_);
        for (auto& [m, c] : t_) {
            int prefix = 0;
            for (size_t i = 0; i < m.vars.size(); ++i) {
                if (m.vars[i] == v) {
                    std::vector<VarKey> vars;
                    vars.reserve(m.vars.size() - 1);
                    for (size_t j = 0; j < m.vars.size(); ++j)
                        if (j != i) vars.push_back(m.vars[j]);
                    int sign = ((vp & prefix) & 1) ? -1 : 1;
                    Scalar val = c;
                    if (sign < 0) val = -val;
                    r.add_term(Monomial{std::move(vars)}, val);
                }
                prefix += cx->var_parity(m.vars[i].gen, m.vars[i].order);
            }
        }
        return r;
    }

    std::optional<Parity> parity() const {
        std::optional<Parity> p;
        const Context* cx = require_ctx();
        for (auto& [m, c] : t_) {
            Parity mp = monomial_parity(*cx, m);
            if (!p)
                p = mp;
            else if (*p != mp)
                return std::nullopt;
        }
        if (!p) return Parity::Even;  // zero counts as even
        return p;
    }

    DiffPoly parity_part(Parity want) const {
        const Context* cx = require_ctx();
        DiffPoly r(ctx_);
        for (auto& [m, c] : t_)
            if (monomial_parity(*cx, m) == want) r.t_[m] = c;
        return r;
    }

    static Parity monomial_parity(const Context& cx, const Monomial& m) {
        int p = 0;
        for (auto& v : m.vars) p += cx.var_parity(v.gen, v.order);
        return parity_from_int(p);
    }

    std::set<VarKey> variables() const {
        std::set<VarKey> s;
        for (auto& [m, c] : t_)
            for (auto& v : m.vars) s.insert(v);
        return s;
    }

    size_t max_monomial_degree() const {
        size_t d = 0;
        for (auto& [m, c] : t_) d = std::max(d, m.degree());
        return d;
    }

    const std::map<Monomial, Scalar>& terms() const { return t_; }

    // Differential algebra homomorphism determined by generator images in a
    // target context of the same derivation kind; images must match parity.
    DiffPoly substitute(const ContextPtr& target,
                        const std::vector<DiffPoly>& gen_images) const {
        const Context* cx = require_ctx();
        if (static_cast<int>(gen_images.size()) != cx->num_generators())
            throw ContextError("substitution needs one image per generator");
        std::map<VarKey, DiffPoly> cache;
        auto image_of = [&](VarKey v) -> const DiffPoly& {
            auto it = cache.find(v);
            if (it != cache.end()) return it->second;
            DiffPoly img = gen_images[static_cast<size_t>(v.gen)].derivative(v.order);
            return cache.emplace(v, std::move(img)).first->second;
        };
        DiffPoly out(target);
        for (auto& [m, c] : t_) {
            DiffPoly acc = DiffPoly::constant(target, c);
            for (auto& v : m.vars) acc = acc * image_of(v);
            out += acc;
        }
        return out;
    }

    // Sorts a variable list, tracking the Koszul sign; false when an odd
    // variable repeats.
    static bool canonicalize(const Context& cx, std::vector<VarKey> vars, Monomial& out,
                             int& sign) {
        sign = 1;
        for (size_t i = 1; i < vars.size(); ++i) {
            VarKey key = vars[i];
            int kp = cx.var_parity(key.gen, key.order);
            size_t j = i;
            while (j > 0 && key < vars[j - 1]) {
                int other = cx.var_parity(vars[j - 1].gen, vars[j - 1].order);
                if (kp & other & 1) sign = -sign;
                vars[j] = vars[j - 1];
                --j;
            }
            vars[j] = key;
        }
        for (size_t i = 1; i < vars.size(); ++i)
            if (vars[i] == vars[i - 1] && cx.var_parity(vars[i].gen, vars[i].order)) return false;
        out.vars = std::move(vars);
        return true;
    }

private:
    const Context* require_ctx() const {
        if (!ctx_) throw ContextError("operation needs an algebra context");
        return ctx_.get();
    }

    void adopt_context(const DiffPoly& o) {
        if (!ctx_) ctx_ = o.ctx_;
    }

    void add_term(const Monomial& m, const Scalar& c) {
        if (c.is_zero()) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    // Merge two canonical monomials; false when an odd variable squares.
    static bool merge_monomials(const Context& cx, const Monomial& a, const Monomial& b,
                                Monomial& out, int& sign) {
        sign = 1;
        out.vars.clear();
        out.vars.reserve(a.vars.size() + b.vars.size());
        size_t i = 0, j = 0;
        int odd_left = 0;  // odd vars of a not yet consumed
        for (auto& v : a.vars) odd_left += cx.var_parity(v.gen, v.order);
        while (i < a.vars.size() && j < b.vars.size()) {
            if (a.vars[i] <= b.vars[j]) {
                odd_left -= cx.var_parity(a.vars[i].gen, a.vars[i].order);
                out.vars.push_back(a.vars[i++]);
            } else {
                if ((cx.var_parity(b.vars[j].gen, b.vars[j].order) & odd_left) & 1)
                    sign = -sign;
                out.vars.push_back(b.vars[j++]);
            }
        }
        while (i < a.vars.size()) out.vars.push_back(a.vars[i++]);
        while (j < b.vars.size()) out.vars.push_back(b.vars[j++]);
        for (size_t t = 1; t < out.vars.size(); ++t)
            if (out.vars[t] == out.vars[t - 1] &&
                cx.var_parity(out.vars[t].gen, out.vars[t].order))
                return false;
        return true;
    }

    ContextPtr ctx_;
    std::map<Monomial, Scalar> t_;
};

inline int parity_int(const DiffPoly& p) {
    auto q = p.parity();
    if (!q) throw ContextError("polynomial is not parity homogeneous");
    return parity_of(*q);
}

}  // namespace pvsa
