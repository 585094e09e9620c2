#include "diskflow/expansion.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace diskflow {

namespace {

// Term algebra for iterated material derivatives: products of grid atoms
// D_t^b v, D_t^b h, their Eulerian gradients, and factors e^(m)(h), with
// Euclidean contractions between slot pairs.  The single rewrite rule
// [D_t, d_i] = -(d_i v^k) d_k generates every commutator coefficient
// mechanically; no expansion formula is transcribed by hand.
enum class AtomKind { Velocity, Enthalpy };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Atom, Grad, Sum, Product, Eos };
    Kind kind = Kind::Sum;

    AtomKind atom = AtomKind::Velocity;
    int time_order = 0;

    ExprPtr child;     // Grad, Eos
    int eos_order = 0; // Eos: multiply by e^(eos_order)(h)

    std::vector<ExprPtr> terms; // Sum

    double coeff = 1.0;          // Product
    std::vector<ExprPtr> factors;
    struct Pair {
        int fa, sa, fb, sb;
    };
    std::vector<Pair> pairs;

    int rank = 0;
};

bool is_zero(const ExprPtr& e) { return e->kind == Expr::Kind::Sum && e->terms.empty(); }

ExprPtr zero(int rank) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Sum;
    e->rank = rank;
    return e;
}

std::mutex& intern_mutex() {
    static std::mutex m;
    return m;
}

ExprPtr atom(AtomKind k, int b) {
    static std::map<std::pair<int, int>, ExprPtr> cache;
    std::lock_guard<std::mutex> lock(intern_mutex());
    auto key = std::make_pair(int(k), b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Atom;
    e->atom = k;
    e->time_order = b;
    e->rank = (k == AtomKind::Velocity) ? 1 : 0;
    cache[key] = e;
    return e;
}

// Grad nodes are interned by child identity so repeated subexpressions share
// one node and the evaluator's memo table takes effect.
ExprPtr grad(const ExprPtr& c) {
    if (is_zero(c)) return zero(c->rank + 1);
    static std::map<const Expr*, ExprPtr> cache;
    std::lock_guard<std::mutex> lock(intern_mutex());
    auto it = cache.find(c.get());
    if (it != cache.end()) return it->second;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Grad;
    e->child = c;
    e->rank = c->rank + 1;
    cache[c.get()] = e;
    return e;
}

ExprPtr sum(std::vector<ExprPtr> terms, int rank) {
    std::vector<ExprPtr> kept;
    for (auto& t : terms)
        if (!is_zero(t)) kept.push_back(std::move(t));
    if (kept.size() == 1) return kept[0];
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Sum;
    e->terms = std::move(kept);
    e->rank = rank;
    return e;
}

ExprPtr product(double coeff, std::vector<ExprPtr> factors, std::vector<Expr::Pair> pairs) {
    int slots = 0;
    bool vanish = coeff == 0.0;
    for (const auto& f : factors) {
        slots += f->rank;
        if (is_zero(f)) vanish = true;
    }
    int rank = slots - 2 * int(pairs.size());
    if (vanish) return zero(rank);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Product;
    e->coeff = coeff;
    e->factors = std::move(factors);
    e->pairs = std::move(pairs);
    e->rank = rank;
    return e;
}

ExprPtr eos_factor(int order, const ExprPtr& c) {
    if (is_zero(c)) return zero(c->rank);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Eos;
    e->eos_order = order;
    e->child = c;
    e->rank = c->rank;
    return e;
}

ExprPtr one() {
    static ExprPtr e = product(1.0, {}, {});
    return e;
}

ExprPtr dt(const ExprPtr& e);

ExprPtr dt_impl(const ExprPtr& e) {
    switch (e->kind) {
    case Expr::Kind::Atom:
        return atom(e->atom, e->time_order + 1);
    case Expr::Kind::Grad: {
        // D_t d_i E_J = d_i (D_t E)_J - (d_i v^k)(d_k E_J)
        ExprPtr through = grad(dt(e->child));
        ExprPtr gv = grad(atom(AtomKind::Velocity, 0)); // slots (i, k)
        ExprPtr ge = grad(e->child);                    // slots (k, J..)
        ExprPtr corr = product(-1.0, {gv, ge}, {{0, 1, 1, 0}});
        return sum({through, corr}, e->rank);
    }
    case Expr::Kind::Sum: {
        std::vector<ExprPtr> out;
        out.reserve(e->terms.size());
        for (const auto& t : e->terms) out.push_back(dt(t));
        return sum(std::move(out), e->rank);
    }
    case Expr::Kind::Product: {
        // Euclidean contractions of Eulerian components commute with D_t,
        // so the product rule applies factor by factor with wiring kept.
        std::vector<ExprPtr> out;
        for (size_t f = 0; f < e->factors.size(); ++f) {
            std::vector<ExprPtr> factors = e->factors;
            factors[f] = dt(e->factors[f]);
            out.push_back(product(e->coeff, std::move(factors), e->pairs));
        }
        return sum(std::move(out), e->rank);
    }
    case Expr::Kind::Eos: {
        ExprPtr chain = eos_factor(e->eos_order + 1,
                                   product(1.0, {atom(AtomKind::Enthalpy, 1), e->child}, {}));
        ExprPtr inner = eos_factor(e->eos_order, dt(e->child));
        return sum({chain, inner}, e->rank);
    }
    }
    throw DiskflowError("unreachable expression kind");
}

ExprPtr dt(const ExprPtr& e) {
    static std::map<const Expr*, ExprPtr> cache;
    {
        std::lock_guard<std::mutex> lock(intern_mutex());
        auto it = cache.find(e.get());
        if (it != cache.end()) return it->second;
    }
    ExprPtr out = dt_impl(e);
    std::lock_guard<std::mutex> lock(intern_mutex());
    cache[e.get()] = out;
    // Keep the key alive for the lifetime of the cache entry.
    static std::vector<ExprPtr> keys;
    keys.push_back(e);
    return out;
}

ExprPtr dt_pow(ExprPtr e, int k) {
    for (int i = 0; i < k; ++i) e = dt(e);
    return e;
}

struct EvalCtx {
    const TimeDerivativeTables* tab;
    const EosFamily* eos = nullptr;
    const GeometryCache* geo;
    std::map<const Expr*, Field> memo;
};

Field eval(const ExprPtr& e, EvalCtx& ctx);

Field eval_impl(const ExprPtr& e, EvalCtx& ctx) {
    const int n_r = ctx.geo->n_r();
    const int n_t = ctx.geo->n_theta();
    switch (e->kind) {
    case Expr::Kind::Atom: {
        bool vel = e->atom == AtomKind::Velocity;
        bool ok = vel ? ctx.tab->has_v(e->time_order) : ctx.tab->has_h(e->time_order);
        if (!ok)
            throw MissingDerivedField((vel ? "velocity coefficient order " : "enthalpy coefficient order ") +
                                      std::to_string(e->time_order));
        return vel ? ctx.tab->v[e->time_order] : ctx.tab->h[e->time_order];
    }
    case Expr::Kind::Grad:
        return eulerian_gradient(eval(e->child, ctx), *ctx.geo);
    case Expr::Kind::Sum: {
        Field acc(e->rank, Frame::Eulerian, n_r, n_t);
        for (const auto& t : e->terms) acc += eval(t, ctx);
        return acc;
    }
    case Expr::Kind::Product: {
        std::vector<Field> F;
        F.reserve(e->factors.size());
        for (const auto& f : e->factors) F.push_back(eval(f, ctx));

        // slot -> (pair id) or (free position in lexicographic order)
        const int nf = int(F.size());
        const int n_pairs = int(e->pairs.size());
        std::vector<std::vector<int>> pair_id(nf), free_pos(nf);
        for (int f = 0; f < nf; ++f) {
            pair_id[f].assign(F[f].rank(), -1);
            free_pos[f].assign(F[f].rank(), -1);
        }
        for (int p = 0; p < n_pairs; ++p) {
            pair_id[e->pairs[p].fa][e->pairs[p].sa] = p;
            pair_id[e->pairs[p].fb][e->pairs[p].sb] = p;
        }
        int n_free = 0;
        for (int f = 0; f < nf; ++f)
            for (int s = 0; s < F[f].rank(); ++s)
                if (pair_id[f][s] < 0) free_pos[f][s] = n_free++;
        if (n_free != e->rank) throw RankMismatch("product slot bookkeeping");

        Field out(n_free, Frame::Eulerian, n_r, n_t);
        for (int free_bits = 0; free_bits < (1 << n_free); ++free_bits) {
            for (int pair_bits = 0; pair_bits < (1 << n_pairs); ++pair_bits) {
                ArrayXXd term = ArrayXXd::Constant(n_r, n_t, e->coeff);
                for (int f = 0; f < nf; ++f) {
                    int flat = 0;
                    const int rk = F[f].rank();
                    for (int s = 0; s < rk; ++s) {
                        int bit = pair_id[f][s] >= 0
                                      ? (pair_bits >> pair_id[f][s]) & 1
                                      : (free_bits >> (n_free - 1 - free_pos[f][s])) & 1;
                        flat |= bit << (rk - 1 - s);
                    }
                    term *= F[f].comp(flat);
                }
                out.comp(free_bits) += term;
            }
        }
        return out;
    }
    case Expr::Kind::Eos: {
        if (ctx.eos == nullptr) throw DegenerateEos("state-law factor without a state law");
        Field inner = eval(e->child, ctx);
        const ArrayXXd& h0 = ctx.tab->h[0].comp(0);
        int m = e->eos_order;
        ArrayXXd w = h0.unaryExpr([&](double x) { return ctx.eos->e_deriv(m, x); });
        for (int c = 0; c < inner.n_components(); ++c) inner.comp(c) *= w;
        return inner;
    }
    }
    throw DiskflowError("unreachable expression kind");
}

Field eval(const ExprPtr& e, EvalCtx& ctx) {
    auto it = ctx.memo.find(e.get());
    if (it != ctx.memo.end()) return it->second;
    Field out = eval_impl(e, ctx);
    ctx.memo.emplace(e.get(), out);
    return out;
}

ExprPtr wave_operand() {
    // Lap h + (d_i v^j)(d_j v^i): the right side of D_t^2 e(h) = ...
    static ExprPtr e = [] {
        ExprPtr gg = grad(grad(atom(AtomKind::Enthalpy, 0)));
        ExprPtr lap = product(1.0, {gg}, {{0, 0, 0, 1}});
        ExprPtr gv = grad(atom(AtomKind::Velocity, 0));
        ExprPtr dv2 = product(1.0, {gv, gv}, {{0, 0, 1, 1}, {0, 1, 1, 0}});
        return sum({lap, dv2}, 0);
    }();
    return e;
}

ExprPtr acceleration() {
    static ExprPtr e = product(-1.0, {grad(atom(AtomKind::Enthalpy, 0))}, {});
    return e;
}

Field zero_scalar(const GeometryCache& geo) {
    return Field(0, Frame::Eulerian, geo.n_r(), geo.n_theta());
}

} // namespace

Field velocity_coefficient(int k, const TimeDerivativeTables& t, const GeometryCache& geo) {
    if (k == 0) {
        if (!t.has_v(0)) throw MissingDerivedField("velocity coefficient order 0");
        return t.v[0];
    }
    EvalCtx ctx{&t, nullptr, &geo, {}};
    return eval(dt_pow(acceleration(), k - 1), ctx);
}

Field enthalpy_coefficient(int k, const TimeDerivativeTables& t, const EosFamily& eos,
                           const GeometryCache& geo) {
    if (k == 0) {
        if (!t.has_h(0)) throw MissingDerivedField("enthalpy coefficient order 0");
        return t.h[0];
    }
    if (eos.is_incompressible())
        throw DegenerateEos("time-derivative recursion for h needs e' > 0");

    EvalCtx ctx{&t, &eos, &geo, {}};
    ArrayXXd eprime =
        t.h[0].comp(0).unaryExpr([&](double x) { return eos.e_deriv(1, x); });
    if ((eprime <= 0.0).any()) throw DegenerateEos("e'(h) not positive on the grid");

    if (k == 1) {
        // div v = -e'(h) D_t h
        ExprPtr divv = product(1.0, {grad(atom(AtomKind::Velocity, 0))}, {{0, 0, 0, 1}});
        Field d = eval(divv, ctx);
        return Field::scalar(-d.comp(0) / eprime);
    }

    // D_t^k e(h) carries h_k only in its linear top term e'(h) h_k; evaluate
    // the rest with a zero placeholder in the h table and subtract.
    Field main = eval(dt_pow(wave_operand(), k - 2), ctx);

    TimeDerivativeTables padded = t;
    if (int(padded.h.size()) <= k) padded.h.resize(k + 1);
    padded.h[k] = zero_scalar(geo);
    EvalCtx ctx2{&padded, &eos, &geo, {}};
    Field remainder = eval(dt_pow(eos_factor(0, one()), k), ctx2);

    return Field::scalar((main.comp(0) - remainder.comp(0)) / eprime);
}

Field wave_source(int k, const TimeDerivativeTables& t, const GeometryCache& geo) {
    TimeDerivativeTables padded = t;
    if (int(padded.h.size()) <= k) padded.h.resize(k + 1);
    padded.h[k] = zero_scalar(geo);
    EvalCtx ctx{&padded, nullptr, &geo, {}};
    return eval(dt_pow(wave_operand(), k), ctx);
}

void extend_tables(TimeDerivativeTables& t, int k_v, int k_h, const EosFamily& eos,
                   const GeometryCache& geo) {
    if (!t.has_v(0) || !t.has_h(0)) throw MissingDerivedField("base fields v, h");
    int top = std::max(k_v, k_h);
    if (int(t.v.size()) <= top) t.v.resize(top + 1);
    if (int(t.h.size()) <= top + 1) t.h.resize(top + 2);
    for (int j = 1; j <= top; ++j) {
        if (j <= k_h && !t.has_h(j)) t.h[j] = enthalpy_coefficient(j, t, eos, geo);
        if (j <= k_v && !t.has_v(j)) t.v[j] = velocity_coefficient(j, t, geo);
    }
}

} // namespace diskflow
