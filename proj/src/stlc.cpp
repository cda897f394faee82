#include "capcalc/stlc.hpp"

#include "capcalc/printer.hpp"
#include "capcalc/typecheck.hpp"

#include <algorithm>
#include <set>

namespace capcalc::stlc {

namespace sty {

STypePtr unit() {
    static const STypePtr one = std::make_shared<SType>(SType{SType::Kind::Unit, nullptr, nullptr});
    return one;
}

STypePtr arrow(STypePtr dom, STypePtr cod) {
    return std::make_shared<SType>(SType{SType::Kind::Arrow, std::move(dom), std::move(cod)});
}

} // namespace sty

bool stype_equal(const STypePtr& a, const STypePtr& b) {
    if (a->kind != b->kind) return false;
    if (a->kind == SType::Kind::Unit) return true;
    return stype_equal(a->left, b->left) && stype_equal(a->right, b->right);
}

std::string print_stype(const STypePtr& t) {
    if (t->kind == SType::Kind::Unit) return "unit";
    std::string dom = print_stype(t->left);
    if (t->left->kind == SType::Kind::Arrow) dom = "(" + dom + ")";
    return dom + " -> " + print_stype(t->right);
}

namespace stm {

STermPtr unit() {
    static const STermPtr one =
        std::make_shared<STerm>(STerm{STerm::Kind::Unit, "", nullptr, nullptr, nullptr});
    return one;
}

STermPtr var(std::string name) {
    return std::make_shared<STerm>(STerm{STerm::Kind::Var, std::move(name), nullptr, nullptr, nullptr});
}

STermPtr lam(std::string name, STypePtr annot, STermPtr body) {
    return std::make_shared<STerm>(
        STerm{STerm::Kind::Lam, std::move(name), std::move(annot), std::move(body), nullptr});
}

STermPtr app(STermPtr fn, STermPtr arg) {
    return std::make_shared<STerm>(
        STerm{STerm::Kind::App, "", nullptr, std::move(fn), std::move(arg)});
}

} // namespace stm

bool sterm_equal(const STermPtr& a, const STermPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case STerm::Kind::Unit: return true;
    case STerm::Kind::Var: return a->name == b->name;
    case STerm::Kind::Lam:
        return a->name == b->name && stype_equal(a->annot, b->annot) && sterm_equal(a->a, b->a);
    case STerm::Kind::App: return sterm_equal(a->a, b->a) && sterm_equal(a->b, b->b);
    }
    return false;
}

std::string print_sterm(const STermPtr& e) {
    switch (e->kind) {
    case STerm::Kind::Unit: return "()";
    case STerm::Kind::Var: return e->name;
    case STerm::Kind::Lam:
        return "fun " + e->name + ": " + print_stype(e->annot) + " -> " + print_sterm(e->a);
    case STerm::Kind::App: {
        std::string fn = print_sterm(e->a);
        if (e->a->kind == STerm::Kind::Lam) fn = "(" + fn + ")";
        std::string arg = print_sterm(e->b);
        if (e->b->kind != STerm::Kind::Unit && e->b->kind != STerm::Kind::Var)
            arg = "(" + arg + ")";
        return fn + " " + arg;
    }
    }
    return "?";
}

STypePtr stlc_infer(const SContext& g, const STermPtr& e) {
    switch (e->kind) {
    case STerm::Kind::Unit: return sty::unit();
    case STerm::Kind::Var: {
        for (auto it = g.rbegin(); it != g.rend(); ++it)
            if (it->first == e->name) return it->second;
        throw error("unbound variable " + e->name);
    }
    case STerm::Kind::Lam: {
        SContext g2 = g;
        g2.emplace_back(e->name, e->annot);
        return sty::arrow(e->annot, stlc_infer(g2, e->a));
    }
    case STerm::Kind::App: {
        STypePtr fn = stlc_infer(g, e->a);
        if (fn->kind != SType::Kind::Arrow)
            throw error("applied a non-function of type " + print_stype(fn));
        STypePtr arg = stlc_infer(g, e->b);
        if (!stype_equal(fn->left, arg))
            throw error("argument type " + print_stype(arg) + " does not match domain " +
                        print_stype(fn->left));
        return fn->right;
    }
    }
    throw error("malformed term");
}

namespace {

void collect_free(const STermPtr& e, std::vector<std::string>& bound, std::set<std::string>& out) {
    switch (e->kind) {
    case STerm::Kind::Unit: return;
    case STerm::Kind::Var:
        if (std::find(bound.begin(), bound.end(), e->name) == bound.end()) out.insert(e->name);
        return;
    case STerm::Kind::Lam:
        bound.push_back(e->name);
        collect_free(e->a, bound, out);
        bound.pop_back();
        return;
    case STerm::Kind::App:
        collect_free(e->a, bound, out);
        collect_free(e->b, bound, out);
        return;
    }
}

} // namespace

std::vector<std::string> stlc_free_vars(const STermPtr& e) {
    std::set<std::string> out;
    std::vector<std::string> bound;
    collect_free(e, bound, out);
    return {out.begin(), out.end()};
}

STermPtr stlc_subst(const STermPtr& arg, const std::string& x, const STermPtr& e) {
    switch (e->kind) {
    case STerm::Kind::Unit: return e;
    case STerm::Kind::Var: return e->name == x ? arg : e;
    case STerm::Kind::Lam: {
        if (e->name == x) return e;
        auto arg_free = stlc_free_vars(arg);
        if (std::find(arg_free.begin(), arg_free.end(), e->name) == arg_free.end())
            return stm::lam(e->name, e->annot, stlc_subst(arg, x, e->a));
        std::set<std::string> avoid(arg_free.begin(), arg_free.end());
        avoid.insert(x);
        auto body_free = stlc_free_vars(e->a);
        avoid.insert(body_free.begin(), body_free.end());
        std::string y = fresh_name(e->name, avoid);
        STermPtr renamed = stlc_subst(stm::var(y), e->name, e->a);
        return stm::lam(y, e->annot, stlc_subst(arg, x, renamed));
    }
    case STerm::Kind::App:
        return stm::app(stlc_subst(arg, x, e->a), stlc_subst(arg, x, e->b));
    }
    throw error("malformed term");
}

STermPtr stlc_eval(const STermPtr& e, int fuel) {
    if (fuel <= 0) throw error("evaluation fuel exhausted");
    switch (e->kind) {
    case STerm::Kind::Unit:
    case STerm::Kind::Lam:
        return e;
    case STerm::Kind::Var: throw error("evaluated an open term: " + e->name);
    case STerm::Kind::App: {
        STermPtr arg = stlc_eval(e->b, fuel - 1);
        STermPtr fn = stlc_eval(e->a, fuel - 1);
        if (fn->kind != STerm::Kind::Lam) throw error("applied a non-function");
        return stlc_eval(stlc_subst(arg, fn->name, fn->a), fuel - 1);
    }
    }
    throw error("malformed term");
}

TypePtr embed_type(const STypePtr& t) {
    if (t->kind == SType::Kind::Unit) return ty::unit();
    return ty::arrow(ty::boxed(embed_type(t->left)), embed_type(t->right));
}

Context embed_context(const SContext& g) {
    Context out;
    for (const auto& [name, t] : g) out.push_back({name, embed_type(t), Qualifier::Safe});
    return out;
}

TermPtr embed_term(const STermPtr& e) {
    switch (e->kind) {
    case STerm::Kind::Unit: return tm::unit();
    case STerm::Kind::Var: return tm::var(e->name);
    case STerm::Kind::Lam: {
        TermPtr body = embed_term(e->a);
        std::set<std::string> avoid = {e->name};
        auto fv = free_vars(body);
        avoid.insert(fv.begin(), fv.end());
        std::string z = fresh_name("z", avoid);
        return tm::lam(z, ty::boxed(embed_type(e->annot)), tm::let_box(e->name, tm::var(z), body));
    }
    case STerm::Kind::App:
        return tm::app(embed_term(e->a), tm::box(embed_term(e->b)));
    }
    throw error("malformed term");
}

STypePtr unembed_type(const TypePtr& t) {
    switch (t->kind) {
    case Type::Kind::Unit:
    case Type::Kind::Str:
    case Type::Kind::Cap:
        return sty::unit();
    case Type::Kind::Arrow: return sty::arrow(unembed_type(t->left), unembed_type(t->right));
    case Type::Kind::Box: return unembed_type(t->left);
    case Type::Kind::Prod:
        throw error("product type " + print_type(t) + " has no reverse translation");
    }
    throw error("malformed type");
}

SContext unembed_context(const Context& g) {
    SContext out;
    for (const auto& b : g) out.emplace_back(b.name, unembed_type(b.type));
    return out;
}

STermPtr unembed_term(const Context& g, const TermPtr& e) {
    switch (e->kind) {
    case Term::Kind::Unit:
    case Term::Kind::Str:
        return stm::unit();
    case Term::Kind::Chan:
        throw error("channel literal has no reverse translation");
    case Term::Kind::Var: return stm::var(e->name);
    case Term::Kind::Lam: {
        Context g2 = g;
        g2.push_back({e->name, e->annot, Qualifier::Impure});
        return stm::lam(e->name, unembed_type(e->annot), unembed_term(g2, e->a));
    }
    case Term::Kind::App:
        return stm::app(unembed_term(g, e->a), unembed_term(g, e->b));
    case Term::Kind::Print: return stm::unit();
    case Term::Kind::Box: return unembed_term(g, e->a);
    case Term::Kind::LetBox: {
        TypePtr scrut = infer(g, e->a);
        if (scrut->kind != Type::Kind::Box)
            throw error("let box scrutinee has non-box type " + print_type(scrut));
        STypePtr annot = unembed_type(scrut->left);
        Context g2 = g;
        g2.push_back({e->name, scrut->left, Qualifier::Safe});
        return stm::app(stm::lam(e->name, annot, unembed_term(g2, e->b)),
                        unembed_term(g, e->a));
    }
    case Term::Kind::Pair:
    case Term::Kind::Fst:
    case Term::Kind::Snd:
        throw error("product term " + print_term(e) + " has no reverse translation");
    }
    throw error("malformed term");
}

STypePtr gen_stype(Rng& rng, int depth) {
    if (depth <= 0 || rng.chance(1, 2)) return sty::unit();
    return sty::arrow(gen_stype(rng, depth - 1), gen_stype(rng, depth - 1));
}

namespace {

STermPtr gen_canonical(Rng& rng, const SContext& g, const STypePtr& want, int size);

std::string gen_sbinder(Rng& rng, const SContext& g) {
    static const std::vector<std::string> pool = {"x", "y", "z", "u", "w"};
    for (int i = 0; i < 8; ++i) {
        std::string cand = pool[rng.below(pool.size())];
        bool taken = false;
        for (const auto& [name, t] : g)
            if (name == cand) taken = true;
        if (!taken) return cand;
    }
    std::set<std::string> avoid;
    for (const auto& [name, t] : g) avoid.insert(name);
    return fresh_name("x", avoid);
}

STermPtr gen_canonical(Rng& rng, const SContext& g, const STypePtr& want, int size) {
    std::vector<size_t> hits;
    for (size_t i = 0; i < g.size(); ++i)
        if (stype_equal(g[i].second, want)) hits.push_back(i);
    if (!hits.empty() && (size <= 1 || rng.chance(1, 3)))
        return stm::var(g[hits[rng.below(hits.size())]].first);

    if (size > 1 && rng.chance(1, 3)) {
        STypePtr dom = hits.empty() || rng.chance(1, 2) ? gen_stype(rng, 1)
                                                        : g[hits[0]].second;
        STermPtr fn = gen_canonical(rng, g, sty::arrow(dom, want), size / 2);
        STermPtr arg = gen_canonical(rng, g, dom, size / 2);
        return stm::app(fn, arg);
    }

    if (want->kind == SType::Kind::Unit) return stm::unit();
    std::string x = gen_sbinder(rng, g);
    SContext g2 = g;
    g2.emplace_back(x, want->left);
    return stm::lam(x, want->left, gen_canonical(rng, g2, want->right, size - 1));
}

} // namespace

STermPtr gen_sterm(Rng& rng, const SContext& g, const STypePtr& want, int size) {
    return gen_canonical(rng, g, want, size);
}

SContext gen_scontext(Rng& rng, int max_entries) {
    SContext g;
    size_t n = rng.below(static_cast<size_t>(max_entries) + 1);
    for (size_t i = 0; i < n; ++i)
        g.emplace_back("g" + std::to_string(i), gen_stype(rng, 2));
    return g;
}

} // namespace capcalc::stlc
