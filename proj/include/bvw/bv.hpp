#ifndef BVW_BV_HPP
#define BVW_BV_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "linalg.hpp"

namespace bvw {

/* one gauge symmetry: ghost C^a and the vector-field components rho_a^i */
struct Symmetry {
    std::string name;
    int ghost = -1;
    std::vector<std::pair<int, Poly>> rho; // (field generator, coefficient)
};

struct NonminimalPair {
    int cbar = -1, b = -1;
};

struct LatticeParams {
    int nt = 0, nx = 0;
    Rat at = 1, ax = 1, m2 = 0;
    bool active() const { return nt > 0; }
    Rat cell() const { return at * ax; }
};

struct Model {
    AlgebraPtr alg;
    std::vector<std::pair<std::string, Rat>> params;
    std::vector<int> matter; // even matter / lattice-site fields
    std::vector<int> ghosts;
    Poly action;
    std::string action_name = "S";
    std::vector<Symmetry> symmetries;
    /* antisymmetrized in the lower pair; both orders stored */
    std::map<std::array<int, 3>, Rat> structure;
    std::vector<NonminimalPair> nonminimal;
    Poly gauge_fermion;
    bool has_gauge_fermion = false;
    LatticeParams lattice;
    Poly interaction;
    bool has_interaction = false;
};

inline void set_structure(Model& m, int c, int a, int b, const Rat& v)
{
    if (a == b && v != 0)
        throw error("structure constant with repeated lower index must vanish");
    auto put = [&](int aa, int bb, const Rat& vv) {
        std::array<int, 3> key{c, aa, bb};
        auto it = m.structure.find(key);
        if (it != m.structure.end() && it->second != vv)
            throw error("conflicting structure constant assignment");
        m.structure[key] = vv;
    };
    if (v == 0) return;
    put(a, b, v);
    put(b, a, -v);
}

/* {X,Y} = -sum_a nu_a (-1)^{(1+|X|)|f_a|} ( dX/df_a dY/df_a' +
   (-1)^{|X|} dX/df_a' dY/df_a ), left derivatives, summed over
   field/antifield pairs; X handled per parity component */
inline Poly antibracket(const Poly& X, const Poly& Y)
{
    AlgebraPtr alg = X.algebra() ? X.algebra() : Y.algebra();
    Poly out(alg);
    auto parts = parity_parts(X);
    for (int px = 0; px <= 1; ++px) {
        const Poly& Xp = parts[px];
        if (Xp.is_zero()) continue;
        for (int fi = 0; fi < alg->size(); ++fi) {
            const Generator& f = alg->gen(fi);
            if (f.anti) continue;
            int ai = f.pair;
            Poly t = Xp.ld(fi) * Y.ld(ai);
            Poly u = Xp.ld(ai) * Y.ld(fi);
            Poly sum = px ? t - u : t + u;
            if (sum.is_zero()) continue;
            int sgn = ((1 + px) * (f.odd() ? 1 : 0)) % 2 ? 1 : -1; // includes the global -
            out += sum.scaled(GRat(sgn < 0 ? -f.nu : f.nu));
        }
    }
    return out;
}

/* Delta X = sum_a nu_a (-1)^{|f_a|(1+|X|)} d^2 X / df_a' df_a */
/* the per-pair sign makes D the BV-algebra partner of the bracket:
   D(xx') = 1 while D(cc') = -1 for an odd c, so that
   {P,Q} = (-1)^{1+|P|}(D(PQ) - DP Q - (-1)^{|P|} P DQ) holds throughout
   (and literally, without the prefactor, whenever P is odd) */
inline Poly bv_laplacian(const Poly& X)
{
    AlgebraPtr alg = X.algebra();
    Poly out(alg);
    for (int fi = 0; fi < alg->size(); ++fi) {
        const Generator& f = alg->gen(fi);
        if (f.anti) continue;
        Poly dd = X.ld(fi).ld(f.pair);
        if (dd.is_zero()) continue;
        out += dd.scaled(GRat(f.odd() ? -f.nu : f.nu));
    }
    return out;
}

inline Poly koszul(const Model& m, const Poly& X)
{
    return antibracket(X, m.action);
}

/* derivation extension of the generator table: gamma(field) = sum_a C^a rho_a,
   gamma(C^c) = -1/2 f^c_ab C^a C^b, zero on everything else */
inline Poly ce_differential(const Model& m, const Poly& X)
{
    Poly out(m.alg);
    std::map<int, Poly> img;
    for (auto& sym : m.symmetries) {
        Poly C = Poly::generator(m.alg, sym.ghost);
        for (auto& [field, rho] : sym.rho) {
            auto it = img.emplace(field, Poly(m.alg)).first;
            it->second += C * rho;
        }
    }
    for (auto& [key, v] : m.structure) {
        auto [c, a, b] = key;
        Poly CC = Poly::generator(m.alg, m.symmetries[(size_t)a].ghost) *
                  Poly::generator(m.alg, m.symmetries[(size_t)b].ghost);
        auto it = img.emplace(m.symmetries[(size_t)c].ghost, Poly(m.alg)).first;
        it->second += CC.scaled(GRat(-v / 2));
    }
    /* extend over products the same way the bracket with the action does:
       gamma(X) = sum_g (-1)^((1+|X|)|g|) (d X / d g) gamma(g),
       per parity-homogeneous component of X */
    auto parts = parity_parts(X);
    for (int px = 0; px < 2; ++px) {
        if (parts[(size_t)px].is_zero()) continue;
        for (auto& [g, gim] : img) {
            Poly d = parts[(size_t)px].ld(g);
            if (d.is_zero()) continue;
            int sgn = ((1 + px) * (m.alg->gen(g).odd() ? 1 : 0)) % 2;
            out += (d * gim).scaled(GRat(sgn ? -1 : 1));
        }
    }
    return out;
}

inline Poly build_extended_action(const Model& m)
{
    Poly s = m.action;
    for (auto& sym : m.symmetries) {
        Poly C = Poly::generator(m.alg, sym.ghost);
        for (auto& [field, rho] : sym.rho)
            s += C * rho * Poly::generator(m.alg, m.alg->gen(field).pair);
    }
    for (auto& [key, v] : m.structure) {
        auto [c, a, b] = key;
        s += (Poly::generator(m.alg, m.symmetries[(size_t)a].ghost) *
              Poly::generator(m.alg, m.symmetries[(size_t)b].ghost) *
              Poly::generator(m.alg, m.alg->gen(m.symmetries[(size_t)c].ghost).pair))
                 .scaled(GRat(v / 2));
    }
    /* trivial pairs: the sign is fixed by s(Cbar) = i B */
    for (auto& nm : m.nonminimal)
        s += (Poly::generator(m.alg, nm.b) *
              Poly::generator(m.alg, m.alg->gen(nm.cbar).pair))
                 .scaled(-GRat::i_unit());
    return s;
}

inline Poly bv_differential(const Model& m, const Poly& X)
{
    return antibracket(X, build_extended_action(m));
}

struct CmeResult {
    bool holds = false;
    Poly residual;
};

inline CmeResult check_cme(const Model& m)
{
    Poly sext = build_extended_action(m);
    Poly r = antibracket(sext, sext);
    return CmeResult{r.is_zero(), r};
}

/* alpha_psi(X) = sum_n 1/n! {psi, ... {psi, X}}; terminates because each
   bracket with the antifield-free psi eats one antifield of X */
inline Poly gauge_fix(const Model& m, const Poly& X)
{
    if (!m.has_gauge_fermion) return X;
    const Poly& psi = m.gauge_fermion;
    Grading g = grading(psi);
    if (!psi.is_zero() && (!g.hom_gh || g.gh != -1 || !g.hom_af || g.af != 0))
        throw error("gauge fermion must have ghost number -1 and no antifields");
    Poly acc = X, term = X;
    Int fact = 1;
    for (int n = 1; !term.is_zero(); ++n) {
        term = antibracket(psi, term);
        fact *= n;
        acc += term.scaled(GRat(Rat(1) / Rat(fact)));
        if (n > 512) throw error("gauge fixing did not terminate");
    }
    return acc;
}

struct BrstExpansion {
    Poly gauge_fixed_action;
    std::vector<std::pair<int, Poly>> brst; // (generator, #ta-preserving s-image)
};

inline BrstExpansion expand_by_ta(const Model& m, const Poly& transformed)
{
    BrstExpansion out{component_ta(transformed, 0), {}};
    for (int g = 0; g < m.alg->size(); ++g) {
        if (m.alg->gen(g).anti) continue;
        Poly sg = antibracket(Poly::generator(m.alg, g), transformed);
        out.brst.emplace_back(g, component_ta(sg, 0));
    }
    return out;
}

struct SymmetryCheck {
    bool symmetry = false;
    bool trivial = false; // certified at `bound`; false means no certificate
    int bound = 0;
};

namespace detail {
/* all monomials of degree <= d over the given even generators */
inline void even_monomials(const std::vector<int>& gens, int d,
                           std::vector<Mono>& out, Mono cur = {}, size_t from = 0)
{
    out.push_back(cur);
    for (size_t k = from; k < gens.size(); ++k) {
        if (d == 0) break;
        Mono next = cur;
        if (!next.ev.empty() && next.ev.back().first == gens[k])
            ++next.ev.back().second;
        else
            next.ev.emplace_back(gens[k], 1);
        even_monomials(gens, d - 1, out, next, k);
    }
}
} // namespace detail

/* X a vector field written as sum_i p_i(phi) phi'_i: symmetry iff {X,S}=0;
   trivial iff every p_i sits in the span of (monomial * dS/dphi_j) up to the
   degree bound (no certificate at the bound reports trivial=false) */
inline SymmetryCheck is_symmetry(const Model& m, const Poly& X, int bound = -1)
{
    Grading g = grading(X);
    if (!X.is_zero() && (!g.hom_af || g.af != 1 || !g.hom_gh || g.gh != -1))
        throw error("symmetry candidate must be a vector field (one antifield, ghost number -1)");
    SymmetryCheck out;
    out.symmetry = antibracket(X, m.action).is_zero();
    if (bound < 0) bound = X.max_degree() + m.action.max_degree();
    out.bound = bound;

    std::vector<Poly> sigma;
    int sig_deg = 0;
    for (int f : m.matter) {
        sigma.push_back(m.action.ld(f));
        sig_deg = std::max(sig_deg, sigma.back().max_degree());
    }
    std::vector<Mono> monos;
    detail::even_monomials(m.matter, std::max(0, bound - sig_deg), monos);

    std::map<Mono, int> row;
    auto col_of = [&](const Poly& p) {
        std::vector<std::pair<int, GRat>> col;
        for (auto& [mono, s] : p.terms()) {
            auto it = row.emplace(mono, (int)row.size()).first;
            col.emplace_back(it->second, s.coeff(0, 0));
        }
        std::sort(col.begin(), col.end(),
                  [](auto& x, auto& y) { return x.first < y.first; });
        return clear_denominators(col);
    };
    Echelon span;
    for (auto& mono : monos)
        for (auto& sg : sigma) {
            Poly prod(m.alg);
            prod.add(mono, Series::scalar(GRat(1), m.alg->trunc));
            prod *= sg;
            if (prod.max_degree() <= bound) span.insert(col_of(prod));
        }
    out.trivial = true;
    for (int f : m.matter) {
        Poly p = X.ld(m.alg->gen(f).pair);
        if (p.is_zero()) continue;
        if (p.max_degree() > bound || !span.in_span(col_of(p))) {
            out.trivial = false;
            break;
        }
    }
    return out;
}

} // namespace bvw

#endif
