#ifndef BVW_COHOMOLOGY_HPP
#define BVW_COHOMOLOGY_HPP

#include <functional>

#include "bv.hpp"

namespace bvw {

struct TruncatedBasis {
    int ghost_number = 0;
    int max_degree = 0;
    std::vector<Mono> monomials; // ascending in the canonical monomial order
};

namespace detail {
inline void basis_rec(const Algebra& a, const std::vector<int>& gens, size_t i,
                      int deg_left, int gh_acc, int gh_target, Mono& cur,
                      std::vector<Mono>& out)
{
    if (i == gens.size()) {
        if (gh_acc == gh_target) out.push_back(cur);
        return;
    }
    basis_rec(a, gens, i + 1, deg_left, gh_acc, gh_target, cur, out);
    const Generator& g = a.gen(gens[i]);
    int maxe = g.odd() ? std::min(1, deg_left) : deg_left;
    for (int e = 1; e <= maxe; ++e) {
        Mono next = cur;
        if (g.odd())
            next.od.insert(std::lower_bound(next.od.begin(), next.od.end(), gens[i]),
                           gens[i]);
        else
            next.ev.emplace_back(gens[i], e);
        std::sort(next.ev.begin(), next.ev.end());
        basis_rec(a, gens, i + 1, deg_left - e, gh_acc + e * g.gh, gh_target,
                  next, out);
    }
}
} // namespace detail

inline TruncatedBasis monomial_basis(const AlgebraPtr& alg, int gh, int max_degree,
                                     std::vector<int> gens = {})
{
    if (max_degree < 0) throw error("max degree must be nonnegative");
    if (gens.empty())
        for (int g = 0; g < alg->size(); ++g) gens.push_back(g);
    TruncatedBasis b{gh, max_degree, {}};
    Mono cur;
    detail::basis_rec(*alg, gens, 0, max_degree, 0, gh, cur, b.monomials);
    std::sort(b.monomials.begin(), b.monomials.end());
    return b;
}

/* sparse columns of op w.r.t. the two bases; any image term that falls
   outside the codomain raises an error */
inline std::vector<SparseVec> operator_matrix(
    const std::function<Poly(const Poly&)>& op, const TruncatedBasis& domain,
    const TruncatedBasis& codomain, const AlgebraPtr& alg)
{
    std::map<Mono, int> row;
    for (size_t i = 0; i < codomain.monomials.size(); ++i)
        row.emplace(codomain.monomials[i], (int)i);
    std::vector<SparseVec> cols;
    cols.reserve(domain.monomials.size());
    for (auto& mono : domain.monomials) {
        Poly x(alg);
        x.add(mono, Series::scalar(GRat(1), alg->trunc));
        Poly y = op(x);
        std::vector<std::pair<int, GRat>> col;
        for (auto& [m, s] : y.terms()) {
            auto it = row.find(m);
            if (it == row.end()) throw error("codomain too small");
            if (s.terms().size() != 1 || !(s.terms().begin()->first == Series::Key{}))
                throw error("differential has series coefficients");
            col.emplace_back(it->second, s.coeff(0, 0));
        }
        std::sort(col.begin(), col.end(),
                  [](auto& u, auto& v) { return u.first < v.first; });
        cols.push_back(clear_denominators(col));
    }
    return cols;
}

struct CohomologyReport {
    int ghost_number = 0;
    int max_degree = 0;
    int dim_kernel = 0;
    int dim_image = 0; // of the image intersected with the degree-D span
    int dim_cohomology = 0;
    std::vector<Poly> representatives;
};

enum class DiffKind { s, delta, gamma };

inline const char* diff_name(DiffKind k)
{
    switch (k) {
    case DiffKind::s: return "s";
    case DiffKind::delta: return "delta";
    default: return "gamma";
    }
}

/* generator subcomplexes: delta lives on matter fields and their antifields,
   gamma on the antifield-free sector, s on the whole algebra */
inline std::vector<int> complex_generators(const Model& m, DiffKind k)
{
    std::vector<int> out;
    for (int g = 0; g < m.alg->size(); ++g) {
        const Generator& gen = m.alg->gen(g);
        bool keep = false;
        switch (k) {
        case DiffKind::delta: {
            int f = gen.anti ? gen.pair : g;
            keep = std::find(m.matter.begin(), m.matter.end(), f) != m.matter.end();
            break;
        }
        case DiffKind::gamma:
            keep = !gen.anti;
            break;
        case DiffKind::s:
            keep = true;
            break;
        }
        if (keep) out.push_back(g);
    }
    return out;
}

inline std::function<Poly(const Poly&)> differential(const Model& m, DiffKind k)
{
    switch (k) {
    case DiffKind::delta: {
        Poly S = m.action;
        return [S](const Poly& x) { return antibracket(x, S); };
    }
    case DiffKind::s: {
        Poly sext = build_extended_action(m);
        return [sext](const Poly& x) { return antibracket(x, sext); };
    }
    default: {
        Model mm = m;
        return [mm](const Poly& x) { return ce_differential(mm, x); };
    }
    }
}

inline CohomologyReport cohomology_dim(const Model& m, DiffKind kind, int gh,
                                       int max_degree)
{
    const AlgebraPtr& alg = m.alg;
    auto gens = complex_generators(m, kind);
    auto diff = differential(m, kind);

    int shift = 0;
    for (int g : gens)
        shift = std::max(shift, diff(Poly::generator(alg, g)).max_degree() - 1);

    TruncatedBasis dom = monomial_basis(alg, gh, max_degree, gens);
    TruncatedBasis kercod = monomial_basis(alg, gh + 1, max_degree + shift, gens);
    TruncatedBasis imgdom = monomial_basis(alg, gh - 1, max_degree + shift, gens);
    TruncatedBasis imgcod = monomial_basis(alg, gh, max_degree + 2 * shift, gens);

    for (auto& mono : dom.monomials) {
        Poly x(alg);
        x.add(mono, Series::scalar(GRat(1), alg->trunc));
        if (!diff(diff(x)).is_zero()) {
            Poly p(alg);
            p.add(mono, Series::scalar(GRat(1), alg->trunc));
            throw error("differential does not square to zero on " + p.str());
        }
    }

    KernelResult ker = rank_and_kernel(operator_matrix(diff, dom, kercod, alg));

    Echelon img;
    for (auto& col : operator_matrix(diff, imgdom, imgcod, alg)) img.insert(col);

    /* the domain basis embeds order-preservingly into the image codomain */
    std::map<Mono, int> icod_row;
    for (size_t i = 0; i < imgcod.monomials.size(); ++i)
        icod_row.emplace(imgcod.monomials[i], (int)i);
    std::vector<int> reindex(dom.monomials.size());
    for (size_t i = 0; i < dom.monomials.size(); ++i)
        reindex[i] = icod_row.at(dom.monomials[i]);

    CohomologyReport rep;
    rep.ghost_number = gh;
    rep.max_degree = max_degree;
    rep.dim_kernel = (int)ker.kernel.size();
    for (auto& kv : ker.kernel) {
        SparseVec normalized = kv;
        if (!normalized.empty()) {
            GInt u = gdiv_exact(unit_canonical(normalized.front().second),
                                normalized.front().second);
            sv_scale(normalized, u);
        }
        SparseVec emb;
        emb.reserve(normalized.size());
        for (auto& [r, c] : normalized) emb.emplace_back(reindex[(size_t)r], c);
        if (img.insert(emb) < 0) continue; // cocycle is a coboundary
        Poly p(alg);
        for (auto& [r, c] : normalized) {
            Mono mono = dom.monomials[(size_t)r];
            p.add(mono, Series::scalar(GRat(Rat(c.re), Rat(c.im)), alg->trunc));
        }
        rep.representatives.push_back(std::move(p));
    }
    rep.dim_cohomology = (int)rep.representatives.size();
    rep.dim_image = rep.dim_kernel - rep.dim_cohomology;
    return rep;
}

} // namespace bvw

#endif
