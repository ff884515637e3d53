#ifndef BVW_LATTICE_HPP
#define BVW_LATTICE_HPP

#include <string>
#include <vector>

#include "bv.hpp"

namespace bvw {

using Mat = std::vector<std::vector<Rat>>;

inline void validate(const LatticeParams& p)
{
    if (p.nt < 2) throw error("lattice needs at least two time slices");
    if (p.nx < 1) throw error("lattice needs at least one spatial site");
    if (p.at <= 0 || p.ax <= 0) throw error("lattice spacings must be positive");
    if (p.at > p.ax)
        throw error("time spacing must not exceed space spacing");
}

/* Green kernel K(s,d) of the retarded propagator: depends only on the time
   difference s and the periodic space difference d. Built by explicit time
   stepping so that the wave stencil applied to it gives the lattice delta;
   callers may ask for slices beyond the window (natural continuation). */
inline std::vector<std::vector<Rat>> green_kernel(const LatticeParams& p, int smax)
{
    std::vector<std::vector<Rat>> K((size_t)smax + 1, std::vector<Rat>((size_t)p.nx, Rat(0)));
    if (smax >= 1) K[1][0] = p.at / p.ax;
    Rat at2 = p.at * p.at, ax2 = p.ax * p.ax;
    for (int s = 1; s < smax; ++s)
        for (int d = 0; d < p.nx; ++d) {
            Rat lap = (K[(size_t)s][(size_t)((d + 1) % p.nx)] - 2 * K[(size_t)s][(size_t)d] +
                       K[(size_t)s][(size_t)((d - 1 + p.nx) % p.nx)]) / ax2;
            K[(size_t)s + 1][(size_t)d] =
                2 * K[(size_t)s][(size_t)d] - K[(size_t)s - 1][(size_t)d] +
                at2 * (lap - p.m2 * K[(size_t)s][(size_t)d]);
        }
    return K;
}

inline Mat transpose(const Mat& m)
{
    Mat r(m.empty() ? 0 : m[0].size(), std::vector<Rat>(m.size(), Rat(0)));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) r[j][i] = m[i][j];
    return r;
}

inline Mat matmul(const Mat& a, const Mat& b)
{
    size_t n = a.size(), k = b.size(), mm = b.empty() ? 0 : b[0].size();
    Mat r(n, std::vector<Rat>(mm, Rat(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < mm; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

inline std::string mat_str(const Mat& m)
{
    std::string out;
    for (auto& row : m) {
        for (size_t j = 0; j < row.size(); ++j) {
            if (j) out += " ";
            out += rat_str(row[j]);
        }
        out += "\n";
    }
    return out;
}

/* Free scalar field on the finite lattice: site algebra, wave operator,
   propagators. Dirichlet cut in time, periodic in space. */
struct LatticeOps {
    LatticeParams par;
    AlgebraPtr alg;
    Rat w;
    int nsites = 0;
    Mat P, ret, adv, cau, dir;
    std::vector<std::vector<Rat>> kernel; // slices 0..nt (one beyond the window)

    int site(int t, int x) const
    {
        return t * par.nx + ((x % par.nx) + par.nx) % par.nx;
    }
    int tof(int p) const { return p / par.nx; }
    int xof(int p) const { return p % par.nx; }
    int fgen(int p) const { return 2 * p; }
    int agen(int p) const { return 2 * p + 1; }

    Poly phi(int p) const { return Poly::generator(alg, fgen(p)); }
    Poly phidag(int p) const { return Poly::generator(alg, agen(p)); }

    /* S = 1/2 sum_p w phi(p) (P phi)(p) */
    Poly free_action() const
    {
        Poly s(alg);
        for (int p = 0; p < nsites; ++p)
            for (int q = 0; q < nsites; ++q) {
                if (P[(size_t)p][(size_t)q] == 0) continue;
                s += (phi(p) * phi(q)).scaled(GRat(w * P[(size_t)p][(size_t)q] / 2));
            }
        return s;
    }

    /* Phi(f) = sum_p w f(p) phi(p) */
    Poly smeared(const std::vector<Rat>& f) const
    {
        Poly s(alg);
        for (int p = 0; p < nsites; ++p)
            if (f[(size_t)p] != 0) s += phi(p).scaled(GRat(w * f[(size_t)p]));
        return s;
    }

    /* <f, M g> = sum_{p,q} w f(p) M(p,q) w g(q) */
    Rat pairing(const std::vector<Rat>& f, const Mat& M,
                const std::vector<Rat>& g) const
    {
        Rat s = 0;
        for (int p = 0; p < nsites; ++p) {
            if (f[(size_t)p] == 0) continue;
            for (int q = 0; q < nsites; ++q)
                s += w * f[(size_t)p] * M[(size_t)p][(size_t)q] * w * g[(size_t)q];
        }
        return s;
    }

    /* delta function supported at one site, normalized to 1/w */
    std::vector<Rat> delta_fn(int p) const
    {
        std::vector<Rat> f((size_t)nsites, Rat(0));
        f[(size_t)p] = 1 / w;
        return f;
    }
};

inline LatticeOps build_lattice(const LatticeParams& par, Trunc tr = Trunc{})
{
    validate(par);
    LatticeOps L;
    L.par = par;
    L.w = par.cell();
    L.nsites = par.nt * par.nx;
    auto alg = std::make_shared<Algebra>();
    alg->trunc = tr;
    Rat nu = 1 / L.w;
    for (int t = 0; t < par.nt; ++t)
        for (int x = 0; x < par.nx; ++x)
            alg->add_pair("phi(" + std::to_string(t) + "," + std::to_string(x) + ")",
                          0, 0, 0, nu);
    L.alg = alg;

    Rat at2 = par.at * par.at, ax2 = par.ax * par.ax;
    L.P.assign((size_t)L.nsites, std::vector<Rat>((size_t)L.nsites, Rat(0)));
    for (int t = 0; t < par.nt; ++t)
        for (int x = 0; x < par.nx; ++x) {
            int p = L.site(t, x);
            L.P[(size_t)p][(size_t)p] += Rat(-2) / at2 + Rat(2) / ax2 + par.m2;
            if (t + 1 < par.nt) L.P[(size_t)p][(size_t)L.site(t + 1, x)] += 1 / at2;
            if (t - 1 >= 0) L.P[(size_t)p][(size_t)L.site(t - 1, x)] += 1 / at2;
            L.P[(size_t)p][(size_t)L.site(t, x + 1)] += Rat(-1) / ax2;
            L.P[(size_t)p][(size_t)L.site(t, x - 1)] += Rat(-1) / ax2;
        }

    L.kernel = green_kernel(par, par.nt);
    L.ret.assign((size_t)L.nsites, std::vector<Rat>((size_t)L.nsites, Rat(0)));
    for (int p = 0; p < L.nsites; ++p)
        for (int q = 0; q < L.nsites; ++q) {
            int s = L.tof(p) - L.tof(q);
            if (s <= 0) continue;
            int d = ((L.xof(p) - L.xof(q)) % par.nx + par.nx) % par.nx;
            L.ret[(size_t)p][(size_t)q] = L.kernel[(size_t)s][(size_t)d];
        }
    L.adv = transpose(L.ret);
    L.cau.assign((size_t)L.nsites, std::vector<Rat>((size_t)L.nsites, Rat(0)));
    L.dir = L.cau;
    for (int p = 0; p < L.nsites; ++p)
        for (int q = 0; q < L.nsites; ++q) {
            L.cau[(size_t)p][(size_t)q] = L.ret[(size_t)p][(size_t)q] - L.adv[(size_t)p][(size_t)q];
            L.dir[(size_t)p][(size_t)q] = (L.ret[(size_t)p][(size_t)q] + L.adv[(size_t)p][(size_t)q]) / 2;
        }
    return L;
}

/* wave stencil applied to the kernel-continued retarded propagator at window
   point (p, q); uses the slice beyond the window at the top time boundary */
inline Rat stencil_on_kernel(const LatticeOps& L, int p, int q)
{
    const LatticeParams& par = L.par;
    auto kval = [&](int t, int x) -> Rat {
        int s = t - L.tof(q);
        if (s <= 0 || s > par.nt) return Rat(0);
        int d = ((x - L.xof(q)) % par.nx + par.nx) % par.nx;
        return L.kernel[(size_t)s][(size_t)d];
    };
    int t = L.tof(p), x = L.xof(p);
    Rat at2 = par.at * par.at, ax2 = par.ax * par.ax;
    return (kval(t + 1, x) - 2 * kval(t, x) + kval(t - 1, x)) / at2 -
           (kval(t, x + 1) - 2 * kval(t, x) + kval(t, x - 1)) / ax2 +
           par.m2 * kval(t, x);
}

inline Model free_scalar(int nt, int nx, const Rat& at, const Rat& ax,
                         const Rat& m2, Trunc tr = Trunc{})
{
    LatticeParams par{nt, nx, at, ax, m2};
    LatticeOps L = build_lattice(par, tr);
    Model m;
    m.alg = L.alg;
    m.lattice = par;
    m.action = L.free_action();
    for (int p = 0; p < L.nsites; ++p) m.matter.push_back(L.fgen(p));
    return m;
}

} // namespace bvw

#endif
