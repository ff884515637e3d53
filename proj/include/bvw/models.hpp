#ifndef BVW_MODELS_HPP
#define BVW_MODELS_HPP

#include "lattice.hpp"

namespace bvw {

/* x,y,z with S = z * prod_k (x^2+y^2-k^2): N concentric circles in the
   x,y-plane as critical set, one abelian rotation symmetry with ghost c */
inline Model toy_circles(int N, Trunc tr = Trunc{})
{
    if (N < 1) throw error("toy_circles needs N >= 1");
    Model m;
    auto alg = std::make_shared<Algebra>();
    alg->trunc = tr;
    int x = alg->add_pair("x", 0, 0, 0);
    int y = alg->add_pair("y", 0, 0, 0);
    int z = alg->add_pair("z", 0, 0, 0);
    int c = alg->add_pair("c", 1, 1, 0);
    m.alg = alg;
    m.matter = {x, y, z};
    m.ghosts = {c};
    m.params.emplace_back("N", Rat(N));

    Poly px = Poly::generator(alg, x), py = Poly::generator(alg, y),
         pz = Poly::generator(alg, z);
    Poly prod = Poly::one(alg);
    for (int k = 1; k <= N; ++k)
        prod *= px * px + py * py - Poly::constant(alg, GRat(k * k));
    m.action = pz * prod;

    Symmetry rot;
    rot.name = "rot";
    rot.ghost = c;
    rot.rho = {{x, py}, {y, -px}};
    m.symmetries.push_back(rot);
    return m;
}

inline int eps3(int i, int j, int k) // permutation sign of (i,j,k) on {0,1,2}
{
    if (i == j || j == k || i == k) return 0;
    return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

/* su(2) gauge structure on its own (zero action), optionally acting on a
   triplet of adjoint scalars */
inline Model lie_gauge(bool adjoint, Trunc tr = Trunc{})
{
    Model m;
    auto alg = std::make_shared<Algebra>();
    alg->trunc = tr;
    int p[3] = {-1, -1, -1};
    if (adjoint)
        for (int a = 0; a < 3; ++a) {
            p[a] = alg->add_pair("p" + std::to_string(a + 1), 0, 0, 0);
            m.matter.push_back(p[a]);
        }
    int C[3];
    for (int a = 0; a < 3; ++a) {
        C[a] = alg->add_pair("C" + std::to_string(a + 1), 1, 1, 0);
        m.ghosts.push_back(C[a]);
    }
    m.alg = alg;
    m.action = Poly::zero(alg);

    for (int a = 0; a < 3; ++a) {
        Symmetry s;
        s.name = "s" + std::to_string(a + 1);
        s.ghost = C[a];
        if (adjoint)
            for (int j = 0; j < 3; ++j) {
                Poly rho(alg);
                for (int k = 0; k < 3; ++k) {
                    int e = eps3(j, a, k);
                    if (e) rho += Poly::generator(alg, p[k]).scaled(GRat(e));
                }
                if (!rho.is_zero()) s.rho.emplace_back(p[j], rho);
            }
        m.symmetries.push_back(s);
    }
    for (int c = 0; c < 3; ++c)
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                set_structure(m, c, a, b, Rat(eps3(a, b, c)));
    return m;
}

/* matrix-model Yang-Mills: d+1 su(2)-adjoint coordinates A_mu, action
   -1/4 sum_{mu,nu} tr([A_mu,A_nu]^2) with tr(T^a T^b) = delta_ab, ghosts,
   trivial pairs and the default gauge fermion sum_a Cbar_a A0_a */
inline Model ym_matrix(int d, Trunc tr = Trunc{})
{
    if (d < 0) throw error("ym_matrix needs d >= 0");
    Model m;
    auto alg = std::make_shared<Algebra>();
    alg->trunc = tr;
    std::vector<std::array<int, 3>> A((size_t)d + 1);
    for (int mu = 0; mu <= d; ++mu)
        for (int a = 0; a < 3; ++a) {
            A[(size_t)mu][(size_t)a] = alg->add_pair(
                "A" + std::to_string(mu) + "_" + std::to_string(a + 1), 0, 0, 0);
            m.matter.push_back(A[(size_t)mu][(size_t)a]);
        }
    int C[3];
    for (int a = 0; a < 3; ++a) {
        C[a] = alg->add_pair("C" + std::to_string(a + 1), 1, 1, 0);
        m.ghosts.push_back(C[a]);
    }
    int cbar[3], B[3];
    for (int a = 0; a < 3; ++a) {
        cbar[a] = alg->add_pair("Cbar" + std::to_string(a + 1), -1, 0, 0, Rat(1), true);
        B[a] = alg->add_pair("B" + std::to_string(a + 1), 0, 0, 0);
        m.nonminimal.push_back(NonminimalPair{cbar[a], B[a]});
    }
    m.alg = alg;
    m.params.emplace_back("d", Rat(d));

    auto gen = [&](int g) { return Poly::generator(alg, g); };
    Poly S(alg);
    for (int mu = 0; mu <= d; ++mu)
        for (int nu = 0; nu <= d; ++nu)
            for (int c = 0; c < 3; ++c) {
                Poly F(alg); // [A_mu, A_nu]^c
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) {
                        int e = eps3(a, b, c);
                        if (e)
                            F += (gen(A[(size_t)mu][(size_t)a]) * gen(A[(size_t)nu][(size_t)b]))
                                     .scaled(GRat(e));
                    }
                S += (F * F).scaled(GRat(Rat(-1, 4)));
            }
    m.action = S;

    for (int a = 0; a < 3; ++a) {
        Symmetry s;
        s.name = "s" + std::to_string(a + 1);
        s.ghost = C[a];
        for (int mu = 0; mu <= d; ++mu)
            for (int j = 0; j < 3; ++j) {
                Poly rho(alg);
                for (int k = 0; k < 3; ++k) {
                    int e = eps3(j, a, k);
                    if (e) rho += gen(A[(size_t)mu][(size_t)k]).scaled(GRat(e));
                }
                if (!rho.is_zero()) s.rho.emplace_back(A[(size_t)mu][(size_t)j], rho);
            }
        m.symmetries.push_back(s);
    }
    for (int c = 0; c < 3; ++c)
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                set_structure(m, c, a, b, Rat(eps3(a, b, c)));

    Poly psi(alg);
    for (int a = 0; a < 3; ++a) psi += gen(cbar[a]) * gen(A[0][(size_t)a]);
    m.gauge_fermion = psi;
    m.has_gauge_fermion = true;
    return m;
}

/* default interacting lattice: 4x3 unit lattice, massless, quartic vertex
   V = (coupling/24) * lambda * sum_p w phi(p)^4 */
inline Model phi4(const Rat& coupling, Trunc tr = Trunc{})
{
    Model m = free_scalar(4, 3, Rat(1), Rat(1), Rat(0), tr);
    m.params.emplace_back("coupling", coupling);
    LatticeOps L = build_lattice(m.lattice, tr);
    Poly V(m.alg);
    for (int p = 0; p < L.nsites; ++p) {
        Poly f = Poly::generator(m.alg, L.fgen(p));
        V += (f * f * f * f).shifted(0, 1, GRat(coupling * L.w / 24));
    }
    m.interaction = V;
    m.has_interaction = true;
    return m;
}

} // namespace bvw

#endif
