#include <catch2/catch_amalgamated.hpp>

#include "bvw/models.hpp"

using namespace bvw;

namespace {

Poly P_phi(const LatticeOps& L, int p)
{
    Poly s(L.alg);
    for (int q = 0; q < L.nsites; ++q)
        if (L.P[(size_t)p][(size_t)q] != 0)
            s += L.phi(q).scaled(GRat(L.P[(size_t)p][(size_t)q]));
    return s;
}

const LatticeParams cases[] = {
    {6, 5, Rat(1), Rat(1), Rat(0)},
    {4, 3, Rat(1, 2), Rat(1), Rat(1, 3)},
    {5, 1, Rat(1), Rat(1), Rat(2)},
    {4, 2, Rat(1), Rat(1), Rat(3, 7)},
};

} // namespace

TEST_CASE("green kernel stencil values")
{
    LatticeOps L = build_lattice({6, 5, Rat(1), Rat(1), Rat(0)});
    CHECK(L.kernel[1][0] == 1);
    CHECK(L.kernel[1][1] == 0);
    CHECK(L.kernel[2][0] == 0);
    CHECK(L.kernel[2][1] == 1);
    CHECK(L.kernel[2][4] == 1);
    CHECK(L.ret[(size_t)L.site(1, 0)][(size_t)L.site(0, 0)] == 1);
}

TEST_CASE("wave operator inverts the retarded propagator")
{
    for (auto& par : cases) {
        LatticeOps L = build_lattice(par);
        Rat inv_w = 1 / L.w;

        // stencil identity with the naturally continued kernel: every point
        for (int p = 0; p < L.nsites; ++p)
            for (int q = 0; q < L.nsites; ++q)
                CHECK(stencil_on_kernel(L, p, q) == (p == q ? inv_w : Rat(0)));

        // matrix identity on all rows below the top time slice
        Mat PR = matmul(L.P, L.ret);
        for (int p = 0; p < L.nsites - par.nx; ++p)
            for (int q = 0; q < L.nsites; ++q)
                CHECK(PR[(size_t)p][(size_t)q] == (p == q ? inv_w : Rat(0)));
    }
}

TEST_CASE("propagator symmetries and lightcone support")
{
    for (auto& par : cases) {
        LatticeOps L = build_lattice(par);
        for (int p = 0; p < L.nsites; ++p)
            for (int q = 0; q < L.nsites; ++q) {
                CHECK(L.adv[(size_t)p][(size_t)q] == L.ret[(size_t)q][(size_t)p]);
                CHECK(L.cau[(size_t)p][(size_t)q] == -L.cau[(size_t)q][(size_t)p]);
                CHECK(L.dir[(size_t)p][(size_t)q] == L.dir[(size_t)q][(size_t)p]);
                if (L.ret[(size_t)p][(size_t)q] != 0) {
                    int dt = L.tof(p) - L.tof(q);
                    int dx = std::abs(L.xof(p) - L.xof(q));
                    int dring = std::min(dx, par.nx - dx);
                    CHECK(dt > 0);
                    CHECK(dring <= dt);
                }
            }
    }
}

TEST_CASE("lattice validation")
{
    CHECK_THROWS_AS(build_lattice({1, 3, Rat(1), Rat(1), Rat(0)}), error);
    CHECK_THROWS_AS(build_lattice({4, 0, Rat(1), Rat(1), Rat(0)}), error);
    CHECK_THROWS_AS(build_lattice({4, 3, Rat(2), Rat(1), Rat(0)}), error);
    CHECK_THROWS_AS(build_lattice({4, 3, Rat(0), Rat(1), Rat(0)}), error);
}

TEST_CASE("free action matches the weighted wave operator")
{
    for (auto& par : {cases[0], cases[1]}) {
        LatticeOps L = build_lattice(par);
        Poly S = L.free_action();
        for (int p = 0; p < L.nsites; ++p)
            CHECK(S.ld(L.fgen(p)) == P_phi(L, p).scaled(GRat(L.w)));
    }
}

TEST_CASE("koszul on the lattice gives the field equation")
{
    Model m = free_scalar(4, 3, Rat(1), Rat(1), Rat(1, 2));
    LatticeOps L = build_lattice(m.lattice);
    for (int p : {0, 4, 7, 11}) {
        CHECK(koszul(m, L.phidag(p)) == P_phi(L, p));
        // declared convention for the quadratic monomial
        CHECK(koszul(m, L.phi(p) * L.phidag(p)) == L.phi(p) * P_phi(L, p));
    }
    CHECK(bv_laplacian(L.phi(3) * L.phidag(3)) ==
          Poly::constant(m.alg, GRat(1 / L.w)));
}

TEST_CASE("smearing and pairing helpers")
{
    LatticeOps L = build_lattice(cases[0]);
    CHECK(L.smeared(L.delta_fn(7)) == L.phi(7));
    for (int p : {0, 7, 13})
        for (int q : {2, 7, 29})
            CHECK(L.pairing(L.delta_fn(p), L.cau, L.delta_fn(q)) ==
                  L.cau[(size_t)p][(size_t)q]);
}

TEST_CASE("matrix export format")
{
    Mat m{{Rat(0), Rat(1)}, {Rat(-1, 2), Rat(0)}};
    CHECK(mat_str(m) == "0 1\n-1/2 0\n");
}
