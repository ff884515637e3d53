#include <catch2/catch_amalgamated.hpp>

#include "bvw/algebra.hpp"

using namespace bvw;

namespace {

AlgebraPtr toy_alg()
{
    auto a = std::make_shared<Algebra>();
    a->add_pair("x", 0, 0, 0);
    a->add_pair("y", 0, 0, 0);
    a->add_pair("z", 0, 0, 0);
    a->add_pair("c", 1, 1, 0);
    return a;
}

AlgebraPtr ghost_alg()
{
    auto a = std::make_shared<Algebra>();
    a->add_pair("C1", 1, 1, 0);
    a->add_pair("C2", 1, 1, 0);
    return a;
}

Poly gen(const AlgebraPtr& a, const std::string& id)
{
    return Poly::generator(a, a->index(id));
}

} // namespace

TEST_CASE("rational coefficient rendering")
{
    CHECK(grat_str(GRat(Rat(-3) / Rat(6))) == "-1/2");
    CHECK(grat_str(GRat(1)) == "1");
    CHECK(grat_str(GRat::i_unit()) == "i");
    CHECK(grat_str(-GRat::i_unit()) == "-i");
    CHECK(grat_str(GRat(Rat(0), Rat(2, 3))) == "2/3*i");
    CHECK(grat_str(GRat(Rat(1), Rat(1))) == "(1+i)");
    CHECK(grat_str(GRat(Rat(1, 2), Rat(-1, 3))) == "(1/2-1/3*i)");
    CHECK((GRat::i_unit() * GRat::i_unit()) == GRat(-1));
    CHECK((GRat(Rat(1), Rat(2)) / GRat(Rat(1), Rat(2))) == GRat(1));
}

TEST_CASE("series truncation, ordering and validation")
{
    Series s(Trunc{2, 2});
    s.add_term(0, 0, GRat(1));
    s.add_term(1, 0, GRat(2));
    s.add_term(1, 1, GRat::i_unit());
    CHECK(s.str() == "1 + 2*h^1 + i*h^1*l^1");

    s.add_term(3, 0, GRat(7)); // beyond hbar truncation: silently dropped
    s.add_term(0, 3, GRat(7));
    CHECK(s.str() == "1 + 2*h^1 + i*h^1*l^1");

    CHECK_THROWS_AS(s.add_term(-1, 0, GRat(1)), error);
    CHECK_THROWS_AS(s.add_term(-2, 1, GRat(1)), error);
    s.add_term(-1, 1, GRat(1)); // 1/hbar paired with a coupling power: fine
    CHECK(s.coeff(-1, 1) == GRat(1));
    CHECK(s.lambda_valuation() == 0);

    Series t(Trunc{2, 2});
    t.add_term(0, 2, GRat(5));
    CHECK(t.lambda_valuation() == 2);
    CHECK((t * t).is_zero()); // l^4 truncated away
}

TEST_CASE("graded products")
{
    auto a = toy_alg();
    Poly x = gen(a, "x"), y = gen(a, "y");
    CHECK((x + y) * (x - y) == x * x - y * y);

    auto g = ghost_alg();
    Poly c1 = gen(g, "C1"), c2 = gen(g, "C2");
    CHECK(c2 * c1 == -(c1 * c2));
    CHECK((c1 * c1).is_zero());
    CHECK((c1 * c2 * c1).is_zero());
}

TEST_CASE("left derivatives")
{
    auto a = toy_alg();
    Poly x = gen(a, "x"), z = gen(a, "z");
    Poly p = x * x * z;
    CHECK(p.ld(a->index("x")) == (x * z).scaled(GRat(2)));
    CHECK(p.ld(a->index("y")).is_zero());

    auto g = ghost_alg();
    Poly c1 = gen(g, "C1"), c2 = gen(g, "C2");
    Poly cc = c1 * c2;
    CHECK(cc.ld(g->index("C1")) == c2);
    CHECK(cc.ld(g->index("C2")) == -c1);
}

TEST_CASE("generator and polynomial gradings")
{
    auto a = toy_alg();
    const Generator& xp = a->gen(a->index("x'"));
    CHECK(xp.gh == -1);
    CHECK(xp.pg == 0);
    CHECK(xp.af == 1);
    CHECK(xp.ta == 1);
    CHECK(xp.odd());

    const Generator& cp = a->gen(a->index("c'"));
    CHECK(cp.gh == -2);
    CHECK(cp.pg == 0);
    CHECK(cp.af == 2);
    CHECK(!cp.odd());

    Poly p = gen(a, "x") * gen(a, "y'");
    Grading gr = grading(p);
    CHECK(gr.gh == -1);
    CHECK(gr.af == 1);
    CHECK(gr.parity == 1);
    CHECK(gr.ta == 1);
    CHECK(ghost_number(p) == -1);

    Poly mixed = gen(a, "x") + gen(a, "c");
    CHECK_THROWS_AS(ghost_number(mixed), error);

    // the antighost is the one sanctioned breach of gh = pg - af
    auto b = std::make_shared<Algebra>();
    CHECK_THROWS_AS(b->add_pair("cb", -1, 0, 0), error);
    int cb = b->add_pair("cbar", -1, 0, 0, Rat(1), true);
    const Generator& cbp = b->gen(cb + 1);
    CHECK(cbp.gh == 0);
    CHECK(cbp.pg == 1);
    CHECK(cbp.af == 1);

    int bb = b->add_pair("B", 0, 0, 0);
    const Generator& bp = b->gen(bb + 1);
    CHECK(bp.gh == -1);
    CHECK(bp.pg == 0);
    CHECK(bp.af == 1);
}

TEST_CASE("canonical printing")
{
    auto a = toy_alg();
    Poly x = gen(a, "x"), y = gen(a, "y"), z = gen(a, "z"), c = gen(a, "c");
    Poly xp = gen(a, "x'"), yp = gen(a, "y'");

    CHECK((x * x * z).str() == "x^2*z");
    CHECK(Poly::one(a).str() == "1");
    CHECK(Poly::zero(a).str() == "0");
    CHECK((x * x * z - x * x * z).str() == "0");

    Poly s = (x * x + y * y - Poly::one(a)) * z;
    CHECK(s.str() == "-z + x^2*z + y^2*z");

    // generator-index order inside a monomial, degree-then-word order across
    Poly p = x * yp * c + xp * y * c;
    CHECK(p.str() == "x*y'*c + x'*y*c");
    CHECK((c * y * xp).str() == "-x'*y*c");

    Series coef(a->trunc);
    coef.add_term(0, 0, GRat(1));
    coef.add_term(1, 0, GRat(2));
    CHECK(x.scaled(coef).str() == "(1 + 2*h^1)*x");
    CHECK(x.shifted(1, 0, GRat::i_unit()).str() == "i*h^1*x");
    CHECK(x.shifted(1, 0, GRat(1)).str() == "1*h^1*x");
    CHECK((-x).str() == "-x");
    CHECK((y - x).str() == "-x + y");
}

TEST_CASE("substitution")
{
    auto a = toy_alg();
    Poly x = gen(a, "x"), y = gen(a, "y");
    std::map<int, Poly> img{{a->index("x"), x + y}};
    CHECK(substitute(x * x, img) == x * x + (x * y).scaled(GRat(2)) + y * y);
    CHECK(substitute(x * x, img).str() == "x^2 + 2*x*y + y^2");

    std::map<int, Poly> bad{{a->index("x"), gen(a, "c")}};
    CHECK_THROWS_AS(substitute(x, bad), error);
}
