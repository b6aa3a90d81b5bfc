#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace cbkp;
using cbkp::test::table;

namespace {
const Orientation o1 = Orientation::d1;
}

TEST_CASE("addition and the precision max rule") {
    PsiDO d1op = PsiDO::main_power(o1, 1);
    CHECK(d1op + PsiDO::zero(o1) == d1op);
    CHECK((d1op + (-d1op)).is_zero());
    CHECK((d1op + (-d1op)).exact());

    PsiDO a = PsiDO::term(o1, -1, 0, DiffPoly::u(), -3);
    PsiDO b = PsiDO::term(o1, -2, 0, DiffPoly::v(0), -2);
    PsiDO sum = a + b;
    REQUIRE(sum.precision().has_value());
    CHECK(*sum.precision() == -2);
    CHECK(coeff_at(sum, -1) == DiffPoly::u());
    CHECK(coeff_at(sum, -2) == DiffPoly::v(0));
    CHECK_THROWS_AS(coeff_at(sum, -3), InsufficientPrecision);

    PsiDO d2op = PsiDO::main_power(Orientation::d2, 1);
    CHECK_THROWS_AS(d1op + d2op, OrientationMismatch);
}

TEST_CASE("the multiplication rule for the inverse of the derivation") {
    const RelationTable& t = table(1);
    PsiDO inv = PsiDO::main_power(o1, -1, -4);
    PsiDO prod = mul(inv, PsiDO::constant(o1, DiffPoly::u()), t);
    // d1^-1 u = u d1^-1 - d1(u) d1^-2 + d1^2(u) d1^-3 - ...
    CHECK(coeff_at(prod, -1) == DiffPoly::u());
    CHECK(coeff_at(prod, -2) == -DiffPoly::u(1, 0));
    CHECK(coeff_at(prod, -3) == DiffPoly::u(2, 0));
    CHECK(coeff_at(prod, -4) == -DiffPoly::u(3, 0));
    CHECK(*prod.precision() == -4);

    // d1 d2 - d2 d1 = 0
    PsiDO d1op = PsiDO::main_power(o1, 1);
    PsiDO d2op = PsiDO::term(o1, 0, 1, DiffPoly::one());
    CHECK((mul(d1op, d2op, t) - mul(d2op, d1op, t)).is_zero());

    // d2 v0 = v0 d2 + d1(u), through the relation table
    PsiDO lhs = mul(d2op, PsiDO::constant(o1, DiffPoly::v(0)), t);
    CHECK(coeff_at(lhs, 0, 1) == DiffPoly::v(0));
    CHECK(coeff_at(lhs, 0, 0) == DiffPoly::u(1, 0));

    // exact Laurent products need a floor
    PsiDO exact_inv = PsiDO::main_power(o1, -1);
    CHECK_THROWS_AS(mul(exact_inv, PsiDO::constant(o1, DiffPoly::u()), t),
                    InsufficientPrecision);
    CHECK(mul(exact_inv, PsiDO::main_power(o1, 2), t) == PsiDO::main_power(o1, 1));
}

TEST_CASE("adjoint") {
    const RelationTable& t = table(1);
    PsiDO d1op = PsiDO::main_power(o1, 1);
    CHECK(adjoint(d1op, t) == -d1op);
    PsiDO uop = PsiDO::constant(o1, DiffPoly::u());
    CHECK(adjoint(uop, t) == uop);

    // (d1^-1 u)^* = -u d1^-1, exactly: the expansion telescopes
    PsiDO inv_u = mul(PsiDO::main_power(o1, -1, -7), uop, t);
    PsiDO expect = PsiDO::term(o1, -1, 0, -DiffPoly::u(), -7);
    CHECK(adjoint(inv_u, t) == expect);

    // precision is preserved exactly
    CHECK(*adjoint(inv_u, t).precision() == -7);

    // linearity over gaussian scalars, no conjugation
    PsiDO iop = scale(Scalar::unit_im(), d1op);
    CHECK(adjoint(iop, t) == -iop);
}

TEST_CASE("split into differential part and tail") {
    PsiDO p = PsiDO::main_power(o1, 1, -3) + PsiDO::term(o1, -1, 0, DiffPoly::u(), -3);
    auto [plus, minus] = split_parts(p);
    CHECK(plus == PsiDO::main_power(o1, 1));
    CHECK(plus.exact());
    CHECK(minus == PsiDO::term(o1, -1, 0, DiffPoly::u(), -3));

    auto [cplus, cminus] = split_parts(PsiDO::constant(o1, DiffPoly::u()));
    CHECK(cplus == PsiDO::constant(o1, DiffPoly::u()));
    CHECK(cminus.is_zero());
}

TEST_CASE("application of differential operators") {
    const RelationTable& t = table(2);
    CHECK(apply(PsiDO::main_power(o1, 1), DiffPoly::u(), t) == DiffPoly::u(1, 0));

    // A_{2,1} = d2^3 + 3 w0 d2 applied to u
    PsiDO a21 = compute_A(2, 1, 2, t);
    DiffPoly expect = DiffPoly::u(0, 3) + Scalar(3) * DiffPoly::w(0) * DiffPoly::u(0, 1);
    CHECK(apply(a21, DiffPoly::u(), t) == expect);

    // -adjoint(A_{1,1})(u) = d1^3(u) + 3 d1(v0 u)
    PsiDO a11 = compute_A(1, 1, 2, t);
    DiffPoly flow = -apply(adjoint(a11, t), DiffPoly::u(), t);
    DiffPoly expect2 = DiffPoly::u(3, 0) +
                       Scalar(3) * cbkp::test::d1(DiffPoly::v(0) * DiffPoly::u());
    CHECK(flow == expect2);

    CHECK_THROWS_AS(apply(PsiDO::main_power(o1, -1, -3), DiffPoly::u(), t), NegativeExponent);
}

TEST_CASE("the involution on operators") {
    const RelationTable& t = table(2);
    CHECK(tau(PsiDO::main_power(o1, 1)) == PsiDO::main_power(Orientation::d2, 1));
    CHECK(tau(compute_A(1, 1, 2, t)) == compute_A(2, 1, 2, t));

    PsiDO h1 = make_schrodinger(Orientation::d1);
    PsiDO h2 = make_schrodinger(Orientation::d2);
    CHECK(tau(h1) == h2);
    CHECK(reorient_differential(h1) == h2);

    PsiDO p = PsiDO::term(o1, 2, 1, Scalar::unit_im() * DiffPoly::v(1), -2);
    CHECK(tau(tau(p)) == p);
    // multiplicative on operators
    PsiDO q = PsiDO::term(o1, 1, 0, DiffPoly::u(0, 1), -2);
    CHECK(equal_within_precision(tau(mul(p, q, t)), mul(tau(p), tau(q), t)));
}

TEST_CASE("coefficient access") {
    const RelationTable& t = table(3);
    PsiDO p = PsiDO::term(o1, 2, 1, DiffPoly::one());
    CHECK(coeff_at(p, 2, 1) == DiffPoly::one());
    CHECK(coeff_at(p, 1, 0).is_zero());

    PsiDO trunc = PsiDO::term(o1, -1, 0, DiffPoly::u(), -1);
    CHECK_THROWS_AS(coeff_at(trunc, -2, 0), InsufficientPrecision);

    // coefficient of d1 in A_{1,2}: 5 d1^2(v0) + 5 v1 + 10 v0^2
    PsiDO a12 = compute_A(1, 2, 3, t);
    DiffPoly expect = Scalar(5) * DiffPoly::v(0, 2) + Scalar(5) * DiffPoly::v(1) +
                      Scalar(10) * DiffPoly::v(0) * DiffPoly::v(0);
    CHECK(coeff_at(a12, 1, 0) == expect);
}

TEST_CASE("symmetric form extraction") {
    const RelationTable& t = table(1);
    auto one = symmetric_extract(PsiDO::constant(o1, DiffPoly::v(0)), 0, t);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == DiffPoly::v(0));

    auto zeros = symmetric_extract(PsiDO::zero(o1, -10), 3, t);
    REQUIRE(zeros.size() == 4);
    for (const auto& z : zeros) CHECK(z.is_zero());

    // the defining commutator lists the first two rewriting rules
    LOperator l1 = build_L(1, 1);
    PsiDO inv_u = mul(PsiDO::main_power(o1, -1, -6), PsiDO::constant(o1, DiffPoly::u()), t);
    PsiDO comm = mul(l1.op, inv_u, t) - mul(inv_u, l1.op, t);
    PsiDO x = mul(PsiDO::main_power(o1, 1), comm, t);
    auto s = symmetric_extract(x, 1, t);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == t.dv(0));
    CHECK(s[1] == t.dv(1));

    // a slot forced to vanish that does not: not in symmetric form
    PsiDO bad = PsiDO::term(o1, -1, 0, DiffPoly::u(), -4);
    CHECK_THROWS_AS(symmetric_extract(bad, 1, t), NotSelfAdjoint);

    // too shallow a floor
    PsiDO shallow = PsiDO::constant(o1, DiffPoly::v(0)).truncated(-1);
    CHECK_THROWS_AS(symmetric_extract(shallow, 2, t), InsufficientPrecision);
}

TEST_CASE("order grading") {
    const RelationTable& t = table(1);
    PsiDO p = PsiDO::term(o1, 2, 1, DiffPoly::one());
    CHECK(*p.diff_order() == 3);
    PsiDO h = make_schrodinger(o1);
    CHECK(*h.diff_order() == 2);
    CHECK(*mul(p, h, t).diff_order() == 5);
    CHECK(!PsiDO::zero(o1).diff_order().has_value());
}
