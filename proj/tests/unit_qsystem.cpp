#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qsys/qsystem.hpp"
#include "qsys/serialize.hpp"

using namespace qsys;

namespace {

// Omega = dt/t
MatrixOneForm euler_form() {
    MatrixOneForm f(1, 1);
    f.component(0).at(0, 0) =
        RationalFunction(LatticePolynomial::one(1), LatticePolynomial::variable(1, 0));
    return f;
}

// Omega = dt/(t^2 + 1)
MatrixOneForm arctan_form() {
    LatticePolynomial den(1);
    den.add_term({2}, 1);
    den.add_term({0}, 1);
    MatrixOneForm f(1, 1);
    f.component(0).at(0, 0) = RationalFunction(LatticePolynomial::one(1), den);
    return f;
}

// scalar integrable two-parameter system: d log(t - l2)
MatrixOneForm shifted_line_form() {
    LatticePolynomial tm = LatticePolynomial::variable(2, 0) - LatticePolynomial::variable(2, 1);
    MatrixOneForm f(1, 2);
    f.component(0).at(0, 0) = RationalFunction(LatticePolynomial::one(2), tm);
    f.component(1).at(0, 0) = RationalFunction(LatticePolynomial::constant(2, -1), tm);
    return f;
}

}  // namespace

TEST_CASE("constant nilpotent system is integrable") {
    MatrixOneForm f(2, 1);
    f.component(0).at(1, 0) = RationalFunction::constant(1, 1);
    QSystem q = QSystem::from_form(f);
    CHECK(check_integrability(q).ok);
    CHECK(q.s() == 1);
    CHECK(q.d() == 0);
    CHECK(q.l() == 2);
    CHECK(q.m() == 1);
}

TEST_CASE("y dx fails integrability with witness -1") {
    MatrixOneForm f(1, 2);
    f.component(0).at(0, 0) = RationalFunction::from_poly(LatticePolynomial::variable(2, 1));
    IntegrabilityReport rep = check_integrability(f);
    CHECK(!rep.ok);
    CHECK(rep.comp_i == 0);
    CHECK(rep.comp_j == 1);
    CHECK(rep.witness.semantically_equal(RationalFunction::constant(2, -1)));
}

TEST_CASE("two-parameter shifted line system is integrable") {
    CHECK(check_integrability(shifted_line_form()).ok);
}

TEST_CASE("fiber of dt/t is {0} plus infinity") {
    QSystem q = QSystem::from_form(euler_form());
    SingularFiber fib = singular_fiber(q, {});
    REQUIRE(fib.points.size() == 1);
    CHECK(std::abs(fib.points[0]) < 1e-12);
    CHECK(fib.includes_infinity);
}

TEST_CASE("fiber of dt/(t^2+1) is {i, -i}") {
    QSystem q = QSystem::from_form(arctan_form());
    SingularFiber fib = singular_fiber(q, {});
    REQUIRE(fib.points.size() == 2);
    CHECK(std::abs(fib.points[0] - Complex(0, -1)) < 1e-10);
    CHECK(std::abs(fib.points[1] - Complex(0, 1)) < 1e-10);
    // deg den = deg num + 2: regular at infinity
    CHECK(!fib.includes_infinity);
}

TEST_CASE("fiber respects the pole translation of the parameter") {
    QSystem q = QSystem::from_form(shifted_line_form());
    SingularFiber fib = singular_fiber(q, {LineValue(BigRat(7))});
    REQUIRE(fib.points.size() == 1);
    CHECK(std::abs(fib.points[0] - Complex(7, 0)) < 1e-10);
}

TEST_CASE("nu upper bound is l^2 d") {
    MatrixOneForm f(2, 1);
    LatticePolynomial den(1);
    den.add_term({3}, 1);
    den.add_term({0}, -1);
    f.component(0).at(0, 1) = RationalFunction(LatticePolynomial::one(1), den);
    QSystem q = QSystem::from_form(f);
    CHECK(q.d() == 3);
    CHECK(nu_upper_bound(q) == 12);

    QSystem q1 = QSystem::from_form(euler_form());
    CHECK(nu_upper_bound(q1) == 1);

    MatrixOneForm c(4, 1);
    c.component(0).at(0, 0) = RationalFunction::constant(1, 2);
    CHECK(nu_upper_bound(QSystem::from_form(c)) == 0);
}

TEST_CASE("fiber size never exceeds the counting bound") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    QSystem q = QSystem::from_form(shifted_line_form());
    BigInt bound = nu_upper_bound(q);
    for (int it = 0; it < 100; ++it) {
        Complex l2(u(rng), u(rng));
        SingularFiber fib = singular_fiber(q, {LineValue(l2)});
        CHECK(BigInt(fib.points.size()) <= bound);
    }
}

TEST_CASE("poles depend only on denominators") {
    // scaling every numerator by a nonzero integer keeps the fiber
    MatrixOneForm f = arctan_form();
    MatrixOneForm g = f;
    g.component(0).at(0, 0) =
        RationalFunction(f.component(0).at(0, 0).num() * LatticePolynomial::constant(1, 17),
                         f.component(0).at(0, 0).den());
    SingularFiber a = singular_fiber(QSystem::from_form(f), {});
    SingularFiber b = singular_fiber(QSystem::from_form(g), {});
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        CHECK(std::abs(a.points[i] - b.points[i]) < 1e-10);
}

TEST_CASE("system files round trip through JSON") {
    QSystem q = QSystem::from_form(shifted_line_form());
    std::string once = dump_canonical(qsystem_to_json(q));
    QSystem r = qsystem_from_json(parse_json(once));
    std::string twice = dump_canonical(qsystem_to_json(r));
    CHECK(once == twice);
    CHECK(q.s() == r.s());
    CHECK(q.d() == r.d());
}

TEST_CASE("schema violations are rejected") {
    CHECK_THROWS_AS(qsystem_from_json(parse_json("{\"schema\": \"other\"}")), ValidationError);
    CHECK_THROWS_AS(parse_json("{not json"), ValidationError);
    Json j = qsystem_to_json(QSystem::from_form(euler_form()));
    j["profile"]["s"] = "999";
    CHECK_THROWS_AS(qsystem_from_json(j), ValidationError);
}
