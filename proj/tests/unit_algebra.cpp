#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qsys/algebra.hpp"
#include "qsys/serialize.hpp"

using namespace qsys;

namespace {

std::mt19937_64 rng(0x51e57Au);

LatticePolynomial random_poly(std::size_t nvars, int max_terms = 4, uint32_t max_exp = 3) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> coeff(-9, 9);
    std::uniform_int_distribution<uint32_t> expd(0, max_exp);
    LatticePolynomial p(nvars);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        MultiIndex idx(nvars);
        for (auto& e : idx) e = expd(rng);
        int c = coeff(rng);
        if (c == 0) c = 1;
        p.add_term(idx, c);
    }
    return p;
}

LatticePolynomial random_nonzero_poly(std::size_t nvars) {
    for (;;) {
        LatticePolynomial p = random_poly(nvars);
        if (!p.is_zero()) return p;
    }
}

RationalFunction random_ratfn(std::size_t nvars, int max_terms = 4, uint32_t max_exp = 3) {
    for (;;) {
        LatticePolynomial den = random_poly(nvars, max_terms, max_exp);
        if (den.is_zero()) continue;
        return RationalFunction(random_poly(nvars, max_terms, max_exp), den);
    }
}

MatrixOneForm random_form(std::size_t l, std::size_t m, int max_terms = 4, uint32_t max_exp = 3) {
    MatrixOneForm f(l, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t r = 0; r < l; ++r)
            for (std::size_t c = 0; c < l; ++c)
                f.component(k).at(r, c) = random_ratfn(m, max_terms, max_exp);
    return f;
}

}  // namespace

TEST_CASE("size of lattice polynomials") {
    // 3 x1^2 - 2 x2
    LatticePolynomial p(2);
    p.add_term({2, 0}, 3);
    p.add_term({0, 1}, -2);
    CHECK(p.size() == 5);

    LatticePolynomial zero(2);
    CHECK(zero.size() == 0);
    CHECK(zero.degree() == 0);
}

TEST_CASE("size of rational functions") {
    // (x^2 + 1) / (2x)
    LatticePolynomial num(1), den(1);
    num.add_term({2}, 1);
    num.add_term({0}, 1);
    den.add_term({1}, 2);
    RationalFunction r(num, den);
    CHECK(r.size() == 4);

    // representation-sensitive: P^2/P and P/1 differ
    LatticePolynomial x = LatticePolynomial::variable(1, 0);
    RationalFunction a(x * x, x);
    RationalFunction b(x, LatticePolynomial::one(1));
    CHECK(a.size() == 2);
    CHECK(b.size() == 1);
    CHECK(!(a == b));
    CHECK(a.semantically_equal(b));

    CHECK(RationalFunction::zero(3).size() == 0);
}

TEST_CASE("wedge of elementary one-forms") {
    // A = E12 d l1, B = E21 d l2 -> E11 on d l1 ^ d l2
    MatrixOneForm a(2, 2), b(2, 2);
    a.component(0).at(0, 1) = RationalFunction::constant(2, 1);
    b.component(1).at(1, 0) = RationalFunction::constant(2, 1);
    MatrixTwoForm w = wedge(a, b);
    CHECK(w.component(0, 1).at(0, 0).semantically_equal(RationalFunction::constant(2, 1)));
    CHECK(w.component(0, 1).at(0, 1).is_zero());
    CHECK(w.component(0, 1).at(1, 0).is_zero());
    CHECK(w.component(0, 1).at(1, 1).is_zero());
}

TEST_CASE("scalar wedge is antisymmetric and self-wedge vanishes") {
    // Omega = y dx in variables (x, y)
    MatrixOneForm f(1, 2);
    f.component(0).at(0, 0) = RationalFunction::from_poly(LatticePolynomial::variable(2, 1));
    CHECK(wedge(f, f).is_semantically_zero());

    for (int it = 0; it < 10; ++it) {
        MatrixOneForm a = random_form(1, 2), b = random_form(1, 2);
        MatrixTwoForm ab = wedge(a, b), ba = wedge(b, a);
        RationalFunction sum = ab.component(0, 1).at(0, 0) + ba.component(0, 1).at(0, 0);
        CHECK(sum.is_zero());
    }
}

TEST_CASE("exterior derivative examples") {
    // constant form in one variable: no pairs at all
    MatrixOneForm c(1, 1);
    c.component(0).at(0, 0) = RationalFunction::constant(1, 5);
    CHECK(exterior_derivative(c).is_semantically_zero());

    // Omega = y dx: d Omega has -1 on dx ^ dy
    MatrixOneForm f(1, 2);
    f.component(0).at(0, 0) = RationalFunction::from_poly(LatticePolynomial::variable(2, 1));
    MatrixTwoForm d = exterior_derivative(f);
    CHECK(d.component(0, 1).at(0, 0).semantically_equal(RationalFunction::constant(2, -1)));

    // dt/t in a single variable
    MatrixOneForm euler(1, 1);
    euler.component(0).at(0, 0) =
        RationalFunction(LatticePolynomial::one(1), LatticePolynomial::variable(1, 0));
    CHECK(exterior_derivative(euler).is_semantically_zero());
}

TEST_CASE("d of d of a one-form vanishes exactly (m = 3)") {
    for (int it = 0; it < 5; ++it) {
        MatrixOneForm f = random_form(2, 3, 2, 1);
        MatrixThreeForm dd = exterior_derivative(exterior_derivative(f));
        CHECK(dd.is_semantically_zero());
    }
}

TEST_CASE("size is subadditive and submultiplicative") {
    for (int it = 0; it < 50; ++it) {
        LatticePolynomial p = random_poly(2), q = random_poly(2);
        CHECK((p + q).size() <= p.size() + q.size());
        CHECK((p * q).size() <= p.size() * q.size());
    }
}

TEST_CASE("restrict_line substitution") {
    // Omega = l2 dt / t, lambda' = (2) -> 2/t
    MatrixOneForm f(1, 2);
    f.component(0).at(0, 0) =
        RationalFunction(LatticePolynomial::variable(2, 1), LatticePolynomial::variable(2, 0));
    RestrictedSystem sys = restrict_line(f, {LineValue(BigRat(2))});
    Complex v = sys.at(0, 0).eval(Complex(4.0, 0.0));
    CHECK(std::abs(v - Complex(0.5, 0.0)) < 1e-15);

    // Omega = dt/(t - l2) at lambda' = (0) -> 1/t
    LatticePolynomial den =
        LatticePolynomial::variable(2, 0) - LatticePolynomial::variable(2, 1);
    MatrixOneForm g(1, 2);
    g.component(0).at(0, 0) = RationalFunction(LatticePolynomial::one(2), den);
    RestrictedSystem sys2 = restrict_line(g, {LineValue(BigRat(0))});
    CHECK(std::abs(sys2.at(0, 0).eval(Complex(2, 0)) - Complex(0.5, 0)) < 1e-15);

    // an entry 1/l2 d l2 restricted to l2 = 0 is identically singular
    MatrixOneForm h(1, 2);
    h.component(1).at(0, 0) =
        RationalFunction(LatticePolynomial::one(2), LatticePolynomial::variable(2, 1));
    CHECK_THROWS_AS(restrict_line(h, {LineValue(BigRat(0))}), ValidationError);
}

TEST_CASE("shift substitution expands binomially") {
    // (t^3) under t -> t + mu
    LatticePolynomial t3 = LatticePolynomial::monomial(2, {3, 0}, 1);
    LatticePolynomial sub = t3.substitute_sum(0, 1);
    LatticePolynomial expect(2);
    expect.add_term({3, 0}, 1);
    expect.add_term({2, 1}, 3);
    expect.add_term({1, 2}, 3);
    expect.add_term({0, 3}, 1);
    CHECK(sub == expect);
}

TEST_CASE("normalize divides content and fixes sign but changes size") {
    LatticePolynomial num(1), den(1);
    num.add_term({1}, 4);
    den.add_term({0}, -2);
    RationalFunction r(num, den);
    RationalFunction n = r.normalize();
    CHECK(n.semantically_equal(r));
    CHECK(n.size() == 2);  // -2x over a unit denominator
    CHECK(r.size() == 6);
}

TEST_CASE("JSON round trip is bit-exact") {
    for (int it = 0; it < 20; ++it) {
        MatrixOneForm f = random_form(2, 2);
        std::string once = dump_canonical(form_to_json(f));
        MatrixOneForm g = form_from_json(parse_json(once));
        std::string twice = dump_canonical(form_to_json(g));
        CHECK(once == twice);
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < 2; ++c)
                    CHECK(f.component(k).at(r, c) == g.component(k).at(r, c));
    }
}

TEST_CASE("huge coefficients survive the decimal round trip") {
    LatticePolynomial p(1);
    p.add_term({5}, BigInt("123456789012345678901234567890123456789"));
    p.add_term({0}, BigInt("-98765432109876543210"));
    LatticePolynomial q = poly_from_json(poly_to_json(p), 1);
    CHECK(p == q);
}
