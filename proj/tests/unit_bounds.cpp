#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qsys/bounds.hpp"

using namespace qsys;
using E = TowerExpr;

namespace {

E::Ptr lit(uint64_t v) { return E::literal(BigInt(v)); }

// random opluslog-free expression whose exact value stays below 2^(2^20)
E::Ptr random_exact_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<int> leaf(0, 8);
    std::uniform_int_distribution<int> expo(0, 6);
    if (depth == 0) return lit(leaf(rng));
    switch (kind(rng)) {
        case 0: return lit(leaf(rng));
        case 1: return E::add(random_exact_expr(rng, depth - 1), random_exact_expr(rng, depth - 1));
        case 2: return E::mul(random_exact_expr(rng, depth - 1), random_exact_expr(rng, depth - 1));
        default:
            return E::pow(random_exact_expr(rng, depth - 1), lit(expo(rng)));
    }
}

}  // namespace

TEST_CASE("qsystem bound at s = 1 is 1") {
    auto b = bound_qsystem(1, 3, 2, 2);
    CHECK(tower_compare(b, lit(1)) == TowerOrder::Equal);
}

TEST_CASE("qsystem bound at (2,1,1,1) is a height-two tower near 2^2^10") {
    auto b = bound_qsystem(2, 1, 1, 1);
    // log2 log2 of the value is g(1)^5 with g(x) = x log2(2+x)
    auto lg = tower_eval_log2(b);
    REQUIRE(lg.has_value());
    double expected = std::pow(std::log2(3.0), 5.0);
    CHECK(std::abs(std::log2(*lg) - expected) < 1e-9);
    CHECK(render_log_tower(b) == "2↑(2↑(10.0))");
}

TEST_CASE("qsystem bound grows with s") {
    CHECK(tower_compare(bound_qsystem(3, 1, 1, 1), bound_qsystem(2, 1, 1, 1)) ==
          TowerOrder::Greater);
}

TEST_CASE("order bound examples") {
    CHECK(tower_compare(order_bound(2, 1, 2, 2), lit(16)) == TowerOrder::Equal);
    CHECK(tower_compare(order_bound(1, 5, 3, 2), lit(1)) == TowerOrder::Equal);
    BoundConstants c2;
    c2.order_exponent = 2;
    CHECK(tower_compare(order_bound(2, 1, 2, 2, c2), lit(65536)) == TowerOrder::Equal);
}

TEST_CASE("geometric coefficients") {
    CHECK(geometric_sum(2, 3) == 7);     // nu=2, r=3
    CHECK(geometric_sum(1, 5) == 5);     // nu=1, r=5 (ratio-1 limit)
    CHECK(geometric_sum(3, 8) == 3280);  // nu=1, l=1 coefficient of the main bound
}

TEST_CASE("real-singular-point bound shape") {
    // k = 0 and s = 1 leaves only the trivial tower term
    auto b = bound_real_pk(1, 1, 1, 1, 5, 1, 0);
    CHECK(tower_compare(b, lit(1)) == TowerOrder::Equal);
    // k = 1, s = 1: geometric coefficient is exposed exactly
    auto b2 = bound_real_pk(1, 1, 1, 1, 3, 2, 1);
    CHECK(tower_compare(b2, lit(8)) == TowerOrder::Equal);  // 7 * 1 + 1
}

TEST_CASE("main bound linear coefficient at nu=1, l=1 is 3280") {
    auto b = bound_main(1, 1, 1, 1, 1, 1);
    CHECK(tower_compare(b, lit(3281)) == TowerOrder::Equal);  // 3280 k + 1^alpha
    CHECK(tower_compare(bound_main(2, 1, 1, 1, 1, 0), bound_main(2, 1, 1, 1, 2, 0)) ==
          TowerOrder::Less);
}

TEST_CASE("iterated exp+ values at 1") {
    auto e1 = exp_plus(lit(1), 1);
    auto e2 = exp_plus(lit(1), 2);
    auto v1 = tower_eval_exact(e1);
    auto v2 = tower_eval_exact(e2);
    REQUIRE(v1.has_value());
    REQUIRE(v2.has_value());
    CHECK(*v1 == 3);    // 2^(log2 3)
    CHECK(*v2 == 125);  // 5^3
}

TEST_CASE("abelian bound is linear in the form degree by construction") {
    auto b = bound_abelian(1, 7);
    REQUIRE(b->kind() == E::Kind::Add);
    REQUIRE(b->left()->kind() == E::Kind::Mul);
    CHECK(b->left()->right()->lit() == 7);
    // the linear coefficient is exp+2(n^2) = 125 at n = 1
    auto coef = tower_eval_exact(b->left()->left());
    REQUIRE(coef.has_value());
    CHECK(*coef == 125);

    // n = 2: coefficient is exp+2(4) = 1298^1296, checked against an
    // independent big-integer computation
    auto b2 = bound_abelian(2, 1);
    auto coef2 = tower_eval_exact(b2->left()->left());
    REQUIRE(coef2.has_value());
    BigInt oracle = boost::multiprecision::pow(BigInt(1298), 1296);
    CHECK(*coef2 == oracle);
    auto lg = tower_eval_log2(b2->left()->left());
    REQUIRE(lg.has_value());
    long double expected = 1296.0L * std::log2(1298.0L);
    CHECK(std::abs(double(*lg - double(expected))) < 1e-6 * double(expected));
}

TEST_CASE("gauss-manin profile") {
    GaussManinProfile p = gauss_manin_profile(2);
    CHECK(p.m == 10);
    CHECK(p.l == 4);
    CHECK(p.d == 4);
    auto lg = tower_eval_log2(p.s_bound);
    REQUIRE(lg.has_value());
    CHECK(std::abs(*lg - std::pow(2.0, 61.0)) < 1e-6 * std::pow(2.0, 61.0));
}

TEST_CASE("envelope degree helper") {
    CHECK(envelope_degree(10, 2) == 4);
    CHECK(envelope_degree(3, 2) == 1);
    CHECK(envelope_degree(5, 5) == 1);  // ceil(n/(n+1)) = 1
}

TEST_CASE("comparison examples") {
    // 2^2^2 = 16 < 2^2^10
    auto exp3_1 = E::pow(lit(2), E::pow(lit(2), E::pow(lit(2), lit(1))));
    auto exp2_10 = E::pow(lit(2), E::pow(lit(2), lit(10)));
    CHECK(tower_compare(exp3_1, exp2_10) == TowerOrder::Less);

    auto x = bound_main(2, 1, 1, 1, 1, 3);
    CHECK(tower_compare(x, x) == TowerOrder::Equal);

    // shared subtree: 3280 k + T on both sides
    auto t = bound_qsystem(7, 2, 2, 2);
    auto a = E::add(E::mul(lit(3280), lit(4)), t);
    auto b = E::add(E::mul(lit(3280), lit(4)), t);
    CHECK(tower_compare(a, b) == TowerOrder::Equal);
}

TEST_CASE("interval comparison is sound against exact evaluation") {
    std::mt19937_64 rng(0xb0b5);
    int unknowns = 0, total = 0;
    for (int it = 0; it < 2000; ++it) {
        auto a = random_exact_expr(rng, 3);
        auto b = random_exact_expr(rng, 3);
        auto ea = tower_eval_exact(a);
        auto eb = tower_eval_exact(b);
        if (!ea || !eb) continue;
        ++total;
        TowerOrder oracle = *ea < *eb   ? TowerOrder::Less
                            : *ea > *eb ? TowerOrder::Greater
                                        : TowerOrder::Equal;
        TowerOrder full = tower_compare(a, b);
        TowerOrder ival = tower_compare_intervals(a, b);
        CHECK(full == oracle);  // exact path must resolve these completely
        if (ival == TowerOrder::Unknown) {
            ++unknowns;
        } else {
            CHECK(ival == oracle);
        }
    }
    CHECK(total > 500);
    // the interval stage may only fail to decide near-equal values
    CHECK(unknowns < total / 2);
}

TEST_CASE("bounds are monotone in every parameter") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<uint64_t> small(1, 3);
    for (int it = 0; it < 40; ++it) {
        uint64_t m = small(rng), d = small(rng), l = small(rng), nu = small(rng);
        BigInt s = small(rng), k = small(rng);
        std::uniform_int_distribution<int> which(0, 5);
        uint64_t m2 = m, d2 = d, l2 = l, nu2 = nu;
        BigInt s2 = s, k2 = k;
        switch (which(rng)) {
            case 0: s2 += 1; break;
            case 1: m2 += 1; break;
            case 2: d2 += 1; break;
            case 3: l2 += 1; break;
            case 4: nu2 += 1; break;
            case 5: k2 += 1; break;
        }
        CHECK(tower_compare(bound_main(s, m, d, l, nu, k), bound_main(s2, m2, d2, l2, nu2, k2)) !=
              TowerOrder::Greater);
        CHECK(tower_compare(bound_qsystem(s, m, d, l), bound_qsystem(s2, m2, d2, l2)) !=
              TowerOrder::Greater);
        uint64_t r = small(rng);
        CHECK(tower_compare(bound_real_pk(s, m, d, l, r, nu, k),
                            bound_real_pk(s2, m2, d2, l2, r, nu2, k2)) != TowerOrder::Greater);
    }
}

TEST_CASE("inductive inequality of the real-singular-point bound") {
    // one induction step: bound(r) dominates nu * bound(r-1 at doubled l),
    // sampled away from the degenerate s = 1, l = 1 corner
    for (uint64_t l = 2; l <= 3; ++l)
        for (uint64_t r = 2; r <= 4; ++r)
            for (uint64_t nu = 1; nu <= 3; ++nu) {
                auto lhs = bound_real_pk(2, 2, 2, l, r, nu, 5);
                auto rhs = E::mul(E::literal(BigInt(nu)),
                                  bound_real_pk(2, 2, 2, 2 * l, r - 1, nu, 5));
                CHECK(tower_compare(lhs, rhs) == TowerOrder::Greater);
            }
}

TEST_CASE("rendering towers") {
    CHECK(render_log_tower(lit(0)) == "0");
    CHECK(render_log_tower(lit(12)) == "12");
    auto huge = bound_main(2, 1, 1, 1, 1, 0);
    std::string r = render_log_tower(huge);
    CHECK(r.find("2↑(") == 0);
}
