#include "qsys/bounds.hpp"

#include <cmath>

namespace qsys {

namespace {

using E = TowerExpr;

E::Ptr lit(BigInt v) { return E::literal(std::move(v)); }
E::Ptr lit(uint64_t v) { return E::literal(BigInt(v)); }

E::Ptr pow5(E::Ptr x) { return E::pow(std::move(x), lit(uint64_t(5))); }

}  // namespace

TowerExpr::Ptr oplus(TowerExpr::Ptr f, const BoundConstants& c) {
    E::Ptr o = E::opluslog(std::move(f));
    if (c.oplus != 1) o = E::mul(lit(c.oplus), std::move(o));
    return o;
}

TowerExpr::Ptr exp_plus(TowerExpr::Ptr x, uint64_t iterations, const BoundConstants& c) {
    E::Ptr e = std::move(x);
    for (uint64_t i = 0; i < iterations; ++i) e = E::pow(lit(uint64_t(2)), oplus(std::move(e), c));
    return e;
}

BigInt geometric_sum(const BigInt& ratio, const BigInt& count) {
    if (count < 0) throw ValidationError("geometric_sum: negative count");
    if (count == 0) return 0;
    if (ratio == 1) return count;
    // bit-size guard: count * log2(ratio) must stay desk-scale
    double bits = to_double(count) * double(boost::multiprecision::msb(ratio) + 1);
    if (!(bits < double(1u << 22)))
        throw NumericError("geometric_sum: value exceeds the exact-arithmetic cap");
    BigInt num = boost::multiprecision::pow(ratio, unsigned(uint64_t(count))) - 1;
    return num / (ratio - 1);
}

TowerExpr::Ptr bound_qsystem(const BigInt& s, uint64_t m, uint64_t d, uint64_t l,
                             const BoundConstants& c) {
    if (s < 1 || m < 1 || d < 1 || l < 1)
        throw ValidationError("bound_qsystem: parameters must be >= 1");
    E::Ptr inner = E::mul(lit(d), E::mul(E::pow(lit(l), lit(uint64_t(4))), lit(m)));
    E::Ptr poly = pow5(oplus(std::move(inner), c));
    return E::pow(lit(s), E::pow(lit(uint64_t(2)), std::move(poly)));
}

TowerExpr::Ptr order_bound(const BigInt& s, uint64_t m, uint64_t d, uint64_t l,
                           const BoundConstants& c) {
    if (s < 1 || m < 1 || d < 1 || l < 1)
        throw ValidationError("order_bound: parameters must be >= 1");
    E::Ptr base = E::mul(lit(d), lit(l));
    return E::pow(lit(s), E::pow(std::move(base), lit(c.order_exponent * m)));
}

TowerExpr::Ptr bound_real_pk(const BigInt& s, uint64_t m, uint64_t d, uint64_t l, uint64_t r,
                             uint64_t nu, const BigInt& k, const BoundConstants& c) {
    if (nu < 1 || r < 1) throw ValidationError("bound_real_pk: nu and r must be >= 1");
    if (r > 56) throw NumericError("bound_real_pk: exponent 5*2^(r+1) exceeds the integer range");
    BigInt geom = geometric_sum(BigInt(nu), BigInt(r));
    E::Ptr alpha_arg =
        E::mul(E::pow(lit(uint64_t(8)), lit(r)),
               E::mul(E::pow(lit(l), lit(uint64_t(5) << (r + 1))),
                      E::mul(pow5(lit(d)), pow5(lit(m)))));
    E::Ptr tower = E::pow(lit(s), exp_plus(std::move(alpha_arg), 1, c));
    return E::add(E::mul(lit(geom), lit(k)), std::move(tower));
}

TowerExpr::Ptr bound_main(const BigInt& s, uint64_t m, uint64_t d, uint64_t l, uint64_t nu,
                          const BigInt& k, const BoundConstants& c) {
    if (nu < 1) throw ValidationError("bound_main: nu must be >= 1");
    BigInt pow8nu = boost::multiprecision::pow(BigInt(8), unsigned(nu));
    BigInt geom = geometric_sum(BigInt(3) * nu, pow8nu * l * l);
    E::Ptr inner4 = E::pow(lit(uint64_t(4)),
                           E::mul(E::pow(lit(uint64_t(4)), lit(nu)), E::mul(lit(l), lit(l))));
    E::Ptr alpha = exp_plus(
        E::mul(exp_plus(std::move(inner4), 1, c), E::mul(pow5(lit(d)), pow5(lit(m)))), 1, c);
    return E::add(E::mul(lit(geom), lit(k)), E::pow(lit(s), std::move(alpha)));
}

TowerExpr::Ptr bound_abelian(uint64_t n, uint64_t form_degree, const BoundConstants& c) {
    if (n < 1) throw ValidationError("bound_abelian: n must be >= 1");
    E::Ptr n2 = lit(n * n);
    E::Ptr linear = E::mul(exp_plus(n2, 2, c), lit(form_degree));
    E::Ptr constant = exp_plus(n2, 5, c);
    return E::add(std::move(linear), std::move(constant));
}

GaussManinProfile gauss_manin_profile(uint64_t n, const BoundConstants& c) {
    if (n < 1) throw ValidationError("gauss_manin_profile: n must be >= 1");
    GaussManinProfile p;
    p.s_bound = TowerExpr::pow(TowerExpr::literal(2),
                               TowerExpr::pow(TowerExpr::literal(BigInt(n)),
                                              TowerExpr::literal(BigInt(c.gm_poly_degree))));
    p.m = (n + 2) * (n + 3) / 2;
    p.d = c.gm_degree * n * n;
    p.l = n * n;
    return p;
}

uint64_t envelope_degree(uint64_t e, uint64_t n) {
    if (n < 1) throw ValidationError("envelope_degree: n must be >= 1");
    return (e + n) / (n + 1);
}

}  // namespace qsys
