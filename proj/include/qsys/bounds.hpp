#pragma once

#include "qsys/tower.hpp"

namespace qsys {

// Tunable constants hidden inside the asymptotic notation of the bound
// formulas.  Everything defaults to the constant-1 instantiation; the CLI can
// override each one to study constant sensitivity.
struct BoundConstants {
    uint64_t oplus = 1;           // O+(f) := oplus * f * log2(2 + f)
    uint64_t order_exponent = 1;  // O(m) := order_exponent * m in the order bound
    uint64_t gm_poly_degree = 61; // s <= 2^(n^degree) placeholder for the period system
    uint64_t gm_degree = 1;       // d <= gm_degree * n^2 for the period system
};

// O+ envelope and the iterated exponential exp+^j(x) = 2^(O+(...)) built on it.
TowerExpr::Ptr oplus(TowerExpr::Ptr f, const BoundConstants& c = {});
TowerExpr::Ptr exp_plus(TowerExpr::Ptr x, uint64_t iterations = 1, const BoundConstants& c = {});

// 1 + v + ... + v^{count-1}, evaluated exactly.  Throws NumericError when the
// value would exceed the exact-arithmetic cap.
BigInt geometric_sum(const BigInt& ratio, const BigInt& count);

// Counting bound for an (s, m, d, l) system: s^(2^(O+(d l^4 m))^5).
TowerExpr::Ptr bound_qsystem(const BigInt& s, uint64_t m, uint64_t d, uint64_t l,
                             const BoundConstants& c = {});

// Order of a solution at a singular point: s^((d l)^(c m)).
TowerExpr::Ptr order_bound(const BigInt& s, uint64_t m, uint64_t d, uint64_t l,
                           const BoundConstants& c = {});

// Real-singular-point envelope bound:
//   geom(nu, r) * k + s^alpha,  alpha = exp+(8^r l^(5 * 2^(r+1)) d^5 m^5).
TowerExpr::Ptr bound_real_pk(const BigInt& s, uint64_t m, uint64_t d, uint64_t l, uint64_t r,
                             uint64_t nu, const BigInt& k, const BoundConstants& c = {});

// General envelope bound:
//   geom(3 nu, 8^nu l^2) * k + s^(exp+(exp+(4^(4^nu l^2)) d^5 m^5)).
TowerExpr::Ptr bound_main(const BigInt& s, uint64_t m, uint64_t d, uint64_t l, uint64_t nu,
                          const BigInt& k, const BoundConstants& c = {});

// Zero bound for integrals over degree-(n+1) Hamiltonians of forms of degree
// m: exp+2(n^2) * m + exp+5(n^2).
TowerExpr::Ptr bound_abelian(uint64_t n, uint64_t form_degree, const BoundConstants& c = {});

// Parameter profile of the period system of the degree-(n+1) family.
struct GaussManinProfile {
    TowerExpr::Ptr s_bound;  // 2^(n^poly_degree) placeholder
    uint64_t m = 0;          // (n+2)(n+3)/2
    uint64_t d = 0;          // gm_degree * n^2
    uint64_t l = 0;          // n^2
};
GaussManinProfile gauss_manin_profile(uint64_t n, const BoundConstants& c = {});

// ceil(e / (n+1)): the envelope degree that carries degree-e forms.
uint64_t envelope_degree(uint64_t e, uint64_t n);

}  // namespace qsys
