#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "qsys/common.hpp"

namespace qsys {

// Exponent vector of a monomial; length equals the ambient variable count.
using MultiIndex = std::vector<uint32_t>;

inline uint32_t total_degree(const MultiIndex& a) {
    uint32_t s = 0;
    for (uint32_t e : a) s += e;
    return s;
}

// Graded lexicographic order: lower total degree first, ties broken
// lexicographically.  Gives the canonical term order used for serialization.
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        uint32_t da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

// Sparse polynomial with arbitrary-precision integer coefficients.  Stored
// coefficients are never zero.  No implicit normalization of any kind: the
// size measure sum_a |c_a| is representation-sensitive and every operation
// keeps the representation its arithmetic produces.
class LatticePolynomial {
public:
    using TermMap = std::map<MultiIndex, BigInt, GradedLexLess>;

    explicit LatticePolynomial(std::size_t num_vars = 1) : num_vars_(num_vars) {}

    static LatticePolynomial constant(std::size_t nvars, BigInt c);
    static LatticePolynomial one(std::size_t nvars) { return constant(nvars, 1); }
    static LatticePolynomial variable(std::size_t nvars, std::size_t var);
    static LatticePolynomial monomial(std::size_t nvars, MultiIndex idx, BigInt c);

    std::size_t num_vars() const { return num_vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_constant() const;

    // Adds c * x^idx, merging with an existing term and dropping zeros.
    void add_term(const MultiIndex& idx, const BigInt& c);

    BigInt size() const;                       // sum of |coefficient|
    uint32_t degree() const;                   // total degree, 0 for the zero polynomial
    uint32_t degree_in(std::size_t var) const;

    LatticePolynomial operator-() const;
    LatticePolynomial operator+(const LatticePolynomial& o) const;
    LatticePolynomial operator-(const LatticePolynomial& o) const;
    LatticePolynomial operator*(const LatticePolynomial& o) const;
    bool operator==(const LatticePolynomial& o) const {
        return num_vars_ == o.num_vars_ && terms_ == o.terms_;
    }

    LatticePolynomial derivative(std::size_t var) const;

    // x_var -> x_var + x_new_var (binomial expansion; new_var must differ).
    LatticePolynomial substitute_sum(std::size_t var, std::size_t new_var) const;

    // x_var -> -x_var
    LatticePolynomial negate_var(std::size_t var) const;

    // P = even(x_var^2) + x_var * odd(x_var^2); returns {even, odd} with the
    // exponent of x_var halved, i.e. the slot reads as w = x_var^2 afterwards.
    std::pair<LatticePolynomial, LatticePolynomial> split_parity(std::size_t var) const;

    // Appends fresh trailing variables (exponent 0 everywhere).
    LatticePolynomial extend_vars(std::size_t new_num_vars) const;

    // Substitutes x_var -> value for every listed variable, returning a
    // univariate polynomial in keep_var.  Exact path.
    std::vector<BigRat> restrict_exact(std::size_t keep_var,
                                       const std::vector<BigRat>& values) const;

    // Same, numerically; absmax receives the largest absolute value any
    // coefficient accumulated, so callers can test for structural zero.
    std::vector<Complex> restrict_numeric(std::size_t keep_var,
                                          const std::vector<Complex>& values,
                                          double* absmax = nullptr) const;

    Complex eval(const std::vector<Complex>& point) const;

    std::string to_string(const std::vector<std::string>& var_names = {}) const;

private:
    TermMap terms_;
    std::size_t num_vars_;
};

// Fraction of two lattice polynomials.  P/Q and PR/QR are distinct values:
// arithmetic never cancels.  The canonical zero is 0/1; a zero numerator makes
// the whole fraction contribute nothing to the size measure, so that padding a
// matrix with zeros is free (block constructions rely on this).
class RationalFunction {
public:
    RationalFunction() : num_(1), den_(LatticePolynomial::one(1)) {}
    RationalFunction(LatticePolynomial num, LatticePolynomial den);

    static RationalFunction zero(std::size_t nvars);
    static RationalFunction from_poly(LatticePolynomial p);
    static RationalFunction constant(std::size_t nvars, BigInt c);

    const LatticePolynomial& num() const { return num_; }
    const LatticePolynomial& den() const { return den_; }
    std::size_t num_vars() const { return num_.num_vars(); }

    bool is_zero() const { return num_.is_zero(); }  // semantic zero
    BigInt size() const;
    uint32_t degree() const;  // max total degree of num and den; 0 for zero
    uint32_t degree_in(std::size_t var) const;

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;

    // Representation-level equality.
    bool operator==(const RationalFunction& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    // Equality as functions: cross multiplication.
    bool semantically_equal(const RationalFunction& o) const;

    RationalFunction derivative(std::size_t var) const;
    RationalFunction substitute_sum(std::size_t var, std::size_t new_var) const;
    RationalFunction extend_vars(std::size_t new_num_vars) const;

    // Divides numerator and denominator by the gcd of all integer
    // coefficients and makes the denominator's leading coefficient positive.
    // Changes the size; transformations never call this.
    RationalFunction normalize() const;

    Complex eval(const std::vector<Complex>& point) const;

    std::string to_string(const std::vector<std::string>& var_names = {}) const;

private:
    LatticePolynomial num_, den_;
};

// Dense l x l matrix of rational functions.
class RatMatrix {
public:
    RatMatrix() : dims_(0) {}
    RatMatrix(std::size_t dims, std::size_t nvars);

    std::size_t dims() const { return dims_; }
    RationalFunction& at(std::size_t r, std::size_t c) { return data_[r * dims_ + c]; }
    const RationalFunction& at(std::size_t r, std::size_t c) const { return data_[r * dims_ + c]; }

    RatMatrix operator+(const RatMatrix& o) const;
    RatMatrix operator-(const RatMatrix& o) const;
    RatMatrix mul(const RatMatrix& o) const;  // skips structural zeros

    bool is_semantically_zero() const;
    BigInt size() const;
    uint32_t degree() const;
    uint32_t degree_in(std::size_t var) const;

private:
    std::size_t dims_;
    std::vector<RationalFunction> data_;
};

// Rational matrix one-form on an affine chart of CP^m: one l x l coefficient
// matrix per base coordinate.  Coordinate 0 is the distinguished time
// variable t = lambda_1.
class MatrixOneForm {
public:
    MatrixOneForm() : dims_(0), base_dim_(0) {}
    MatrixOneForm(std::size_t dims, std::size_t base_dim);

    std::size_t dims() const { return dims_; }
    std::size_t base_dim() const { return base_dim_; }
    RatMatrix& component(std::size_t i) { return comps_[i]; }
    const RatMatrix& component(std::size_t i) const { return comps_[i]; }

    BigInt size() const;
    uint32_t degree() const;
    // degree in the time coordinate lambda_1 alone; the pole-counting
    // arguments and the transformation degree table live in this measure
    uint32_t time_degree() const;

private:
    std::size_t dims_, base_dim_;
    std::vector<RatMatrix> comps_;
};

// Matrix two-form, stored on coordinate pairs i < j only (antisymmetry makes
// the rest redundant).
class MatrixTwoForm {
public:
    MatrixTwoForm(std::size_t dims, std::size_t base_dim);

    std::size_t dims() const { return dims_; }
    std::size_t base_dim() const { return base_dim_; }
    RatMatrix& component(std::size_t i, std::size_t j);
    const RatMatrix& component(std::size_t i, std::size_t j) const;
    bool is_semantically_zero() const;

private:
    std::size_t dims_, base_dim_;
    std::vector<RatMatrix> comps_;  // index over pairs i<j, lex order
};

// Matrix three-form on triples i < j < k; only needed to check d(dA) = 0.
class MatrixThreeForm {
public:
    MatrixThreeForm(std::size_t dims, std::size_t base_dim);
    RatMatrix& component(std::size_t i, std::size_t j, std::size_t k);
    const RatMatrix& component(std::size_t i, std::size_t j, std::size_t k) const;
    bool is_semantically_zero() const;
    std::size_t base_dim() const { return base_dim_; }

private:
    std::size_t dims_, base_dim_;
    std::vector<RatMatrix> comps_;
};

// size(object) per the complexity measure; free functions for the compound
// objects so that size(P), size(P/Q), size(Omega) read uniformly.
inline BigInt size_of(const LatticePolynomial& p) { return p.size(); }
inline BigInt size_of(const RationalFunction& r) { return r.size(); }
inline BigInt size_of(const MatrixOneForm& f) { return f.size(); }

// (A ^ B)_{ij} = A_i B_j - A_j B_i on d lambda_i ^ d lambda_j, i < j.
MatrixTwoForm wedge(const MatrixOneForm& a, const MatrixOneForm& b);

// (dA)_{ij} = d_i A_j - d_j A_i, exact quotient-rule differentiation.
MatrixTwoForm exterior_derivative(const MatrixOneForm& a);

// (dC)_{ijk} = d_i C_{jk} - d_j C_{ik} + d_k C_{ij}.
MatrixThreeForm exterior_derivative(const MatrixTwoForm& c);

// Univariate polynomial with complex double coefficients (c[k] multiplies
// t^k); the numeric image of a restricted entry.
struct UniPoly {
    std::vector<Complex> c;

    std::size_t degree() const { return c.empty() ? 0 : c.size() - 1; }
    bool is_zero() const { return c.empty(); }
    Complex eval(Complex t) const {
        Complex v = 0;
        for (std::size_t k = c.size(); k-- > 0;) v = v * t + c[k];
        return v;
    }
    UniPoly derivative() const;
    void trim(double rel_tol = 0.0);
    double coeff_absmax() const;
};

struct RestrictedEntry {
    UniPoly num, den;
    Complex eval(Complex t) const { return num.eval(t) / den.eval(t); }
};

// The d lambda_1 component of a one-form with lambda_2..lambda_m frozen: the
// right-hand side of the induced family of ODEs in t.
struct RestrictedSystem {
    std::size_t dims = 0;
    std::vector<RestrictedEntry> entries;  // row-major
    // Denominators of the non-time components after the same substitution;
    // kept so callers can reason about the full restricted form.
    std::vector<UniPoly> other_denominators;

    const RestrictedEntry& at(std::size_t r, std::size_t c) const {
        return entries[r * dims + c];
    }
    void eval_into(Complex t, Complex* out_row_major) const;
};

// Value of one frozen coordinate: exact rational or double complex.
using LineValue = std::variant<BigRat, Complex>;

// Freezes lambda_2..lambda_m at the given m-1 values.  Throws
// ValidationError if any entry denominator vanishes identically on the line.
RestrictedSystem restrict_line(const MatrixOneForm& form, const std::vector<LineValue>& values);

}  // namespace qsys
