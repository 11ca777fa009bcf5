#include "qsys/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace qsys {

// ---------------------------------------------------------------- polynomials

LatticePolynomial LatticePolynomial::constant(std::size_t nvars, BigInt c) {
    LatticePolynomial p(nvars);
    if (c != 0) p.terms_[MultiIndex(nvars, 0)] = std::move(c);
    return p;
}

LatticePolynomial LatticePolynomial::variable(std::size_t nvars, std::size_t var) {
    LatticePolynomial p(nvars);
    MultiIndex idx(nvars, 0);
    idx[var] = 1;
    p.terms_[idx] = 1;
    return p;
}

LatticePolynomial LatticePolynomial::monomial(std::size_t nvars, MultiIndex idx, BigInt c) {
    LatticePolynomial p(nvars);
    if (c != 0) p.terms_[std::move(idx)] = std::move(c);
    return p;
}

bool LatticePolynomial::is_one() const {
    return terms_.size() == 1 && terms_.begin()->second == 1 &&
           total_degree(terms_.begin()->first) == 0;
}

bool LatticePolynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

void LatticePolynomial::add_term(const MultiIndex& idx, const BigInt& c) {
    if (c == 0) return;
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        terms_[idx] = c;
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

BigInt LatticePolynomial::size() const {
    BigInt s = 0;
    for (const auto& [idx, c] : terms_) s += abs(c);
    return s;
}

uint32_t LatticePolynomial::degree() const {
    uint32_t d = 0;
    for (const auto& [idx, c] : terms_) d = std::max(d, total_degree(idx));
    return d;
}

uint32_t LatticePolynomial::degree_in(std::size_t var) const {
    uint32_t d = 0;
    for (const auto& [idx, c] : terms_) d = std::max(d, idx[var]);
    return d;
}

LatticePolynomial LatticePolynomial::operator-() const {
    LatticePolynomial r(num_vars_);
    for (const auto& [idx, c] : terms_) r.terms_[idx] = -c;
    return r;
}

LatticePolynomial LatticePolynomial::operator+(const LatticePolynomial& o) const {
    LatticePolynomial r = *this;
    for (const auto& [idx, c] : o.terms_) r.add_term(idx, c);
    return r;
}

LatticePolynomial LatticePolynomial::operator-(const LatticePolynomial& o) const {
    LatticePolynomial r = *this;
    for (const auto& [idx, c] : o.terms_) r.add_term(idx, -c);
    return r;
}

LatticePolynomial LatticePolynomial::operator*(const LatticePolynomial& o) const {
    LatticePolynomial r(num_vars_);
    MultiIndex sum(num_vars_, 0);
    for (const auto& [ia, ca] : terms_) {
        for (const auto& [ib, cb] : o.terms_) {
            for (std::size_t v = 0; v < num_vars_; ++v) sum[v] = ia[v] + ib[v];
            r.add_term(sum, ca * cb);
        }
    }
    return r;
}

LatticePolynomial LatticePolynomial::derivative(std::size_t var) const {
    LatticePolynomial r(num_vars_);
    for (const auto& [idx, c] : terms_) {
        if (idx[var] == 0) continue;
        MultiIndex d = idx;
        d[var] -= 1;
        r.add_term(d, c * idx[var]);
    }
    return r;
}

LatticePolynomial LatticePolynomial::substitute_sum(std::size_t var, std::size_t new_var) const {
    LatticePolynomial r(num_vars_);
    for (const auto& [idx, c] : terms_) {
        uint32_t e = idx[var];
        // (x + y)^e expanded with exact binomials
        BigInt binom = 1;
        for (uint32_t k = 0; k <= e; ++k) {
            MultiIndex m = idx;
            m[var] = e - k;
            m[new_var] += k;
            r.add_term(m, c * binom);
            binom = binom * (e - k) / (k + 1);
        }
    }
    return r;
}

LatticePolynomial LatticePolynomial::negate_var(std::size_t var) const {
    LatticePolynomial r(num_vars_);
    for (const auto& [idx, c] : terms_) r.terms_[idx] = (idx[var] % 2 == 0) ? c : -c;
    return r;
}

std::pair<LatticePolynomial, LatticePolynomial> LatticePolynomial::split_parity(
    std::size_t var) const {
    LatticePolynomial even(num_vars_), odd(num_vars_);
    for (const auto& [idx, c] : terms_) {
        MultiIndex m = idx;
        if (idx[var] % 2 == 0) {
            m[var] /= 2;
            even.terms_[std::move(m)] = c;
        } else {
            m[var] = (m[var] - 1) / 2;
            odd.terms_[std::move(m)] = c;
        }
    }
    return {std::move(even), std::move(odd)};
}

LatticePolynomial LatticePolynomial::extend_vars(std::size_t new_num_vars) const {
    LatticePolynomial r(new_num_vars);
    for (const auto& [idx, c] : terms_) {
        MultiIndex m(new_num_vars, 0);
        std::copy(idx.begin(), idx.end(), m.begin());
        r.terms_[std::move(m)] = c;
    }
    return r;
}

std::vector<BigRat> LatticePolynomial::restrict_exact(std::size_t keep_var,
                                                      const std::vector<BigRat>& values) const {
    uint32_t deg = degree_in(keep_var);
    std::vector<BigRat> out(deg + 1, BigRat(0));
    for (const auto& [idx, c] : terms_) {
        BigRat v(c);
        std::size_t vi = 0;
        for (std::size_t var = 0; var < num_vars_; ++var) {
            if (var == keep_var) continue;
            for (uint32_t k = 0; k < idx[var]; ++k) v *= values[vi];
            ++vi;
        }
        out[idx[keep_var]] += v;
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    if (out.size() == 1 && out[0] == 0) out.clear();
    return out;
}

std::vector<Complex> LatticePolynomial::restrict_numeric(std::size_t keep_var,
                                                         const std::vector<Complex>& values,
                                                         double* absmax) const {
    uint32_t deg = degree_in(keep_var);
    std::vector<Complex> out(deg + 1, Complex(0));
    double amax = 0;
    for (const auto& [idx, c] : terms_) {
        Complex v(to_double(c), 0.0);
        std::size_t vi = 0;
        for (std::size_t var = 0; var < num_vars_; ++var) {
            if (var == keep_var) continue;
            for (uint32_t k = 0; k < idx[var]; ++k) v *= values[vi];
            ++vi;
        }
        out[idx[keep_var]] += v;
        amax = std::max(amax, std::abs(v));
    }
    if (absmax) *absmax = amax;
    return out;
}

Complex LatticePolynomial::eval(const std::vector<Complex>& point) const {
    Complex s = 0;
    for (const auto& [idx, c] : terms_) {
        Complex v(to_double(c), 0.0);
        for (std::size_t var = 0; var < num_vars_; ++var)
            for (uint32_t k = 0; k < idx[var]; ++k) v *= point[var];
        s += v;
    }
    return s;
}

std::string LatticePolynomial::to_string(const std::vector<std::string>& var_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : terms_) {
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        BigInt a = abs(c);
        bool has_var = total_degree(idx) > 0;
        if (a != 1 || !has_var) os << a.str();
        for (std::size_t v = 0; v < num_vars_; ++v) {
            if (idx[v] == 0) continue;
            if (v < var_names.size()) os << var_names[v];
            else os << "x" << (v + 1);
            if (idx[v] > 1) os << "^" << idx[v];
        }
    }
    return os.str();
}

// ---------------------------------------------------------- rational functions

RationalFunction::RationalFunction(LatticePolynomial num, LatticePolynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ValidationError("rational function with zero denominator");
}

RationalFunction RationalFunction::zero(std::size_t nvars) {
    return RationalFunction(LatticePolynomial(nvars), LatticePolynomial::one(nvars));
}

RationalFunction RationalFunction::from_poly(LatticePolynomial p) {
    std::size_t nv = p.num_vars();
    return RationalFunction(std::move(p), LatticePolynomial::one(nv));
}

RationalFunction RationalFunction::constant(std::size_t nvars, BigInt c) {
    return from_poly(LatticePolynomial::constant(nvars, std::move(c)));
}

BigInt RationalFunction::size() const {
    if (num_.is_zero()) return 0;        // an absent entry costs nothing
    if (den_.is_one()) return num_.size();  // a polynomial is not a fraction
    return num_.size() + den_.size();
}

uint32_t RationalFunction::degree() const {
    if (num_.is_zero()) return 0;
    return std::max(num_.degree(), den_.degree());
}

uint32_t RationalFunction::degree_in(std::size_t var) const {
    if (num_.is_zero()) return 0;
    return std::max(num_.degree_in(var), den_.degree_in(var));
}

RationalFunction RationalFunction::operator-() const {
    if (is_zero()) return *this;
    return RationalFunction(-num_, den_);
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return RationalFunction(num_ + o.num_, den_);
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return *this + (-o);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    if (is_zero() || o.is_zero()) return zero(num_vars());
    if (num_.is_one() && den_.is_one()) return o;
    if (o.num_.is_one() && o.den_.is_one()) return *this;
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}

bool RationalFunction::semantically_equal(const RationalFunction& o) const {
    return (num_ * o.den_) == (o.num_ * den_);
}

RationalFunction RationalFunction::derivative(std::size_t var) const {
    if (is_zero()) return zero(num_vars());
    LatticePolynomial dn = num_.derivative(var);
    if (den_.is_one()) return RationalFunction(std::move(dn), den_);
    LatticePolynomial dd = den_.derivative(var);
    if (dd.is_zero()) return RationalFunction(std::move(dn), den_);
    return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
}

RationalFunction RationalFunction::substitute_sum(std::size_t var, std::size_t new_var) const {
    return RationalFunction(num_.substitute_sum(var, new_var), den_.substitute_sum(var, new_var));
}

RationalFunction RationalFunction::extend_vars(std::size_t n) const {
    return RationalFunction(num_.extend_vars(n), den_.extend_vars(n));
}

RationalFunction RationalFunction::normalize() const {
    if (num_.is_zero()) return zero(num_vars());
    BigInt g = 0;
    for (const auto& [i, c] : num_.terms()) g = gcd(g, abs(c));
    for (const auto& [i, c] : den_.terms()) g = gcd(g, abs(c));
    int sign = den_.terms().rbegin()->second < 0 ? -1 : 1;
    LatticePolynomial n(num_.num_vars()), d(num_.num_vars());
    for (const auto& [i, c] : num_.terms()) n.add_term(i, sign * c / g);
    for (const auto& [i, c] : den_.terms()) d.add_term(i, sign * c / g);
    return RationalFunction(std::move(n), std::move(d));
}

Complex RationalFunction::eval(const std::vector<Complex>& point) const {
    return num_.eval(point) / den_.eval(point);
}

std::string RationalFunction::to_string(const std::vector<std::string>& var_names) const {
    if (den_.is_one()) return num_.to_string(var_names);
    return "(" + num_.to_string(var_names) + ")/(" + den_.to_string(var_names) + ")";
}

// -------------------------------------------------------------------- matrices

RatMatrix::RatMatrix(std::size_t dims, std::size_t nvars)
    : dims_(dims), data_(dims * dims, RationalFunction::zero(nvars)) {}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
    RatMatrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
    RatMatrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
}

RatMatrix RatMatrix::mul(const RatMatrix& o) const {
    std::size_t nv = data_.empty() ? 1 : data_[0].num_vars();
    RatMatrix r(dims_, nv);
    for (std::size_t i = 0; i < dims_; ++i) {
        for (std::size_t k = 0; k < dims_; ++k) {
            const RationalFunction& a = at(i, k);
            if (a.is_zero()) continue;
            for (std::size_t j = 0; j < dims_; ++j) {
                const RationalFunction& b = o.at(k, j);
                if (b.is_zero()) continue;
                r.at(i, j) = r.at(i, j) + a * b;
            }
        }
    }
    return r;
}

bool RatMatrix::is_semantically_zero() const {
    for (const auto& e : data_)
        if (!e.is_zero()) return false;
    return true;
}

BigInt RatMatrix::size() const {
    BigInt s = 0;
    for (const auto& e : data_) s += e.size();
    return s;
}

uint32_t RatMatrix::degree() const {
    uint32_t d = 0;
    for (const auto& e : data_) d = std::max(d, e.degree());
    return d;
}

uint32_t RatMatrix::degree_in(std::size_t var) const {
    uint32_t d = 0;
    for (const auto& e : data_) d = std::max(d, e.degree_in(var));
    return d;
}

MatrixOneForm::MatrixOneForm(std::size_t dims, std::size_t base_dim)
    : dims_(dims), base_dim_(base_dim), comps_(base_dim, RatMatrix(dims, base_dim)) {}

BigInt MatrixOneForm::size() const {
    BigInt s = 0;
    for (const auto& c : comps_) s += c.size();
    return s;
}

uint32_t MatrixOneForm::degree() const {
    uint32_t d = 0;
    for (const auto& c : comps_) d = std::max(d, c.degree());
    return d;
}

uint32_t MatrixOneForm::time_degree() const {
    uint32_t d = 0;
    for (const auto& c : comps_) d = std::max(d, c.degree_in(0));
    return d;
}

static std::size_t pair_index(std::size_t m, std::size_t i, std::size_t j) {
    // pairs (i, j), i < j, lexicographic
    return i * (2 * m - i - 1) / 2 + (j - i - 1);
}

MatrixTwoForm::MatrixTwoForm(std::size_t dims, std::size_t base_dim)
    : dims_(dims),
      base_dim_(base_dim),
      comps_(base_dim * (base_dim - 1) / 2, RatMatrix(dims, base_dim)) {}

RatMatrix& MatrixTwoForm::component(std::size_t i, std::size_t j) {
    return comps_[pair_index(base_dim_, i, j)];
}
const RatMatrix& MatrixTwoForm::component(std::size_t i, std::size_t j) const {
    return comps_[pair_index(base_dim_, i, j)];
}
bool MatrixTwoForm::is_semantically_zero() const {
    for (const auto& c : comps_)
        if (!c.is_semantically_zero()) return false;
    return true;
}

static std::size_t triple_index(std::size_t m, std::size_t i, std::size_t j, std::size_t k) {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < i; ++a) idx += (m - a - 1) * (m - a - 2) / 2;
    idx += pair_index(m - i - 1, j - i - 1, k - i - 1);
    return idx;
}

MatrixThreeForm::MatrixThreeForm(std::size_t dims, std::size_t base_dim)
    : dims_(dims),
      base_dim_(base_dim),
      comps_(base_dim * (base_dim - 1) * (base_dim - 2) / 6, RatMatrix(dims, base_dim)) {}

RatMatrix& MatrixThreeForm::component(std::size_t i, std::size_t j, std::size_t k) {
    return comps_[triple_index(base_dim_, i, j, k)];
}
const RatMatrix& MatrixThreeForm::component(std::size_t i, std::size_t j, std::size_t k) const {
    return comps_[triple_index(base_dim_, i, j, k)];
}
bool MatrixThreeForm::is_semantically_zero() const {
    for (const auto& c : comps_)
        if (!c.is_semantically_zero()) return false;
    return true;
}

// ------------------------------------------------------------------- operators

MatrixTwoForm wedge(const MatrixOneForm& a, const MatrixOneForm& b) {
    if (a.dims() != b.dims() || a.base_dim() != b.base_dim())
        throw ValidationError("wedge: dimension mismatch");
    MatrixTwoForm r(a.dims(), a.base_dim());
    for (std::size_t i = 0; i < a.base_dim(); ++i)
        for (std::size_t j = i + 1; j < a.base_dim(); ++j)
            r.component(i, j) = a.component(i).mul(b.component(j)) -
                                a.component(j).mul(b.component(i));
    return r;
}

MatrixTwoForm exterior_derivative(const MatrixOneForm& a) {
    MatrixTwoForm r(a.dims(), a.base_dim());
    std::size_t m = a.base_dim(), l = a.dims();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            RatMatrix& c = r.component(i, j);
            for (std::size_t rr = 0; rr < l; ++rr)
                for (std::size_t cc = 0; cc < l; ++cc)
                    c.at(rr, cc) = a.component(j).at(rr, cc).derivative(i) -
                                   a.component(i).at(rr, cc).derivative(j);
        }
    return r;
}

MatrixThreeForm exterior_derivative(const MatrixTwoForm& c) {
    std::size_t m = c.base_dim(), l = c.dims();
    MatrixThreeForm r(l, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                RatMatrix& out = r.component(i, j, k);
                for (std::size_t rr = 0; rr < l; ++rr)
                    for (std::size_t cc = 0; cc < l; ++cc)
                        out.at(rr, cc) = c.component(j, k).at(rr, cc).derivative(i) -
                                         c.component(i, k).at(rr, cc).derivative(j) +
                                         c.component(i, j).at(rr, cc).derivative(k);
            }
    return r;
}

// ------------------------------------------------------------------ restriction

UniPoly UniPoly::derivative() const {
    UniPoly d;
    for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * double(k));
    d.trim();
    return d;
}

void UniPoly::trim(double rel_tol) {
    double amax = coeff_absmax();
    double tol = rel_tol * amax;
    while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
}

double UniPoly::coeff_absmax() const {
    double m = 0;
    for (const auto& v : c) m = std::max(m, std::abs(v));
    return m;
}

void RestrictedSystem::eval_into(Complex t, Complex* out) const {
    for (std::size_t i = 0; i < entries.size(); ++i) out[i] = entries[i].eval(t);
}

namespace {

bool all_exact(const std::vector<LineValue>& values) {
    for (const auto& v : values)
        if (!std::holds_alternative<BigRat>(v)) return false;
    return true;
}

UniPoly to_unipoly(const std::vector<BigRat>& coeffs) {
    UniPoly p;
    p.c.reserve(coeffs.size());
    for (const auto& q : coeffs) p.c.emplace_back(to_double(q), 0.0);
    return p;
}

// Substitutes into one polynomial; returns whether the restriction is
// identically zero (exactly for rational values, within a relative coefficient
// tolerance for numeric ones).
struct Substituter {
    bool exact;
    std::vector<BigRat> rat_values;
    std::vector<Complex> num_values;

    explicit Substituter(const std::vector<LineValue>& values) : exact(all_exact(values)) {
        for (const auto& v : values) {
            if (exact) {
                rat_values.push_back(std::get<BigRat>(v));
            } else if (std::holds_alternative<BigRat>(v)) {
                num_values.emplace_back(to_double(std::get<BigRat>(v)), 0.0);
            } else {
                num_values.push_back(std::get<Complex>(v));
            }
        }
    }

    UniPoly operator()(const LatticePolynomial& p, bool* identically_zero) const {
        if (exact) {
            auto coeffs = p.restrict_exact(0, rat_values);
            *identically_zero = coeffs.empty();
            return to_unipoly(coeffs);
        }
        double absmax = 0;
        auto coeffs = p.restrict_numeric(0, num_values, &absmax);
        UniPoly u;
        u.c = std::move(coeffs);
        u.trim(absmax > 0 ? 1e-12 : 0.0);
        // zero out cancelled interior coefficients as well
        for (auto& v : u.c)
            if (std::abs(v) <= 1e-12 * absmax) v = 0;
        *identically_zero = u.c.empty();
        return u;
    }
};

}  // namespace

RestrictedSystem restrict_line(const MatrixOneForm& form, const std::vector<LineValue>& values) {
    if (form.base_dim() == 0) throw ValidationError("restrict_line: empty base");
    if (values.size() + 1 != form.base_dim())
        throw ValidationError("restrict_line: expected " + std::to_string(form.base_dim() - 1) +
                              " parameter values");
    Substituter sub(values);
    RestrictedSystem out;
    out.dims = form.dims();
    out.entries.resize(form.dims() * form.dims());

    for (std::size_t comp = 0; comp < form.base_dim(); ++comp) {
        for (std::size_t r = 0; r < form.dims(); ++r) {
            for (std::size_t c = 0; c < form.dims(); ++c) {
                const RationalFunction& e = form.component(comp).at(r, c);
                if (e.is_zero()) continue;
                bool den_zero = false, num_zero = false;
                UniPoly den = sub(e.den(), &den_zero);
                if (den_zero)
                    throw ValidationError(
                        "restrict_line: line contained in the singular locus "
                        "(denominator vanishes identically on the line)");
                UniPoly num = sub(e.num(), &num_zero);
                if (comp == 0) {
                    auto& slot = out.entries[r * form.dims() + c];
                    slot.num = std::move(num);
                    slot.den = std::move(den);
                } else {
                    out.other_denominators.push_back(std::move(den));
                }
            }
        }
    }
    // canonical zero for untouched dt-entries
    for (auto& e : out.entries)
        if (e.den.c.empty()) e.den.c = {Complex(1, 0)};
    return out;
}

}  // namespace qsys
