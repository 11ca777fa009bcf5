#include "qsys/tower.hpp"

#include <mpfr.h>

#include <cmath>
#include <sstream>

namespace qsys {

// --------------------------------------------------------------- expression

TowerExpr::Ptr TowerExpr::literal(BigInt v) {
    if (v < 0) throw ValidationError("tower literals are nonnegative");
    return Ptr(new TowerExpr(Kind::Literal, std::move(v), nullptr, nullptr));
}
TowerExpr::Ptr TowerExpr::add(Ptr a, Ptr b) {
    return Ptr(new TowerExpr(Kind::Add, 0, std::move(a), std::move(b)));
}
TowerExpr::Ptr TowerExpr::mul(Ptr a, Ptr b) {
    return Ptr(new TowerExpr(Kind::Mul, 0, std::move(a), std::move(b)));
}
TowerExpr::Ptr TowerExpr::pow(Ptr base, Ptr exponent) {
    return Ptr(new TowerExpr(Kind::Pow, 0, std::move(base), std::move(exponent)));
}
TowerExpr::Ptr TowerExpr::opluslog(Ptr f) {
    return Ptr(new TowerExpr(Kind::OplusLog, 0, std::move(f), nullptr));
}

std::string TowerExpr::to_string() const {
    switch (kind_) {
        case Kind::Literal: return lit_.str();
        case Kind::Add: return "(" + a_->to_string() + " + " + b_->to_string() + ")";
        case Kind::Mul: return "(" + a_->to_string() + " * " + b_->to_string() + ")";
        case Kind::Pow: return "(" + a_->to_string() + " ^ " + b_->to_string() + ")";
        case Kind::OplusLog: return "opluslog(" + a_->to_string() + ")";
    }
    return "?";
}

namespace {

bool structurally_equal(const TowerExpr::Ptr& a, const TowerExpr::Ptr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case TowerExpr::Kind::Literal: return a->lit() == b->lit();
        case TowerExpr::Kind::OplusLog: return structurally_equal(a->left(), b->left());
        default:
            return structurally_equal(a->left(), b->left()) &&
                   structurally_equal(a->right(), b->right());
    }
}

// ------------------------------------------------- directed-rounding intervals

constexpr mpfr_prec_t kPrec = 192;

struct Interval {
    mpfr_t lo, hi;

    Interval() {
        mpfr_init2(lo, kPrec);
        mpfr_init2(hi, kPrec);
        mpfr_set_ui(lo, 0, MPFR_RNDD);
        mpfr_set_ui(hi, 0, MPFR_RNDU);
    }
    Interval(const Interval& o) : Interval() {
        mpfr_set(lo, o.lo, MPFR_RNDD);
        mpfr_set(hi, o.hi, MPFR_RNDU);
    }
    Interval& operator=(const Interval& o) {
        if (this != &o) {
            mpfr_set(lo, o.lo, MPFR_RNDD);
            mpfr_set(hi, o.hi, MPFR_RNDU);
        }
        return *this;
    }
    ~Interval() {
        mpfr_clear(lo);
        mpfr_clear(hi);
    }

    static Interval from_bigint(const BigInt& v) {
        Interval r;
        std::string s = v.str();
        mpfr_set_str(r.lo, s.c_str(), 10, MPFR_RNDD);
        mpfr_set_str(r.hi, s.c_str(), 10, MPFR_RNDU);
        return r;
    }
    static Interval from_ui(unsigned long v) {
        Interval r;
        mpfr_set_ui(r.lo, v, MPFR_RNDD);
        mpfr_set_ui(r.hi, v, MPFR_RNDU);
        return r;
    }

    bool is_exact_one() const { return mpfr_cmp_ui(lo, 1) == 0 && mpfr_cmp_ui(hi, 1) == 0; }
    bool is_exact_zero() const { return mpfr_zero_p(lo) && mpfr_zero_p(hi); }
    bool has_nan() const { return mpfr_nan_p(lo) || mpfr_nan_p(hi); }
};

Interval iv_add(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_add(r.lo, a.lo, b.lo, MPFR_RNDD);
    mpfr_add(r.hi, a.hi, b.hi, MPFR_RNDU);
    return r;
}

// every quantity in the evaluator is nonnegative
Interval iv_mul(const Interval& a, const Interval& b) {
    Interval r;
    if (a.is_exact_zero() || b.is_exact_zero()) return r;
    mpfr_mul(r.lo, a.lo, b.lo, MPFR_RNDD);
    mpfr_mul(r.hi, a.hi, b.hi, MPFR_RNDU);
    if (mpfr_nan_p(r.lo)) mpfr_set_ui(r.lo, 0, MPFR_RNDD);  // 0 * inf
    if (mpfr_nan_p(r.hi)) mpfr_set_inf(r.hi, 1);
    return r;
}

Interval iv_log2(const Interval& a) {
    Interval r;
    mpfr_log2(r.lo, a.lo, MPFR_RNDD);  // log2(0) = -inf stays a sound lower bound
    mpfr_log2(r.hi, a.hi, MPFR_RNDU);
    return r;
}

Interval iv_exp2(const Interval& a) {
    Interval r;
    mpfr_exp2(r.lo, a.lo, MPFR_RNDD);
    mpfr_exp2(r.hi, a.hi, MPFR_RNDU);
    return r;
}

// -------------------------------------------------------------- leveled value
//
// value = exp2 applied `level` times to the interval x.  Normalization keeps
// x.hi inside the window [2^8, 2^256]; both reduction directions terminate
// and every exp2/log2 stays far from the mpfr exponent limits.

struct TowerValue {
    int level = 0;
    Interval x;
    bool zero = false;  // exact-zero marker; x is unused when set

    static TowerValue exact_zero() {
        TowerValue v;
        v.zero = true;
        return v;
    }
    static TowerValue one() {
        TowerValue v;
        v.x = Interval::from_ui(1);
        return v;
    }
};

void normalize(TowerValue& v) {
    if (v.zero) return;
    static thread_local mpfr_t window_hi;
    static thread_local bool init = false;
    if (!init) {
        mpfr_init2(window_hi, kPrec);
        mpfr_set_ui_2exp(window_hi, 1, 256, MPFR_RNDN);  // 2^256
        init = true;
    }
    while (!mpfr_nan_p(v.x.hi) && mpfr_cmp(v.x.hi, window_hi) > 0) {
        v.x = iv_log2(v.x);
        v.level += 1;
    }
    while (v.level > 0 && !mpfr_nan_p(v.x.hi) && mpfr_cmp_ui(v.x.hi, 256) < 0) {
        v.x = iv_exp2(v.x);
        v.level -= 1;
    }
}

void raise_level(TowerValue& v) {
    v.x = iv_log2(v.x);
    v.level += 1;
}

void to_common_level(TowerValue& a, TowerValue& b) {
    while (a.level < b.level) raise_level(a);
    while (b.level < a.level) raise_level(b);
}

TowerValue tv_exp2(const TowerValue& c) {
    if (c.zero) return TowerValue::one();
    TowerValue r;
    r.level = c.level + 1;
    r.x = c.x;
    normalize(r);
    return r;
}

TowerValue tv_log2(const TowerValue& a) {
    TowerValue r;
    if (a.level >= 1) {
        r.level = a.level - 1;
        r.x = a.x;
    } else {
        r.x = iv_log2(a.x);
    }
    normalize(r);
    return r;
}

TowerValue tv_add(TowerValue a, TowerValue b) {
    if (a.zero) return b;
    if (b.zero) return a;
    to_common_level(a, b);
    TowerValue r;
    r.level = a.level;
    if (a.level == 0) {
        r.x = iv_add(a.x, b.x);
    } else {
        // sum <= 2 * max <= exp2^L(max + 1); at level 1 the bound tightens to
        // max.hi + log2(1 + 2^{min.hi - max.lo})
        bool a_big = mpfr_cmp(a.x.hi, b.x.hi) >= 0;
        const Interval& big = a_big ? a.x : b.x;
        const Interval& small = a_big ? b.x : a.x;
        mpfr_set(r.x.lo, mpfr_cmp(a.x.lo, b.x.lo) >= 0 ? a.x.lo : b.x.lo, MPFR_RNDD);
        if (a.level == 1) {
            mpfr_t t;
            mpfr_init2(t, kPrec);
            mpfr_sub(t, small.hi, big.lo, MPFR_RNDU);
            mpfr_exp2(t, t, MPFR_RNDU);
            mpfr_add_ui(t, t, 1, MPFR_RNDU);
            mpfr_log2(t, t, MPFR_RNDU);
            mpfr_add(r.x.hi, big.hi, t, MPFR_RNDU);
            mpfr_clear(t);
        } else {
            mpfr_add_ui(r.x.hi, big.hi, 1, MPFR_RNDU);
        }
    }
    normalize(r);
    return r;
}

TowerValue tv_mul(TowerValue a, TowerValue b) {
    if (a.zero || b.zero) return TowerValue::exact_zero();
    to_common_level(a, b);
    if (a.level == 0) {
        TowerValue r;
        r.x = iv_mul(a.x, b.x);
        normalize(r);
        return r;
    }
    TowerValue la, lb;
    la.level = a.level - 1;
    la.x = a.x;
    lb.level = b.level - 1;
    lb.x = b.x;
    return tv_exp2(tv_add(la, lb));
}

TowerValue tv_pow(const TowerValue& base, const TowerValue& expo) {
    if (expo.zero) return TowerValue::one();
    if (base.zero) return TowerValue::exact_zero();
    if (base.level == 0 && base.x.is_exact_one()) return base;
    return tv_exp2(tv_mul(expo, tv_log2(base)));
}

TowerValue tv_opluslog(const TowerValue& f) {
    if (f.zero) return TowerValue::exact_zero();
    TowerValue two;
    two.x = Interval::from_ui(2);
    return tv_mul(f, tv_log2(tv_add(f, two)));
}

TowerValue tv_eval(const TowerExpr::Ptr& e) {
    switch (e->kind()) {
        case TowerExpr::Kind::Literal: {
            if (e->lit() == 0) return TowerValue::exact_zero();
            TowerValue v;
            v.x = Interval::from_bigint(e->lit());
            normalize(v);
            return v;
        }
        case TowerExpr::Kind::Add: return tv_add(tv_eval(e->left()), tv_eval(e->right()));
        case TowerExpr::Kind::Mul: return tv_mul(tv_eval(e->left()), tv_eval(e->right()));
        case TowerExpr::Kind::Pow: return tv_pow(tv_eval(e->left()), tv_eval(e->right()));
        case TowerExpr::Kind::OplusLog: return tv_opluslog(tv_eval(e->left()));
    }
    return TowerValue::exact_zero();
}

TowerOrder tv_compare(TowerValue a, TowerValue b) {
    if (a.zero && b.zero) return TowerOrder::Equal;
    if (a.zero) return TowerOrder::Less;  // every nonzero value here is positive
    if (b.zero) return TowerOrder::Greater;
    to_common_level(a, b);
    if (a.x.has_nan() || b.x.has_nan()) return TowerOrder::Unknown;
    if (mpfr_cmp(a.x.hi, b.x.lo) < 0) return TowerOrder::Less;
    if (mpfr_cmp(a.x.lo, b.x.hi) > 0) return TowerOrder::Greater;
    return TowerOrder::Unknown;
}

// ------------------------------------------------------------ exact evaluation

uint64_t bigint_bits(const BigInt& v) {
    if (v == 0) return 1;
    return uint64_t(boost::multiprecision::msb(v)) + 1;
}

std::optional<BigInt> eval_exact_rec(const TowerExpr::Ptr& e, uint64_t max_bits) {
    switch (e->kind()) {
        case TowerExpr::Kind::Literal:
            if (bigint_bits(e->lit()) > max_bits) return std::nullopt;
            return e->lit();
        case TowerExpr::Kind::Add: {
            auto a = eval_exact_rec(e->left(), max_bits);
            auto b = eval_exact_rec(e->right(), max_bits);
            if (!a || !b) return std::nullopt;
            BigInt r = *a + *b;
            if (bigint_bits(r) > max_bits) return std::nullopt;
            return r;
        }
        case TowerExpr::Kind::Mul: {
            auto a = eval_exact_rec(e->left(), max_bits);
            auto b = eval_exact_rec(e->right(), max_bits);
            if (!a || !b) return std::nullopt;
            if (bigint_bits(*a) + bigint_bits(*b) > max_bits + 1) return std::nullopt;
            return *a * *b;
        }
        case TowerExpr::Kind::Pow: {
            auto a = eval_exact_rec(e->left(), max_bits);
            if (a && *a == 1) return BigInt(1);

            // 2^(opluslog(x)) = (2 + x)^x is exact for integer x; likewise for
            // any power-of-two base
            if (a && *a >= 2 && (*a & (*a - 1)) == 0 &&
                e->right()->kind() == TowerExpr::Kind::OplusLog) {
                uint64_t j = boost::multiprecision::msb(*a);
                auto x = eval_exact_rec(e->right()->left(), max_bits);
                if (x && *x > 0 && *x <= 0xffffffffull && j * uint64_t(*x) <= 0xffffffffull) {
                    BigInt nb = 2 + *x;
                    uint64_t ex = uint64_t(*x) * j;
                    if (bigint_bits(nb) * ex <= max_bits)
                        return boost::multiprecision::pow(nb, unsigned(ex));
                }
                if (x && *x == 0) return BigInt(1);
                return std::nullopt;
            }

            auto b = eval_exact_rec(e->right(), max_bits);
            if (!b) return std::nullopt;
            if (*b == 0) return BigInt(1);
            if (!a) return std::nullopt;
            if (*a == 0) return BigInt(0);
            if (*b > 0xffffffffull) return std::nullopt;
            uint64_t ex = uint64_t(*b);
            if (bigint_bits(*a) * ex > max_bits) return std::nullopt;
            return boost::multiprecision::pow(*a, unsigned(ex));
        }
        case TowerExpr::Kind::OplusLog: {
            auto x = eval_exact_rec(e->left(), max_bits);
            if (!x) return std::nullopt;
            if (*x == 0) return BigInt(0);
            BigInt t = *x + 2;
            if ((t & (t - 1)) == 0) return *x * boost::multiprecision::msb(t);
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<BigInt> tower_eval_exact(const TowerExpr::Ptr& e, uint64_t max_bits) {
    return eval_exact_rec(e, max_bits);
}

TowerOrder tower_compare(const TowerExpr::Ptr& a, const TowerExpr::Ptr& b) {
    if (structurally_equal(a, b)) return TowerOrder::Equal;
    auto ea = tower_eval_exact(a);
    auto eb = tower_eval_exact(b);
    if (ea && eb) {
        if (*ea < *eb) return TowerOrder::Less;
        if (*ea > *eb) return TowerOrder::Greater;
        return TowerOrder::Equal;
    }
    return tv_compare(tv_eval(a), tv_eval(b));
}

TowerOrder tower_compare_intervals(const TowerExpr::Ptr& a, const TowerExpr::Ptr& b) {
    return tv_compare(tv_eval(a), tv_eval(b));
}

std::optional<double> tower_eval_double(const TowerExpr::Ptr& e) {
    auto ex = tower_eval_exact(e, 4096);
    if (ex) {
        double d = to_double(*ex);
        if (std::isfinite(d)) return d;
        return std::nullopt;
    }
    TowerValue v = tv_eval(e);
    if (v.zero) return 0.0;
    while (v.level > 0 && mpfr_cmp_ui(v.x.hi, 1020) < 0) {
        v.x = iv_exp2(v.x);
        v.level -= 1;
    }
    if (v.level > 0 || v.x.has_nan()) return std::nullopt;
    double lo = mpfr_get_d(v.x.lo, MPFR_RNDN), hi = mpfr_get_d(v.x.hi, MPFR_RNDN);
    if (!std::isfinite(lo) || !std::isfinite(hi)) return std::nullopt;
    return 0.5 * (lo + hi);
}

std::optional<double> tower_eval_log2(const TowerExpr::Ptr& e) {
    TowerValue v = tv_eval(e);
    if (v.zero) return std::nullopt;
    TowerValue lg = tv_log2(v);
    while (lg.level > 0 && mpfr_cmp_ui(lg.x.hi, 1020) < 0) {
        lg.x = iv_exp2(lg.x);
        lg.level -= 1;
    }
    if (lg.level > 0 || lg.x.has_nan()) return std::nullopt;
    double lo = mpfr_get_d(lg.x.lo, MPFR_RNDN), hi = mpfr_get_d(lg.x.hi, MPFR_RNDN);
    if (!std::isfinite(lo) || !std::isfinite(hi)) return std::nullopt;
    return 0.5 * (lo + hi);
}

std::string render_log_tower(const TowerExpr::Ptr& e) {
    TowerValue v = tv_eval(e);
    if (v.zero) return "0";
    int level = v.level;
    double x = mpfr_get_d(v.x.hi, MPFR_RNDN);
    if (level == 0 && x < 1e6) {
        double lo = mpfr_get_d(v.x.lo, MPFR_RNDN);
        std::ostringstream os;
        os.precision(10);
        os << 0.5 * (lo + x);
        return os.str();
    }
    while (x >= 16.0 && std::isfinite(x)) {
        x = std::log2(x);
        level += 1;
    }
    std::ostringstream os;
    for (int i = 0; i < level; ++i) os << "2↑(";
    os.precision(1);
    os << std::fixed << x;
    for (int i = 0; i < level; ++i) os << ")";
    return os.str();
}

const char* tower_order_name(TowerOrder o) {
    switch (o) {
        case TowerOrder::Less: return "<";
        case TowerOrder::Greater: return ">";
        case TowerOrder::Equal: return "=";
        case TowerOrder::Unknown: return "unknown";
    }
    return "?";
}

}  // namespace qsys
