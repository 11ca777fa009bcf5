#pragma once

#include <memory>
#include <optional>

#include "qsys/common.hpp"

namespace qsys {

// Symbolic iterated-exponential value.  Node set: nonnegative integer
// literals, +, *, ^, and the O+ envelope opluslog(f) = f * log2(2 + f).
// Expressions are immutable shared trees and are never evaluated eagerly.
class TowerExpr {
public:
    using Ptr = std::shared_ptr<const TowerExpr>;
    enum class Kind { Literal, Add, Mul, Pow, OplusLog };

    static Ptr literal(BigInt v);
    static Ptr add(Ptr a, Ptr b);
    static Ptr mul(Ptr a, Ptr b);
    static Ptr pow(Ptr base, Ptr exponent);
    static Ptr opluslog(Ptr f);

    Kind kind() const { return kind_; }
    const BigInt& lit() const { return lit_; }
    const Ptr& left() const { return a_; }
    const Ptr& right() const { return b_; }

    std::string to_string() const;  // formula text

private:
    TowerExpr(Kind k, BigInt lit, Ptr a, Ptr b)
        : kind_(k), lit_(std::move(lit)), a_(std::move(a)), b_(std::move(b)) {}
    Kind kind_;
    BigInt lit_;
    Ptr a_, b_;
};

enum class TowerOrder { Less, Greater, Equal, Unknown };

// Sound comparison: a strict verdict is never wrong; Unknown is allowed.
// Resolution order: structural equality, exact big-integer evaluation when
// both sides are opluslog-free and small enough, then directed-rounding
// interval evaluation in leveled log space.
TowerOrder tower_compare(const TowerExpr::Ptr& a, const TowerExpr::Ptr& b);

// The interval stage alone, bypassing the structural and exact shortcuts.
// Used to audit soundness of the directed-rounding evaluator.
TowerOrder tower_compare_intervals(const TowerExpr::Ptr& a, const TowerExpr::Ptr& b);

// Exact value for opluslog-free expressions whose results stay at or below
// max_bits bits.  Default cap corresponds to values below 2^(2^20).
std::optional<BigInt> tower_eval_exact(const TowerExpr::Ptr& e, uint64_t max_bits = (1u << 20));

// Double approximation when the value fits; nullopt otherwise.
std::optional<double> tower_eval_double(const TowerExpr::Ptr& e);

// log2 of the value as a double, when the log itself fits.
std::optional<double> tower_eval_log2(const TowerExpr::Ptr& e);

// Log-tower rendering, e.g. "2^(2^10.0)".
std::string render_log_tower(const TowerExpr::Ptr& e);

const char* tower_order_name(TowerOrder o);

}  // namespace qsys
