#pragma once

#include <memory>

#include "qsys/integrate.hpp"
#include "qsys/qsystem.hpp"

namespace qsys {

// ------------------------------------------------------------- continuation

struct ContinuationResult {
    Eigen::MatrixXcd X;
    double error_estimate = 0;
    long steps = 0;
};

// Analytic continuation of dX/dt = A(t) X along a path; X0 sits at the path
// start.  Throws NumericError on step underflow or, when require_invertible,
// on loss of invertibility.
ContinuationResult continue_solution(const MatrixEval& A, const PathPlan& path,
                                     const Eigen::MatrixXcd& X0,
                                     const IntegrationOptions& opts = {},
                                     bool require_invertible = false);

// --------------------------------------------------------------- monodromy

struct MonodromyMatrix {
    Eigen::MatrixXcd matrix;
    PathPlan loop;
    Complex base_point;
    double error_estimate = 0;
};

// Monodromy along the counterclockwise circle of radius eps around t0, based
// at t0 + eps.  fiber lists the singular points; eps must stay below half the
// distance to the nearest other singular point.
MonodromyMatrix small_loop_monodromy(const MatrixEval& A, const std::vector<Complex>& fiber,
                                     Complex t0, double eps,
                                     const IntegrationOptions& opts = {});

// Monodromy along an arbitrary closed loop.
MonodromyMatrix loop_monodromy(const MatrixEval& A, const PathPlan& loop,
                               const IntegrationOptions& opts = {});

struct QuasiUnipotenceVerdict {
    enum class Kind { Yes, No, Inconclusive };
    Kind kind = Kind::Inconclusive;
    uint64_t j = 0;  // eigenvalue order lcm, for Yes
    int k = 0;       // nilpotency index of M^j - I, for Yes
    Complex witness; // offending eigenvalue, for No
    double max_root_distance = 0;  // largest distance to the matched roots of unity
    std::string describe() const;
};

// Are all eigenvalues within tol of roots of unity of order <= j_max?
QuasiUnipotenceVerdict is_quasi_unipotent(const Eigen::MatrixXcd& M, uint64_t j_max = 64,
                                          double tol = 1e-7);

// ------------------------------------------------------- argument tracking

// A complex-valued function presented continuously along a path parameter.
class PathFunction {
public:
    virtual ~PathFunction() = default;
    virtual Complex eval(double s) = 0;
};

class LambdaPathFunction : public PathFunction {
public:
    explicit LambdaPathFunction(std::function<Complex(double)> f) : f_(std::move(f)) {}
    Complex eval(double s) override { return f_(s); }

private:
    std::function<Complex(double)> f_;
};

// f(s) = c . X(z(s)) e_col for a tracked fundamental solution.
class SolutionPathFunction : public PathFunction {
public:
    SolutionPathFunction(std::shared_ptr<SolutionTracker> tracker, Eigen::RowVectorXcd covector,
                         int column)
        : tracker_(std::move(tracker)), c_(std::move(covector)), col_(column) {}
    Complex eval(double s) override;

private:
    std::shared_ptr<SolutionTracker> tracker_;
    Eigen::RowVectorXcd c_;
    int col_;
};

struct VarArgOptions {
    double max_step_angle = M_PI / 4;  // subdivide until each step turns less than this
    int initial_grid = 32;
    int max_depth = 48;
    double zero_rel_floor = 1e-13;  // |f| below floor * running_scale means zero-on-path
};

// Continuously unwound change of Arg f over the parameter range, adaptive
// bisection.  Throws NumericError when f vanishes on the path.
double variation_of_argument(PathFunction& f, double s0 = 0.0, double s1 = 1.0,
                             const VarArgOptions& opts = {});

// ------------------------------------------------------------------- order

struct OrderOptions {
    int n_radii = 7;        // radii eps0 / 2^i, i = 0 .. n_radii-1
    double start_angle = 0;  // angle of the approach ray
    // anchor value of X at t0 + eps0 * exp(i start_angle); identity when empty.
    // Pick one that keeps c . X e_col away from zero on the measurement circles.
    Eigen::MatrixXcd X0;
    IntegrationOptions integ;
};

struct OrderEstimate {
    double mu = 0;
    double half_width = 0;  // confidence half-interval
    bool converged = false;
    std::vector<double> variations;  // Var Arg / 2 pi per radius
};

// ord_{t0} f for f = c . X e_col, via the variation of argument along full
// circles of shrinking radius, extrapolated in inverse-log space (an odd
// power series in 1/log(1/eps) captures polynomial-in-log prefactors).
OrderEstimate order_at_singularity(const MatrixEval& A, Complex t0, double eps0,
                                   const Eigen::RowVectorXcd& covector, int column,
                                   const OrderOptions& opts = {});

// -------------------------------------------------------------- regularity

struct RegularityReport {
    double max_exponent = 0;  // fitted k in |X^{+-1}| <= c dist^{-k}
    bool irregular_flag = false;
    std::vector<double> ray_exponents;
};

struct RegularityOptions {
    double r0 = 0.5;  // starting distance
    int n_radii = 10;
    int rays = 8;
    IntegrationOptions integ;
};

// Samples |X| and |X^{-1}| along straight rays into t0 and fits the growth
// exponent; advisory only.  Super-polynomial growth flips irregular_flag.
RegularityReport regularity_probe(const MatrixEval& A, Complex t0,
                                  const RegularityOptions& opts = {});

}  // namespace qsys
