#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>

#include "qsys/algebra.hpp"
#include "qsys/paths.hpp"

namespace qsys {

// A(t) of the linear system dX/dt = A(t) X.
using MatrixEval = std::function<void(Complex t, Eigen::MatrixXcd& out)>;

MatrixEval matrix_eval_of(const RestrictedSystem& sys);

struct IntegrationOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
    long max_steps = 2000000;
    double initial_step = 0;  // 0: choose automatically
};

struct IntegrationResult {
    Eigen::MatrixXcd X;
    double error_estimate = 0;  // accumulated step-control error, path-length scaled
    long steps_accepted = 0;
    long steps_rejected = 0;
};

// Integrates dX/ds = z'(s) A(z(s)) X over the sub-range [s_from, s_to] of the
// path parameter.  Eighth-order Dormand-Prince core with the embedded 5th/3rd
// order error estimate.  Throws NumericError on step-size underflow.
IntegrationResult integrate_path(const MatrixEval& A, const PathPlan& path,
                                 const Eigen::MatrixXcd& X0, double s_from = 0.0,
                                 double s_to = 1.0, const IntegrationOptions& opts = {});

// Random access to X(s) along one path via checkpointed re-integration.
// Queries insert checkpoints, so sweeping a path stays linear in cost.
class SolutionTracker {
public:
    SolutionTracker(MatrixEval A, PathPlan path, Eigen::MatrixXcd X0,
                    IntegrationOptions opts = {});

    const Eigen::MatrixXcd& at(double s);
    const PathPlan& path() const { return path_; }
    double accumulated_error() const { return error_; }

private:
    MatrixEval A_;
    PathPlan path_;
    IntegrationOptions opts_;
    std::map<double, Eigen::MatrixXcd> checkpoints_;
    double error_ = 0;
};

}  // namespace qsys
