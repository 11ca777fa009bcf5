#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsys/analytic.hpp"

using namespace qsys;
using Mat = Eigen::MatrixXcd;

namespace {

MatrixEval scalar_rhs(std::function<Complex(Complex)> a) {
    return [a](Complex t, Mat& out) {
        out.resize(1, 1);
        out(0, 0) = a(t);
    };
}

// A = N1/t + N2/(t-3), a two-singularity Fuchsian test system
MatrixEval fuchs_rhs() {
    return [](Complex t, Mat& out) {
        out.setZero(2, 2);
        out(0, 1) = 1.0 / t;
        out(1, 0) = 1.0 / (t - 3.0);
    };
}

// X = [[t, t log t], [0, t]] solves this; column 1 carries the log
MatrixEval tlogt_rhs() {
    return [](Complex t, Mat& out) {
        out.resize(2, 2);
        out << 1.0 / t, 1.0 / t, Complex(0), 1.0 / t;
    };
}

Mat ident(int n) { return Mat::Identity(n, n); }

}  // namespace

TEST_CASE("continuation of closed-form solutions") {
    // dX = X/t dt from 1 to 2: X = t
    auto r = continue_solution(scalar_rhs([](Complex t) { return 1.0 / t; }),
                               PathPlan::line(1.0, 2.0), ident(1));
    CHECK(std::abs(r.X(0, 0) - 2.0) < 1e-12);

    // branch of sqrt: full circle multiplies by -1
    auto r2 = continue_solution(scalar_rhs([](Complex t) { return 0.5 / t; }),
                                PathPlan::circle(0.0, 1.0), ident(1));
    CHECK(std::abs(r2.X(0, 0) - Complex(-1.0)) < 1e-10);

    // zero right-hand side: exactly the initial data
    Mat x0(1, 1);
    x0(0, 0) = Complex(3, 4);
    auto r3 = continue_solution(scalar_rhs([](Complex) { return 0.0; }),
                                PathPlan::circle(2.0, 5.0), x0);
    CHECK(std::abs(r3.X(0, 0) - Complex(3, 4)) == 0);
}

TEST_CASE("small-loop monodromy") {
    std::vector<Complex> fiber = {0.0};
    auto m = small_loop_monodromy(scalar_rhs([](Complex t) { return 0.5 / t; }), fiber, 0.0, 0.5);
    CHECK(std::abs(m.matrix(0, 0) - Complex(-1.0)) < 1e-10);

    // unipotent log monodromy: [[1, 2 pi i], [0, 1]]
    MatrixEval logsys = [](Complex t, Mat& out) {
        out.setZero(2, 2);
        out(0, 1) = 1.0 / t;
    };
    auto ml = small_loop_monodromy(logsys, fiber, 0.0, 1.0);
    CHECK(std::abs(ml.matrix(0, 0) - 1.0) < 1e-10);
    CHECK(std::abs(ml.matrix(1, 1) - 1.0) < 1e-10);
    CHECK(std::abs(ml.matrix(1, 0)) < 1e-10);
    CHECK(std::abs(ml.matrix(0, 1) - Complex(0, 2 * M_PI)) < 1e-9);
    auto verdict = is_quasi_unipotent(ml.matrix);
    CHECK(verdict.kind == QuasiUnipotenceVerdict::Kind::Yes);
    CHECK(verdict.j == 1);
    CHECK(verdict.k == 2);

    // no pole inside: identity
    auto mr = small_loop_monodromy(scalar_rhs([](Complex t) { return 0.5 / t; }), fiber, 5.0, 0.5);
    CHECK((mr.matrix - ident(1)).norm() < 1e-10);

    // a loop radius that is not small is rejected
    std::vector<Complex> fiber2 = {0.0, 1.0};
    CHECK_THROWS_AS(
        small_loop_monodromy(scalar_rhs([](Complex t) { return 0.5 / t; }), fiber2, 0.0, 0.6),
        ValidationError);
}

TEST_CASE("quasi-unipotence verdicts") {
    Mat rot(2, 2);
    rot << 0, -1, 1, 0;
    auto v1 = is_quasi_unipotent(rot);
    CHECK(v1.kind == QuasiUnipotenceVerdict::Kind::Yes);
    CHECK(v1.j == 4);
    CHECK(v1.k == 1);

    Mat two(1, 1);
    two << 2;
    CHECK(is_quasi_unipotent(two).kind == QuasiUnipotenceVerdict::Kind::No);

    Mat jordan(2, 2);
    jordan << 1, 1, 0, 1;
    auto v3 = is_quasi_unipotent(jordan);
    CHECK(v3.kind == QuasiUnipotenceVerdict::Kind::Yes);
    CHECK(v3.j == 1);
    CHECK(v3.k == 2);

    // on the unit circle but decisively away from every low-order root
    Mat odd(1, 1);
    odd << std::polar(1.0, 0.37);
    auto v4 = is_quasi_unipotent(odd, 16, 1e-7);
    CHECK(v4.kind == QuasiUnipotenceVerdict::Kind::No);
}

TEST_CASE("monodromy reversal and concatenation") {
    std::vector<Complex> fiber = {0.0, 3.0};
    auto fwd = loop_monodromy(fuchs_rhs(), PathPlan::circle(0.0, 1.0, 0.0, 1));
    auto bwd = loop_monodromy(fuchs_rhs(), PathPlan::circle(0.0, 1.0, 0.0, -1));
    CHECK((bwd.matrix * fwd.matrix - ident(2)).norm() < 1e-8);

    // a square loop with the same base point is homotopic to the circle
    std::vector<Complex> sq = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1),
                               Complex(1, 0)};
    auto square = loop_monodromy(fuchs_rhs(), PathPlan::polyline(sq));
    CHECK((square.matrix - fwd.matrix).norm() < 1e-8);

    // double loop = matrix square
    auto twice = loop_monodromy(fuchs_rhs(), PathPlan::circle(0.0, 1.0, 0.0, 2));
    CHECK((twice.matrix - fwd.matrix * fwd.matrix).norm() < 1e-8);
}

TEST_CASE("variation of argument of a plain winding") {
    LambdaPathFunction f([](double s) { return std::polar(1.0, 2 * M_PI * s); });
    CHECK(std::abs(variation_of_argument(f) - 2 * M_PI) < 1e-9);

    // image lies in a half-plane: |variation| is pi/2 (and certainly <= pi)
    LambdaPathFunction g([](double s) { return Complex(2 * s - 1, 1); });
    CHECK(std::abs(std::abs(variation_of_argument(g)) - M_PI / 2) < 1e-9);

    LambdaPathFunction zero_cross([](double s) { return Complex(2 * s - 1, 0); });
    CHECK_THROWS_AS(variation_of_argument(zero_cross), NumericError);
}

TEST_CASE("order of t^(1/2) at the origin") {
    Eigen::RowVectorXcd c(1);
    c << 1;
    auto est = order_at_singularity(scalar_rhs([](Complex t) { return 0.5 / t; }), 0.0, 1e-3, c, 0);
    CHECK(std::abs(est.mu - 0.5) < 1e-6);
    CHECK(est.converged);
}

TEST_CASE("order of a constant is zero") {
    Eigen::RowVectorXcd c(1);
    c << 1;
    auto est = order_at_singularity(scalar_rhs([](Complex) { return 0.0; }), 0.0, 0.25, c, 0);
    CHECK(std::abs(est.mu) < 1e-9);
}

TEST_CASE("log factors do not shift the order") {
    // anchor with X = [[t, t log t], [0, t]] so the picked entry is t log t
    double eps0 = 1e-6;
    OrderOptions opts;
    opts.X0.resize(2, 2);
    opts.X0 << eps0, eps0 * std::log(eps0), 0.0, eps0;
    Eigen::RowVectorXcd c(2);
    c << 1, 0;
    auto est = order_at_singularity(tlogt_rhs(), 0.0, eps0, c, 1, opts);
    CHECK(std::abs(est.mu - 1.0) < 1e-4);
    CHECK(est.converged);
}

TEST_CASE("regularity probe") {
    RegularityOptions opts;
    opts.r0 = 0.5;
    auto rep = regularity_probe(scalar_rhs([](Complex t) { return 0.5 / t; }), 0.0, opts);
    CHECK(!rep.irregular_flag);
    CHECK(std::abs(rep.max_exponent - 0.5) < 0.05);

    auto flat = regularity_probe(scalar_rhs([](Complex) { return 0.0; }), 0.0, opts);
    CHECK(flat.max_exponent < 0.05);

    // irregular singularity: solutions behave like exp(1/t)
    RegularityOptions irro;
    irro.r0 = 0.25;
    irro.n_radii = 9;
    irro.rays = 4;
    auto irr = regularity_probe(scalar_rhs([](Complex t) { return -1.0 / (t * t); }), 0.0, irro);
    CHECK(irr.irregular_flag);
}
