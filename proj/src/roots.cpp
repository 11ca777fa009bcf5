#include "qsys/roots.hpp"

#include <Eigen/Dense>

namespace qsys {

std::vector<Complex> poly_roots(const UniPoly& p) {
    UniPoly q = p;
    q.trim(1e-14);
    std::size_t n = q.c.empty() ? 0 : q.c.size() - 1;
    if (n == 0) return {};
    if (n == 1) return {-q.c[0] / q.c[1]};

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    Complex lead = q.c[n];
    for (std::size_t i = 0; i + 1 < n; ++i) companion(i + 1, i) = 1.0;
    for (std::size_t i = 0; i < n; ++i) companion(i, n - 1) = -q.c[i] / lead;

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<Complex> roots(n);
    UniPoly dq = q.derivative();
    for (std::size_t i = 0; i < n; ++i) {
        Complex r = solver.eigenvalues()(i);
        // one or two Newton polish steps away from multiple roots
        for (int it = 0; it < 2; ++it) {
            Complex d = dq.eval(r);
            if (std::abs(d) < 1e-8) break;
            Complex step = q.eval(r) / d;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            if (std::abs(step) > 0.5 * (1.0 + std::abs(r))) break;
            r -= step;
        }
        roots[i] = r;
    }
    return roots;
}

}  // namespace qsys
