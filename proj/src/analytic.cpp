#include "qsys/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qsys {

ContinuationResult continue_solution(const MatrixEval& A, const PathPlan& path,
                                     const Eigen::MatrixXcd& X0, const IntegrationOptions& opts,
                                     bool require_invertible) {
    IntegrationResult r = integrate_path(A, path, X0, 0.0, 1.0, opts);
    if (require_invertible && r.X.rows() == r.X.cols()) {
        double scale = std::max(1.0, r.X.norm());
        double d = std::abs(r.X.determinant());
        if (!(d > 1e-12 * std::pow(scale, double(r.X.rows()))))
            throw NumericError("continuation lost invertibility (numerical blow-up)");
    }
    ContinuationResult out;
    out.X = std::move(r.X);
    out.error_estimate = r.error_estimate * std::max(1.0, path.total_length());
    out.steps = r.steps_accepted;
    return out;
}

MonodromyMatrix loop_monodromy(const MatrixEval& A, const PathPlan& loop,
                               const IntegrationOptions& opts) {
    if (!loop.is_closed(1e-9)) throw ValidationError("monodromy requires a closed loop");
    Eigen::Index l = 0;
    {
        Eigen::MatrixXcd probe;
        A(loop.start(), probe);
        l = probe.rows();
    }
    Eigen::MatrixXcd X0 = Eigen::MatrixXcd::Identity(l, l);
    ContinuationResult r = continue_solution(A, loop, X0, opts, true);
    MonodromyMatrix m;
    m.matrix = std::move(r.X);
    m.loop = loop;
    m.base_point = loop.start();
    m.error_estimate = r.error_estimate;
    return m;
}

MonodromyMatrix small_loop_monodromy(const MatrixEval& A, const std::vector<Complex>& fiber,
                                     Complex t0, double eps, const IntegrationOptions& opts) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Complex& p : fiber) {
        double d = std::abs(p - t0);
        if (d > eps * 1e-6) nearest = std::min(nearest, d);
    }
    if (!(eps < 0.5 * nearest))
        throw ValidationError("small_loop_monodromy: radius is not small "
                              "(must stay below half the distance to the next singular point)");
    return loop_monodromy(A, PathPlan::circle(t0, eps, 0.0, 1), opts);
}

std::string QuasiUnipotenceVerdict::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Yes:
            os << "yes (j=" << j << ", k=" << k << ")";
            break;
        case Kind::No:
            os << "no (eigenvalue " << witness.real() << (witness.imag() < 0 ? "-" : "+")
               << std::abs(witness.imag()) << "i)";
            break;
        case Kind::Inconclusive:
            os << "inconclusive (nearest root-of-unity distance " << max_root_distance << ")";
            break;
    }
    return os.str();
}

QuasiUnipotenceVerdict is_quasi_unipotent(const Eigen::MatrixXcd& M, uint64_t j_max, double tol) {
    QuasiUnipotenceVerdict v;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M, false);
    const auto& ev = solver.eigenvalues();

    BigInt j_lcm = 1;
    double worst = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        Complex lambda = ev(i);
        if (std::abs(std::abs(lambda) - 1.0) > tol) {
            v.kind = QuasiUnipotenceVerdict::Kind::No;
            v.witness = lambda;
            return v;
        }
        double best = std::numeric_limits<double>::infinity();
        uint64_t best_q = 0;
        double theta = std::arg(lambda) / (2 * M_PI);
        for (uint64_t q = 1; q <= j_max; ++q) {
            double p = std::round(theta * double(q));
            Complex root = std::polar(1.0, 2 * M_PI * p / double(q));
            double d = std::abs(lambda - root);
            if (d < best - 1e-18) {
                best = d;
                best_q = q;
            }
            if (best <= tol) break;  // smallest order q wins
        }
        worst = std::max(worst, best);
        if (best > tol) {
            v.max_root_distance = best;
            if (best > 1000 * tol) {
                // decisively off every root of unity of order <= j_max
                v.kind = QuasiUnipotenceVerdict::Kind::No;
                v.witness = lambda;
            } else {
                v.kind = QuasiUnipotenceVerdict::Kind::Inconclusive;
            }
            return v;
        }
        j_lcm = boost::multiprecision::lcm(j_lcm, BigInt(best_q));
    }
    if (j_lcm > 1000000) {
        v.kind = QuasiUnipotenceVerdict::Kind::Inconclusive;
        v.max_root_distance = worst;
        return v;
    }

    uint64_t j = uint64_t(j_lcm);
    // nilpotency index of M^j - I by repeated multiplication
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(M.rows(), M.cols());
    {
        Eigen::MatrixXcd base = M;
        uint64_t e = j;
        while (e > 0) {
            if (e & 1) P = P * base;
            base = base * base;
            e >>= 1;
        }
    }
    Eigen::MatrixXcd N = P - Eigen::MatrixXcd::Identity(M.rows(), M.cols());
    double ntol = std::max(tol, 1e-9) * 10.0 * std::max(1.0, P.norm());
    Eigen::MatrixXcd B = N;
    int k = int(M.rows());
    for (int kk = 1; kk <= int(M.rows()); ++kk) {
        if (B.norm() <= ntol) {
            k = kk;
            break;
        }
        B = B * N;
    }
    v.kind = QuasiUnipotenceVerdict::Kind::Yes;
    v.j = j;
    v.k = k;
    v.max_root_distance = worst;
    return v;
}

// ------------------------------------------------------- argument tracking

Complex SolutionPathFunction::eval(double s) {
    const Eigen::MatrixXcd& X = tracker_->at(s);
    return (c_ * X.col(col_))(0);
}

namespace {

double principal_delta(Complex a, Complex b) {
    return std::arg(b / a);
}

struct VarArgWorker {
    PathFunction& f;
    const VarArgOptions& opts;
    double scale = 0;

    Complex probe(double s) {
        Complex v = f.eval(s);
        double a = std::abs(v);
        scale = std::max(scale, a);
        if (!(a > opts.zero_rel_floor * std::max(scale, 1e-300)))
            throw NumericError("variation of argument: function vanishes on the path");
        return v;
    }

    double recurse(double a, double b, Complex fa, Complex fb, int depth) {
        double dab = principal_delta(fa, fb);
        double m = 0.5 * (a + b);
        if (depth >= opts.max_depth) return dab;
        Complex fm = probe(m);
        double d1 = principal_delta(fa, fm);
        double d2 = principal_delta(fm, fb);
        if (std::abs(d1) <= opts.max_step_angle && std::abs(d2) <= opts.max_step_angle &&
            std::abs(d1 + d2 - dab) < 1e-9)
            return d1 + d2;
        return recurse(a, m, fa, fm, depth + 1) + recurse(m, b, fm, fb, depth + 1);
    }
};

}  // namespace

double variation_of_argument(PathFunction& f, double s0, double s1, const VarArgOptions& opts) {
    VarArgWorker w{f, opts};
    int grid = std::max(2, opts.initial_grid);
    double total = 0;
    Complex prev = w.probe(s0);
    double sprev = s0;
    for (int i = 1; i <= grid; ++i) {
        double s = s0 + (s1 - s0) * double(i) / grid;
        Complex cur = w.probe(s);
        total += w.recurse(sprev, s, prev, cur, 0);
        sprev = s;
        prev = cur;
    }
    return total;
}

// ------------------------------------------------------------------- order

OrderEstimate order_at_singularity(const MatrixEval& A, Complex t0, double eps0,
                                   const Eigen::RowVectorXcd& covector, int column,
                                   const OrderOptions& opts) {
    int n = std::max(2, opts.n_radii);
    // composite path: circle at eps0, step inward, circle at eps0/2, ...
    PathPlan path;
    std::vector<std::pair<double, double>> circle_ranges;
    Complex dir = std::polar(1.0, opts.start_angle);
    std::vector<PathSegment> segs;
    std::vector<std::size_t> circle_seg_start, circle_seg_end;
    double eps = eps0;
    for (int i = 0; i < n; ++i) {
        circle_seg_start.push_back(segs.size());
        PathPlan c = PathPlan::circle(t0, eps, opts.start_angle, 1);
        for (const auto& s : c.segments()) segs.push_back(s);
        circle_seg_end.push_back(segs.size());
        if (i + 1 < n) {
            double eps_next = eps / 2;
            segs.push_back(PathSegment::line(t0 + eps * dir, t0 + eps_next * dir));
            eps = eps_next;
        }
    }
    path = PathPlan(std::move(segs));

    Eigen::Index l = 0;
    {
        Eigen::MatrixXcd probe;
        A(path.start(), probe);
        l = probe.rows();
    }
    Eigen::MatrixXcd X0 = opts.X0.size() > 0 ? opts.X0 : Eigen::MatrixXcd::Identity(l, l);
    auto tracker = std::make_shared<SolutionTracker>(A, path, std::move(X0), opts.integ);
    SolutionPathFunction f(tracker, covector, column);

    OrderEstimate est;
    eps = eps0;
    std::vector<double> mus, us;
    for (int i = 0; i < n; ++i) {
        double a0 = path.segment_range(circle_seg_start[i]).first;
        double b1 = path.segment_range(circle_seg_end[i] - 1).second;
        double va = variation_of_argument(f, a0, b1);
        est.variations.push_back(va / (2 * M_PI));
        mus.push_back(va / (2 * M_PI));
        us.push_back(1.0 / std::log(1.0 / eps));
        eps /= 2;
    }

    // A log-polynomial prefactor p(log t) adds, on the i-th circle (which sees
    // the branch of log shifted by the 2 pi i of the earlier turns), a
    // variation of [atan(2 pi (i+1) u) - atan(2 pi i u)] per log factor, with
    // higher corrections odd in u = 1/log(1/eps).  Fit in exactly that basis.
    int terms = std::min(4, n - 2);
    terms = std::max(terms, 1);
    Eigen::MatrixXd V(n, terms);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        double u = us[i];
        V(i, 0) = 1.0;
        if (terms > 1)
            V(i, 1) = (std::atan(2 * M_PI * (i + 1) * u) - std::atan(2 * M_PI * i * u)) /
                      (2 * M_PI);
        if (terms > 2) V(i, 2) = u * u * u;
        if (terms > 3) V(i, 3) = u * u * u * u * u;
        rhs(i) = mus[i];
    }
    Eigen::VectorXd sol = V.colPivHouseholderQr().solve(rhs);
    Eigen::VectorXd resid = V * sol - rhs;
    est.mu = sol(0);
    double rms = std::sqrt(resid.squaredNorm() / n);
    est.half_width = 10 * rms + 1e-12;
    est.converged = est.half_width < 0.05;
    return est;
}

// -------------------------------------------------------------- regularity

RegularityReport regularity_probe(const MatrixEval& A, Complex t0, const RegularityOptions& opts) {
    RegularityReport rep;
    Eigen::Index l = 0;
    {
        Eigen::MatrixXcd probe;
        A(t0 + opts.r0, probe);
        l = probe.rows();
    }
    MatrixEval Adual = [&A](Complex t, Eigen::MatrixXcd& out) {
        Eigen::MatrixXcd a;
        A(t, a);
        out = -a.transpose();
    };

    bool irregular = false;
    for (int ray = 0; ray < opts.rays; ++ray) {
        double theta = 2 * M_PI * ray / opts.rays + 0.05;
        Complex dir = std::polar(1.0, theta);
        Eigen::MatrixXcd X = Eigen::MatrixXcd::Identity(l, l);
        Eigen::MatrixXcd Y = X;  // transposed inverse system
        double logx = 0, logy = 0;
        std::vector<double> lr, lx, ly;
        double r = opts.r0;
        for (int j = 0; j + 1 < opts.n_radii; ++j) {
            double rn = r / 2;
            PathPlan seg = PathPlan::line(t0 + r * dir, t0 + rn * dir);
            X = integrate_path(A, seg, X, 0, 1, opts.integ).X;
            Y = integrate_path(Adual, seg, Y, 0, 1, opts.integ).X;
            double nx = X.norm(), ny = Y.norm();
            logx += std::log(nx);
            logy += std::log(ny);
            X /= nx;
            Y /= ny;
            r = rn;
            lr.push_back(std::log(r));
            lx.push_back(logx);
            ly.push_back(logy);
        }
        auto slope = [](const std::vector<double>& x, const std::vector<double>& y, std::size_t a,
                        std::size_t b) {
            double mx = 0, my = 0;
            for (std::size_t i = a; i < b; ++i) {
                mx += x[i];
                my += y[i];
            }
            std::size_t n = b - a;
            mx /= n;
            my /= n;
            double num = 0, den = 0;
            for (std::size_t i = a; i < b; ++i) {
                num += (x[i] - mx) * (y[i] - my);
                den += (x[i] - mx) * (x[i] - mx);
            }
            return den > 0 ? num / den : 0.0;
        };
        std::size_t half = lr.size() / 2;
        double sx = slope(lr, lx, 0, lr.size());
        double sy = slope(lr, ly, 0, lr.size());
        double sx1 = slope(lr, lx, 0, half), sx2 = slope(lr, lx, half, lr.size());
        double sy1 = slope(lr, ly, 0, half), sy2 = slope(lr, ly, half, lr.size());
        // polynomial growth means a stable slope; an exponential pole makes
        // the late slope run away
        if (std::abs(sx2) > 2 * std::abs(sx1) + 4 || std::abs(sy2) > 2 * std::abs(sy1) + 4)
            irregular = true;
        double k = std::max({0.0, -sx, -sy, sx, sy});
        rep.ray_exponents.push_back(k);
        rep.max_exponent = std::max(rep.max_exponent, k);
    }
    rep.irregular_flag = irregular;
    return rep;
}

}  // namespace qsys
