#include "qsys/transforms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <random>

namespace qsys {

const char* transform_kind_name(TransformKind k) {
    switch (k) {
        case TransformKind::Shift: return "shift";
        case TransformKind::Fold: return "fold";
        case TransformKind::Symmetrize: return "symmetrize";
        case TransformKind::DirectSum: return "direct_sum";
        case TransformKind::Tensor: return "tensor";
        case TransformKind::Envelope: return "envelope";
        case TransformKind::Realize: return "realize";
    }
    return "?";
}

SystemProfile profile_of(const QSystem& q) { return {q.s(), q.m(), q.d(), q.l()}; }

namespace {

void fill_record(TransformRecord* rec, TransformKind kind,
                 std::initializer_list<const QSystem*> inputs, const QSystem& out) {
    if (!rec) return;
    rec->kind = kind;
    rec->inputs.clear();
    for (const QSystem* q : inputs) rec->inputs.push_back(profile_of(*q));
    rec->output = profile_of(out);
}

}  // namespace

QSystem shift(const QSystem& q, TransformRecord* rec) {
    const MatrixOneForm& f = q.form();
    std::size_t m = f.base_dim(), l = f.dims();
    MatrixOneForm out(l, m + 1);
    // components: dt and d mu both carry Omega_t(t + mu); the d lambda_i
    // components carry Omega_{lambda_i}(t + mu)
    for (std::size_t comp = 0; comp < m; ++comp) {
        for (std::size_t r = 0; r < l; ++r)
            for (std::size_t c = 0; c < l; ++c) {
                const RationalFunction& e = f.component(comp).at(r, c);
                if (e.is_zero()) continue;
                RationalFunction shifted = e.extend_vars(m + 1).substitute_sum(0, m);
                if (comp == 0) out.component(m).at(r, c) = shifted;
                out.component(comp).at(r, c) = std::move(shifted);
            }
    }
    QSystem result = QSystem::from_form(std::move(out), q.d(), q.flags());
    fill_record(rec, TransformKind::Shift, {&q}, result);
    if (rec) rec->shift_parameter = "mu_" + std::to_string(m + 1);
    return result;
}

QSystem fold(const QSystem& q, TransformRecord* rec) {
    const MatrixOneForm& f = q.form();
    std::size_t m = f.base_dim(), l = f.dims();
    MatrixOneForm out(2 * l, m);
    LatticePolynomial w = LatticePolynomial::variable(m, 0);
    LatticePolynomial two = LatticePolynomial::constant(m, 2);

    for (std::size_t comp = 0; comp < m; ++comp) {
        for (std::size_t r = 0; r < l; ++r)
            for (std::size_t c = 0; c < l; ++c) {
                const RationalFunction& e = f.component(comp).at(r, c);
                if (e.is_zero()) continue;
                // rationalize: P/Q = P Q(-t) / (Q Q(-t)), the denominator even
                LatticePolynomial qneg = e.den().negate_var(0);
                auto [den_even, den_odd] = (e.den() * qneg).split_parity(0);
                if (!den_odd.is_zero())
                    throw NumericError("fold: rationalized denominator failed the parity split");
                LatticePolynomial n = e.num() * qneg;
                auto [n0, n1] = n.split_parity(0);

                RatMatrix& om = out.component(comp);
                if (comp == 0) {
                    // R/(2t) = t N0/(2wD) + N1/(2D)
                    LatticePolynomial twoD = two * den_even;
                    LatticePolynomial twoWD = (two * w) * den_even;
                    if (!n1.is_zero()) {
                        om.at(r, c) = om.at(r, c) + RationalFunction(n1, twoD);
                        om.at(r + l, c + l) = om.at(r + l, c + l) + RationalFunction(n1, twoD);
                    }
                    if (!n0.is_zero()) {
                        om.at(r, c + l) = om.at(r, c + l) + RationalFunction(n0, twoWD);
                        om.at(r + l, c) = om.at(r + l, c) + RationalFunction(n0, twoD);
                    }
                } else {
                    if (!n0.is_zero()) {
                        om.at(r, c) = RationalFunction(n0, den_even);
                        om.at(r + l, c + l) = RationalFunction(n0, den_even);
                    }
                    if (!n1.is_zero()) {
                        om.at(r, c + l) = RationalFunction(n1, den_even);
                        om.at(r + l, c) = RationalFunction(w * n1, den_even);
                    }
                }
            }
    }
    // d(t X) picks up the extra dt/t = dw/(2w) on the second copy
    {
        LatticePolynomial twoW = two * w;
        RationalFunction half_w_inv(LatticePolynomial::one(m), twoW);
        for (std::size_t i = 0; i < l; ++i)
            out.component(0).at(l + i, l + i) =
                out.component(0).at(l + i, l + i) + half_w_inv;
    }
    QSystem result = QSystem::from_form(std::move(out), q.d() + 2, q.flags());
    fill_record(rec, TransformKind::Fold, {&q}, result);
    return result;
}

QSystem symmetrize(const QSystem& q, TransformRecord* rec) {
    const MatrixOneForm& f = q.form();
    std::size_t m = f.base_dim(), l = f.dims();
    MatrixOneForm out(2 * l, m);
    for (std::size_t comp = 0; comp < m; ++comp)
        for (std::size_t r = 0; r < l; ++r)
            for (std::size_t c = 0; c < l; ++c) {
                const RationalFunction& e = f.component(comp).at(r, c);
                if (e.is_zero()) continue;
                out.component(comp).at(r, c) = e;
                // integer coefficients are fixed by conjugation, so the
                // reflected block repeats the entries verbatim
                out.component(comp).at(r + l, c + l) = e;
            }
    QSystem result = QSystem::from_form(std::move(out), q.d(), q.flags());
    fill_record(rec, TransformKind::Symmetrize, {&q}, result);
    return result;
}

QSystem direct_sum(const QSystem& a, const QSystem& b, TransformRecord* rec) {
    if (a.m() != b.m()) throw ValidationError("direct_sum: base dimensions differ");
    std::size_t m = a.m(), la = a.l(), lb = b.l();
    MatrixOneForm out(la + lb, m);
    for (std::size_t comp = 0; comp < m; ++comp) {
        for (std::size_t r = 0; r < la; ++r)
            for (std::size_t c = 0; c < la; ++c) {
                const RationalFunction& e = a.form().component(comp).at(r, c);
                if (!e.is_zero()) out.component(comp).at(r, c) = e;
            }
        for (std::size_t r = 0; r < lb; ++r)
            for (std::size_t c = 0; c < lb; ++c) {
                const RationalFunction& e = b.form().component(comp).at(r, c);
                if (!e.is_zero()) out.component(comp).at(la + r, la + c) = e;
            }
    }
    QSystem result = QSystem::from_form(std::move(out), std::max(a.d(), b.d()), a.flags());
    fill_record(rec, TransformKind::DirectSum, {&a, &b}, result);
    return result;
}

QSystem tensor(const QSystem& a, const QSystem& b, TransformRecord* rec) {
    if (a.m() != b.m()) throw ValidationError("tensor: base dimensions differ");
    std::size_t m = a.m(), la = a.l(), lb = b.l();
    MatrixOneForm out(la * lb, m);
    for (std::size_t comp = 0; comp < m; ++comp) {
        RatMatrix& om = out.component(comp);
        // (Omega_a x I): entry ((i,j),(k,j)) = a[i,k]
        for (std::size_t i = 0; i < la; ++i)
            for (std::size_t k = 0; k < la; ++k) {
                const RationalFunction& e = a.form().component(comp).at(i, k);
                if (e.is_zero()) continue;
                for (std::size_t j = 0; j < lb; ++j)
                    om.at(i * lb + j, k * lb + j) = om.at(i * lb + j, k * lb + j) + e;
            }
        // (I x Omega_b): entry ((i,j),(i,l)) = b[j,l]
        for (std::size_t j = 0; j < lb; ++j)
            for (std::size_t ll = 0; ll < lb; ++ll) {
                const RationalFunction& e = b.form().component(comp).at(j, ll);
                if (e.is_zero()) continue;
                for (std::size_t i = 0; i < la; ++i)
                    om.at(i * lb + j, i * lb + ll) = om.at(i * lb + j, i * lb + ll) + e;
            }
    }
    QSystem result = QSystem::from_form(std::move(out), std::max(a.d(), b.d()), a.flags());
    fill_record(rec, TransformKind::Tensor, {&a, &b}, result);
    return result;
}

QSystem envelope_system(uint32_t k, TransformRecord* rec) {
    MatrixOneForm out(k + 1, 1);
    for (uint32_t i = 0; i < k; ++i)
        out.component(0).at(i + 1, i) = RationalFunction::constant(1, 1);
    QSystem result = QSystem::from_form(std::move(out));
    fill_record(rec, TransformKind::Envelope, {}, result);
    return result;
}

// ------------------------------------------------- composite fold pipeline

namespace {

// non-real points ordered by the pipeline's tie-break rule
std::optional<Complex> pick_nonreal(const SingularFiber& fib, double real_tol) {
    std::optional<Complex> best;
    for (const Complex& p : fib.points) {
        if (std::abs(p.imag()) <= real_tol * std::max(1.0, std::abs(p))) continue;
        if (!best || std::abs(p.imag()) > std::abs(best->imag()) + 1e-15 ||
            (std::abs(std::abs(p.imag()) - std::abs(best->imag())) <= 1e-15 &&
             p.real() < best->real()))
            best = p;
    }
    return best;
}

}  // namespace

QSystem realize_real_singularities(const QSystem& q, std::vector<LineValue>& lambda,
                                   RealizeReport* report, double real_tol) {
    QSystem cur = q;
    SingularFiber fib = singular_fiber(cur, lambda);
    std::size_t nu = fib.count_with_infinity();
    if (report) {
        report->rounds = 0;
        report->shifts.clear();
        report->round_fibers.clear();
        report->initial_count = nu;
        report->record.kind = TransformKind::Realize;
        report->record.inputs = {profile_of(q)};
    }
    int rounds = 0;
    for (;;) {
        auto s = pick_nonreal(fib, real_tol);
        if (!s) break;
        if (rounds >= int(nu))
            throw NumericError(
                "realize_real_singularities: a fiber point is neither real nor shiftable "
                "(internal inconsistency)");
        double mu = -s->real();
        cur = shift(cur);
        lambda.push_back(LineValue(Complex(mu, 0.0)));
        cur = fold(cur);
        fib = singular_fiber(cur, lambda);
        ++rounds;
        if (report) {
            report->shifts.push_back(mu);
            report->round_fibers.push_back(fib);
        }
    }
    if (report) {
        report->rounds = rounds;
        report->final_fiber = fib;
        report->record.output = profile_of(cur);
    }
    return cur;
}

EmbedReport fold_envelope_embed_check(const QSystem& original,
                                      const std::vector<LineValue>& lambda,
                                      const QSystem& realized,
                                      const std::vector<LineValue>& realized_lambda,
                                      const std::vector<double>& shifts, uint32_t k, int members,
                                      uint64_t seed, const IntegrationOptions& integ) {
    EmbedReport rep;
    rep.rounds = int(shifts.size());
    rep.source_degree = uint32_t((uint64_t(1) << shifts.size()) * (k + 1) - 1);
    rep.members = members;

    RestrictedSystem rs_src = restrict_line(original.form(), lambda);
    RestrictedSystem rs_dst = restrict_line(realized.form(), realized_lambda);
    SingularFiber fib_src = singular_fiber(original, lambda);
    SingularFiber fib_dst = singular_fiber(realized, realized_lambda);

    // the composed shift-square change of coordinates
    auto phi = [&shifts](Complex t) {
        for (double mu : shifts) {
            t += mu;
            t *= t;
        }
        return t;
    };

    // sample circle in the source plane, grown until both the circle and its
    // image keep clearance from the respective fibers
    double rho = 1.0;
    for (const Complex& p : fib_src.points) rho = std::max(rho, 1.3 * std::abs(p));
    const int grid_n = std::max<int>(96, 3 * int((k + 1) * realized.l() * realized.l()));
    PathPlan src_path, dst_path;
    for (int attempt = 0; attempt < 24; ++attempt) {
        std::vector<Complex> src_pts, dst_pts;
        for (int i = 0; i <= grid_n; ++i) {
            Complex t = rho * std::polar(1.0, 2 * M_PI * i / grid_n + 0.37);
            src_pts.push_back(t);
            dst_pts.push_back(phi(t));
        }
        src_path = PathPlan::polyline(src_pts);
        dst_path = PathPlan::polyline(dst_pts);
        double c1 = src_path.min_clearance(fib_src.points);
        std::vector<Complex> dst_sing = fib_dst.points;
        dst_sing.push_back(0.0);
        double c2 = dst_path.min_clearance(dst_sing);
        if (c1 > 0.05 * rho && c2 > 1e-3) break;
        rho *= 1.37;
    }

    std::size_t l_src = original.l(), l_dst = realized.l();
    SolutionTracker src_tracker(matrix_eval_of(rs_src), src_path,
                                Eigen::MatrixXcd::Identity(l_src, l_src), integ);
    SolutionTracker dst_tracker(matrix_eval_of(rs_dst), dst_path,
                                Eigen::MatrixXcd::Identity(l_dst, l_dst), integ);

    // basis: w^p * (entries of the realized fundamental solution)
    std::size_t n_basis = (k + 1) * l_dst * l_dst;
    Eigen::MatrixXcd V(grid_n + 1, n_basis);
    std::vector<Eigen::MatrixXcd> src_vals(grid_n + 1);
    for (int i = 0; i <= grid_n; ++i) {
        double s = double(i) / grid_n;
        const Eigen::MatrixXcd& Xd = dst_tracker.at(s);
        Complex wv = dst_path.point(s);
        Complex wp = 1.0;
        std::size_t colidx = 0;
        for (uint32_t p = 0; p <= k; ++p) {
            for (std::size_t a = 0; a < l_dst; ++a)
                for (std::size_t b = 0; b < l_dst; ++b) V(i, colidx++) = wp * Xd(a, b);
            wp *= wv;
        }
        src_vals[i] = src_tracker.at(s);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(V);
    {
        Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
        double dmax = diag.maxCoeff();
        double dmin = 1e300;
        for (Eigen::Index i = 0; i < std::min<Eigen::Index>(qr.rank(), diag.size()); ++i)
            dmin = std::min(dmin, diag(i));
        rep.condition_estimate = dmin > 0 ? dmax / dmin : 1e300;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_entry(0, l_src * l_src - 1);
    std::uniform_int_distribution<uint32_t> pick_deg(0, rep.source_degree);
    for (int mem = 0; mem < members; ++mem) {
        // sparse random member of P^{source_degree} tensor the source span
        struct Term {
            uint32_t p;
            std::size_t a, b;
            Complex c;
        };
        std::vector<Term> terms;
        int nt = 1 + int(rng() % 3);
        for (int t = 0; t < nt; ++t) {
            std::size_t e = pick_entry(rng);
            terms.push_back({pick_deg(rng), e / l_src, e % l_src, Complex(coef(rng), coef(rng))});
        }
        Eigen::VectorXcd target(grid_n + 1);
        for (int i = 0; i <= grid_n; ++i) {
            Complex tv = src_path.point(double(i) / grid_n);
            Complex acc = 0;
            for (const Term& tm : terms)
                acc += tm.c * std::pow(tv, double(tm.p)) * src_vals[i](tm.a, tm.b);
            target(i) = acc;
        }
        Eigen::VectorXcd sol = qr.solve(target);
        double resid = (V * sol - target).norm();
        double scale = std::max(target.norm(), 1e-30);
        rep.max_residual = std::max(rep.max_residual, resid / scale);
    }
    return rep;
}

}  // namespace qsys
