#include "qsys/qsystem.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "qsys/roots.hpp"

namespace qsys {

QSystem QSystem::from_form(MatrixOneForm form, std::optional<uint32_t> declared_degree,
                           QSystemFlags flags) {
    QSystem q;
    q.s_ = form.size();
    q.m_ = form.base_dim();
    q.l_ = form.dims();
    uint32_t measured = form.time_degree();
    q.d_ = declared_degree ? std::max(*declared_degree, measured) : measured;
    q.form_ = std::move(form);
    q.flags_ = flags;
    return q;
}

IntegrabilityReport check_integrability(const MatrixOneForm& form) {
    IntegrabilityReport rep;
    if (form.base_dim() < 2) return rep;  // both sides vanish in one variable
    MatrixTwoForm lhs = exterior_derivative(form);
    MatrixTwoForm rhs = wedge(form, form);
    for (std::size_t i = 0; i < form.base_dim(); ++i)
        for (std::size_t j = i + 1; j < form.base_dim(); ++j) {
            const RatMatrix& a = lhs.component(i, j);
            const RatMatrix& b = rhs.component(i, j);
            for (std::size_t r = 0; r < form.dims(); ++r)
                for (std::size_t c = 0; c < form.dims(); ++c) {
                    RationalFunction diff = a.at(r, c) - b.at(r, c);
                    if (!diff.is_zero()) {
                        rep.ok = false;
                        rep.comp_i = i;
                        rep.comp_j = j;
                        rep.row = r;
                        rep.col = c;
                        rep.witness = std::move(diff);
                        return rep;
                    }
                }
        }
    return rep;
}

IntegrabilityReport check_integrability(const QSystem& q) {
    return check_integrability(q.form());
}

void cluster_points(const std::vector<Complex>& pts, double tol, std::vector<Complex>& reps,
                    std::vector<int>& counts) {
    reps.clear();
    counts.clear();
    for (const Complex& p : pts) {
        bool merged = false;
        for (std::size_t i = 0; i < reps.size(); ++i) {
            double scale = std::max(1.0, std::abs(reps[i]));
            if (std::abs(p - reps[i]) <= tol * scale) {
                // running mean keeps the representative centered
                reps[i] = (reps[i] * double(counts[i]) + p) / double(counts[i] + 1);
                counts[i] += 1;
                merged = true;
                break;
            }
        }
        if (!merged) {
            reps.push_back(p);
            counts.push_back(1);
        }
    }
}

SingularFiber singular_fiber(const MatrixOneForm& form, const std::vector<LineValue>& lambda,
                             double cluster_tol) {
    RestrictedSystem sys = restrict_line(form, lambda);
    SingularFiber fiber;
    std::vector<Complex> pole_candidates;
    std::vector<int> pole_mult;

    for (const RestrictedEntry& e : sys.entries) {
        if (e.num.is_zero()) continue;
        std::size_t p = e.num.degree(), q = e.den.degree();
        // chart swap t -> 1/u picks up a u^{-2} from dt; the entry is singular
        // at infinity iff the u-valuation (deg den - deg num - 2) is negative
        if (int64_t(q) < int64_t(p) + 2) fiber.includes_infinity = true;
        if (q == 0) continue;
        std::vector<Complex> roots = poly_roots(e.den);
        std::vector<Complex> reps;
        std::vector<int> counts;
        cluster_points(roots, cluster_tol, reps, counts);
        for (std::size_t i = 0; i < reps.size(); ++i) {
            pole_candidates.push_back(reps[i]);
            pole_mult.push_back(counts[i]);
        }
    }
    // merge across entries keeping the largest per-entry multiplicity
    for (std::size_t i = 0; i < pole_candidates.size(); ++i) {
        bool merged = false;
        for (std::size_t k = 0; k < fiber.points.size(); ++k) {
            double scale = std::max(1.0, std::abs(fiber.points[k]));
            if (std::abs(pole_candidates[i] - fiber.points[k]) <= cluster_tol * scale) {
                fiber.multiplicities[k] = std::max(fiber.multiplicities[k], pole_mult[i]);
                merged = true;
                break;
            }
        }
        if (!merged) {
            fiber.points.push_back(pole_candidates[i]);
            fiber.multiplicities.push_back(pole_mult[i]);
        }
    }
    // deterministic order: by real part, then imaginary
    std::vector<std::size_t> order(fiber.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (fiber.points[a].real() != fiber.points[b].real())
            return fiber.points[a].real() < fiber.points[b].real();
        return fiber.points[a].imag() < fiber.points[b].imag();
    });
    SingularFiber sorted;
    sorted.includes_infinity = fiber.includes_infinity;
    for (std::size_t i : order) {
        sorted.points.push_back(fiber.points[i]);
        sorted.multiplicities.push_back(fiber.multiplicities[i]);
    }
    return sorted;
}

SingularFiber singular_fiber(const QSystem& q, const std::vector<LineValue>& lambda,
                             double cluster_tol) {
    return singular_fiber(q.form(), lambda, cluster_tol);
}

BigInt nu_upper_bound(const QSystem& q) {
    return BigInt(q.l()) * BigInt(q.l()) * BigInt(q.d());
}

}  // namespace qsys
