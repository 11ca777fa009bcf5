#pragma once

#include <optional>

#include "qsys/algebra.hpp"

namespace qsys {

struct QSystemFlags {
    bool integrability_checked = false;
    bool regularity_probed = false;      // advisory, numeric
    bool quasiunipotence_probed = false;  // advisory, numeric
};

// A matrix one-form together with its certified complexity profile
// (s, m, d, l).  s and the structural quantities are recomputed at
// construction; d is a certified upper bound that transformations may declare
// above the measured degree.  The measured degree is taken in the time
// coordinate: fiberwise pole counting and the transformation degree table are
// both stated in that measure.
class QSystem {
public:
    QSystem() = default;

    static QSystem from_form(MatrixOneForm form,
                             std::optional<uint32_t> declared_degree = std::nullopt,
                             QSystemFlags flags = {});

    const MatrixOneForm& form() const { return form_; }
    const BigInt& s() const { return s_; }
    std::size_t m() const { return m_; }
    uint32_t d() const { return d_; }
    std::size_t l() const { return l_; }
    const QSystemFlags& flags() const { return flags_; }
    void set_flags(const QSystemFlags& f) { flags_ = f; }

private:
    MatrixOneForm form_;
    BigInt s_ = 0;
    std::size_t m_ = 0;
    uint32_t d_ = 0;
    std::size_t l_ = 0;
    QSystemFlags flags_;
};

struct IntegrabilityReport {
    bool ok = true;
    // first nonzero component of d(Omega) - Omega ^ Omega, when !ok
    std::size_t comp_i = 0, comp_j = 0, row = 0, col = 0;
    RationalFunction witness;
};

// Exact test of the flatness identity d(Omega) = Omega ^ Omega.
IntegrabilityReport check_integrability(const MatrixOneForm& form);
IntegrabilityReport check_integrability(const QSystem& q);

struct SingularFiber {
    std::vector<Complex> points;       // clustered roots of the restricted denominators
    std::vector<int> multiplicities;   // parallel to points
    bool includes_infinity = false;

    std::size_t count_with_infinity() const {
        return points.size() + (includes_infinity ? 1 : 0);
    }
};

// Intersection of the line {lambda' fixed} with the singular locus, computed
// fiberwise: roots of every entry denominator of the restricted time
// component, deduplicated within a relative clustering tolerance, plus an
// exact chart-swap decision at t = infinity.
SingularFiber singular_fiber(const QSystem& q, const std::vector<LineValue>& lambda,
                             double cluster_tol = 1e-8);
SingularFiber singular_fiber(const MatrixOneForm& form, const std::vector<LineValue>& lambda,
                             double cluster_tol = 1e-8);

// l^2 d: the counting bound on the number of singular points of a fiber.
BigInt nu_upper_bound(const QSystem& q);

}  // namespace qsys
