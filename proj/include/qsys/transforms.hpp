#pragma once

#include "qsys/integrate.hpp"
#include "qsys/qsystem.hpp"

namespace qsys {

enum class TransformKind { Shift, Fold, Symmetrize, DirectSum, Tensor, Envelope, Realize };

const char* transform_kind_name(TransformKind k);

struct SystemProfile {
    BigInt s;
    std::size_t m = 0;
    uint32_t d = 0;
    std::size_t l = 0;
};
SystemProfile profile_of(const QSystem& q);

struct TransformRecord {
    TransformKind kind = TransformKind::Shift;
    std::vector<SystemProfile> inputs;
    SystemProfile output;
    std::string shift_parameter;  // name of the fresh base variable, Shift only
};

// Transformation: shift.  New base variable mu appended after lambda_m; the
// solution of the output is X(t + mu, lambda').  m+1 / d / l.
QSystem shift(const QSystem& q, TransformRecord* rec = nullptr);

// Transformation: fold to the variable w = t^2.  Entries are split as
// R = R0(t^2) + t R1(t^2) after rationalizing the denominator by its t -> -t
// conjugate; the residual odd factor couples the two copies through the
// relation between X and tX.  m / d+2 / 2l.
QSystem fold(const QSystem& q, TransformRecord* rec = nullptr);

// Transformation: symmetrization.  Second block is the entrywise
// coefficient-conjugated copy, the identity over the integers; blocks are
// materialized separately because downstream constructions index them.
// m / d / 2l.
QSystem symmetrize(const QSystem& q, TransformRecord* rec = nullptr);

// Transformation: direct sum over a common base.  s1+s2 / max d / l1+l2.
QSystem direct_sum(const QSystem& a, const QSystem& b, TransformRecord* rec = nullptr);

// Transformation: tensor product over a common base, represented as
// (Omega1 x I) + (I x Omega2) on the l1 l2-dimensional space.  max d / l1 l2.
QSystem tensor(const QSystem& a, const QSystem& b, TransformRecord* rec = nullptr);

// The polynomial carrier: d X = N X dt with N the subdiagonal shift on k+1
// dimensions; the fundamental solution exp(N t) has entries t^j / j!, so the
// entry span is exactly the polynomials of degree <= k.
QSystem envelope_system(uint32_t k, TransformRecord* rec = nullptr);

// ------------------------------------------------- composite fold pipeline

struct RealizeReport {
    int rounds = 0;
    std::vector<double> shifts;              // mu_j = -Re(s) per round
    std::vector<SingularFiber> round_fibers; // fiber after each round
    SingularFiber final_fiber;
    std::size_t initial_count = 0;           // nu, infinity included
    TransformRecord record;
};

// Shift+fold rounds until the fiber over the extended parameter point is
// real.  Non-real points are consumed largest |Im| first, ties to the
// smallest real part.  Returns the final system; lambda grows by one shift
// value per round (appended to the copy passed in).
QSystem realize_real_singularities(const QSystem& q, std::vector<LineValue>& lambda,
                                   RealizeReport* report = nullptr,
                                   double real_tol = 1e-9);

struct EmbedReport {
    double max_residual = 0;       // worst relative fit residual over members
    double condition_estimate = 0; // from the basis QR
    int members = 0;
    int rounds = 0;
    uint32_t source_degree = 0;    // 2^rounds (k+1) - 1
};

// Numeric check that degree-(2^r (k+1) - 1) envelope members of the original
// system embed into the degree-k envelope of the realized system: both sides
// are continued along matched circles (the source in t, the image under the
// composed shift-square map), and each sampled member is fitted in the image
// span by least squares.
EmbedReport fold_envelope_embed_check(const QSystem& original,
                                      const std::vector<LineValue>& lambda,
                                      const QSystem& realized,
                                      const std::vector<LineValue>& realized_lambda,
                                      const std::vector<double>& shifts, uint32_t k,
                                      int members = 20, uint64_t seed = 1,
                                      const IntegrationOptions& integ = {});

}  // namespace qsys
