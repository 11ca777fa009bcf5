#pragma once

#include <string>
#include <vector>

#include "qsys/common.hpp"

namespace qsys {

// One piece of a path in the complex plane.  Arcs are parameterized by angle
// from theta0 to theta1 (theta1 < theta0 traverses clockwise).
struct PathSegment {
    enum class Kind { Line, Arc };
    Kind kind = Kind::Line;
    Complex a, b;       // line endpoints
    Complex center;     // arc data
    double radius = 0, theta0 = 0, theta1 = 0;
    std::string tag;    // ledger label, e.g. "delta_1" or "gamma_hat"

    static PathSegment line(Complex from, Complex to, std::string tag = {});
    static PathSegment arc(Complex center, double radius, double theta0, double theta1,
                           std::string tag = {});

    Complex point(double u) const;     // u in [0, 1]
    Complex velocity(double u) const;  // dz/du
    double length() const;
};

// Piecewise path with a global arclength-proportional parameter s in [0, 1].
class PathPlan {
public:
    PathPlan() = default;
    explicit PathPlan(std::vector<PathSegment> segments);

    void append(PathSegment seg);
    const std::vector<PathSegment>& segments() const { return segments_; }
    std::size_t size() const { return segments_.size(); }
    bool empty() const { return segments_.empty(); }

    double total_length() const { return total_length_; }
    Complex start() const;
    Complex end() const;
    bool is_closed(double tol = 1e-12) const;

    Complex point(double s) const;
    Complex velocity(double s) const;  // dz/ds

    // parameter range [s0, s1] covered by segment i
    std::pair<double, double> segment_range(std::size_t i) const;

    // smallest sampled distance from the path to any of the given points
    double min_clearance(const std::vector<Complex>& points, int samples_per_segment = 64) const;

    static PathPlan line(Complex a, Complex b);
    static PathPlan circle(Complex center, double radius, double start_angle = 0.0,
                           int turns = 1);
    // polyline through the listed waypoints
    static PathPlan polyline(const std::vector<Complex>& pts);

private:
    void rebuild();
    std::vector<PathSegment> segments_;
    std::vector<double> cum_;  // cumulative normalized arclength, size()+1 entries
    double total_length_ = 0;
};

}  // namespace qsys
