#include "qsys/paths.hpp"

#include <algorithm>
#include <cmath>

namespace qsys {

PathSegment PathSegment::line(Complex from, Complex to, std::string tag) {
    PathSegment s;
    s.kind = Kind::Line;
    s.a = from;
    s.b = to;
    s.tag = std::move(tag);
    return s;
}

PathSegment PathSegment::arc(Complex center, double radius, double theta0, double theta1,
                             std::string tag) {
    PathSegment s;
    s.kind = Kind::Arc;
    s.center = center;
    s.radius = radius;
    s.theta0 = theta0;
    s.theta1 = theta1;
    s.tag = std::move(tag);
    return s;
}

Complex PathSegment::point(double u) const {
    if (kind == Kind::Line) return a + (b - a) * u;
    double th = theta0 + (theta1 - theta0) * u;
    return center + radius * Complex(std::cos(th), std::sin(th));
}

Complex PathSegment::velocity(double u) const {
    if (kind == Kind::Line) return b - a;
    double th = theta0 + (theta1 - theta0) * u;
    return Complex(0, 1) * (theta1 - theta0) * radius * Complex(std::cos(th), std::sin(th));
}

double PathSegment::length() const {
    if (kind == Kind::Line) return std::abs(b - a);
    return std::abs(theta1 - theta0) * radius;
}

PathPlan::PathPlan(std::vector<PathSegment> segments) : segments_(std::move(segments)) {
    rebuild();
}

void PathPlan::append(PathSegment seg) {
    segments_.push_back(std::move(seg));
    rebuild();
}

void PathPlan::rebuild() {
    cum_.assign(1, 0.0);
    total_length_ = 0;
    for (const auto& s : segments_) total_length_ += s.length();
    double acc = 0;
    for (const auto& s : segments_) {
        acc += s.length();
        cum_.push_back(total_length_ > 0 ? acc / total_length_
                                         : double(cum_.size()) / segments_.size());
    }
    cum_.back() = 1.0;
}

Complex PathPlan::start() const { return segments_.front().point(0.0); }
Complex PathPlan::end() const { return segments_.back().point(1.0); }

bool PathPlan::is_closed(double tol) const {
    if (segments_.empty()) return false;
    double scale = std::max(1.0, total_length_);
    return std::abs(start() - end()) <= tol * scale;
}

std::pair<double, double> PathPlan::segment_range(std::size_t i) const {
    return {cum_[i], cum_[i + 1]};
}

Complex PathPlan::point(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    std::size_t i = std::min<std::size_t>(segments_.size() - 1,
                                          std::max<std::ptrdiff_t>(0, it - cum_.begin() - 1));
    double lo = cum_[i], hi = cum_[i + 1];
    double u = hi > lo ? (s - lo) / (hi - lo) : 0.0;
    return segments_[i].point(u);
}

Complex PathPlan::velocity(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    std::size_t i = std::min<std::size_t>(segments_.size() - 1,
                                          std::max<std::ptrdiff_t>(0, it - cum_.begin() - 1));
    double lo = cum_[i], hi = cum_[i + 1];
    double du_ds = hi > lo ? 1.0 / (hi - lo) : 0.0;
    double u = hi > lo ? (s - lo) / (hi - lo) : 0.0;
    return segments_[i].velocity(u) * du_ds;
}

double PathPlan::min_clearance(const std::vector<Complex>& points, int samples_per_segment) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& seg : segments_)
        for (int k = 0; k <= samples_per_segment; ++k) {
            Complex z = seg.point(double(k) / samples_per_segment);
            for (const Complex& p : points) best = std::min(best, std::abs(z - p));
        }
    return best;
}

PathPlan PathPlan::line(Complex a, Complex b) { return PathPlan({PathSegment::line(a, b)}); }

PathPlan PathPlan::circle(Complex center, double radius, double start_angle, int turns) {
    // quarter arcs keep each segment's parameterization well conditioned
    std::vector<PathSegment> segs;
    int quarters = 4 * std::abs(turns);
    double dir = turns >= 0 ? 1.0 : -1.0;
    for (int q = 0; q < quarters; ++q) {
        double t0 = start_angle + dir * q * M_PI / 2;
        double t1 = start_angle + dir * (q + 1) * M_PI / 2;
        segs.push_back(PathSegment::arc(center, radius, t0, t1));
    }
    return PathPlan(std::move(segs));
}

PathPlan PathPlan::polyline(const std::vector<Complex>& pts) {
    std::vector<PathSegment> segs;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        segs.push_back(PathSegment::line(pts[i], pts[i + 1]));
    return PathPlan(std::move(segs));
}

}  // namespace qsys
