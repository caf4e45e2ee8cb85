#include "mkdv/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>

namespace mkdv {

PotentialSample::PotentialSample(std::vector<double> x, std::vector<double> q, double left_bv,
                                 double right_bv)
    : x_(std::move(x)), q_(std::move(q)), left_(left_bv), right_(right_bv) {
    if (x_.size() < 3 || x_.size() != q_.size())
        throw ConfigError("potential needs at least 3 samples and matching x/q lengths");
    if (std::abs(std::abs(left_) - 1.0) > 0 || std::abs(std::abs(right_) - 1.0) > 0)
        throw ConfigError("boundary values must be +1 or -1");
    dx_ = (x_.back() - x_.front()) / static_cast<double>(x_.size() - 1);
    if (!(dx_ > 0.0)) throw ConfigError("potential grid must be strictly increasing");
    for (std::size_t i = 0; i < x_.size(); ++i) {
        const double expect = x_.front() + dx_ * static_cast<double>(i);
        if (std::abs(x_[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)) + 1e-6 * dx_)
            throw ConfigError("potential grid must be uniform");
        if (!std::isfinite(q_[i])) throw ConfigError("potential contains non-finite values");
    }
    const std::size_t edge = std::max<std::size_t>(1, x_.size() / 20);
    for (std::size_t i = 0; i < edge; ++i) {
        margin_ = std::max(margin_, std::abs(q_[i] - left_));
        margin_ = std::max(margin_, std::abs(q_[x_.size() - 1 - i] - right_));
    }
    auto spline = std::make_shared<boost::math::interpolators::cardinal_quintic_b_spline<double>>(
        q_.data(), q_.size(), x_.front(), dx_, std::pair<double, double>{0.0, 0.0},
        std::pair<double, double>{0.0, 0.0});
    spline_ = std::make_shared<const std::function<double(double)>>(
        [spline](double t) { return (*spline)(t); });
}

PotentialSample PotentialSample::from_function(const std::function<double(double)>& f,
                                               double xmin, double xmax, int n, double left_bv,
                                               double right_bv, bool keep_exact) {
    if (n < 3) throw ConfigError("potential needs at least 3 samples");
    std::vector<double> x(n), q(n);
    const double h = (xmax - xmin) / (n - 1);
    for (int i = 0; i < n; ++i) {
        x[i] = xmin + h * i;
        q[i] = f(x[i]);
    }
    PotentialSample p(std::move(x), std::move(q), left_bv, right_bv);
    if (keep_exact) p.exact_ = f;
    return p;
}

double PotentialSample::operator()(double x) const {
    if (x <= x_.front()) return exact_ ? exact_(x) : left_;
    if (x >= x_.back()) return exact_ ? exact_(x) : right_;
    return exact_ ? exact_(x) : (*spline_)(x);
}

void PotentialSample::require_decayed(double threshold) const {
    if (margin_ > threshold) {
        std::ostringstream os;
        os << "potential has not reached its boundary values: decay margin " << margin_
           << " exceeds " << threshold;
        throw DomainError(os.str());
    }
}

double kink_profile(double x, double center, double width) { return std::tanh((x - center) / width); }

double sech2(double x) {
    const double c = std::cosh(x);
    return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

}  // namespace mkdv
