#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mkdv/common.hpp"

namespace mkdv {

/// Real field sampled on a uniform grid, with constant limits at both ends.
class PotentialSample {
public:
    PotentialSample() = default;
    PotentialSample(std::vector<double> x, std::vector<double> q, double left_bv = -1.0,
                    double right_bv = 1.0);

    static PotentialSample from_function(const std::function<double(double)>& f, double xmin,
                                         double xmax, int n, double left_bv = -1.0,
                                         double right_bv = 1.0, bool keep_exact = true);

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& q() const { return q_; }
    double left_bv() const { return left_; }
    double right_bv() const { return right_; }
    double decay_margin() const { return margin_; }
    double dx() const { return dx_; }
    double xmin() const { return x_.front(); }
    double xmax() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }
    bool has_exact() const { return static_cast<bool>(exact_); }

    /// Value at an arbitrary point: the analytic form when kept, else a quintic spline.
    double operator()(double x) const;

    void require_decayed(double threshold) const;

private:
    std::vector<double> x_;
    std::vector<double> q_;
    double left_ = -1.0;
    double right_ = 1.0;
    double margin_ = 0.0;
    double dx_ = 0.0;
    std::function<double(double)> exact_;
    std::shared_ptr<const std::function<double(double)>> spline_;
};

double kink_profile(double x, double center = 0.0, double width = 1.0);
double sech2(double x);

}  // namespace mkdv
