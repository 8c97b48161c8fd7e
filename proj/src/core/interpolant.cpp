#include "guideq/core/interpolant.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <cmath>
#include <string>

#include "guideq/errors.hpp"

namespace guideq::core {

namespace {

// Range checks are done before every call, so GSL's abort-on-error handler
// is never needed.
const bool kGslHandlerOff = [] {
    gsl_set_error_handler_off();
    return true;
}();

}  // namespace

struct Interpolant::Spline {
    gsl_spline* handle = nullptr;
    ~Spline() { gsl_spline_free(handle); }
};

Interpolant::Interpolant(UniformGrid grid, std::vector<double> values, Interpolation kind)
    : grid_(std::move(grid)), values_(std::move(values)), kind_(kind)
{
    (void)kGslHandlerOff;
    if (values_.size() != grid_.size()) {
        throw ValidationError("interpolant: value count does not match grid size");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw ValidationError("interpolant: non-finite sample");
        }
    }
    const gsl_interp_type* type = gsl_interp_linear;
    if (kind_ == Interpolation::CubicSpline && grid_.size() >= 3) {
        type = gsl_interp_cspline;
    }
    gsl_spline* spline = gsl_spline_alloc(type, grid_.size());
    const auto x = grid_.points();
    if (gsl_spline_init(spline, x.data(), values_.data(), grid_.size()) != GSL_SUCCESS) {
        gsl_spline_free(spline);
        throw NumericalError("interpolant: spline construction failed");
    }
    auto owner = std::make_shared<Spline>();
    owner->handle = spline;
    spline_ = std::move(owner);
}

void Interpolant::check_range(double x) const
{
    if (!spline_) {
        throw DomainError("interpolant is empty");
    }
    if (!(x >= grid_.front() && x <= grid_.back())) {
        throw DomainError("x = " + std::to_string(x) + " outside interpolation range [" +
                          std::to_string(grid_.front()) + ", " + std::to_string(grid_.back()) + "]");
    }
}

double Interpolant::value(double x) const
{
    check_range(x);
    return gsl_spline_eval(spline_->handle, x, nullptr);
}

double Interpolant::derivative(double x) const
{
    check_range(x);
    return gsl_spline_eval_deriv(spline_->handle, x, nullptr);
}

double Interpolant::second_derivative(double x) const
{
    check_range(x);
    return gsl_spline_eval_deriv2(spline_->handle, x, nullptr);
}

}  // namespace guideq::core
