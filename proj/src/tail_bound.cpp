#include "maxbandit/tail_bound.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxbandit/errors.hpp"

namespace maxbandit {

namespace {

// Rounding slack accepted at the ends of [0, eps0] before a domain error.
constexpr double kEdgeSlack = 1e-12;

double interpolate(double x, double x0, double x1, double y0, double y1) {
    if (x1 == x0) return y1;
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

TailBound TailBound::power_law(double A, double beta, double eps0) {
    if (!(A > 0.0) || !std::isfinite(A)) throw InputError("power-law tail bound needs A > 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("power-law tail bound needs beta > 0");
    if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw InputError("tail bound needs eps0 > 0");
    TailBound tb;
    tb.kind_ = Kind::power_law;
    tb.A_ = A;
    tb.beta_ = beta;
    tb.eps0_ = eps0;
    tb.at_eps0_ = A * std::pow(eps0, beta);
    if (tb.at_eps0_ > 1.0) throw InputError("tail bound exceeds 1 at eps0 (A * eps0^beta > 1)");
    tb.concave_ = beta <= 1.0;
    return tb;
}

TailBound TailBound::tabulated(std::vector<TailKnot> knots, double eps0) {
    if (knots.size() < 2) throw InputError("tabulated tail bound needs at least two knots");
    if (knots.front().eps != 0.0 || knots.front().prob != 0.0)
        throw InputError("tabulated tail bound must start at knot (0, 0)");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i].eps > knots[i - 1].eps) || !(knots[i].prob > knots[i - 1].prob))
            throw InputError("tabulated tail bound knots must be strictly increasing in both coordinates");
    }
    const double last = knots.back().eps;
    if (eps0 == 0.0) eps0 = last;
    if (!(eps0 > 0.0) || eps0 > last) throw InputError("tabulated tail bound eps0 must lie in (0, last knot]");

    TailBound tb;
    tb.kind_ = Kind::tabulated;
    tb.knots_ = std::move(knots);
    tb.eps0_ = eps0;
    tb.at_eps0_ = 0.0;  // set below through evaluate()
    tb.at_eps0_ = tb.evaluate(eps0);
    if (tb.at_eps0_ > 1.0) throw InputError("tail bound exceeds 1 at eps0");

    // Concave iff the slopes of the knots inside [0, eps0] never increase.
    tb.concave_ = true;
    double prev_slope = INFINITY;
    for (std::size_t i = 1; i < tb.knots_.size() && tb.knots_[i - 1].eps < eps0; ++i) {
        const auto& a = tb.knots_[i - 1];
        const auto& b = tb.knots_[i];
        const double slope = (b.prob - a.prob) / (b.eps - a.eps);
        if (slope > prev_slope * (1.0 + 1e-12)) {
            tb.concave_ = false;
            break;
        }
        prev_slope = slope;
    }
    return tb;
}

double TailBound::evaluate(double eps) const {
    if (eps < -kEdgeSlack * eps0_ || eps > eps0_ * (1.0 + kEdgeSlack) || std::isnan(eps))
        throw DomainError("tail bound evaluated outside [0, eps0]: eps = " + std::to_string(eps));
    eps = std::clamp(eps, 0.0, eps0_);
    if (kind_ == Kind::power_law) return eps == 0.0 ? 0.0 : A_ * std::pow(eps, beta_);

    auto it = std::upper_bound(knots_.begin(), knots_.end(), eps,
                               [](double e, const TailKnot& k) { return e < k.eps; });
    if (it == knots_.end()) return knots_.back().prob;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return interpolate(eps, lo.eps, hi.eps, lo.prob, hi.prob);
}

double TailBound::inverse(double y) const {
    if (y < -kEdgeSlack * at_eps0_ || y > at_eps0_ * (1.0 + kEdgeSlack) || std::isnan(y))
        throw DomainError("tail bound inverse outside [0, G_*(eps0)]: y = " + std::to_string(y));
    if (y >= at_eps0_) return eps0_;
    if (y <= 0.0) return 0.0;
    if (kind_ == Kind::power_law) {
        const double x = y / A_;
        return beta_ == 1.0 ? x : std::pow(x, 1.0 / beta_);
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), y,
                               [](double v, const TailKnot& k) { return v < k.prob; });
    if (it == knots_.end()) return knots_.back().eps;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return interpolate(y, lo.prob, hi.prob, lo.eps, hi.eps);
}

TailBound TailBound::scaled(double factor) const {
    if (!(factor > 0.0)) throw DomainError("tail bound scale factor must be positive");
    if (kind_ == Kind::power_law) return power_law(A_ * factor, beta_, eps0_);
    std::vector<TailKnot> knots = knots_;
    for (auto& k : knots) k.prob *= factor;
    return tabulated(std::move(knots), eps0_);
}

}  // namespace maxbandit
