#include "maxbandit/arm_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "maxbandit/errors.hpp"

namespace maxbandit {

namespace {

constexpr double kMonotoneTolerance = 1e-12;
constexpr int kProbesPerSegment = 33;
constexpr int kMaxBisections = 2000;

double mean_cdf(const std::vector<ArmPtr>& arms, double mu, bool left) {
    double sum = 0.0;
    for (const auto& arm : arms) sum += left ? arm->cdf_left(mu) : arm->cdf(mu);
    return sum / static_cast<double>(arms.size());
}

// Smallest representable midpoint split: returns false once [a, b] has no interior double.
bool midpoint(double a, double b, double& m) {
    m = a + 0.5 * (b - a);
    return m > a && m < b;
}

void validate_piecewise(const std::vector<CdfSegment>& segs) {
    if (segs.empty()) throw ConstructionError("piecewise CDF needs at least one segment");
    double prev = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i];
        if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !(s.lo < s.hi))
            throw ConstructionError("piecewise CDF segment " + std::to_string(i) + " must satisfy lo < hi");
        if (i > 0 && segs[i - 1].hi != s.lo)
            throw ConstructionError("piecewise CDF segments must be contiguous at segment " + std::to_string(i));
        if (s.kind == CdfSegment::Kind::affine_cdf && s.bases.empty())
            throw ConstructionError("affine_cdf segment needs at least one base distribution");
        if (s.kind == CdfSegment::Kind::tail_reflect && !s.tail)
            throw ConstructionError("tail_reflect segment needs a tail bound");

        for (int j = 0; j <= kProbesPerSegment; ++j) {
            const double mu = s.lo + (s.hi - s.lo) * j / (kProbesPerSegment + 1);
            const double v = s.value(mu);
            if (!(v >= prev - kMonotoneTolerance) || v > 1.0 + kMonotoneTolerance)
                throw ConstructionError("piecewise CDF is not a non-decreasing function into [0, 1] near mu = " +
                                        std::to_string(mu));
            prev = std::max(prev, v);
        }
        const double end = s.value_left(s.hi);
        if (!(end >= prev - kMonotoneTolerance) || end > 1.0 + kMonotoneTolerance)
            throw ConstructionError("piecewise CDF is not monotone at mu = " + std::to_string(s.hi));
        prev = std::max(prev, end);
    }
}

const CdfSegment* segment_at(const std::vector<CdfSegment>& segs, double mu) {
    // Last segment with lo <= mu.
    auto it = std::upper_bound(segs.begin(), segs.end(), mu, [](double m, const CdfSegment& s) { return m < s.lo; });
    if (it == segs.begin()) return nullptr;
    return &*(it - 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// CdfSegment

CdfSegment CdfSegment::constant(double lo, double hi, double value) {
    CdfSegment s;
    s.kind = Kind::constant;
    s.lo = lo;
    s.hi = hi;
    s.y0 = s.y1 = value;
    return s;
}

CdfSegment CdfSegment::linear(double lo, double hi, double y0, double y1) {
    CdfSegment s;
    s.kind = Kind::linear;
    s.lo = lo;
    s.hi = hi;
    s.y0 = y0;
    s.y1 = y1;
    return s;
}

CdfSegment CdfSegment::affine_cdf(double lo, double hi, double scale, double offset, std::vector<ArmPtr> bases) {
    CdfSegment s;
    s.kind = Kind::affine_cdf;
    s.lo = lo;
    s.hi = hi;
    s.scale = scale;
    s.offset = offset;
    s.bases = std::move(bases);
    return s;
}

CdfSegment CdfSegment::tail_reflect(double lo, double hi, double anchor, double scale, TailBound tail) {
    CdfSegment s;
    s.kind = Kind::tail_reflect;
    s.lo = lo;
    s.hi = hi;
    s.anchor = anchor;
    s.scale = scale;
    s.tail = std::make_shared<const TailBound>(std::move(tail));
    return s;
}

double CdfSegment::value(double mu) const {
    switch (kind) {
        case Kind::constant:
            return y0;
        case Kind::linear:
            return y0 + (y1 - y0) * (mu - lo) / (hi - lo);
        case Kind::affine_cdf:
            return scale * mean_cdf(bases, mu, false) + offset;
        case Kind::tail_reflect:
            return 1.0 - scale * tail->evaluate(std::clamp(anchor - mu, 0.0, tail->eps0()));
    }
    return 0.0;
}

double CdfSegment::value_left(double mu) const {
    if (kind == Kind::affine_cdf) return scale * mean_cdf(bases, mu, true) + offset;
    if (kind == Kind::linear && mu >= hi) return y1;
    return value(mu);
}

// ---------------------------------------------------------------------------
// ArmModel

ArmModel::ArmModel(std::variant<Uniform, PowerTail, Piecewise> params) : params_(std::move(params)) {
    if (const auto* u = std::get_if<Uniform>(&params_)) {
        mu_star_ = u->b;
        support_min_ = u->a;
    } else if (const auto* p = std::get_if<PowerTail>(&params_)) {
        mu_star_ = p->mu_star;
        support_min_ = p->mu_star - p->width;
    } else {
        const auto& segs = std::get<Piecewise>(params_).segments;
        validate_piecewise(segs);
        mu_star_ = segs.back().hi;
        support_min_ = segs.front().lo;
    }
}

ArmModel ArmModel::uniform(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) throw InputError("uniform arm needs finite a < b");
    return ArmModel(Uniform{a, b});
}

ArmModel ArmModel::power_tail(double mu_star, double A, double beta, double width) {
    if (!std::isfinite(mu_star)) throw InputError("power-tail arm needs a finite mu_star");
    if (!(A > 0.0) || !(beta > 0.0) || !(width > 0.0) || !std::isfinite(width))
        throw InputError("power-tail arm needs A > 0, beta > 0 and width > 0");
    if (A * std::pow(width, beta) > 1.0) throw InputError("power-tail arm needs A * width^beta <= 1");
    return ArmModel(PowerTail{mu_star, A, beta, width});
}

ArmModel ArmModel::piecewise(std::vector<CdfSegment> segments) { return ArmModel(Piecewise{std::move(segments)}); }

ArmModel ArmModel::point_mass(double value) {
    const double lo = value - std::max(1.0, std::abs(value));
    return piecewise({CdfSegment::constant(lo, value, 0.0)});
}

ArmModel ArmModel::mixture(const std::vector<ArmPtr>& arms) {
    if (arms.empty()) throw InputError("mixture needs at least one arm");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& arm : arms) {
        lo = std::min(lo, arm->support_min());
        hi = std::max(hi, arm->mu_star());
    }
    return piecewise({CdfSegment::affine_cdf(lo, hi, 1.0, 0.0, arms)});
}

ArmModel::Family ArmModel::family() const {
    switch (params_.index()) {
        case 0:
            return Family::uniform;
        case 1:
            return Family::power_tail;
        default:
            return Family::piecewise_cdf;
    }
}

double ArmModel::cdf(double mu) const {
    if (const auto* u = std::get_if<Uniform>(&params_)) return std::clamp((mu - u->a) / (u->b - u->a), 0.0, 1.0);
    if (const auto* p = std::get_if<PowerTail>(&params_)) {
        if (mu >= p->mu_star) return 1.0;
        if (mu < p->mu_star - p->width) return 0.0;
        return 1.0 - p->A * std::pow(p->mu_star - mu, p->beta);
    }
    const auto& segs = std::get<Piecewise>(params_).segments;
    if (mu >= mu_star_) return 1.0;
    const CdfSegment* s = segment_at(segs, mu);
    return s ? s->value(mu) : 0.0;
}

double ArmModel::cdf_left(double mu) const {
    if (std::holds_alternative<Uniform>(params_)) return cdf(mu);
    if (const auto* p = std::get_if<PowerTail>(&params_)) {
        if (mu > p->mu_star) return 1.0;
        if (mu <= p->mu_star - p->width) return 0.0;
        return 1.0 - p->A * std::pow(p->mu_star - mu, p->beta);
    }
    const auto& segs = std::get<Piecewise>(params_).segments;
    if (mu <= support_min_) return 0.0;
    if (mu > mu_star_) return 1.0;
    // Segment with lo < mu <= hi.
    auto it = std::lower_bound(segs.begin(), segs.end(), mu, [](const CdfSegment& s, double m) { return s.hi < m; });
    return it->value_left(mu);
}

double ArmModel::tail(double eps) const {
    if (eps < 0.0) throw DomainError("tail function needs eps >= 0");
    if (const auto* u = std::get_if<Uniform>(&params_)) return std::min(eps / (u->b - u->a), 1.0);
    if (const auto* p = std::get_if<PowerTail>(&params_)) {
        if (eps > p->width) return 1.0;
        return eps == 0.0 ? 0.0 : p->A * std::pow(eps, p->beta);
    }
    return 1.0 - cdf(mu_star_ - eps);
}

double ArmModel::quantile(double u) const {
    if (const auto* un = std::get_if<Uniform>(&params_)) return un->a + u * (un->b - un->a);
    if (const auto* p = std::get_if<PowerTail>(&params_)) {
        const double atom = 1.0 - p->A * std::pow(p->width, p->beta);
        if (u <= atom) return p->mu_star - p->width;
        return p->mu_star - std::pow((1.0 - u) / p->A, 1.0 / p->beta);
    }
    for (const auto& s : std::get<Piecewise>(params_).segments) {
        if (s.value(s.lo) >= u) return s.lo;
        if (s.value_left(s.hi) < u) continue;
        if (s.kind == CdfSegment::Kind::linear) {
            const double mu = s.lo + (u - s.y0) / (s.y1 - s.y0) * (s.hi - s.lo);
            return std::clamp(mu, s.lo, s.hi);
        }
        double a = s.lo;
        double b = s.hi;
        double m = 0.0;
        for (int it = 0; it < kMaxBisections && midpoint(a, b, m); ++it) {
            if (s.value(m) >= u)
                b = m;
            else
                a = m;
        }
        return b;
    }
    return mu_star_;
}

double ArmModel::upper_quantile(double p) const {
    if (p >= 1.0) return mu_star_;
    if (const auto* u = std::get_if<Uniform>(&params_)) return std::clamp(u->a + p * (u->b - u->a), u->a, u->b);
    if (const auto* pt = std::get_if<PowerTail>(&params_)) {
        const double atom = 1.0 - pt->A * std::pow(pt->width, pt->beta);
        if (p <= atom) return pt->mu_star - pt->width;
        return pt->mu_star - std::pow((1.0 - p) / pt->A, 1.0 / pt->beta);
    }
    // Bisection keeping F(a) <= p < F(b); the right end approximates the sup from above.
    double a = support_min_;
    double b = mu_star_;
    if (cdf(a) > p) return a;
    double m = 0.0;
    for (int it = 0; it < kMaxBisections && midpoint(a, b, m); ++it) {
        if (cdf(m) <= p)
            a = m;
        else
            b = m;
    }
    return b;
}

}  // namespace maxbandit
