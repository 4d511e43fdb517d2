#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "maxbandit/rng.hpp"
#include "maxbandit/tail_bound.hpp"

namespace maxbandit {

class ArmModel;
using ArmPtr = std::shared_ptr<const ArmModel>;

/// One piece of a piecewise CDF, covering [lo, hi).
///
/// Jumps live at segment boundaries: the CDF at `lo` is the segment's own value,
/// so it is right-continuous by construction.
struct CdfSegment {
    enum class Kind {
        constant,      // y0
        linear,        // y0 at lo, rising linearly to y1 as mu -> hi
        affine_cdf,    // scale * mean_i(F_i(mu)) + offset over `bases`
        tail_reflect,  // 1 - scale * G_*(anchor - mu)
    };

    Kind kind = Kind::constant;
    double lo = 0.0;
    double hi = 0.0;
    double y0 = 0.0;
    double y1 = 0.0;
    double scale = 1.0;
    double offset = 0.0;
    std::vector<ArmPtr> bases;
    double anchor = 0.0;
    std::shared_ptr<const TailBound> tail;

    static CdfSegment constant(double lo, double hi, double value);
    static CdfSegment linear(double lo, double hi, double y0, double y1);
    static CdfSegment affine_cdf(double lo, double hi, double scale, double offset, std::vector<ArmPtr> bases);
    static CdfSegment tail_reflect(double lo, double hi, double anchor, double scale, TailBound tail);

    double value(double mu) const;
    /// Limit from the left at mu, for mu in (lo, hi].
    double value_left(double mu) const;
};

/// Reward distribution of one arm.
///
/// Families: uniform(a, b); power-tail with tail A * eps^beta on [0, width] and
/// the remaining mass as an atom at mu_star - width; and piecewise CDFs (used for
/// point masses, mixtures and the adversarial hypotheses). The CDF is 1 from
/// mu_star on and below 1 everywhere before it.
class ArmModel {
public:
    enum class Family { uniform, power_tail, piecewise_cdf };

    struct Uniform {
        double a;
        double b;
    };
    struct PowerTail {
        double mu_star;
        double A;
        double beta;
        double width;
    };
    struct Piecewise {
        std::vector<CdfSegment> segments;
    };

    static ArmModel uniform(double a, double b);
    static ArmModel power_tail(double mu_star, double A, double beta, double width);
    static ArmModel piecewise(std::vector<CdfSegment> segments);
    static ArmModel point_mass(double value);
    /// Equal-weight mixture: the unified arm.
    static ArmModel mixture(const std::vector<ArmPtr>& arms);

    Family family() const;
    const Uniform& as_uniform() const { return std::get<Uniform>(params_); }
    const PowerTail& as_power_tail() const { return std::get<PowerTail>(params_); }
    const Piecewise& as_piecewise() const { return std::get<Piecewise>(params_); }

    double mu_star() const { return mu_star_; }
    double support_min() const { return support_min_; }

    double cdf(double mu) const;
    /// P(X < mu).
    double cdf_left(double mu) const;
    /// G_k(eps) = 1 - F(mu_star - eps); an atom exactly at mu_star - eps is not counted.
    double tail(double eps) const;
    /// inf{mu : F(mu) >= u}, for u in (0, 1).
    double quantile(double u) const;
    /// sup{mu <= mu_star : F(mu) <= p}.
    double upper_quantile(double p) const;

    double sample(RandomStream& rng) const { return quantile(rng.uniform()); }

private:
    explicit ArmModel(std::variant<Uniform, PowerTail, Piecewise> params);

    std::variant<Uniform, PowerTail, Piecewise> params_;
    double mu_star_ = 0.0;
    double support_min_ = 0.0;
};

inline ArmPtr make_arm(ArmModel arm) { return std::make_shared<const ArmModel>(std::move(arm)); }

}  // namespace maxbandit
