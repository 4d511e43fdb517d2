#pragma once

#include <vector>

namespace maxbandit {

/// One (eps, probability) knot of a tabulated tail bound.
struct TailKnot {
    double eps;
    double prob;
};

/// The known lower bound G_* on every arm's tail function, defined on [0, eps0].
///
/// G_* is strictly increasing with G_*(0) = 0 and G_*(eps0) <= 1. Two shapes are
/// supported: the power law A * eps^beta, and a piecewise-linear table whose
/// first knot is (0, 0). Both have closed-form inverses.
class TailBound {
public:
    enum class Kind { power_law, tabulated };

    static TailBound power_law(double A, double beta, double eps0);
    /// `eps0` defaults to the last knot; when given it must not exceed it.
    static TailBound tabulated(std::vector<TailKnot> knots, double eps0 = 0.0);

    /// G_*(eps). Throws DomainError outside [0, eps0].
    double evaluate(double eps) const;
    /// G_*^{-1}(y). Throws DomainError outside [0, G_*(eps0)].
    double inverse(double y) const;

    double eps0() const { return eps0_; }
    double at_eps0() const { return at_eps0_; }
    bool is_concave() const { return concave_; }
    Kind kind() const { return kind_; }

    double A() const { return A_; }
    double beta() const { return beta_; }
    const std::vector<TailKnot>& knots() const { return knots_; }

    /// The bound factor * G_*, same domain. Used for the unified-arm hypothesis
    /// where the averaged CDF only satisfies G_* / |K|.
    TailBound scaled(double factor) const;

private:
    TailBound() = default;

    Kind kind_ = Kind::power_law;
    double A_ = 0.0;
    double beta_ = 0.0;
    std::vector<TailKnot> knots_;
    double eps0_ = 0.0;
    double at_eps0_ = 0.0;
    bool concave_ = false;
};

}  // namespace maxbandit
