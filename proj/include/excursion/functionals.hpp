#ifndef EXCURSION_FUNCTIONALS_HPP
#define EXCURSION_FUNCTIONALS_HPP

#include <map>
#include <span>

#include "excursion/occupation.hpp"
#include "excursion/path_grid.hpp"

namespace excursion {

enum class Orientation { forward, reversed };

// Every scalar functional computed for one path realization. The inverse
// integrals are keyed by the weight exponent n: forward means weight (1-t)^n,
// reversed means weight t^n.
struct FunctionalSample {
    double area = 0.0;     // integral of r over [0,1]
    double l2_half = 0.0;  // (1/2) * integral of l^2 over levels
    double x_stat = 0.0;   // area - l2_half
    double w_one = 0.0;    // W at t = 1
    std::map<int, double> inv_forward;      // n >= 0
    std::map<int, double> inv_reversed;     // n >= 1
    std::map<int, double> min_n;            // n >= 1
    std::map<int, double> prop_stat;        // n >= 1
    std::map<int, double> w_area_weighted;  // integral of (1-t)^(n-1) W_t dt
};

// Exact integral of (1-t)^(n-1) times the piecewise-linear path, cell by
// cell in closed form. n >= 1 or std::invalid_argument.
double weighted_area(const PathGrid& path, int n);

// Integral of w(t)/r_t with w(t) = (1-t)^n (forward) or t^n (reversed),
// n >= 0. Interior cells integrate the polynomial weight against the linear
// interpolant in closed form; the two boundary cells use a square-root local
// model r_t ~ r_dt * sqrt(t/dt) matched at the first/last interior point,
// which keeps the endpoint singularity integrable. Requires strictly
// positive interior values (std::domain_error otherwise).
double inverse_integral(const PathGrid& path, int n, Orientation orientation);

// Integral over levels of (1-H(x))^(n-1) * l_x^2, with the weight evaluated
// at the bin midpoint of the piecewise-linear H. n = 1 gives the plain
// squared-local-time integral. n >= 1 or std::invalid_argument.
double l2_integral(const OccupationProfile& profile, int n);

// The n-fold min functional evaluated through the occupation profile as the
// exact integral of (1-H(x))^n over levels, per-bin closed form on the
// linear H. n >= 1 or std::invalid_argument.
double min_functional(const OccupationProfile& profile, int n);

// Direct Riemann evaluation (midpoint rule on a coarsened sub-grid) of the
// n-fold integral of min{r_{t_1},...,r_{t_n}}. Test oracle only; n <= 3.
double min_bruteforce(const PathGrid& path, int n);

// X = area - (1/2) * integral of l^2; N(0, 1/12) in law for excursions.
// The profile must come from the same path realization.
double gs_statistic(const PathGrid& path, const OccupationProfile& profile);

// 2 * min_functional(n) - ((n+1)/2) * l2_integral(n); N(0, 1/(2n+1)) in law.
double prop_statistic(const PathGrid& path, const OccupationProfile& profile, int n);

// The Brownian motion recovered from the excursion through its SDE
// representation, on the same grid:
//   W_t = r_t - int_0^t ds/r_s + int_0^t r_s/(1-s) ds
// with the first integral using the inverse_integral cell scheme restricted
// to [0, t] and the second using linear cells plus a square-root model on
// the final cell. W_0 = 0; W_1 is standard normal in law.
PathGrid brownian_from_excursion(const PathGrid& path);

// Closed-form per-cell integral of (1-t)^(n-1) times the piecewise-linear
// interpolant of a W grid; n = 1 reduces to the trapezoid rule.
double weighted_bm_integral(const PathGrid& w_path, int n);

// Relative residual of the discretized integral identity
//   int (1-t)^(n-1) W dt = ((n+1)/n) weighted_area(n) - (1/n) inverse_integral(n, fwd)
// with the left side integrated exactly against the within-cell antiderivatives
// of the W construction. Deterministic per path; small residuals certify that
// all the cell schemes are mutually consistent. n = 1 is the half-scaled
// form of the Brownian-area identity.
double identity_residual(const PathGrid& path, int n);

// One-pass evaluation of every functional needed for the given set of
// orders (always including 1..3 for the simulate table). When residuals is
// non-null it receives identity_residual(path, n) for each order.
FunctionalSample compute_functionals(const PathGrid& path, const OccupationProfile& profile,
                                     std::span<const int> orders,
                                     std::map<int, double>* residuals = nullptr);

} // namespace excursion

#endif // EXCURSION_FUNCTIONALS_HPP
