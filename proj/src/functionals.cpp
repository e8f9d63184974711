#include "excursion/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace excursion {

namespace {

double upow(double x, int n) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= x;
    return p;
}

// Row of binomial coefficients C(n, 0..n).
std::vector<double> binomial_row(int n) {
    std::vector<double> row(static_cast<std::size_t>(n) + 1);
    row[0] = 1.0;
    for (int j = 1; j <= n; ++j) {
        row[static_cast<std::size_t>(j)] =
            row[static_cast<std::size_t>(j) - 1] * static_cast<double>(n - j + 1) / static_cast<double>(j);
    }
    return row;
}

// int_{-1}^{1} theta^j dtheta
double pure_moment(int j) {
    return (j % 2 == 0) ? 2.0 / static_cast<double>(j + 1) : 0.0;
}

// K_j = int_{-1}^{1} theta^j / (1 + eps*theta) dtheta for j = 0..jmax, where
// 1 + eps*theta parameterizes a linear cell with endpoint values r_left,
// r_right and midpoint m: eps = (r_right - r_left) / (2m). For moderate eps a
// geometric series in eps is exact to machine precision; for steep cells the
// log form plus the one-step recurrence K_j = (M_{j-1} - K_{j-1})/eps is
// stable since |1/eps| <= 2.
void inverse_theta_moments(double eps, double r_left, double r_right, int jmax, double* K) {
    if (std::fabs(eps) <= 0.5) {
        for (int j = 0; j <= jmax; ++j) K[j] = 0.0;
        double p = 1.0; // (-eps)^i
        for (int i = 0; i <= 200; ++i) {
            for (int j = i % 2; j <= jmax; j += 2) {
                K[j] += 2.0 * p / static_cast<double>(i + j + 1);
            }
            p *= -eps;
            if (i >= jmax && std::fabs(p) < 1e-19) break;
        }
    } else {
        K[0] = std::log(r_right / r_left) / eps;
        for (int j = 1; j <= jmax; ++j) {
            K[j] = (pure_moment(j - 1) - K[j - 1]) / eps;
        }
    }
}

// sum_j C(n,j) (-dt)^j / (j + 1/2): the polynomial part of the square-root
// boundary-cell integrals.
double sqrt_cell_poly(const std::vector<double>& binom, double dt, int n) {
    double s = 0.0;
    double p = 1.0;
    for (int j = 0; j <= n; ++j) {
        s += binom[static_cast<std::size_t>(j)] * p / (static_cast<double>(j) + 0.5);
        p *= -dt;
    }
    return s;
}

// Exact integral of (1-t)^(n-1) times the linear segment over one cell,
// written in the centered variable t = t_mid + (dt/2) theta.
double weighted_area_cell(const std::vector<double>& binom_nm1, double u_mid, double m,
                          double half_delta, double half_dt, int n) {
    double s = 0.0;
    double p = 1.0; // (-dt/2)^j
    for (int j = 0; j <= n - 1; ++j) {
        const double mj = pure_moment(j);
        const double mj1 = pure_moment(j + 1);
        s += binom_nm1[static_cast<std::size_t>(j)] * upow(u_mid, n - 1 - j) * p *
             (m * mj + half_delta * mj1);
        p *= -half_dt;
    }
    return half_dt * s;
}

// Log terms of the r/(1-s) cell integrals depend only on the grid, so they
// are shared across paths of equal resolution.
//   L[k] = log(u_k / u_{k+1}),   P[k] = u_k L[k]/dt - 1,
// for cells k = 0..N-2 (the final cell uses the square-root model instead).
// P is evaluated through (-log1p(-x) - x)/x with x = 1/(N-k) to dodge the
// cancellation at small x.
struct GridTables {
    std::vector<double> L;
    std::vector<double> P;
};

const GridTables& grid_tables(std::size_t n_steps) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<GridTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n_steps];
    if (!slot) {
        auto tables = std::make_unique<GridTables>();
        tables->L.resize(n_steps > 0 ? n_steps - 1 : 0);
        tables->P.resize(tables->L.size());
        for (std::size_t k = 0; k + 1 < n_steps; ++k) {
            const double x = 1.0 / static_cast<double>(n_steps - k);
            tables->L[k] = -std::log1p(-x);
            if (x <= 0.05) {
                double term = x;
                double sum = 0.0;
                for (int i = 2; i <= 40; ++i) {
                    sum += term / static_cast<double>(i);
                    term *= x;
                    if (term < 1e-20) break;
                }
                tables->P[k] = sum;
            } else {
                tables->P[k] = (tables->L[k] - x) / x;
            }
        }
        slot = std::move(tables);
    }
    return *slot;
}

void validate_order(int n, int low, const char* what) {
    if (n < low) throw std::invalid_argument(std::string(what) + ": order out of range");
}

void validate_excursion_like(const PathGrid& path, const char* what) {
    if (path.n_steps < 2 || path.values.size() != path.n_steps + 1) {
        throw std::invalid_argument(std::string(what) + ": malformed path");
    }
    for (std::size_t k = 1; k < path.n_steps; ++k) {
        if (!(path.values[k] > 0.0)) {
            throw std::domain_error(std::string(what) +
                                    ": interior path values must be strictly positive");
        }
    }
}

void validate_profile_pairing(const PathGrid& path, const OccupationProfile& profile,
                              const char* what) {
    if (profile.path_max != path_max(path)) {
        throw std::invalid_argument(std::string(what) + ": profile was not built from this path");
    }
}

// Everything that comes out of one pass over the cells of a path: the
// inverse-weight integrals, the weighted areas, the reconstructed W grid and
// the per-order residuals of the discrete Fubini identity.
struct PathAnalysis {
    std::map<int, double> inv_forward;
    std::map<int, double> inv_reversed;
    std::map<int, double> weighted_areas;
    std::map<int, double> residual;
    PathGrid w_path;
};

PathAnalysis analyze_path(const PathGrid& path, std::span<const int> orders) {
    validate_excursion_like(path, "analyze_path");
    std::vector<int> ns(orders.begin(), orders.end());
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.empty() || ns.front() < 1) {
        throw std::invalid_argument("analyze_path: orders must be >= 1");
    }
    const int jmax = ns.back();
    const std::size_t count = ns.size();

    const std::size_t n_steps = path.n_steps;
    const double dt = path.dt();
    const double half_dt = 0.5 * dt;
    const GridTables& tables = grid_tables(n_steps);

    std::vector<std::vector<double>> binom(count), binom_m1(count);
    for (std::size_t i = 0; i < count; ++i) {
        binom[i] = binomial_row(ns[i]);
        binom_m1[i] = binomial_row(ns[i] - 1);
    }

    std::vector<double> ii_fwd(count, 0.0), ii_rev(count, 0.0), wa(count, 0.0), lhs(count, 0.0);
    double ii_fwd0 = 0.0;
    std::vector<double> K(static_cast<std::size_t>(jmax) + 1, 0.0);
    std::vector<double> ii_fwd_cell(count), wabar_cell(count), wa_cell(count);

    PathAnalysis out;
    out.w_path.n_steps = n_steps;
    out.w_path.values.resize(n_steps + 1);

    double prefix_a = 0.0; // int_0^{t_k} ds/rho
    double prefix_b = 0.0; // int_0^{t_k} rho/(1-s) ds

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double r_l = path.values[k];
        const double r_r = path.values[k + 1];
        out.w_path.values[k] = r_l - prefix_a + prefix_b;

        const double u_l = static_cast<double>(n_steps - k) * dt;
        const double u_r = static_cast<double>(n_steps - k - 1) * dt;
        const double t_l = static_cast<double>(k) * dt;
        const double t_r = static_cast<double>(k + 1) * dt;
        const double u_mid = 0.5 * (u_l + u_r);
        const double t_mid = 0.5 * (t_l + t_r);

        double g = 0.0, c = 0.0;
        if (k == 0) {
            g = 2.0 * dt / r_r;
            c = r_l * tables.L[0] + (r_r - r_l) * tables.P[0];
            for (std::size_t i = 0; i < count; ++i) {
                const int n = ns[i];
                ii_fwd_cell[i] = (dt / r_r) * sqrt_cell_poly(binom[i], dt, n);
                ii_rev[i] += upow(dt, n + 1) / (r_r * (static_cast<double>(n) + 0.5));
                wa_cell[i] = weighted_area_cell(binom_m1[i], u_mid, 0.5 * (r_l + r_r),
                                                0.5 * (r_r - r_l), half_dt, n);
                wabar_cell[i] = wa_cell[i];
            }
        } else if (k == n_steps - 1) {
            g = 2.0 * dt / r_l;
            c = 2.0 * r_l;
            for (std::size_t i = 0; i < count; ++i) {
                const int n = ns[i];
                ii_fwd_cell[i] = upow(dt, n + 1) / (r_l * (static_cast<double>(n) + 0.5));
                ii_rev[i] += (dt / r_l) * sqrt_cell_poly(binom[i], dt, n);
                wa_cell[i] = weighted_area_cell(binom_m1[i], u_mid, 0.5 * (r_l + r_r),
                                                0.5 * (r_r - r_l), half_dt, n);
                wabar_cell[i] = r_l * upow(dt, n) / (static_cast<double>(n) + 0.5);
            }
        } else {
            const double m = 0.5 * (r_l + r_r);
            const double delta = r_r - r_l;
            const double eps = delta / (2.0 * m);
            inverse_theta_moments(eps, r_l, r_r, jmax, K.data());
            const double front = dt / (2.0 * m);
            g = front * K[0];
            c = r_l * tables.L[k] + delta * tables.P[k];
            for (std::size_t i = 0; i < count; ++i) {
                const int n = ns[i];
                double sf = 0.0, sr = 0.0;
                double pf = 1.0, pr = 1.0; // (-dt/2)^j and (dt/2)^j
                for (int j = 0; j <= n; ++j) {
                    const double cj = binom[i][static_cast<std::size_t>(j)];
                    sf += cj * upow(u_mid, n - j) * pf * K[static_cast<std::size_t>(j)];
                    sr += cj * upow(t_mid, n - j) * pr * K[static_cast<std::size_t>(j)];
                    pf *= -half_dt;
                    pr *= half_dt;
                }
                ii_fwd_cell[i] = front * sf;
                ii_rev[i] += front * sr;
                wa_cell[i] = weighted_area_cell(binom_m1[i], u_mid, m, 0.5 * delta, half_dt, n);
                wabar_cell[i] = wa_cell[i];
            }
        }

        const double d_ab = prefix_b - prefix_a;
        for (std::size_t i = 0; i < count; ++i) {
            const int n = ns[i];
            const double inv_n = 1.0 / static_cast<double>(n);
            const double un_l = upow(u_l, n);
            const double un_r = upow(u_r, n);
            ii_fwd[i] += ii_fwd_cell[i];
            wa[i] += wa_cell[i];
            lhs[i] += wa_cell[i] + d_ab * (un_l - un_r) * inv_n -
                      (ii_fwd_cell[i] - un_r * g) * inv_n + (wabar_cell[i] - un_r * c) * inv_n;
        }
        ii_fwd0 += g; // the n = 0 weight is identically 1, so its cell integral is g itself
        prefix_a += g;
        prefix_b += c;
    }
    out.w_path.values[n_steps] = path.values[n_steps] - prefix_a + prefix_b;

    out.inv_forward[0] = ii_fwd0;
    for (std::size_t i = 0; i < count; ++i) {
        const int n = ns[i];
        out.inv_forward[n] = ii_fwd[i];
        out.inv_reversed[n] = ii_rev[i];
        out.weighted_areas[n] = wa[i];
        const double term_wa = (static_cast<double>(n) + 1.0) / static_cast<double>(n) * wa[i];
        const double term_ii = ii_fwd[i] / static_cast<double>(n);
        const double rhs = term_wa - term_ii;
        const double scale = std::max({std::fabs(lhs[i]), std::fabs(term_wa), std::fabs(term_ii)});
        out.residual[n] = std::fabs(lhs[i] - rhs) / std::max(scale, 1e-300);
    }
    return out;
}

double polyweight_linear_integral(const PathGrid& grid, int n) {
    const std::size_t n_steps = grid.n_steps;
    const double dt = grid.dt();
    const double half_dt = 0.5 * dt;
    const std::vector<double> binom_nm1 = binomial_row(n - 1);
    double sum = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double u_l = static_cast<double>(n_steps - k) * dt;
        const double u_r = static_cast<double>(n_steps - k - 1) * dt;
        const double u_mid = 0.5 * (u_l + u_r);
        const double m = 0.5 * (grid.values[k] + grid.values[k + 1]);
        const double half_delta = 0.5 * (grid.values[k + 1] - grid.values[k]);
        sum += weighted_area_cell(binom_nm1, u_mid, m, half_delta, half_dt, n);
    }
    return sum;
}

} // namespace

double weighted_area(const PathGrid& path, int n) {
    validate_order(n, 1, "weighted_area");
    if (path.n_steps < 1 || path.values.size() != path.n_steps + 1) {
        throw std::invalid_argument("weighted_area: malformed path");
    }
    return polyweight_linear_integral(path, n);
}

double inverse_integral(const PathGrid& path, int n, Orientation orientation) {
    validate_order(n, 0, "inverse_integral");
    validate_excursion_like(path, "inverse_integral");
    if (n == 0) {
        // Both weights are identically 1; share the forward machinery.
        const int one[] = {1};
        PathAnalysis pa = analyze_path(path, one);
        return pa.inv_forward.at(0);
    }
    const int ns[] = {n};
    PathAnalysis pa = analyze_path(path, ns);
    return orientation == Orientation::forward ? pa.inv_forward.at(n) : pa.inv_reversed.at(n);
}

double l2_integral(const OccupationProfile& profile, int n) {
    validate_order(n, 1, "l2_integral");
    const double h = profile.bin_width;
    double sum = 0.0;
    for (std::size_t i = 0; i < profile.n_bins; ++i) {
        const double l = profile.local_time[i];
        if (l == 0.0) continue;
        const double h_mid = 0.5 * (profile.H_edges[i] + profile.H_edges[i + 1]);
        sum += upow(1.0 - h_mid, n - 1) * l * l * h;
    }
    return sum;
}

double min_functional(const OccupationProfile& profile, int n) {
    validate_order(n, 1, "min_functional");
    const double h = profile.bin_width;
    const double inv_np1 = 1.0 / static_cast<double>(n + 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < profile.n_bins; ++i) {
        const double a = 1.0 - profile.H_edges[i];
        const double b = 1.0 - profile.H_edges[i + 1];
        // Exact per-bin integral of (1-H)^n for linear H:
        // (a^{n+1} - b^{n+1}) / ((n+1)(a-b)) via the stable symmetric form.
        double s = 0.0;
        for (int j = 0; j <= n; ++j) s += upow(a, j) * upow(b, n - j);
        sum += h * s * inv_np1;
    }
    return sum;
}

double min_bruteforce(const PathGrid& path, int n) {
    if (n < 1) throw std::invalid_argument("min_bruteforce: order out of range");
    if (n > 3) throw std::invalid_argument("min_bruteforce: only n <= 3 is supported");
    const std::size_t m = (n == 1) ? path.n_steps : (n == 2 ? 512 : 128);
    std::vector<double> v(m);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        v[i] = path.at((static_cast<double>(i) + 0.5) * inv_m);
    }
    double sum = 0.0;
    if (n == 1) {
        for (double x : v) sum += x;
        return sum * inv_m;
    }
    if (n == 2) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                sum += std::min(v[i], v[j]);
            }
        }
        return sum * inv_m * inv_m;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double mij = std::min(v[i], v[j]);
            for (std::size_t l = 0; l < m; ++l) {
                sum += std::min(mij, v[l]);
            }
        }
    }
    return sum * inv_m * inv_m * inv_m;
}

double gs_statistic(const PathGrid& path, const OccupationProfile& profile) {
    validate_profile_pairing(path, profile, "gs_statistic");
    return weighted_area(path, 1) - 0.5 * l2_integral(profile, 1);
}

double prop_statistic(const PathGrid& path, const OccupationProfile& profile, int n) {
    validate_order(n, 1, "prop_statistic");
    validate_profile_pairing(path, profile, "prop_statistic");
    return 2.0 * min_functional(profile, n) -
           0.5 * static_cast<double>(n + 1) * l2_integral(profile, n);
}

PathGrid brownian_from_excursion(const PathGrid& path) {
    const int one[] = {1};
    PathAnalysis pa = analyze_path(path, one);
    return std::move(pa.w_path);
}

double weighted_bm_integral(const PathGrid& w_path, int n) {
    validate_order(n, 1, "weighted_bm_integral");
    if (w_path.n_steps < 1 || w_path.values.size() != w_path.n_steps + 1) {
        throw std::invalid_argument("weighted_bm_integral: malformed path");
    }
    return polyweight_linear_integral(w_path, n);
}

double identity_residual(const PathGrid& path, int n) {
    validate_order(n, 1, "identity_residual");
    const int ns[] = {n};
    PathAnalysis pa = analyze_path(path, ns);
    return pa.residual.at(n);
}

FunctionalSample compute_functionals(const PathGrid& path, const OccupationProfile& profile,
                                     std::span<const int> orders,
                                     std::map<int, double>* residuals) {
    std::vector<int> ns(orders.begin(), orders.end());
    ns.insert(ns.end(), {1, 2, 3});
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    PathAnalysis pa = analyze_path(path, ns);

    FunctionalSample fs;
    fs.area = pa.weighted_areas.at(1);
    fs.l2_half = 0.5 * l2_integral(profile, 1);
    fs.x_stat = fs.area - fs.l2_half;
    fs.w_one = pa.w_path.values.back();
    fs.inv_forward = std::move(pa.inv_forward);
    fs.inv_reversed = std::move(pa.inv_reversed);
    for (int n : ns) {
        fs.min_n[n] = min_functional(profile, n);
        fs.prop_stat[n] = 2.0 * fs.min_n[n] - 0.5 * static_cast<double>(n + 1) * l2_integral(profile, n);
        fs.w_area_weighted[n] = weighted_bm_integral(pa.w_path, n);
    }
    if (residuals != nullptr) {
        *residuals = std::move(pa.residual);
    }
    return fs;
}

} // namespace excursion
