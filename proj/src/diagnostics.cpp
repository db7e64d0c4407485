#include "vpmcf/diagnostics.hpp"

#include "vpmcf/interface.hpp"
#include "vpmcf/operators.hpp"
#include "vpmcf/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>

namespace vpmcf {

ScalarField energy_density(const ScalarField& phi, double eps, Discretization disc) {
    const VectorField grad = gradient(phi, disc);
    ScalarField e(phi.grid);
    const int d = phi.grid.d;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        double g2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double c = grad.comp[static_cast<std::size_t>(a)][i];
            g2 += c * c;
        }
        e[i] = 0.5 * eps * g2 + eval_W(phi[i]) / eps;
    }
    return e;
}

double energy(const ScalarField& phi, double eps, Discretization disc) {
    return integrate(energy_density(phi, eps, disc)) / sigma();
}

double volume(const ScalarField& phi) {
    require_finite(phi, "volume");
    return integrate_nodal(phi.grid, [&phi](std::size_t i) { return eval_k(phi[i]); });
}

namespace {

double discrepancy_reduce(const ScalarField& phi, double eps, Discretization disc, bool relative) {
    const VectorField grad = gradient(phi, disc);
    const int d = phi.grid.d;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < phi.size(); ++i) {
        double g2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double c = grad.comp[static_cast<std::size_t>(a)][i];
            g2 += c * c;
        }
        const double w = eval_W(phi[i]) / eps;
        double xi = 0.5 * eps * g2 - w;
        if (relative) xi /= (w + 1.0);
        m = std::max(m, xi);
    }
    return m;
}

} // namespace

double discrepancy_max(const ScalarField& phi, double eps, Discretization disc) {
    return discrepancy_reduce(phi, eps, disc, false);
}

double discrepancy_max_rel(const ScalarField& phi, double eps, Discretization disc) {
    return discrepancy_reduce(phi, eps, disc, true);
}

double dissipation_residual(const ScalarField& phi0, const ScalarField& phi1, double eps,
                            Discretization disc, double dt) {
    if (phi0.grid != phi1.grid) throw ValidationError("dissipation_residual: grid mismatch");
    const double e0 = energy(phi0, eps, disc);
    const double e1 = energy(phi1, eps, disc);
    const double invdt = 1.0 / dt;
    const double diss = integrate_nodal(phi0.grid, [&](std::size_t i) {
        const double rate = (phi1[i] - phi0[i]) * invdt;
        return eps * rate * rate;
    });
    return std::abs(e1 - e0 + dt * diss / sigma());
}

double curvature_l2(const ScalarField& phi, double eps, Discretization disc) {
    const ScalarField lap = laplacian(phi, disc);
    const double inv_eps2 = 1.0 / (eps * eps);
    return integrate_nodal(phi.grid, [&](std::size_t i) {
        const double r = lap[i] - eval_dW(phi[i]) * inv_eps2;
        return eps * r * r;
    }) / sigma();
}

VectorField velocity_field(const ScalarField& phi0, const ScalarField& phi1, double dt,
                           Discretization disc) {
    if (phi0.grid != phi1.grid) throw ValidationError("velocity_field: grid mismatch");
    const GridSpec& g = phi0.grid;
    ScalarField mid(g);
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (phi0[i] + phi1[i]);
    const VectorField grad = gradient(mid, disc);
    const double cut = 1e-8 / g.h;
    const double invdt = 1.0 / dt;
    VectorField v(g);
    for (std::size_t i = 0; i < mid.size(); ++i) {
        double g2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const double c = grad.comp[static_cast<std::size_t>(a)][i];
            g2 += c * c;
        }
        if (std::sqrt(g2) < cut) continue; // zero-gradient branch
        const double rate = (phi1[i] - phi0[i]) * invdt;
        const double scale = -rate / g2;
        for (int a = 0; a < g.d; ++a)
            v.comp[static_cast<std::size_t>(a)][i] = scale * grad.comp[static_cast<std::size_t>(a)][i];
    }
    return v;
}

std::vector<double> dyadic_radii(const GridSpec& grid) {
    std::vector<double> radii;
    for (double r = 2.0 * grid.h; r < 0.25; r *= 2.0) radii.push_back(r);
    return radii;
}

double unit_ball_volume(int m) {
    switch (m) {
        case 0: return 1.0;
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi / 3.0;
        default: throw ValidationError("unit_ball_volume: dimension out of range");
    }
}

double ball_measure(const ScalarField& density_over_sigma, const std::array<double, 3>& center,
                    double radius) {
    const GridSpec& g = density_over_sigma.grid;
    const double r2 = radius * radius;
    const double hpow = std::pow(g.h, g.d);
    int lo[3] = {0, 0, 0};
    int width[3] = {1, 1, 1};
    for (int a = 0; a < g.d; ++a) {
        const double c = center[static_cast<std::size_t>(a)];
        const int il = static_cast<int>(std::floor((c - radius) / g.h));
        const int ih = static_cast<int>(std::ceil((c + radius) / g.h));
        lo[a] = il;
        width[a] = std::min(ih - il + 1, g.n);
    }
    const auto strides = g.strides();
    double sum = 0.0; // fixed loop order; scan is deterministic
    int c[3] = {0, 0, 0};
    for (int i0 = 0; i0 < width[0]; ++i0) {
        c[0] = lo[0] + i0;
        for (int i1 = 0; i1 < width[1]; ++i1) {
            c[1] = lo[1] + i1;
            for (int i2 = 0; i2 < width[2]; ++i2) {
                c[2] = lo[2] + i2;
                double x[3];
                std::size_t idx = 0;
                for (int a = 0; a < g.d; ++a) {
                    int w = c[a] % g.n;
                    if (w < 0) w += g.n;
                    idx += static_cast<std::size_t>(w) * strides[static_cast<std::size_t>(a)];
                    x[a] = node_coord(g, w);
                }
                if (torus_dist2(x, center.data(), g.d) <= r2) sum += density_over_sigma[idx];
            }
        }
    }
    return hpow * sum;
}

DensityScanReport density_scan(const ScalarField& phi, double eps, Discretization disc,
                               const std::vector<double>& radii, const CentersSpec& centers,
                               int threads) {
    for (double r : radii)
        if (!(r > 0.0 && r < 0.25))
            throw ValidationError("density_scan: radii must lie in (0, 1/4)");

    const GridSpec& g = phi.grid;
    ScalarField dens = energy_density(phi, eps, disc);
    const double inv_sigma = 1.0 / sigma();
    for (double& x : dens.v) x *= inv_sigma;

    std::vector<std::array<double, 3>> pts;
    if (centers.lattice_per_axis > 0) {
        const int m = centers.lattice_per_axis;
        const double step = 1.0 / static_cast<double>(m);
        int c[3] = {0, 0, 0};
        const int m1 = (g.d > 1) ? m : 1;
        const int m2 = (g.d > 2) ? m : 1;
        for (c[0] = 0; c[0] < m; ++c[0])
            for (c[1] = 0; c[1] < m1; ++c[1])
                for (c[2] = 0; c[2] < m2; ++c[2])
                    pts.push_back({(c[0] + 0.5) * step, g.d > 1 ? (c[1] + 0.5) * step : 0.0,
                                   g.d > 2 ? (c[2] + 0.5) * step : 0.0});
    }
    if (centers.include_interface) {
        const auto crossings = zero_crossings(phi);
        const std::size_t take = std::min(centers.max_interface_points, crossings.size());
        const std::size_t stride = take ? std::max<std::size_t>(1, crossings.size() / take) : 1;
        for (std::size_t i = 0; i < crossings.size(); i += stride) pts.push_back(crossings[i]);
    }
    for (const auto& p : centers.extra) pts.push_back(p);

    DensityScanReport rep;
    const double wball = unit_ball_volume(g.d - 1);
    rep.entries.resize(pts.size() * radii.size());
    for (std::size_t pi = 0; pi < pts.size(); ++pi)
        for (std::size_t ri = 0; ri < radii.size(); ++ri) {
            auto& e = rep.entries[pi * radii.size() + ri];
            e.center = pts[pi];
            e.radius = radii[ri];
        }

    auto eval_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            auto& e = rep.entries[i];
            e.ratio = ball_measure(dens, e.center, e.radius) /
                      (wball * std::pow(e.radius, g.d - 1));
        }
    };
    const std::size_t total = rep.entries.size();
    if (threads <= 1 || total < 8) {
        eval_range(0, total);
    } else {
        const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(threads), total);
        std::vector<std::future<void>> futures;
        const std::size_t chunk = (total + nw - 1) / nw;
        for (std::size_t w = 0; w < nw; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(total, lo + chunk);
            if (lo >= hi) break;
            futures.push_back(std::async(std::launch::async, eval_range, lo, hi));
        }
        for (auto& f : futures) f.get();
    }

    for (const auto& e : rep.entries)
        if (e.ratio > rep.sup) {
            rep.sup = e.ratio;
            rep.argsup_center = e.center;
            rep.argsup_radius = e.radius;
        }
    return rep;
}

double cutoff_eta(double r) {
    if (r <= 0.25) return 1.0;
    if (r >= 0.5) return 0.0;
    const double u = (r - 0.25) * 4.0;
    return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double rho_tilde(const MonotonicityKernel& kernel, const std::array<double, 3>& x, double t, int d) {
    if (!(t < kernel.s)) throw ValidationError("rho_tilde: requires t < s (kernel is singular)");
    const double tau = kernel.s - t;
    const double dist2 = torus_dist2(x.data(), kernel.y.data(), d);
    const double amp = std::pow(4.0 * std::numbers::pi * tau, -0.5 * (d - 1));
    return amp * std::exp(-dist2 / (4.0 * tau)) * cutoff_eta(std::sqrt(dist2));
}

double weighted_measure(const ScalarField& phi, double eps, Discretization disc,
                        const MonotonicityKernel& kernel, double t, bool masked) {
    const GridSpec& g = phi.grid;
    ScalarField dens = energy_density(phi, eps, disc);
    const double inv_sigma = 1.0 / sigma();

    if (masked) {
        // mask-then-integrate: materialize the cutoff-weighted kernel first
        ScalarField w(g);
        for (std::size_t i = 0; i < w.size(); ++i) {
            double x[3] = {0.0, 0.0, 0.0};
            int c[3] = {0, 0, 0};
            decompose(g, i, c);
            for (int a = 0; a < g.d; ++a) x[a] = node_coord(g, c[a]);
            const double dist = std::sqrt(torus_dist2(x, kernel.y.data(), g.d));
            w[i] = (dist <= 0.5) ? rho_tilde(kernel, {x[0], x[1], x[2]}, t, g.d) : 0.0;
        }
        return inv_sigma * integrate_product(w, dens);
    }
    return inv_sigma * integrate_nodal(g, [&](std::size_t i) {
        double x[3] = {0.0, 0.0, 0.0};
        int c[3] = {0, 0, 0};
        decompose(g, i, c);
        for (int a = 0; a < g.d; ++a) x[a] = node_coord(g, c[a]);
        return rho_tilde(kernel, {x[0], x[1], x[2]}, t, g.d) * dens[i];
    });
}

MonotonicityResult monotonicity_check(const RunHistory& history, const MonotonicityKernel& kernel,
                                      std::size_t i1, std::size_t i2, double c5) {
    if (i1 >= i2 || i2 >= history.snaps.size())
        throw ValidationError("monotonicity_check: need record indices i1 < i2 within history");
    const double t1 = history.snaps[i1].t;
    const double t2 = history.snaps[i2].t;
    if (!(t2 < kernel.s)) throw ValidationError("monotonicity_check: requires t2 < s");

    MonotonicityResult res;
    res.lhs = weighted_measure(history.snaps[i2].phi, history.eps, history.disc, kernel, t2);
    const double base = weighted_measure(history.snaps[i1].phi, history.eps, history.disc, kernel, t1);

    // trapezoid over stored records for the cutoff remainder term
    double remainder = 0.0;
    auto term = [&](std::size_t i) {
        const double tau = kernel.s - history.snaps[i].t;
        ScalarField dens = energy_density(history.snaps[i].phi, history.eps, history.disc);
        const double inv_sigma = 1.0 / sigma();
        for (double& x : dens.v) x *= inv_sigma;
        return std::exp(-1.0 / (128.0 * tau)) * ball_measure(dens, kernel.y, 0.5);
    };
    double prev = term(i1);
    for (std::size_t i = i1 + 1; i <= i2; ++i) {
        const double cur = term(i);
        remainder += 0.5 * (prev + cur) * (history.snaps[i].t - history.snaps[i - 1].t);
        prev = cur;
    }

    const double lambda_int =
        history.snaps[i2].lambda_sq_accum - history.snaps[i1].lambda_sq_accum;
    res.rhs = (base + c5 * remainder) * std::exp(lambda_int);
    res.slack = res.rhs - res.lhs;
    return res;
}

std::string diagnostics_csv_header() {
    return "t,energy,volume,lambda,lambda_sq_accum,max_discrepancy,dissipation_residual,"
           "curvature_l2,max_abs_phi,interface_measure";
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t, r.energy,
                  r.volume, r.lambda, r.lambda_sq_accum, r.max_discrepancy, r.dissipation_residual,
                  r.curvature_l2, r.max_abs_phi, r.interface_measure);
    return std::string(buf);
}

} // namespace vpmcf
