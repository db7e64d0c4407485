#include "vpmcf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vpmcf {

std::vector<double> oracle_rhs(const OracleSystem& sys, const std::vector<double>& radii) {
    if (radii.empty()) throw ValidationError("oracle_rhs: no radii");
    for (double r : radii)
        if (!(r > 0.0)) throw NumericalError("oracle_rhs: nonpositive radius (extinction)");
    const double dm1 = static_cast<double>(sys.d - 1);
    std::vector<double> out(radii.size());
    if (sys.law == SharpLaw::plain_mcf) {
        for (std::size_t i = 0; i < radii.size(); ++i) out[i] = -dm1 / radii[i];
        return out;
    }
    double s_low = 0.0, s_high = 0.0; // sum R^{d-2}, sum R^{d-1}
    for (double r : radii) {
        s_low += std::pow(r, sys.d - 2);
        s_high += std::pow(r, sys.d - 1);
    }
    const double mean_curv = dm1 * s_low / s_high;
    for (std::size_t i = 0; i < radii.size(); ++i) out[i] = -dm1 / radii[i] + mean_curv;
    return out;
}

double conserved_volume_sum(const OracleSystem& sys, const std::vector<double>& radii) {
    double s = 0.0;
    for (double r : radii) s += std::pow(r, sys.d);
    return s;
}

std::vector<double> OracleTrajectory::radii_at(double t) const {
    if (times.empty()) throw ValidationError("radii_at: empty trajectory");
    if (t <= times.front()) return radii.front();
    if (t >= times.back()) return radii.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    const double t0 = times[j - 1], t1 = times[j];
    const double hstep = t1 - t0;
    const double u = (t - t0) / hstep;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    std::vector<double> out(radii[j].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = h00 * radii[j - 1][i] + hstep * h10 * derivs[j - 1][i] + h01 * radii[j][i] +
                 hstep * h11 * derivs[j][i];
    return out;
}

namespace {

bool rk4_step(const OracleSystem& sys, const std::vector<double>& y, double dt,
              std::vector<double>& out) {
    const std::size_t m = y.size();
    std::vector<double> k1, k2, k3, k4, tmp(m);
    auto positive = [](const std::vector<double>& v) {
        for (double x : v)
            if (!(x > 0.0)) return false;
        return true;
    };
    try {
        k1 = oracle_rhs(sys, y);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
        if (!positive(tmp)) return false;
        k2 = oracle_rhs(sys, tmp);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
        if (!positive(tmp)) return false;
        k3 = oracle_rhs(sys, tmp);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + dt * k3[i];
        if (!positive(tmp)) return false;
        k4 = oracle_rhs(sys, tmp);
    } catch (const NumericalError&) {
        return false;
    }
    out.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return positive(out);
}

} // namespace

OracleTrajectory oracle_integrate(const OracleSystem& sys, double T, double max_dt, double rel_tol) {
    if (!(T >= 0.0)) throw ValidationError("oracle_integrate: T must be nonnegative");
    if (sys.radii.empty()) throw ValidationError("oracle_integrate: no radii");
    for (double r : sys.radii)
        if (!(r > 0.0)) throw ValidationError("oracle_integrate: radii must be positive");

    OracleTrajectory traj;
    std::vector<double> y = sys.radii;
    double t = 0.0;
    traj.times.push_back(t);
    traj.radii.push_back(y);
    traj.derivs.push_back(oracle_rhs(sys, y));

    const double v0 = conserved_volume_sum(sys, sys.radii);
    double dt = std::min(T > 0.0 ? T : 1.0, 1e-3);
    if (max_dt > 0.0) dt = std::min(dt, max_dt);
    const double dt_min = 1e-15;

    while (t < T) {
        dt = std::min(dt, T - t);
        std::vector<double> full, half, two;
        bool ok = rk4_step(sys, y, dt, full);
        if (ok) ok = rk4_step(sys, y, 0.5 * dt, half) && rk4_step(sys, half, 0.5 * dt, two);
        if (!ok) {
            dt *= 0.5;
            if (dt < dt_min) {
                // a component collapses inside any resolvable step
                traj.extinct = true;
                traj.extinction_time = t;
                int comp = 0;
                for (std::size_t i = 1; i < y.size(); ++i)
                    if (y[i] < y[static_cast<std::size_t>(comp)]) comp = static_cast<int>(i);
                traj.extinct_component = comp;
                return traj;
            }
            continue;
        }
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            err = std::max(err, std::abs(two[i] - full[i]) / 15.0);
            scale = std::max(scale, std::abs(two[i]));
        }
        const double tol = rel_tol * std::max(scale, 1e-3);
        if (err <= tol) {
            y = two;
            t += dt;
            traj.times.push_back(t);
            traj.radii.push_back(y);
            traj.derivs.push_back(oracle_rhs(sys, y));
            if (sys.law == SharpLaw::volume_preserving) {
                const double drift = std::abs(conserved_volume_sum(sys, y) - v0) / v0;
                if (drift > 1e-10) {
                    std::ostringstream os;
                    os << "oracle self-check: volume drift " << drift << " exceeds 1e-10 at t = " << t;
                    throw NumericalError(os.str());
                }
            }
        }
        double factor = (err > 0.0) ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        dt *= factor;
        if (max_dt > 0.0) dt = std::min(dt, max_dt);
    }
    return traj;
}

double mcf_radius_closed_form(double r0, double t, int d) {
    const double v = r0 * r0 - 2.0 * static_cast<double>(d - 1) * t;
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

double time_radius_reaches(const OracleSystem& sys, std::size_t component, double target,
                           double t_max) {
    if (component >= sys.radii.size()) throw ValidationError("time_radius_reaches: bad component");
    OracleTrajectory traj = oracle_integrate(sys, t_max, t_max / 4096.0);
    for (std::size_t j = 1; j < traj.times.size(); ++j) {
        if (traj.radii[j][component] <= target) {
            // bisect on the Hermite interpolant within the bracketing record
            double lo = traj.times[j - 1], hi = traj.times[j];
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (traj.radii_at(mid)[component] <= target) hi = mid; else lo = mid;
                if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
            }
            return 0.5 * (lo + hi);
        }
    }
    if (traj.extinct) return traj.extinction_time;
    std::ostringstream os;
    os << "time_radius_reaches: radius " << component << " stays above " << target << " up to t = "
       << t_max;
    throw NumericalError(os.str());
}

} // namespace vpmcf
