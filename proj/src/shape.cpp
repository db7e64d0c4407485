#include "vpmcf/shape.hpp"

#include "vpmcf/diagnostics.hpp"
#include "vpmcf/interface.hpp"
#include "vpmcf/operators.hpp"
#include "vpmcf/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vpmcf {

namespace {

double ball_signed_distance(const Ball& b, const double* x, int d) {
    const double dist = std::sqrt(torus_dist2(x, b.center.data(), d));
    return b.radius - dist;
}

double union_signed_distance(const std::vector<Ball>& balls, const double* x, int d) {
    bool inside = false;
    double bnd = std::numeric_limits<double>::infinity();
    for (const Ball& b : balls) {
        const double dist = std::sqrt(torus_dist2(x, b.center.data(), d));
        if (dist < b.radius) inside = true;
        bnd = std::min(bnd, std::abs(dist - b.radius));
    }
    return inside ? bnd : -bnd;
}

// Stationarity function for the nearest-point angle on the first-quadrant arc.
double ellipse_g(double theta, double px, double py, double a, double b) {
    const double c = std::cos(theta), s = std::sin(theta);
    return (a * a - b * b) * s * c - a * px * s + b * py * c;
}

} // namespace

double ellipse_boundary_distance(double px, double py, double a, double b) {
    px = std::abs(px);
    py = std::abs(py);
    const double half_pi = 0.5 * std::numbers::pi;
    auto dist_at = [&](double th) {
        const double dx = px - a * std::cos(th);
        const double dy = py - b * std::sin(th);
        return std::hypot(dx, dy);
    };
    // on the major axis the stationarity function vanishes at theta = 0 even
    // when the nearest point is off-axis (query inside the evolute)
    if (py == 0.0) {
        if (a == b) return std::abs(px - a);
        const double c = a * px / (a * a - b * b);
        if (!(c < 1.0)) return std::abs(px - a);
        return dist_at(std::acos(c));
    }
    double lo = 0.0, hi = half_pi;
    const double glo = ellipse_g(lo, px, py, a, b); // = b*py > 0 here
    const double ghi = ellipse_g(hi, px, py, a, b); // = -a*px <= 0
    if (glo <= 0.0) return dist_at(0.0);
    if (ghi >= 0.0) return dist_at(half_pi);

    // Newton with a maintained bracket; g is decreasing after division by s*c,
    // and has exactly one root here.
    double theta = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double g = ellipse_g(theta, px, py, a, b);
        if (g > 0.0) lo = theta; else hi = theta;
        const double c = std::cos(theta), s = std::sin(theta);
        const double dg = (a * a - b * b) * (c * c - s * s) - a * px * c - b * py * s;
        double next = theta - (dg != 0.0 ? g / dg : 0.0);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - theta) < 1e-12) { theta = next; break; }
        theta = next;
    }
    return dist_at(theta);
}

namespace {

double ellipse_signed_distance(const Ellipse& e, const double* x, int d) {
    double p[2];
    for (int i = 0; i < 2; ++i) p[i] = min_image(x[i] - e.center[static_cast<std::size_t>(i)]);
    (void)d;
    const double a = e.semi_axes[0], b = e.semi_axes[1];
    const double inside_val = (p[0] / a) * (p[0] / a) + (p[1] / b) * (p[1] / b);
    const double dist = ellipse_boundary_distance(p[0], p[1], a, b);
    return inside_val < 1.0 ? dist : -dist;
}

// Unsigned distance to the reconstructed boundary. For d = 2 the target is
// the marching-segments polyline (point-cloud distances carry h-scale
// scalloping that breaks |grad r| <= 1); for d = 1, 3 the edge-crossing cloud.
struct ImplicitDistance {
    std::vector<std::array<double, 3>> boundary_points;
    std::vector<Segment> boundary_segments;
    int d = 0;

    double operator()(const ScalarField& psi, std::size_t idx, const double* x) const {
        double best = std::numeric_limits<double>::infinity();
        if (d == 2) {
            for (const Segment& s : boundary_segments) {
                // segments span at most one cell; min-image via the endpoint
                double ax[2], bx[2];
                for (int a = 0; a < 2; ++a) {
                    ax[a] = min_image(s.a[static_cast<std::size_t>(a)] - x[a]);
                    bx[a] = ax[a] + min_image(s.b[static_cast<std::size_t>(a)] -
                                              s.a[static_cast<std::size_t>(a)]);
                }
                const double ex = bx[0] - ax[0], ey = bx[1] - ax[1];
                const double len2 = ex * ex + ey * ey;
                double t = 0.0;
                if (len2 > 0.0) t = std::clamp(-(ax[0] * ex + ax[1] * ey) / len2, 0.0, 1.0);
                const double dx = ax[0] + t * ex, dy = ax[1] + t * ey;
                best = std::min(best, dx * dx + dy * dy);
            }
        } else {
            for (const auto& q : boundary_points) best = std::min(best, torus_dist2(x, q.data(), d));
        }
        const double dist = std::sqrt(best);
        return psi[idx] >= 0.0 ? dist : -dist;
    }
};

void node_position(const GridSpec& g, std::size_t idx, double* x) {
    int c[3] = {0, 0, 0};
    decompose(g, idx, c);
    for (int a = 0; a < g.d; ++a) x[a] = node_coord(g, c[a]);
}

void require_box_clearance(double lo, double hi, double margin, const char* what) {
    if (lo < margin || hi > 1.0 - margin)
        throw ValidationError(std::string(what) +
                              ": shape violates the 4*eps clearance from the periodic seam");
}

} // namespace

void validate_shape(const ShapeSpec& shape, double eps, const GridSpec& grid) {
    const double margin = 4.0 * eps;
    if (std::holds_alternative<Ball>(shape)) {
        const Ball& b = std::get<Ball>(shape);
        if (!(b.radius > 0.0)) throw ValidationError("ball: radius must be positive");
        for (int a = 0; a < grid.d; ++a)
            require_box_clearance(b.center[static_cast<std::size_t>(a)] - b.radius,
                                  b.center[static_cast<std::size_t>(a)] + b.radius, margin, "ball");
    } else if (std::holds_alternative<BallUnion>(shape)) {
        const auto& balls = std::get<BallUnion>(shape).balls;
        if (balls.empty()) throw ValidationError("union-of-balls: no components");
        for (const Ball& b : balls) {
            if (!(b.radius > 0.0)) throw ValidationError("union-of-balls: radius must be positive");
            for (int a = 0; a < grid.d; ++a)
                require_box_clearance(b.center[static_cast<std::size_t>(a)] - b.radius,
                                      b.center[static_cast<std::size_t>(a)] + b.radius, margin,
                                      "union-of-balls");
        }
        for (std::size_t i = 0; i < balls.size(); ++i)
            for (std::size_t j = i + 1; j < balls.size(); ++j) {
                const double sep =
                    std::sqrt(torus_dist2(balls[i].center.data(), balls[j].center.data(), grid.d));
                if (sep <= balls[i].radius + balls[j].radius)
                    throw ValidationError("union-of-balls: components must be disjoint");
            }
    } else if (std::holds_alternative<Ellipse>(shape)) {
        if (grid.d != 2) throw ValidationError("ellipse: supported for d = 2 only");
        const Ellipse& e = std::get<Ellipse>(shape);
        if (!(e.semi_axes[0] > 0.0 && e.semi_axes[1] > 0.0))
            throw ValidationError("ellipse: semi-axes must be positive");
        for (int a = 0; a < 2; ++a)
            require_box_clearance(e.center[static_cast<std::size_t>(a)] - e.semi_axes[static_cast<std::size_t>(a)],
                                  e.center[static_cast<std::size_t>(a)] + e.semi_axes[static_cast<std::size_t>(a)],
                                  margin, "ellipse");
    } else {
        const ImplicitShape& im = std::get<ImplicitShape>(shape);
        if (im.level_set.grid != grid)
            throw ValidationError("implicit shape: level-set grid does not match the target grid");
        const auto pts = zero_crossings(im.level_set);
        if (pts.empty()) throw ValidationError("implicit shape: level set has no zero crossings");
        for (const auto& p : pts)
            for (int a = 0; a < grid.d; ++a)
                if (p[static_cast<std::size_t>(a)] < margin || p[static_cast<std::size_t>(a)] > 1.0 - margin)
                    throw ValidationError(
                        "implicit shape: boundary violates the 4*eps clearance from the periodic seam");
    }
}

SignedDistanceField signed_distance(const ShapeSpec& shape, const GridSpec& grid) {
    SignedDistanceField out;
    out.r = ScalarField(grid);
    const std::size_t count = grid.node_count();

    if (std::holds_alternative<Ball>(shape)) {
        const Ball& b = std::get<Ball>(shape);
        for (std::size_t i = 0; i < count; ++i) {
            double x[3];
            node_position(grid, i, x);
            out.r[i] = ball_signed_distance(b, x, grid.d);
        }
    } else if (std::holds_alternative<BallUnion>(shape)) {
        const auto& balls = std::get<BallUnion>(shape).balls;
        for (std::size_t i = 0; i < count; ++i) {
            double x[3];
            node_position(grid, i, x);
            out.r[i] = union_signed_distance(balls, x, grid.d);
        }
    } else if (std::holds_alternative<Ellipse>(shape)) {
        if (grid.d != 2) throw ValidationError("signed_distance: ellipse requires d = 2");
        const Ellipse& e = std::get<Ellipse>(shape);
        for (std::size_t i = 0; i < count; ++i) {
            double x[3];
            node_position(grid, i, x);
            out.r[i] = ellipse_signed_distance(e, x, grid.d);
        }
    } else {
        const ImplicitShape& im = std::get<ImplicitShape>(shape);
        ImplicitDistance dist;
        dist.boundary_points = zero_crossings(im.level_set);
        if (grid.d == 2) dist.boundary_segments = zero_segments(im.level_set);
        dist.d = grid.d;
        if (dist.boundary_points.empty())
            throw ValidationError("signed_distance: implicit level set has no zero crossings");
        for (std::size_t i = 0; i < count; ++i) {
            double x[3];
            node_position(grid, i, x);
            out.r[i] = dist(im.level_set, i, x);
        }
    }
    return out;
}

SignedDistanceField smooth_saturate(const SignedDistanceField& r, double eps, double K) {
    if (!(K >= 5.0)) throw ValidationError("smooth_saturate: K must be >= 5");
    if (!(eps > 0.0)) throw ValidationError("smooth_saturate: eps must be positive");
    SignedDistanceField out;
    out.r = ScalarField(r.r.grid);
    out.smoothing_band = K * eps;
    const double band = K * eps;
    for (std::size_t i = 0; i < r.r.size(); ++i) out.r[i] = band * std::tanh(r.r[i] / band);
    return out;
}

ScalarField make_initial(const ShapeSpec& shape, double eps, const GridSpec& grid, double K) {
    if (!(eps >= 3.0 * grid.h))
        throw ValidationError("make_initial: eps < 3h, interface would be unresolved");
    if (!(eps < 1.0)) throw ValidationError("make_initial: eps must lie in (0,1)");
    validate_shape(shape, eps, grid);
    SignedDistanceField rbar = smooth_saturate(signed_distance(shape, grid), eps, K);
    ScalarField phi(grid);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = std::tanh(rbar.r[i] / eps);
    return phi;
}

WellPreparednessReport check_well_prepared(const ScalarField& phi0, double eps, Discretization disc) {
    require_finite(phi0, "check_well_prepared");
    WellPreparednessReport rep;

    const VectorField grad = gradient(phi0, disc);
    const GridSpec& g = phi0.grid;
    double max_xi = -std::numeric_limits<double>::infinity();
    double max_xi_rel = -std::numeric_limits<double>::infinity();
    double max_grad_rbar = 0.0;
    for (std::size_t i = 0; i < phi0.size(); ++i) {
        double g2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const double c = grad.comp[static_cast<std::size_t>(a)][i];
            g2 += c * c;
        }
        const double w = eval_W(phi0[i]) / eps;
        const double xi = 0.5 * eps * g2 - w;
        max_xi = std::max(max_xi, xi);
        max_xi_rel = std::max(max_xi_rel, xi / (w + 1.0));
        const double s = phi0[i];
        if (std::abs(s) <= 0.99) {
            const double gr = eps * std::sqrt(g2) / (1.0 - s * s);
            max_grad_rbar = std::max(max_grad_rbar, gr);
        }
    }
    rep.max_discrepancy = max_xi;
    rep.max_discrepancy_rel = max_xi_rel;
    rep.max_grad_rbar = max_grad_rbar;

    CentersSpec centers;
    DensityScanReport scan = density_scan(phi0, eps, disc, dyadic_radii(g), centers);
    rep.density_ratio_sup = scan.sup;

    rep.omega = 2.0 / 3.0 - std::abs(volume(phi0));
    rep.fatal = !(rep.omega > 0.0);
    rep.warn_small_omega = rep.omega <= 0.01;
    return rep;
}

} // namespace vpmcf
