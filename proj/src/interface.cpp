#include "vpmcf/interface.hpp"

#include "vpmcf/operators.hpp"
#include "vpmcf/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace vpmcf {

namespace {

double fold01(double x) {
    x -= std::floor(x);
    return x;
}

} // namespace

std::vector<std::array<double, 3>> zero_crossings(const ScalarField& phi) {
    const GridSpec& g = phi.grid;
    const auto strides = g.strides();
    std::vector<std::array<double, 3>> pts;
    const std::size_t count = g.node_count();
    int c[3] = {0, 0, 0};
    for (std::size_t idx = 0; idx < count; ++idx) {
        decompose(g, idx, c);
        const double v0 = phi[idx];
        if (v0 == 0.0) {
            std::array<double, 3> p{0.0, 0.0, 0.0};
            for (int a = 0; a < g.d; ++a) p[static_cast<std::size_t>(a)] = node_coord(g, c[a]);
            pts.push_back(p);
            continue;
        }
        for (int a = 0; a < g.d; ++a) {
            const int cn = (c[a] + 1 == g.n) ? 0 : c[a] + 1;
            const std::size_t nidx =
                idx + (static_cast<std::size_t>(cn) - static_cast<std::size_t>(c[a])) *
                          strides[static_cast<std::size_t>(a)];
            const double v1 = phi[nidx];
            if (v0 * v1 < 0.0) {
                const double t = v0 / (v0 - v1);
                std::array<double, 3> p{0.0, 0.0, 0.0};
                for (int b = 0; b < g.d; ++b) p[static_cast<std::size_t>(b)] = node_coord(g, c[b]);
                p[static_cast<std::size_t>(a)] = fold01(p[static_cast<std::size_t>(a)] + t * g.h);
                pts.push_back(p);
            }
        }
    }
    return pts;
}

std::vector<Segment> zero_segments(const ScalarField& phi) {
    const GridSpec& g = phi.grid;
    if (g.d != 2) throw ValidationError("zero_segments: d = 2 only");
    const int n = g.n;
    const std::size_t sn = static_cast<std::size_t>(n);
    std::vector<Segment> segments;

    auto at = [&](int i, int j) {
        const int iw = (i == n) ? 0 : i;
        const int jw = (j == n) ? 0 : j;
        return phi[static_cast<std::size_t>(iw) * sn + static_cast<std::size_t>(jw)];
    };

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v00 = at(i, j), v01 = at(i, j + 1);
            const double v10 = at(i + 1, j), v11 = at(i + 1, j + 1);
            const double x0 = node_coord(g, i), y0 = node_coord(g, j);

            // edge crossings: local (u,v) in the cell, u along axis0. Corners
            // exactly on the level set count as positive so the polyline
            // stays closed through them.
            std::array<std::array<double, 2>, 4> pt{};
            std::array<bool, 4> hit{false, false, false, false};
            auto pos = [](double v) { return v >= 0.0; };
            auto cross = [&](double a, double b) { return a / (a - b); };
            if (pos(v00) != pos(v01)) { pt[0] = {0.0, cross(v00, v01)}; hit[0] = true; }
            if (pos(v01) != pos(v11)) { pt[1] = {cross(v01, v11), 1.0}; hit[1] = true; }
            if (pos(v10) != pos(v11)) { pt[2] = {1.0, cross(v10, v11)}; hit[2] = true; }
            if (pos(v00) != pos(v10)) { pt[3] = {cross(v00, v10), 0.0}; hit[3] = true; }

            const int nhit = (hit[0] ? 1 : 0) + (hit[1] ? 1 : 0) + (hit[2] ? 1 : 0) + (hit[3] ? 1 : 0);
            auto seg = [&](int a, int b) {
                Segment s;
                s.a = {fold01(x0 + pt[a][0] * g.h), fold01(y0 + pt[a][1] * g.h), 0.0};
                s.b = {fold01(x0 + pt[b][0] * g.h), fold01(y0 + pt[b][1] * g.h), 0.0};
                segments.push_back(s);
            };
            if (nhit == 2) {
                int first = -1, second = -1;
                for (int e = 0; e < 4; ++e)
                    if (hit[e]) { if (first < 0) first = e; else second = e; }
                seg(first, second);
            } else if (nhit == 4) {
                // saddle: pair edges around the corner matching the center sign
                const double center = 0.25 * (v00 + v01 + v10 + v11);
                if ((center >= 0.0) == (v00 >= 0.0)) {
                    seg(0, 1); // around v01
                    seg(3, 2); // around v10
                } else {
                    seg(0, 3); // around v00
                    seg(1, 2); // around v11
                }
            }
        }
    }
    return segments;
}

namespace {

double marching_segments_length(const ScalarField& phi) {
    double total = 0.0;
    for (const Segment& s : zero_segments(phi)) {
        double d2 = 0.0;
        for (int a = 0; a < 2; ++a) {
            const double t = min_image(s.a[static_cast<std::size_t>(a)] - s.b[static_cast<std::size_t>(a)]);
            d2 += t * t;
        }
        total += std::sqrt(d2);
    }
    return total;
}

} // namespace

double interface_measure(const ScalarField& phi, double eps, Discretization disc) {
    const GridSpec& g = phi.grid;
    if (g.d == 2) return marching_segments_length(phi);
    if (g.d == 1) {
        double crossings = 0.0;
        for (int i = 0; i < g.n; ++i) {
            const double a = phi[static_cast<std::size_t>(i)];
            const double b = phi[static_cast<std::size_t>((i + 1) % g.n)];
            if (a * b < 0.0 || a == 0.0) crossings += 1.0;
        }
        return crossings;
    }
    // d = 3: co-area estimate, exact for equipartitioned profiles
    const VectorField grad = gradient(phi, disc);
    (void)eps;
    return integrate_nodal(g, [&](std::size_t i) {
        double g2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double c = grad.comp[static_cast<std::size_t>(a)][i];
            g2 += c * c;
        }
        return eval_sqrt2W(phi[i]) * std::sqrt(g2);
    }) / sigma();
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
    }
};

bool solve_linear(std::vector<double>& A, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[static_cast<std::size_t>(r * n + col)]) >
                std::abs(A[static_cast<std::size_t>(piv * n + col)]))
                piv = r;
        if (A[static_cast<std::size_t>(piv * n + col)] == 0.0) return false;
        if (piv != col) {
            for (int k = 0; k < n; ++k)
                std::swap(A[static_cast<std::size_t>(col * n + k)], A[static_cast<std::size_t>(piv * n + k)]);
            std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
        }
        const double d = A[static_cast<std::size_t>(col * n + col)];
        for (int r = col + 1; r < n; ++r) {
            const double f = A[static_cast<std::size_t>(r * n + col)] / d;
            if (f == 0.0) continue;
            for (int k = col; k < n; ++k)
                A[static_cast<std::size_t>(r * n + k)] -= f * A[static_cast<std::size_t>(col * n + k)];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int k = r + 1; k < n; ++k)
            s -= A[static_cast<std::size_t>(r * n + k)] * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(r)] = s / A[static_cast<std::size_t>(r * n + r)];
    }
    return true;
}

// `q` holds coordinates already unfolded into one chart (no wrap jumps).
FittedSphere kasa_fit(const std::vector<std::array<double, 3>>& q, int d,
                      const std::array<double, 3>& anchor, std::size_t npoints) {
    const int m = d + 1; // unknowns: center components and t = |c|^2 - R^2
    std::vector<double> A(static_cast<std::size_t>(m * m), 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(m), 0.0);
    for (const auto& p : q) {
        double row[4];
        for (int a = 0; a < d; ++a) row[a] = 2.0 * p[static_cast<std::size_t>(a)];
        row[d] = -1.0;
        double norm2 = 0.0;
        for (int a = 0; a < d; ++a) norm2 += p[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(a)];
        for (int r = 0; r < m; ++r) {
            for (int k = 0; k < m; ++k) A[static_cast<std::size_t>(r * m + k)] += row[r] * row[k];
            rhs[static_cast<std::size_t>(r)] += row[r] * norm2;
        }
    }
    FittedSphere out;
    out.points = npoints;
    if (!solve_linear(A, rhs, m)) return out;
    double c2 = 0.0;
    for (int a = 0; a < d; ++a) c2 += rhs[static_cast<std::size_t>(a)] * rhs[static_cast<std::size_t>(a)];
    const double r2 = c2 - rhs[static_cast<std::size_t>(d)];
    out.radius = r2 > 0.0 ? std::sqrt(r2) : 0.0;
    for (int a = 0; a < d; ++a)
        out.center[static_cast<std::size_t>(a)] =
            fold01(rhs[static_cast<std::size_t>(a)] + anchor[static_cast<std::size_t>(a)]);

    double ss = 0.0;
    for (const auto& p : q) {
        double dist = 0.0;
        for (int a = 0; a < d; ++a) {
            const double t = p[static_cast<std::size_t>(a)] - rhs[static_cast<std::size_t>(a)];
            dist += t * t;
        }
        const double dev = std::sqrt(dist) - out.radius;
        ss += dev * dev;
    }
    out.rms = std::sqrt(ss / static_cast<double>(q.size()));
    return out;
}

} // namespace

std::vector<FittedSphere> fit_interface_spheres(const ScalarField& phi, double link_factor) {
    const GridSpec& g = phi.grid;
    const auto pts = zero_crossings(phi);
    if (pts.empty()) return {};

    const double link = link_factor * g.h;
    const int nb = std::max(1, static_cast<int>(std::floor(1.0 / link)));
    auto bucket_of = [&](const std::array<double, 3>& p) {
        std::array<int, 3> b{0, 0, 0};
        for (int a = 0; a < g.d; ++a) {
            int i = static_cast<int>(std::floor(p[static_cast<std::size_t>(a)] * nb));
            i %= nb;
            if (i < 0) i += nb;
            b[static_cast<std::size_t>(a)] = i;
        }
        return b;
    };
    auto key_of = [&](const std::array<int, 3>& b) {
        return (static_cast<std::size_t>(b[0]) * static_cast<std::size_t>(nb) +
                static_cast<std::size_t>(b[1])) * static_cast<std::size_t>(nb) +
               static_cast<std::size_t>(b[2]);
    };

    std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < pts.size(); ++i) buckets[key_of(bucket_of(pts[i]))].push_back(i);

    UnionFind uf(pts.size());
    const double link2 = link * link;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto b = bucket_of(pts[i]);
        std::array<int, 3> nbr{0, 0, 0};
        const int r1 = (g.d > 1) ? 1 : 0;
        const int r2 = (g.d > 2) ? 1 : 0;
        for (int d0 = -1; d0 <= 1; ++d0)
            for (int d1 = -r1; d1 <= r1; ++d1)
                for (int d2 = -r2; d2 <= r2; ++d2) {
                    nbr[0] = (b[0] + d0 % nb + nb) % nb;
                    nbr[1] = (b[1] + d1 % nb + nb) % nb;
                    nbr[2] = (b[2] + d2 % nb + nb) % nb;
                    auto it = buckets.find(key_of(nbr));
                    if (it == buckets.end()) continue;
                    for (std::size_t j : it->second)
                        if (j > i && torus_dist2(pts[i].data(), pts[j].data(), g.d) <= link2)
                            uf.unite(i, j);
                }
    }

    std::unordered_map<std::size_t, std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < pts.size(); ++i) clusters[uf.find(i)].push_back(i);

    // Unfold each cluster into a single chart by walking the linking graph:
    // every point gets its parent's chart coordinate plus a min-image step,
    // which stays valid for clusters wider than half the torus.
    std::vector<std::array<double, 3>> chart(pts.size());
    std::vector<char> visited(pts.size(), 0);
    std::vector<std::size_t> queue;
    auto neighbors_of = [&](std::size_t i, auto&& emit) {
        const auto b = bucket_of(pts[i]);
        std::array<int, 3> nbr{0, 0, 0};
        const int r1 = (g.d > 1) ? 1 : 0;
        const int r2 = (g.d > 2) ? 1 : 0;
        for (int d0 = -1; d0 <= 1; ++d0)
            for (int d1 = -r1; d1 <= r1; ++d1)
                for (int d2 = -r2; d2 <= r2; ++d2) {
                    nbr[0] = (b[0] + d0 % nb + nb) % nb;
                    nbr[1] = (b[1] + d1 % nb + nb) % nb;
                    nbr[2] = (b[2] + d2 % nb + nb) % nb;
                    auto it = buckets.find(key_of(nbr));
                    if (it == buckets.end()) continue;
                    for (std::size_t j : it->second)
                        if (j != i && torus_dist2(pts[i].data(), pts[j].data(), g.d) <= link2)
                            emit(j);
                }
    };

    std::vector<FittedSphere> fits;
    for (auto& [root, members] : clusters) {
        if (members.size() < static_cast<std::size_t>(g.d + 2)) continue;
        const std::size_t seed_pt = members.front();
        const std::array<double, 3>& anchor = pts[seed_pt];
        queue.clear();
        queue.push_back(seed_pt);
        visited[seed_pt] = 1;
        chart[seed_pt] = {0.0, 0.0, 0.0};
        std::vector<std::array<double, 3>> q;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t i = queue[head];
            q.push_back(chart[i]);
            neighbors_of(i, [&](std::size_t j) {
                if (visited[j]) return;
                visited[j] = 1;
                for (int a = 0; a < g.d; ++a)
                    chart[j][static_cast<std::size_t>(a)] =
                        chart[i][static_cast<std::size_t>(a)] +
                        min_image(pts[j][static_cast<std::size_t>(a)] -
                                  pts[i][static_cast<std::size_t>(a)]);
                queue.push_back(j);
            });
        }
        fits.push_back(kasa_fit(q, g.d, anchor, members.size()));
    }
    std::sort(fits.begin(), fits.end(),
              [](const FittedSphere& a, const FittedSphere& b) { return a.points > b.points; });
    return fits;
}

} // namespace vpmcf
