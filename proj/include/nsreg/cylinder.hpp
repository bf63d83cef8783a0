#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "exponents.hpp"
#include "field.hpp"
#include "spectral.hpp"

namespace nsreg {

enum class Geometry { ball, vertical };

inline std::string to_string(Geometry g) { return g == Geometry::ball ? "ball" : "vertical"; }
inline Geometry geometry_from_string(const std::string& s) {
    if (s == "ball") return Geometry::ball;
    if (s == "vertical" || s == "cylinder") return Geometry::vertical;
    throw ValidationError("unknown geometry '" + s + "'");
}

/// Q_r(z0) = B_r(x0) x (t0 - r^2, t0) or the vertical cylinder
/// {|x_h - x0_h| < r} x (one x3 period) x (t0 - r^2, t0).
struct CylinderSpec {
    Vec3 x0{0.0, 0.0, 0.0};
    double t0 = 0.0;
    double r = 1.0;
    Geometry geometry = Geometry::ball;
    /// Vertical cylinders cover one x3 period of the box instead of the whole line.
    bool truncated_x3 = true;
};

enum class QuadratureMode { nodes, spectral };

/// How region integrals are discretised.
///   nodes:    grid nodes with partial-volume weights; radii below
///             min_radius_cells * spacing are rejected.
///   spectral: same as nodes when the grid already puts points_per_radius
///             nodes across a radius, otherwise a local lattice of spacing
///             r / points_per_radius carrying the trigonometric interpolant.
struct QuadratureOptions {
    QuadratureMode mode = QuadratureMode::nodes;
    double min_radius_cells = 8.0;
    int points_per_radius = 8;

    static QuadratureOptions spectral(double floor_cells = 1.0 / 4096.0, int points = 8) {
        return {QuadratureMode::spectral, floor_cells, points};
    }
    double floor(const Grid3& g) const { return min_radius_cells * g.spacing(); }
};

inline void check_radius(const Grid3& g, double r, const QuadratureOptions& opt) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("radius must be positive");
    if (r > 0.5 * g.box_length * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "radius " << r << " exceeds half the box length";
        throw ValidationError(os.str());
    }
    if (r < opt.floor(g) * (1.0 - 1e-12)) {
        std::ostringstream os;
        os.precision(17);
        os << "radius " << r << " is below the resolution floor " << opt.floor(g);
        throw ResolutionError(os.str(), r);
    }
}

namespace detail {

inline double ramp(double d, double c, double h) { return std::clamp((c - d) / h + 0.5, 0.0, 1.0); }

/// Centre radius of the ramp whose weighted volume equals the ball volume: c^3 + c h^2/4 = r^3.
inline double ball_ramp_radius(double r, double h) {
    double c = r;
    for (int it = 0; it < 60; ++it) {
        double f = c * c * c + 0.25 * c * h * h - r * r * r;
        double df = 3.0 * c * c + 0.25 * h * h;
        double next = c - f / df;
        if (std::abs(next - c) <= 1e-16 * r) {
            c = next;
            break;
        }
        c = next;
    }
    return c;
}

/// Same for a disc: c^2 + h^2/12 = r^2.
inline double disc_ramp_radius(double r, double h) { return std::sqrt(std::max(r * r - h * h / 12.0, 0.25 * r * r)); }

} // namespace detail

/// Sample points of a cylinder cross-section with their quadrature weights.
struct SpatialStencil {
    bool refined = false;
    std::vector<std::size_t> nodes;          // grid path
    std::vector<double> xs, ys, zs;          // refined path: tensor axes
    std::vector<std::size_t> lattice_index;  // refined path
    std::vector<double> weight;              // volume weight
    std::vector<char> inside;                // centre inside the region (sup norms)
    std::vector<int> slice;                  // x3 slice id, vertical geometry
    int num_slices = 1;
    std::vector<double> disc_weight;         // planar disc through x0, ball geometry

    std::size_t size() const { return weight.size(); }
};

inline bool use_refined(const Grid3& g, double r, const QuadratureOptions& opt) {
    return opt.mode == QuadratureMode::spectral && r < opt.points_per_radius * g.spacing() * (1.0 - 1e-12);
}

inline SpatialStencil build_stencil(const Grid3& g, const Vec3& x0, double r, Geometry geom,
                                    const QuadratureOptions& opt) {
    check_radius(g, r, opt);
    SpatialStencil st;
    st.refined = use_refined(g, r, opt);
    const double h = st.refined ? r / opt.points_per_radius : g.spacing();
    const double c3 = detail::ball_ramp_radius(r, h);
    const double c2 = detail::disc_ramp_radius(r, h);
    const int reach = int(std::ceil(r / h)) + 2;

    auto add = [&](double w, bool in, int slice, double dw) {
        st.weight.push_back(w);
        st.inside.push_back(in ? 1 : 0);
        st.slice.push_back(slice);
        st.disc_weight.push_back(dw);
    };

    if (st.refined) {
        const int na = 2 * reach + 1;
        for (int j = -reach; j <= reach; ++j) {
            st.xs.push_back(x0[0] + j * h);
            st.ys.push_back(x0[1] + j * h);
        }
        if (geom == Geometry::ball) {
            for (int j = -reach; j <= reach; ++j) st.zs.push_back(x0[2] + j * h);
            for (int k = -reach; k <= reach; ++k)
                for (int j = -reach; j <= reach; ++j)
                    for (int i = -reach; i <= reach; ++i) {
                        double d = h * std::sqrt(double(i * i + j * j + k * k));
                        double dh = h * std::sqrt(double(i * i + j * j));
                        double w = detail::ramp(d, c3, h);
                        double dw = k == 0 ? detail::ramp(dh, c2, h) * h * h : 0.0;
                        if (w <= 0.0 && d > r && dw <= 0.0) continue;
                        st.lattice_index.push_back(std::size_t(i + reach) +
                                                   std::size_t(na) * (std::size_t(j + reach) + std::size_t(na) * std::size_t(k + reach)));
                        add(w * h * h * h, d <= r, 0, dw);
                    }
        } else {
            for (int k = 0; k < g.n; ++k) st.zs.push_back(g.coordinate(k));
            st.num_slices = g.n;
            for (int k = 0; k < g.n; ++k)
                for (int j = -reach; j <= reach; ++j)
                    for (int i = -reach; i <= reach; ++i) {
                        double dh = h * std::sqrt(double(i * i + j * j));
                        double w = detail::ramp(dh, c2, h);
                        if (w <= 0.0 && dh > r) continue;
                        st.lattice_index.push_back(std::size_t(i + reach) +
                                                   std::size_t(na) * (std::size_t(j + reach) + std::size_t(na) * std::size_t(k)));
                        add(w * h * h * g.spacing(), dh <= r, k, 0.0);
                    }
        }
        return st;
    }

    // grid nodes
    auto centre_index = [&](double x) { return int(std::lround(x / h)); };
    const int ic = centre_index(x0[0]), jc = centre_index(x0[1]), kc = centre_index(x0[2]);
    auto disp = [&](int i, double x) { return g.periodic_delta(g.coordinate(g.wrap(i)) - x); };
    if (geom == Geometry::ball) {
        // planar disc through x0: one node plane, or linear interpolation between two
        double dz0 = g.periodic_delta(x0[2]) / h;
        double fl = std::floor(dz0);
        double alpha = dz0 - fl;
        if (std::abs(alpha) < 1e-9 || std::abs(alpha - 1.0) < 1e-9) alpha = 0.0, fl = std::round(dz0);
        int klo = int(fl);
        for (int k = kc - reach; k <= kc + reach; ++k)
            for (int j = jc - reach; j <= jc + reach; ++j)
                for (int i = ic - reach; i <= ic + reach; ++i) {
                    double dx = disp(i, x0[0]), dy = disp(j, x0[1]), dz = disp(k, x0[2]);
                    double d = std::sqrt(dx * dx + dy * dy + dz * dz);
                    double dh = std::sqrt(dx * dx + dy * dy);
                    double w = detail::ramp(d, c3, h);
                    int kw = g.wrap(k);
                    double pw = kw == g.wrap(klo) ? 1.0 - alpha : (alpha > 0.0 && kw == g.wrap(klo + 1)) ? alpha : 0.0;
                    double dw = pw > 0.0 ? pw * detail::ramp(dh, c2, h) * h * h : 0.0;
                    if (w <= 0.0 && d > r && dw <= 0.0) continue;
                    st.nodes.push_back(g.index(g.wrap(i), g.wrap(j), kw));
                    add(w * h * h * h, d <= r, 0, dw);
                }
    } else {
        st.num_slices = g.n;
        for (int k = 0; k < g.n; ++k)
            for (int j = jc - reach; j <= jc + reach; ++j)
                for (int i = ic - reach; i <= ic + reach; ++i) {
                    double dx = disp(i, x0[0]), dy = disp(j, x0[1]);
                    double dh = std::sqrt(dx * dx + dy * dy);
                    double w = detail::ramp(dh, c2, h);
                    if (w <= 0.0 && dh > r) continue;
                    st.nodes.push_back(g.index(g.wrap(i), g.wrap(j), k));
                    add(w * h * h * h, dh <= r, k, 0.0);
                }
    }
    return st;
}

/// Values of every component of snapshot i at the stencil points: [component][point].
inline std::vector<std::vector<double>> gather(const SpaceTimeField& f, std::size_t i, const SpatialStencil& st) {
    std::vector<std::vector<double>> out(f.num_components(), std::vector<double>(st.size()));
    for (std::size_t c = 0; c < f.num_components(); ++c) {
        if (!st.refined) {
            const auto& l = f[i].component(c);
            for (std::size_t p = 0; p < st.size(); ++p) out[c][p] = l[st.nodes[p]];
        } else {
            auto v = interpolate_tensor(f.grid(), *f.spectrum(i, c), st.xs, st.ys, st.zs);
            for (std::size_t p = 0; p < st.size(); ++p) out[c][p] = v[st.lattice_index[p]];
        }
    }
    return out;
}

/// Snapshots covering [t0 - r^2, t0]. When the lower end falls between two
/// samples the integrand there is interpolated linearly from its neighbours.
struct TimeWindow {
    std::vector<std::size_t> samples;  // ascending, ends at t0
    long below = -1;                   // sample just under t0 - r^2, if interpolation is needed
    double alpha = 0.0;                // weight of samples[0] in the interpolated endpoint
    double t_lo = 0.0;
    double t0 = 0.0;

    /// All snapshot indices whose values are needed, below first.
    std::vector<std::size_t> needed() const {
        std::vector<std::size_t> v;
        if (below >= 0) v.push_back(std::size_t(below));
        v.insert(v.end(), samples.begin(), samples.end());
        return v;
    }

    /// Trapezoid integral of a function given at needed() indices (same order).
    double integrate(const std::vector<double>& vals) const {
        std::size_t off = below >= 0 ? 1 : 0;
        std::vector<double> t, y;
        if (below >= 0) {
            t.push_back(t_lo);
            y.push_back((1.0 - alpha) * vals[0] + alpha * vals[1]);
        }
        for (std::size_t k = 0; k < samples.size(); ++k) {
            t.push_back(sample_times[k]);
            y.push_back(vals[k + off]);
        }
        double s = 0.0;
        for (std::size_t k = 1; k < t.size(); ++k) s += 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
        return s;
    }
    /// Largest value over the samples inside the window.
    double sup(const std::vector<double>& vals) const {
        std::size_t off = below >= 0 ? 1 : 0;
        double m = 0.0;
        for (std::size_t k = 0; k < samples.size(); ++k) m = std::max(m, vals[k + off]);
        return m;
    }

    std::vector<double> sample_times;
};

inline TimeWindow build_window(const SpaceTimeField& f, double t0, double r) {
    TimeWindow w;
    w.t0 = t0;
    w.t_lo = t0 - r * r;
    long top = f.find_time(t0);
    if (top < 0) throw ValidationError("cylinder top time " + std::to_string(t0) + " is not a snapshot time");
    double tol = f.size() > 1 ? 1e-9 * f.dt() : 0.0;
    if (w.t_lo < f.start_time() - tol)
        throw ValidationError("cylinder leaves the time range: needs t >= " + std::to_string(w.t_lo) +
                              ", field starts at " + std::to_string(f.start_time()));
    long first = top;
    while (first > 0 && f[std::size_t(first - 1)].time >= w.t_lo - tol) --first;
    for (long i = first; i <= top; ++i) {
        w.samples.push_back(std::size_t(i));
        w.sample_times.push_back(f[std::size_t(i)].time);
    }
    double t_first = f[std::size_t(first)].time;
    if (t_first > w.t_lo + tol) {
        w.below = first - 1;
        w.alpha = (w.t_lo - f[std::size_t(first - 1)].time) / (t_first - f[std::size_t(first - 1)].time);
    } else {
        w.sample_times.front() = w.t_lo;
    }
    return w;
}

enum class MeanMode { none, ball_mean, disc_mean, horizontal_slice };

inline std::string to_string(MeanMode m) {
    switch (m) {
    case MeanMode::none: return "none";
    case MeanMode::ball_mean: return "ball_mean";
    case MeanMode::disc_mean: return "disc_mean";
    case MeanMode::horizontal_slice: return "horizontal_slice";
    }
    return "none";
}
inline MeanMode mean_mode_from_string(const std::string& s) {
    for (auto m : {MeanMode::none, MeanMode::ball_mean, MeanMode::disc_mean, MeanMode::horizontal_slice})
        if (to_string(m) == s) return m;
    throw ValidationError("unknown mean mode '" + s + "'");
}

/// Region means of each component at one time: per slice for the
/// horizontal modes of a vertical cylinder, else one value. [component][slice]
inline std::vector<std::vector<double>> region_means(const std::vector<std::vector<double>>& vals,
                                                     const SpatialStencil& st, Geometry geom, MeanMode mode) {
    std::vector<std::vector<double>> out(vals.size());
    if (mode == MeanMode::horizontal_slice && geom != Geometry::vertical)
        throw ValidationError("horizontal_slice mean requires the vertical geometry");
    bool sliced = geom == Geometry::vertical && (mode == MeanMode::disc_mean || mode == MeanMode::horizontal_slice);
    bool disc = geom == Geometry::ball && mode == MeanMode::disc_mean;
    for (std::size_t c = 0; c < vals.size(); ++c) {
        if (mode == MeanMode::none) {
            out[c].assign(1, 0.0);
            continue;
        }
        int ns = sliced ? st.num_slices : 1;
        std::vector<double> num(ns, 0.0), den(ns, 0.0);
        for (std::size_t p = 0; p < st.size(); ++p) {
            double w = disc ? st.disc_weight[p] : st.weight[p];
            int s = sliced ? st.slice[p] : 0;
            num[s] += w * vals[c][p];
            den[s] += w;
        }
        out[c].resize(ns);
        for (int s = 0; s < ns; ++s) out[c][s] = den[s] > 0.0 ? num[s] / den[s] : 0.0;
    }
    return out;
}

/// A field sampled on one cylinder: every needed time level, every point.
class CylinderSample {
public:
    CylinderSample(const SpaceTimeField& f, const CylinderSpec& cyl, const QuadratureOptions& opt = {})
        : cyl_(cyl), window_(build_window(f, cyl.t0, cyl.r)),
          stencil_(build_stencil(f.grid(), cyl.x0, cyl.r, cyl.geometry, opt)) {
        for (auto i : window_.needed()) values_.push_back(gather(f, i, stencil_));
    }

    const TimeWindow& window() const { return window_; }
    const SpatialStencil& stencil() const { return stencil_; }
    const CylinderSpec& cylinder() const { return cyl_; }
    std::size_t levels() const { return values_.size(); }

    /// |f - mean| at every point of level k.
    std::vector<double> magnitudes(std::size_t k, MeanMode mode) const {
        const auto& v = values_[k];
        auto m = region_means(v, stencil_, cyl_.geometry, mode);
        std::vector<double> out(stencil_.size(), 0.0);
        for (std::size_t c = 0; c < v.size(); ++c) {
            bool sliced = m[c].size() > 1;
            for (std::size_t p = 0; p < stencil_.size(); ++p) {
                double d = v[c][p] - m[c][sliced ? std::size_t(stencil_.slice[p]) : 0];
                out[p] += d * d;
            }
        }
        for (double& x : out) x = std::sqrt(x);
        return out;
    }

    /// Spatial L^p norm at level k (to the power p for finite p when raw is set).
    double space_norm(std::size_t k, const Exponent& p, MeanMode mode, bool raw = false) const {
        auto mag = magnitudes(k, mode);
        if (p.is_infinite()) {
            double m = 0.0;
            for (std::size_t i = 0; i < mag.size(); ++i)
                if (stencil_.inside[i]) m = std::max(m, mag[i]);
            return m;
        }
        double pv = p.value(), s = 0.0;
        for (std::size_t i = 0; i < mag.size(); ++i)
            if (stencil_.weight[i] > 0.0) s += stencil_.weight[i] * (pv == 2.0 ? mag[i] * mag[i] : std::pow(mag[i], pv));
        return raw ? s : std::pow(s, 1.0 / pv);
    }

    /// ||f - mean||_{L^q_t L^p_x}.
    double mixed_norm(const ExponentPair& pq, MeanMode mode = MeanMode::none) const {
        std::vector<double> sp;
        for (std::size_t k = 0; k < levels(); ++k) sp.push_back(space_norm(k, pq.p, mode));
        if (pq.q.is_infinite()) return window_.sup(sp);
        double qv = pq.q.value();
        for (double& s : sp) s = std::pow(s, qv);
        return std::pow(std::max(window_.integrate(sp), 0.0), 1.0 / qv);
    }

    /// sup_t int |f|^2 and int int |f|^2.
    double sup_square() const {
        std::vector<double> sp;
        for (std::size_t k = 0; k < levels(); ++k) sp.push_back(space_norm(k, Exponent::of(2), MeanMode::none, true));
        return window_.sup(sp);
    }
    double integral_square() const {
        std::vector<double> sp;
        for (std::size_t k = 0; k < levels(); ++k) sp.push_back(space_norm(k, Exponent::of(2), MeanMode::none, true));
        return window_.integrate(sp);
    }

private:
    CylinderSpec cyl_;
    TimeWindow window_;
    SpatialStencil stencil_;
    std::vector<std::vector<std::vector<double>>> values_;
};

} // namespace nsreg
