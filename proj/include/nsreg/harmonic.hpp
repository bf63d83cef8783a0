#pragma once

#include <functional>
#include <map>

#include "inequalities.hpp"

namespace nsreg {

/// Gauss-Legendre nodes and weights on [a, b].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a = -1.0, double b = 1.0) {
    if (n < 1) throw ValidationError("Gauss-Legendre needs at least one node");
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1, p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1, p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        x[i] = 0.5 * (a + b) + 0.5 * (b - a) * z;
        w[i] = (b - a) / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

/// Polynomial in (x1, x2, x3) with exact coefficient algebra.
class Polynomial3 {
public:
    using Key = std::array<int, 3>;

    Polynomial3() = default;
    static Polynomial3 constant(double c) { return monomial(0, 0, 0, c); }
    static Polynomial3 monomial(int i, int j, int k, double c = 1.0) {
        Polynomial3 p;
        if (c != 0.0) p.c_[{i, j, k}] = c;
        return p;
    }

    const std::map<Key, double>& terms() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const {
        int d = -1;
        for (const auto& [k, v] : c_) d = std::max(d, k[0] + k[1] + k[2]);
        return d;
    }

    Polynomial3& operator+=(const Polynomial3& o) {
        for (const auto& [k, v] : o.c_) add(k, v);
        return *this;
    }
    Polynomial3& operator-=(const Polynomial3& o) {
        for (const auto& [k, v] : o.c_) add(k, -v);
        return *this;
    }
    friend Polynomial3 operator+(Polynomial3 a, const Polynomial3& b) { return a += b; }
    friend Polynomial3 operator-(Polynomial3 a, const Polynomial3& b) { return a -= b; }
    friend Polynomial3 operator*(double s, const Polynomial3& a) {
        Polynomial3 out;
        for (const auto& [k, v] : a.c_) out.add(k, s * v);
        return out;
    }
    friend Polynomial3 operator*(const Polynomial3& a, const Polynomial3& b) {
        Polynomial3 out;
        for (const auto& [ka, va] : a.c_)
            for (const auto& [kb, vb] : b.c_) out.add({ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}, va * vb);
        return out;
    }

    Polynomial3 derivative(int axis) const {
        Polynomial3 out;
        for (const auto& [k, v] : c_) {
            if (k[axis] == 0) continue;
            Key e = k;
            --e[axis];
            out.add(e, v * k[axis]);
        }
        return out;
    }
    Polynomial3 laplacian() const {
        Polynomial3 out;
        for (int a = 0; a < 3; ++a) out += derivative(a).derivative(a);
        return out;
    }
    /// Mean over x3 in [-1, 1]: a polynomial in (x1, x2).
    Polynomial3 vertical_mean() const {
        Polynomial3 out;
        for (const auto& [k, v] : c_)
            if (k[2] % 2 == 0) out.add({k[0], k[1], 0}, v / (k[2] + 1));
        return out;
    }
    /// Mean over (x1, x2) in [-1, 1]^2: a polynomial in x3.
    Polynomial3 horizontal_mean() const {
        Polynomial3 out;
        for (const auto& [k, v] : c_)
            if (k[0] % 2 == 0 && k[1] % 2 == 0) out.add({0, 0, k[2]}, v / ((k[0] + 1) * (k[1] + 1)));
        return out;
    }

    double operator()(const Vec3& x) const {
        double s = 0.0;
        for (const auto& [k, v] : c_) s += v * ipow(x[0], k[0]) * ipow(x[1], k[1]) * ipow(x[2], k[2]);
        return s;
    }
    std::string str() const {
        std::string s;
        for (const auto& [k, v] : c_) {
            s += (s.empty() ? "" : " + ") + format_double(v);
            for (int a = 0; a < 3; ++a)
                if (k[a] > 0) s += "*x" + std::to_string(a + 1) + (k[a] > 1 ? "^" + std::to_string(k[a]) : "");
        }
        return s.empty() ? "0" : s;
    }

private:
    static double ipow(double x, int e) {
        double r = 1.0;
        for (int i = 0; i < e; ++i) r *= x;
        return r;
    }
    void add(const Key& k, double v) {
        double& c = c_[k];
        c += v;
        if (c == 0.0) c_.erase(k);
    }
    std::map<Key, double> c_;
};

/// Harmonic part of a homogeneous polynomial of degree k in three variables:
/// h = sum_j c_j |x|^{2j} Lap^j p with c_j = -c_{j-1} / (2j (2k - 2j + 1)).
inline Polynomial3 harmonic_projection(const Polynomial3& p) {
    int k = p.degree();
    if (k < 0) return p;
    for (const auto& [e, v] : p.terms())
        if (e[0] + e[1] + e[2] != k) throw ValidationError("harmonic projection needs a homogeneous polynomial");
    Polynomial3 r2 = Polynomial3::monomial(2, 0, 0) + Polynomial3::monomial(0, 2, 0) + Polynomial3::monomial(0, 0, 2);
    Polynomial3 out = p, lap = p, pow = Polynomial3::constant(1.0);
    double c = 1.0;
    for (int j = 1; 2 * j <= k; ++j) {
        lap = lap.laplacian();
        pow = pow * r2;
        c = -c / (2.0 * j * (2.0 * k - 2.0 * j + 1.0));
        out += c * (pow * lap);
    }
    return out;
}

/// A function offered to the harmonic-function checks, with its gradient and
/// the cube means P3 f(x_h) and Ph f(x3).
struct HarmonicSample {
    std::string name;
    std::function<double(const Vec3&)> value;
    std::function<Vec3(const Vec3&)> gradient;
    std::function<double(const Vec3&)> vertical_mean;  // reads x1, x2
    std::function<double(double)> horizontal_mean;
    std::function<double(const Vec3&)> laplacian;      // empty: finite differences
    /// exact f - P3 f and f - Ph f when known
    std::function<double(const Vec3&)> minus_vertical, minus_horizontal;
};

inline HarmonicSample polynomial_sample(const std::string& name, const Polynomial3& p) {
    auto d1 = p.derivative(0), d2 = p.derivative(1), d3 = p.derivative(2);
    auto lap = p.laplacian();
    auto pv = p.vertical_mean(), ph = p.horizontal_mean();
    auto mv = p - pv, mh = p - ph;
    HarmonicSample s;
    s.name = name;
    s.value = [p](const Vec3& x) { return p(x); };
    s.gradient = [d1, d2, d3](const Vec3& x) { return Vec3{d1(x), d2(x), d3(x)}; };
    s.vertical_mean = [pv](const Vec3& x) { return pv({x[0], x[1], 0.0}); };
    s.horizontal_mean = [ph](double z) { return ph({0.0, 0.0, z}); };
    s.laplacian = [lap](const Vec3& x) { return lap(x); };
    s.minus_vertical = [mv](const Vec3& x) { return mv(x); };
    s.minus_horizontal = [mh](const Vec3& x) { return mh(x); };
    return s;
}

namespace detail {

/// Cube means by Gauss-Legendre quadrature for smooth non-polynomial samples.
inline void attach_quadrature_means(HarmonicSample& s, int order = 24) {
    auto [z, w] = gauss_legendre(order);
    auto f = s.value;
    s.vertical_mean = [f, z, w](const Vec3& x) {
        double m = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) m += w[i] * f({x[0], x[1], z[i]});
        return 0.5 * m;
    };
    s.horizontal_mean = [f, z, w](double x3) {
        double m = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i)
            for (std::size_t j = 0; j < z.size(); ++j) m += w[i] * w[j] * f({z[i], z[j], x3});
        return 0.25 * m;
    };
}

} // namespace detail

/// 1/|x - y| with the source y outside the cube [-1, 1]^3.
inline HarmonicSample point_source_sample(const Vec3& y) {
    if (std::max({std::abs(y[0]), std::abs(y[1]), std::abs(y[2])}) <= 1.0)
        throw ValidationError("point source must lie outside the cube");
    HarmonicSample s;
    s.name = "point_source(" + format_double(y[0]) + "," + format_double(y[1]) + "," + format_double(y[2]) + ")";
    s.value = [y](const Vec3& x) {
        double a = x[0] - y[0], b = x[1] - y[1], c = x[2] - y[2];
        return 1.0 / std::sqrt(a * a + b * b + c * c);
    };
    s.gradient = [y](const Vec3& x) {
        double a = x[0] - y[0], b = x[1] - y[1], c = x[2] - y[2];
        double r = std::sqrt(a * a + b * b + c * c), r3 = r * r * r;
        return Vec3{-a / r3, -b / r3, -c / r3};
    };
    detail::attach_quadrature_means(s);
    return s;
}

/// Poisson kernel of the ball of radius R > sqrt(3) with pole y on its sphere:
/// the harmonic extension of a point mass of boundary data.
inline HarmonicSample poisson_kernel_sample(const Vec3& dir, double R = 2.0) {
    double nd = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    if (!(nd > 0.0) || !(R > std::sqrt(3.0))) throw ValidationError("Poisson kernel needs a direction and R > sqrt(3)");
    Vec3 y{R * dir[0] / nd, R * dir[1] / nd, R * dir[2] / nd};
    HarmonicSample s;
    s.name = "poisson_kernel(" + format_double(y[0]) + "," + format_double(y[1]) + "," + format_double(y[2]) + ")";
    double k = 1.0 / (4.0 * std::numbers::pi * R);
    s.value = [y, R, k](const Vec3& x) {
        double a = x[0] - y[0], b = x[1] - y[1], c = x[2] - y[2];
        double d2 = a * a + b * b + c * c;
        return k * (R * R - (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])) / (d2 * std::sqrt(d2));
    };
    s.gradient = [y, R, k](const Vec3& x) {
        Vec3 d{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
        double d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2], d3 = d2 * std::sqrt(d2);
        double num = R * R - (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        Vec3 g;
        for (int a = 0; a < 3; ++a) g[a] = k * (-2.0 * x[a] / d3 - 3.0 * num * d[a] / (d3 * d2));
        return g;
    };
    detail::attach_quadrature_means(s);
    return s;
}

/// exp(c x3) cos(a x1) cos(b x2) with c = sqrt(a^2 + b^2).
inline HarmonicSample exponential_sample(double a, double b) {
    double c = std::sqrt(a * a + b * b);
    HarmonicSample s;
    s.name = "exponential(" + format_double(a) + "," + format_double(b) + ")";
    s.value = [a, b, c](const Vec3& x) { return std::exp(c * x[2]) * std::cos(a * x[0]) * std::cos(b * x[1]); };
    s.gradient = [a, b, c](const Vec3& x) {
        double e = std::exp(c * x[2]), ca = std::cos(a * x[0]), cb = std::cos(b * x[1]);
        return Vec3{-a * e * std::sin(a * x[0]) * cb, -b * e * ca * std::sin(b * x[1]), c * e * ca * cb};
    };
    detail::attach_quadrature_means(s);
    return s;
}

/// Harmonic parts of every monomial of degree <= max_degree.
inline std::vector<HarmonicSample> harmonic_library(int max_degree = 6) {
    if (max_degree < 0) throw ValidationError("library degree must be >= 0");
    std::vector<HarmonicSample> out;
    for (int d = 0; d <= max_degree; ++d)
        for (int i = d; i >= 0; --i)
            for (int j = d - i; j >= 0; --j) {
                int k = d - i - j;
                auto h = harmonic_projection(Polynomial3::monomial(i, j, k));
                out.push_back(polynomial_sample(
                    "h(x1^" + std::to_string(i) + "*x2^" + std::to_string(j) + "*x3^" + std::to_string(k) + ")", h));
            }
    return out;
}

/// Largest |Lap f| on a lattice of the cube against tol * max|f|.
inline double harmonicity_defect(const HarmonicSample& s, int points = 9) {
    double worst = 0.0, scale = 0.0;
    const double step = 1e-3;
    for (int i = 0; i < points; ++i)
        for (int j = 0; j < points; ++j)
            for (int k = 0; k < points; ++k) {
                Vec3 x{-1.0 + 2.0 * i / (points - 1), -1.0 + 2.0 * j / (points - 1), -1.0 + 2.0 * k / (points - 1)};
                double f = s.value(x);
                scale = std::max(scale, std::abs(f));
                double lap = 0.0;
                if (s.laplacian) {
                    lap = s.laplacian(x);
                } else {
                    for (int a = 0; a < 3; ++a) {
                        Vec3 p1 = x, p2 = x, m1 = x, m2 = x;
                        p1[a] += step, p2[a] += 2 * step, m1[a] -= step, m2[a] -= 2 * step;
                        lap += (-s.value(p2) + 16 * s.value(p1) - 30 * f + 16 * s.value(m1) - s.value(m2)) /
                               (12 * step * step);
                    }
                }
                worst = std::max(worst, std::abs(lap));
            }
    return scale > 0.0 ? worst / scale : worst;
}

/// sup over B_{1/2} of |d3 f| and |grad_h f|: a lattice of spacing 1/(4N)
/// plus a dense set on the sphere of radius 1/2.
inline std::pair<double, double> harmonic_sups(const HarmonicSample& s, int resolution) {
    double s3 = 0.0, sh = 0.0;
    auto take = [&](const Vec3& x) {
        auto g = s.gradient(x);
        s3 = std::max(s3, std::abs(g[2]));
        sh = std::max(sh, std::hypot(g[0], g[1]));
    };
    int m = 4 * resolution;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j)
            for (int k = 0; k <= m; ++k) {
                Vec3 x{-0.5 + double(i) / m, -0.5 + double(j) / m, -0.5 + double(k) / m};
                if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= 0.25 + 1e-15) take(x);
            }
    int nt = 4 * resolution, np = 8 * resolution;
    for (int i = 0; i <= nt; ++i) {
        double th = std::numbers::pi * i / nt;
        for (int j = 0; j < np; ++j) {
            double ph = 2.0 * std::numbers::pi * j / np;
            take({0.5 * std::sin(th) * std::cos(ph), 0.5 * std::sin(th) * std::sin(ph), 0.5 * std::cos(th)});
        }
    }
    return {s3, sh};
}

/// int_{B_1} |f - P3 f| and int_{B_1} |f - Ph f| in spherical coordinates:
/// Gauss-Legendre in r, in cos(theta) on each hemisphere and in phi on each quadrant.
inline std::pair<double, double> harmonic_integrals(const HarmonicSample& s, int resolution) {
    auto [rn, rw] = gauss_legendre(resolution, 0.0, 1.0);
    auto [cn, cw] = gauss_legendre(resolution);
    auto [pn, pw] = gauss_legendre(resolution);
    double i3 = 0.0, ih = 0.0;
    for (int hemi = 0; hemi < 2; ++hemi)
        for (std::size_t a = 0; a < cn.size(); ++a) {
            double ct = 0.5 * cn[a] + (hemi == 0 ? -0.5 : 0.5), wc = 0.5 * cw[a];
            double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int quad = 0; quad < 4; ++quad)
                for (std::size_t b = 0; b < pn.size(); ++b) {
                    double ph = 0.25 * std::numbers::pi * (pn[b] + 1.0 + 2.0 * quad), wp = 0.25 * std::numbers::pi * pw[b];
                    for (std::size_t c = 0; c < rn.size(); ++c) {
                        double r = rn[c];
                        Vec3 x{r * st * std::cos(ph), r * st * std::sin(ph), r * ct};
                        double w = rw[c] * r * r * wc * wp;
                        double dv = s.minus_vertical ? s.minus_vertical(x) : s.value(x) - s.vertical_mean(x);
                        double dh = s.minus_horizontal ? s.minus_horizontal(x) : s.value(x) - s.horizontal_mean(x[2]);
                        i3 += w * std::abs(dv);
                        ih += w * std::abs(dh);
                    }
                }
        }
    return {i3, ih};
}

/// Both checks of the harmonic-function lemma for one sample.
inline std::pair<InequalityCheck, InequalityCheck> check_harmonic_lemma(const HarmonicSample& s, int resolution = 16,
                                                                        double tol = 1e-8) {
    if (resolution < 2) throw ValidationError("harmonic checks need resolution >= 2");
    double defect = harmonicity_defect(s);
    if (!(defect <= tol)) throw ValidationError(s.name + " is not harmonic to tolerance (defect " + format_double(defect) + ")");
    auto [s3, sh] = harmonic_sups(s, resolution);
    auto [i3, ih] = harmonic_integrals(s, resolution);
    std::map<std::string, std::string> meta{{"sample", s.name}, {"resolution", std::to_string(resolution)}};
    return {make_check("harmonic_d3", s3, {{"int_f_minus_P3f", i3}}, meta),
            make_check("harmonic_gradh", sh, {{"int_f_minus_Phf", ih}}, meta)};
}

} // namespace nsreg
