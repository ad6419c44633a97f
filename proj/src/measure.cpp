#include "pvc/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pvc {

double polyval(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (size_t i = c.size(); i-- > 0;) v = v * t + c[i];
    return v;
}

namespace {

// Natural cubic spline second derivatives.
std::vector<double> spline_setup(const std::vector<double>& x, const std::vector<double>& y) {
    size_t n = x.size();
    std::vector<double> y2(n, 0.0), u(n, 0.0);
    if (n < 3) return y2;
    for (size_t i = 1; i + 1 < n; ++i) {
        double sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
        double p = sig * y2[i - 1] + 2.0;
        y2[i] = (sig - 1.0) / p;
        double dy = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        u[i] = (6.0 * dy / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
    }
    for (size_t i = n - 1; i-- > 0;) y2[i] = y2[i] * y2[i + 1] + u[i];
    return y2;
}

double spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& y2, double t) {
    size_t n = x.size();
    if (n == 0) return 0.0;
    if (n == 1) return y[0];
    size_t hi = std::upper_bound(x.begin(), x.end(), t) - x.begin();
    if (hi == 0) hi = 1;
    if (hi >= n) hi = n - 1;
    size_t lo = hi - 1;
    double h = x[hi] - x[lo];
    double A = (x[hi] - t) / h, B = (t - x[lo]) / h;
    return A * y[lo] + B * y[hi] +
           ((A * A * A - A) * y2[lo] + (B * B * B - B) * y2[hi]) * h * h / 6.0;
}

} // namespace

// ---------------------------------------------------------------------------
// IntervalDensity

IntervalDensity IntervalDensity::arcsine(double a, double b) {
    if (!(a < b)) throw InputError("interval: a < b required");
    IntervalDensity d;
    d.a = a;
    d.b = b;
    d.family = IntervalFamily::Arcsine;
    d.alpha = d.beta = -0.5;
    return d;
}

IntervalDensity IntervalDensity::semicircle(double a, double b) {
    if (!(a < b)) throw InputError("interval: a < b required");
    IntervalDensity d;
    d.a = a;
    d.b = b;
    d.family = IntervalFamily::Semicircle;
    d.alpha = d.beta = 0.5;
    return d;
}

IntervalDensity IntervalDensity::uniform(double a, double b) {
    if (!(a < b)) throw InputError("interval: a < b required");
    IntervalDensity d;
    d.a = a;
    d.b = b;
    d.family = IntervalFamily::Uniform;
    return d;
}

IntervalDensity IntervalDensity::jacobi_poly(double a, double b, double alpha, double beta,
                                             std::vector<double> poly, double scale) {
    if (!(a < b)) throw InputError("interval: a < b required");
    if (alpha <= -1.0 || beta <= -1.0)
        throw InputError("interval: endpoint exponents must be > -1");
    IntervalDensity d;
    d.a = a;
    d.b = b;
    d.family = IntervalFamily::JacobiPoly;
    d.alpha = alpha;
    d.beta = beta;
    d.poly = std::move(poly);
    if (d.poly.empty()) d.poly = {1.0};
    d.scale = scale;
    return d;
}

IntervalDensity IntervalDensity::tabulated(double a, double b, std::vector<double> xs,
                                           std::vector<double> ys, double alpha, double beta) {
    if (!(a < b)) throw InputError("interval: a < b required");
    if (alpha <= -1.0 || beta <= -1.0)
        throw InputError("interval: endpoint exponents must be > -1");
    if (xs.size() != ys.size() || xs.size() < 2)
        throw InputError("tabulated interval: need >= 2 samples with matching lengths");
    for (size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw InputError("tabulated interval: x grid must increase");
    for (double v : ys)
        if (!std::isfinite(v)) throw InputError("tabulated interval: non-finite sample");
    IntervalDensity d;
    d.a = a;
    d.b = b;
    d.family = IntervalFamily::Tabulated;
    d.alpha = alpha;
    d.beta = beta;
    d.tab_x = std::move(xs);
    d.tab_y = std::move(ys);
    d.tab_y2 = spline_setup(d.tab_x, d.tab_y);
    return d;
}

IntervalDensity IntervalDensity::equilibrium(std::vector<std::pair<double, double>> system,
                                             int index, std::vector<double> poly, double scale) {
    if (index < 0 || index >= static_cast<int>(system.size()))
        throw InputError("equilibrium interval: index out of range");
    IntervalDensity d;
    d.a = system[index].first;
    d.b = system[index].second;
    if (!(d.a < d.b)) throw InputError("interval: a < b required");
    d.family = IntervalFamily::Equilibrium;
    d.alpha = d.beta = -0.5;
    d.system = std::move(system);
    d.index = index;
    d.poly = std::move(poly);
    if (d.poly.empty()) d.poly = {1.0};
    d.scale = scale;
    return d;
}

double IntervalDensity::smooth(double t) const {
    switch (family) {
        case IntervalFamily::Arcsine:
            return scale / kPi;
        case IntervalFamily::Semicircle:
            return scale / kPi;
        case IntervalFamily::Uniform:
            return scale / (b - a);
        case IntervalFamily::JacobiPoly:
            return scale * polyval(poly, t);
        case IntervalFamily::Tabulated:
            return scale * spline_eval(tab_x, tab_y, tab_y2, t);
        case IntervalFamily::Equilibrium: {
            double prod = 1.0;
            for (int k = 0; k < static_cast<int>(system.size()); ++k) {
                if (k == index) continue;
                prod *= std::abs(t - system[k].first) * std::abs(t - system[k].second);
            }
            return scale * std::abs(polyval(poly, t)) / (kPi * std::sqrt(prod));
        }
    }
    return 0.0;
}

double IntervalDensity::smooth_deriv(double t) const {
    double h = 1e-6 * (b - a);
    double lo = std::max(a, t - h), hi = std::min(b, t + h);
    return (smooth(hi) - smooth(lo)) / (hi - lo);
}

double IntervalDensity::weight_only(double t) const {
    double w = 1.0;
    if (alpha != 0.0) w *= std::pow(std::max(t - a, 0.0), alpha);
    if (beta != 0.0) w *= std::pow(std::max(b - t, 0.0), beta);
    return w;
}

double IntervalDensity::density(double t) const { return smooth(t) * weight_only(t); }

double IntervalDensity::mass(double lo, double hi) const {
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    if (!(hi > lo)) return 0.0;
    double m = 0.5 * (a + b), rho = 0.5 * (b - a);
    switch (family) {
        case IntervalFamily::Arcsine: {
            auto u = [&](double t) { return std::clamp((t - m) / rho, -1.0, 1.0); };
            return scale / kPi * (std::asin(u(hi)) - std::asin(u(lo)));
        }
        case IntervalFamily::Uniform:
            return scale * (hi - lo) / (b - a);
        case IntervalFamily::Semicircle: {
            auto anti = [&](double t) {
                double phi = std::asin(std::clamp((t - m) / rho, -1.0, 1.0));
                return rho * rho * (0.5 * phi + 0.25 * std::sin(2.0 * phi));
            };
            return scale / kPi * (anti(hi) - anti(lo));
        }
        default:
            return integrate_interval_piece(*this, lo, hi, [](double) { return Cplx(1.0, 0.0); })
                .real();
    }
}

double IntervalDensity::variation() const {
    switch (family) {
        case IntervalFamily::Arcsine:
        case IntervalFamily::Semicircle:
        case IntervalFamily::Uniform:
        case IntervalFamily::Equilibrium:
            return std::abs(mass());
        default: {
            auto sgn = [this](double t) {
                return Cplx(smooth(t) >= 0.0 ? 1.0 : -1.0, 0.0);
            };
            return integrate_interval_piece(*this, a, b, sgn).real();
        }
    }
}

// ---------------------------------------------------------------------------
// CurveDensity

CurveDensity CurveDensity::circle(Cplx center, double radius, CurveDensityKind kind, Cplx value,
                                  int samples) {
    if (!(radius > 0.0)) throw InputError("circle: radius must be positive");
    CurveDensity c;
    c.center = center;
    c.cosc = {Cplx(radius, 0.0)};
    c.sinc = {Cplx(0.0, radius)};
    c.dens_kind = kind;
    c.dens_value = value;
    c.samples = samples;
    c.finalize();
    return c;
}

CurveDensity CurveDensity::trig(Cplx center, std::vector<Cplx> cosc, std::vector<Cplx> sinc,
                                CurveDensityKind kind, Cplx value, int samples) {
    CurveDensity c;
    c.center = center;
    c.cosc = std::move(cosc);
    c.sinc = std::move(sinc);
    c.dens_kind = kind;
    c.dens_value = value;
    c.samples = samples;
    c.finalize();
    return c;
}

Cplx CurveDensity::point(double t) const {
    Cplx z = center;
    for (size_t k = 0; k < cosc.size() || k < sinc.size(); ++k) {
        double kt = (k + 1.0) * t;
        if (k < cosc.size()) z += cosc[k] * std::cos(kt);
        if (k < sinc.size()) z += sinc[k] * std::sin(kt);
    }
    return z;
}

Cplx CurveDensity::tangent(double t) const {
    Cplx z{0.0, 0.0};
    for (size_t k = 0; k < cosc.size() || k < sinc.size(); ++k) {
        double kk = k + 1.0, kt = kk * t;
        if (k < cosc.size()) z += cosc[k] * (-kk * std::sin(kt));
        if (k < sinc.size()) z += sinc[k] * (kk * std::cos(kt));
    }
    return z;
}

Cplx CurveDensity::density_at(Cplx zeta) const {
    switch (dens_kind) {
        case CurveDensityKind::Unit:
            return dens_value;
        case CurveDensityKind::Radical2:
            return 2.0 * sqrt_zz_m1(zeta);
        case CurveDensityKind::Custom:
            return dens_fn ? dens_fn(zeta) : Cplx(0.0, 0.0);
    }
    return {0.0, 0.0};
}

namespace {
bool segments_cross(Cplx p1, Cplx p2, Cplx q1, Cplx q2) {
    auto cross = [](Cplx u, Cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
    double d1 = cross(p2 - p1, q1 - p1);
    double d2 = cross(p2 - p1, q2 - p1);
    double d3 = cross(q2 - q1, p1 - q1);
    double d4 = cross(q2 - q1, p2 - q1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}
} // namespace

void CurveDensity::finalize() {
    if (samples < 16) samples = 16;
    if (cosc.empty() && sinc.empty()) throw InputError("curve: empty coefficient list");
    int n = samples;
    std::vector<Cplx> pts(n);
    double max_speed = 0.0, min_speed = std::numeric_limits<double>::max();
    for (int i = 0; i < n; ++i) {
        double t = 2.0 * kPi * i / n;
        pts[i] = point(t);
        double s = std::abs(tangent(t));
        max_speed = std::max(max_speed, s);
        min_speed = std::min(min_speed, s);
    }
    if (min_speed < 1e-9 * max_speed)
        throw InputError("curve: tangent vanishes at sample resolution");
    // Simplicity at sample resolution.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]))
                throw InputError("curve: self-intersection detected at sample resolution");
        }
    }
    double area2 = 0.0;
    for (int i = 0; i < n; ++i) {
        Cplx p = pts[i], q = pts[(i + 1) % n];
        area2 += p.real() * q.imag() - p.imag() * q.real();
    }
    orientation = area2 >= 0.0 ? +1 : -1;
    // Arc-length table and point cache at 4x parameter resolution.
    int m = 4 * n;
    arc_t.assign(m + 1, 0.0);
    arc_s.assign(m + 1, 0.0);
    arc_pts.assign(m + 1, Cplx{0.0, 0.0});
    arc_pts[0] = point(0.0);
    double prev = std::abs(tangent(0.0));
    for (int i = 1; i <= m; ++i) {
        double t = 2.0 * kPi * i / m;
        double cur = std::abs(tangent(t));
        arc_t[i] = t;
        arc_s[i] = arc_s[i - 1] + 0.5 * (prev + cur) * (2.0 * kPi / m);
        arc_pts[i] = point(t);
        prev = cur;
    }
}

double CurveDensity::variation() const {
    int m = static_cast<int>(arc_t.size()) - 1;
    if (m < 1) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        double t = arc_t[i];
        acc += std::abs(density_at(point(t))) * std::abs(tangent(t));
    }
    return acc * 2.0 * kPi / m;
}

double CurveDensity::min_dist(Cplx z) const {
    double best = std::numeric_limits<double>::max();
    int m = static_cast<int>(arc_pts.size()) - 1;
    for (int i = 0; i < m; ++i) best = std::min(best, norm2(arc_pts[i] - z));
    return std::sqrt(best);
}

double CurveDensity::nearest_param(Cplx z) const {
    int m = static_cast<int>(arc_t.size()) - 1;
    double bt = 0.0, bd = std::numeric_limits<double>::max();
    for (int i = 0; i < m; ++i) {
        double d = norm2(arc_pts[i] - z);
        if (d < bd) {
            bd = d;
            bt = arc_t[i];
        }
    }
    // Golden-section refine around the sampled argmin.
    double span = 2.0 * kPi / m;
    double lo = bt - span, hi = bt + span;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d2 = lo + gr * (hi - lo);
    double fc = norm2(point(c) - z), fd = norm2(point(d2) - z);
    for (int it = 0; it < 80; ++it) {
        if (fc < fd) {
            hi = d2;
            d2 = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = norm2(point(c) - z);
        } else {
            lo = c;
            c = d2;
            fc = fd;
            d2 = lo + gr * (hi - lo);
            fd = norm2(point(d2) - z);
        }
    }
    double t = 0.5 * (lo + hi);
    while (t < 0) t += 2.0 * kPi;
    while (t >= 2.0 * kPi) t -= 2.0 * kPi;
    return t;
}

// ---------------------------------------------------------------------------
// AreaDensity

AreaDensity AreaDensity::disk(Cplx center, double radius, const std::function<Cplx(Cplx)>& f,
                              int nx, int ny) {
    if (!(radius > 0.0)) throw InputError("area disk: radius must be positive");
    AreaDensity d;
    d.region = Region::Disk;
    d.center = center;
    d.radius = radius;
    d.x0 = center.real() - radius;
    d.x1 = center.real() + radius;
    d.y0 = center.imag() - radius;
    d.y1 = center.imag() + radius;
    d.nx = std::max(nx, 2);
    d.ny = std::max(ny, 2);
    d.re.resize(static_cast<size_t>(d.nx) * d.ny);
    d.im.resize(d.re.size());
    for (int iy = 0; iy < d.ny; ++iy)
        for (int ix = 0; ix < d.nx; ++ix) {
            Cplx z(d.x0 + (d.x1 - d.x0) * ix / (d.nx - 1.0),
                   d.y0 + (d.y1 - d.y0) * iy / (d.ny - 1.0));
            Cplx v = f(z);
            d.re[static_cast<size_t>(iy) * d.nx + ix] = v.real();
            d.im[static_cast<size_t>(iy) * d.nx + ix] = v.imag();
        }
    return d;
}

AreaDensity AreaDensity::rect(double x0, double x1, double y0, double y1,
                              const std::function<Cplx(Cplx)>& f, int nx, int ny) {
    if (!(x0 < x1) || !(y0 < y1)) throw InputError("area rect: degenerate region");
    AreaDensity d;
    d.region = Region::Rect;
    d.x0 = x0;
    d.x1 = x1;
    d.y0 = y0;
    d.y1 = y1;
    d.nx = std::max(nx, 2);
    d.ny = std::max(ny, 2);
    d.re.resize(static_cast<size_t>(d.nx) * d.ny);
    d.im.resize(d.re.size());
    for (int iy = 0; iy < d.ny; ++iy)
        for (int ix = 0; ix < d.nx; ++ix) {
            Cplx z(x0 + (x1 - x0) * ix / (d.nx - 1.0), y0 + (y1 - y0) * iy / (d.ny - 1.0));
            Cplx v = f(z);
            d.re[static_cast<size_t>(iy) * d.nx + ix] = v.real();
            d.im[static_cast<size_t>(iy) * d.nx + ix] = v.imag();
        }
    return d;
}

bool AreaDensity::inside(Cplx z) const {
    if (region == Region::Disk) return std::abs(z - center) <= radius;
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
}

namespace {
// Catmull-Rom in one dimension over 4 consecutive samples.
double catmull(double pm1, double p0, double p1, double p2, double u) {
    return 0.5 * ((2.0 * p0) + (-pm1 + p1) * u + (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2) * u * u +
                  (-pm1 + 3.0 * p0 - 3.0 * p1 + p2) * u * u * u);
}
} // namespace

Cplx AreaDensity::density(Cplx z) const {
    if (!inside(z)) return {0.0, 0.0};
    double fx = (z.real() - x0) / (x1 - x0) * (nx - 1);
    double fy = (z.imag() - y0) / (y1 - y0) * (ny - 1);
    int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 2);
    int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, ny - 2);
    double ux = fx - ix, uy = fy - iy;
    auto at = [&](const std::vector<double>& s, int jx, int jy) {
        jx = std::clamp(jx, 0, nx - 1);
        jy = std::clamp(jy, 0, ny - 1);
        return s[static_cast<size_t>(jy) * nx + jx];
    };
    auto interp = [&](const std::vector<double>& s) {
        double rows[4];
        for (int r = -1; r <= 2; ++r)
            rows[r + 1] = catmull(at(s, ix - 1, iy + r), at(s, ix, iy + r), at(s, ix + 1, iy + r),
                                  at(s, ix + 2, iy + r), ux);
        return catmull(rows[0], rows[1], rows[2], rows[3], uy);
    };
    return {interp(re), interp(im)};
}

double AreaDensity::boundary_dist(Cplx z) const {
    if (region == Region::Disk) return radius - std::abs(z - center);
    double dx = std::min(z.real() - x0, x1 - z.real());
    double dy = std::min(z.imag() - y0, y1 - z.imag());
    if (inside(z)) return std::min(dx, dy);
    double ox = std::max({x0 - z.real(), 0.0, z.real() - x1});
    double oy = std::max({y0 - z.imag(), 0.0, z.imag() - y1});
    return -std::hypot(ox, oy);
}

double AreaDensity::ray_exit(Cplx z, double theta) const {
    Cplx dir(std::cos(theta), std::sin(theta));
    if (region == Region::Disk) {
        Cplx w = z - center;
        double beta = w.real() * dir.real() + w.imag() * dir.imag();
        double disc = beta * beta - (norm2(w) - radius * radius);
        if (disc < 0.0) return 0.0;
        return -beta + std::sqrt(disc);
    }
    auto axis = [](double p, double d, double lo, double hi) {
        if (d > 1e-300) return (hi - p) / d;
        if (d < -1e-300) return (lo - p) / d;
        return std::numeric_limits<double>::max();
    };
    return std::max(0.0, std::min(axis(z.real(), dir.real(), x0, x1),
                                  axis(z.imag(), dir.imag(), y0, y1)));
}

double AreaDensity::variation() const {
    if (region == Region::Disk) {
        QuadRule gu = gauss_legendre(48);
        int m = 96;
        double acc = 0.0;
        for (int i = 0; i < gu.size(); ++i) {
            double u = 0.5 * (gu.x[i] + 1.0);
            double wu = 0.5 * gu.w[i];
            double r = radius * std::sqrt(u);
            for (int j = 0; j < m; ++j) {
                double th = 2.0 * kPi * j / m;
                Cplx z = center + Cplx(r * std::cos(th), r * std::sin(th));
                acc += std::abs(density(z)) * wu * (2.0 * kPi / m) * radius * radius / 2.0;
            }
        }
        return acc;
    }
    QuadRule g = gauss_legendre(48);
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j) {
            Cplx z(0.5 * (x0 + x1) + 0.5 * (x1 - x0) * g.x[i],
                   0.5 * (y0 + y1) + 0.5 * (y1 - y0) * g.x[j]);
            acc += std::abs(density(z)) * g.w[i] * g.w[j];
        }
    return acc * 0.25 * (x1 - x0) * (y1 - y0);
}

// ---------------------------------------------------------------------------
// ComplexMeasure

ComplexMeasure ComplexMeasure::make(std::vector<Component> comps) {
    ComplexMeasure m;
    // Merge coincident atoms (weights add; exact location match).
    std::vector<Component> merged;
    std::vector<std::pair<Cplx, Cplx>> atoms; // location, combined weight
    for (auto& c : comps) {
        if (auto* at = std::get_if<Atom>(&c.shape)) {
            if (!std::isfinite(at->weight.real()) || !std::isfinite(at->weight.imag()) ||
                !std::isfinite(at->location.real()) || !std::isfinite(at->location.imag()))
                throw InputError("atom: non-finite data");
            Cplx w = c.coef * at->weight;
            bool found = false;
            for (auto& [loc, acc] : atoms)
                if (loc == at->location) {
                    acc += w;
                    found = true;
                    break;
                }
            if (!found) atoms.emplace_back(at->location, w);
        } else {
            merged.push_back(std::move(c));
        }
    }
    for (auto& [loc, w] : atoms)
        if (std::abs(w) > 0.0) merged.push_back(Component{Cplx(1.0, 0.0), Atom{loc, w}});

    double x0 = std::numeric_limits<double>::max(), x1 = -x0, y0 = x0, y1 = -x0;
    auto grow = [&](double px, double py) {
        x0 = std::min(x0, px);
        x1 = std::max(x1, px);
        y0 = std::min(y0, py);
        y1 = std::max(y1, py);
    };
    double tv = 0.0;
    bool continuous = true, positive = true;
    for (auto& c : merged) {
        if (std::holds_alternative<Atom>(c.shape)) {
            auto& at = std::get<Atom>(c.shape);
            continuous = false;
            tv += std::abs(c.coef * at.weight);
            Cplx w = c.coef * at.weight;
            if (!(w.imag() == 0.0 && w.real() > 0.0)) positive = false;
            grow(at.location.real(), at.location.imag());
        } else if (std::holds_alternative<IntervalDensity>(c.shape)) {
            auto& d = std::get<IntervalDensity>(c.shape);
            if (d.alpha <= -1.0 || d.beta <= -1.0)
                throw InputError("interval: endpoint exponents must be > -1");
            if (!(d.a < d.b)) throw InputError("interval: zero-length interval rejected");
            double var = d.variation();
            if (!std::isfinite(var)) throw InputError("interval: variation not finite");
            tv += std::abs(c.coef) * var;
            bool nonneg_family = d.family == IntervalFamily::Arcsine ||
                                 d.family == IntervalFamily::Semicircle ||
                                 d.family == IntervalFamily::Uniform ||
                                 d.family == IntervalFamily::Equilibrium;
            if (!(c.coef.imag() == 0.0 && c.coef.real() >= 0.0 && nonneg_family &&
                  d.scale >= 0.0))
                positive = false;
            grow(d.a, 0.0);
            grow(d.b, 0.0);
        } else if (std::holds_alternative<CurveDensity>(c.shape)) {
            auto& cd = std::get<CurveDensity>(c.shape);
            if (cd.arc_t.empty()) cd.finalize();
            tv += std::abs(c.coef) * cd.variation();
            if (std::abs(c.coef) != 0.0) positive = false;
            int ns = static_cast<int>(cd.arc_t.size()) - 1;
            for (int i = 0; i < ns; ++i) {
                Cplx p = cd.point(cd.arc_t[i]);
                grow(p.real(), p.imag());
            }
        } else {
            auto& ad = std::get<AreaDensity>(c.shape);
            tv += std::abs(c.coef) * ad.variation();
            bool real_nonneg = true;
            for (size_t i = 0; i < ad.re.size(); ++i)
                if (ad.im[i] != 0.0 || ad.re[i] < 0.0) real_nonneg = false;
            if (!(c.coef.imag() == 0.0 && c.coef.real() >= 0.0 && real_nonneg)) positive = false;
            grow(ad.x0, ad.y0);
            grow(ad.x1, ad.y1);
        }
    }
    if (merged.empty()) {
        x0 = x1 = y0 = y1 = 0.0;
        positive = false;
    }
    m.comps_ = std::move(merged);
    m.tv_ = tv;
    m.continuous_ = continuous;
    m.positive_ = positive && !m.comps_.empty();
    m.sx0_ = x0;
    m.sx1_ = x1;
    m.sy0_ = y0;
    m.sy1_ = y1;
    return m;
}

ComplexMeasure make_measure(std::vector<Component> comps) {
    return ComplexMeasure::make(std::move(comps));
}

Cplx ComplexMeasure::mass() const {
    Cplx total{0.0, 0.0};
    for (const auto& c : comps_) {
        if (std::holds_alternative<Atom>(c.shape)) {
            total += c.coef * std::get<Atom>(c.shape).weight;
        } else if (std::holds_alternative<IntervalDensity>(c.shape)) {
            total += c.coef * std::get<IntervalDensity>(c.shape).mass();
        } else if (std::holds_alternative<CurveDensity>(c.shape)) {
            const auto& cd = std::get<CurveDensity>(c.shape);
            int n = 4 * cd.samples;
            Cplx acc{0.0, 0.0};
            for (int i = 0; i < n; ++i) {
                double t = 2.0 * kPi * i / n;
                acc += cd.density_at(cd.point(t)) * cd.tangent(t);
            }
            total += c.coef * acc * (2.0 * kPi / n);
        } else {
            const auto& ad = std::get<AreaDensity>(c.shape);
            // Reuse the variation grids but without modulus.
            QuadRule g = gauss_legendre(48);
            Cplx acc{0.0, 0.0};
            if (ad.region == AreaDensity::Region::Disk) {
                int mth = 96;
                for (int i = 0; i < g.size(); ++i) {
                    double u = 0.5 * (g.x[i] + 1.0), wu = 0.5 * g.w[i];
                    double r = ad.radius * std::sqrt(u);
                    for (int j = 0; j < mth; ++j) {
                        double th = 2.0 * kPi * j / mth;
                        Cplx z = ad.center + Cplx(r * std::cos(th), r * std::sin(th));
                        acc += ad.density(z) * wu * (2.0 * kPi / mth) * ad.radius * ad.radius / 2.0;
                    }
                }
            } else {
                for (int i = 0; i < g.size(); ++i)
                    for (int j = 0; j < g.size(); ++j) {
                        Cplx z(0.5 * (ad.x0 + ad.x1) + 0.5 * (ad.x1 - ad.x0) * g.x[i],
                               0.5 * (ad.y0 + ad.y1) + 0.5 * (ad.y1 - ad.y0) * g.x[j]);
                        acc += ad.density(z) * g.w[i] * g.w[j];
                    }
                acc *= 0.25 * (ad.x1 - ad.x0) * (ad.y1 - ad.y0);
            }
            total += c.coef * acc;
        }
    }
    return total;
}

double ComplexMeasure::support_dist(Cplx z) const {
    double best = std::numeric_limits<double>::max();
    for (const auto& c : comps_) {
        double d = best;
        if (std::holds_alternative<Atom>(c.shape)) {
            d = std::abs(z - std::get<Atom>(c.shape).location);
        } else if (std::holds_alternative<IntervalDensity>(c.shape)) {
            const auto& id = std::get<IntervalDensity>(c.shape);
            double dx = std::max({id.a - z.real(), 0.0, z.real() - id.b});
            d = std::hypot(dx, z.imag());
        } else if (std::holds_alternative<CurveDensity>(c.shape)) {
            d = std::get<CurveDensity>(c.shape).min_dist(z);
        } else {
            d = std::max(0.0, -std::get<AreaDensity>(c.shape).boundary_dist(z));
        }
        best = std::min(best, d);
    }
    return comps_.empty() ? 0.0 : best;
}

double ComplexMeasure::support_diameter() const {
    return std::hypot(sx1_ - sx0_, sy1_ - sy0_);
}

double ComplexMeasure::extent_with(Cplx z) const {
    double x0 = std::min(sx0_, z.real()), x1 = std::max(sx1_, z.real());
    double y0 = std::min(sy0_, z.imag()), y1 = std::max(sy1_, z.imag());
    return std::hypot(x1 - x0, y1 - y0);
}

bool ComplexMeasure::on_real_line(double tol) const {
    for (const auto& c : comps_) {
        if (std::holds_alternative<Atom>(c.shape)) {
            if (std::abs(std::get<Atom>(c.shape).location.imag()) > tol) return false;
        } else if (!std::holds_alternative<IntervalDensity>(c.shape)) {
            return false;
        }
    }
    return !comps_.empty();
}

ComplexMeasure ComplexMeasure::scaled(Cplx s) const {
    std::vector<Component> comps = comps_;
    for (auto& c : comps) c.coef *= s;
    return make(std::move(comps));
}

ComplexMeasure ComplexMeasure::sum(const ComplexMeasure& m1, const ComplexMeasure& m2) {
    std::vector<Component> comps = m1.comps_;
    comps.insert(comps.end(), m2.comps_.begin(), m2.comps_.end());
    return make(std::move(comps));
}

// ---------------------------------------------------------------------------
// Quadrature node generation

namespace {
// Family rule on [a,b] absorbing the density's endpoint exponents: weight
// (t-a)^alpha (b-t)^beta. gauss_jacobi's convention is (1-x)^A (1+x)^B, so
// A = beta, B = alpha under t = m + rho x.
QuadRule interval_rule(const IntervalDensity& d, int n) {
    return mapped_jacobi(n, d.beta, d.alpha, d.a, d.b);
}
} // namespace

Cplx interval_rule_integral(const IntervalDensity& d, int n, const std::function<Cplx(double)>& f) {
    QuadRule r = interval_rule(d, n);
    Cplx acc{0.0, 0.0};
    for (int k = 0; k < r.size(); ++k) acc += r.w[k] * d.smooth(r.x[k]) * f(r.x[k]);
    return acc;
}

NodeSet quadrature_nodes(const Component& comp, int n) {
    if (n < 2) throw InputError("quadrature_nodes: n must be >= 2");
    NodeSet out;
    if (std::holds_alternative<Atom>(comp.shape)) {
        const auto& at = std::get<Atom>(comp.shape);
        out.nodes = {at.location};
        out.weights = {at.weight};
        return out;
    }
    if (std::holds_alternative<IntervalDensity>(comp.shape)) {
        const auto& d = std::get<IntervalDensity>(comp.shape);
        QuadRule r = interval_rule(d, n);
        out.nodes.reserve(n);
        out.weights.reserve(n);
        for (int k = 0; k < r.size(); ++k) {
            out.nodes.emplace_back(r.x[k], 0.0);
            out.weights.emplace_back(r.w[k] * d.smooth(r.x[k]), 0.0);
        }
        if (d.family == IntervalFamily::JacobiPoly &&
            n < static_cast<int>(d.poly.size()))
            out.warnings.push_back("node count below polynomial degree; rule inexact");
        if (d.family == IntervalFamily::Tabulated &&
            n < static_cast<int>(d.tab_x.size()) / 2)
            out.warnings.push_back("node count low for tabulated resolution");
        return out;
    }
    if (std::holds_alternative<CurveDensity>(comp.shape)) {
        const auto& cd = std::get<CurveDensity>(comp.shape);
        out.nodes.reserve(n);
        out.weights.reserve(n);
        for (int k = 0; k < n; ++k) {
            double t = 2.0 * kPi * k / n;
            Cplx z = cd.point(t);
            out.nodes.push_back(z);
            out.weights.push_back(cd.density_at(z) * cd.tangent(t) * (2.0 * kPi / n));
        }
        return out;
    }
    const auto& ad = std::get<AreaDensity>(comp.shape);
    int nu = std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
    if (ad.region == AreaDensity::Region::Disk) {
        int mth = std::max(4, n / nu);
        QuadRule g = gauss_legendre(nu);
        for (int i = 0; i < nu; ++i) {
            double u = 0.5 * (g.x[i] + 1.0), wu = 0.5 * g.w[i];
            double r = ad.radius * std::sqrt(u);
            for (int j = 0; j < mth; ++j) {
                double th = 2.0 * kPi * j / mth;
                Cplx z = ad.center + Cplx(r * std::cos(th), r * std::sin(th));
                out.nodes.push_back(z);
                out.weights.push_back(ad.density(z) * wu * (2.0 * kPi / mth) * ad.radius *
                                      ad.radius / 2.0);
            }
        }
    } else {
        int mv = std::max(2, n / nu);
        QuadRule gx = gauss_legendre(nu), gy = gauss_legendre(mv);
        for (int i = 0; i < nu; ++i)
            for (int j = 0; j < mv; ++j) {
                Cplx z(0.5 * (ad.x0 + ad.x1) + 0.5 * (ad.x1 - ad.x0) * gx.x[i],
                       0.5 * (ad.y0 + ad.y1) + 0.5 * (ad.y1 - ad.y0) * gy.x[j]);
                out.nodes.push_back(z);
                out.weights.push_back(ad.density(z) * gx.w[i] * gy.w[j] * 0.25 *
                                      (ad.x1 - ad.x0) * (ad.y1 - ad.y0));
            }
    }
    return out;
}

NodeSet gather_nodes(const ComplexMeasure& m, int n_per_component) {
    NodeSet all;
    for (const auto& c : m.components()) {
        NodeSet ns = quadrature_nodes(c, n_per_component);
        for (size_t i = 0; i < ns.nodes.size(); ++i) {
            all.nodes.push_back(ns.nodes[i]);
            all.weights.push_back(c.coef * ns.weights[i]);
        }
        for (auto& w : ns.warnings) all.warnings.push_back(std::move(w));
    }
    return all;
}

double total_variation(const ComplexMeasure& m) { return m.total_variation(); }

// ---------------------------------------------------------------------------
// Endpoint-aware integration over interval pieces

namespace {
int sub_order(double expo) {
    if (expo == 0.0) return 1;
    if (expo == -0.5 || expo == 0.5) return 2;
    return std::max(1, static_cast<int>(std::ceil(2.0 / (1.0 + expo))));
}
} // namespace

Cplx integrate_interval_piece(const IntervalDensity& d, double lo, double hi,
                              const std::function<Cplx(double)>& f, double abs_tol) {
    lo = std::max(lo, d.a);
    hi = std::min(hi, d.b);
    if (!(hi > lo)) return {0.0, 0.0};
    bool sing_a = (lo == d.a && d.alpha != 0.0);
    bool sing_b = (hi == d.b && d.beta != 0.0);
    if (sing_a && sing_b) {
        double mid = 0.5 * (lo + hi);
        return integrate_interval_piece(d, lo, mid, f, 0.5 * abs_tol) +
               integrate_interval_piece(d, mid, hi, f, 0.5 * abs_tol);
    }
    if (sing_a) {
        int k = sub_order(d.alpha);
        double p = k * (1.0 + d.alpha) - 1.0;
        double smax = std::pow(hi - lo, 1.0 / k);
        auto g = [&](double s) -> Cplx {
            double t = lo + std::pow(s, k);
            if (t >= d.b) t = std::nextafter(d.b, lo);
            double w = k * (p == 0.0 ? 1.0 : std::pow(s, p));
            double rest = d.beta != 0.0 ? std::pow(std::max(d.b - t, 0.0), d.beta) : 1.0;
            return w * d.smooth(t) * rest * f(t);
        };
        return integrate_adaptive(g, 0.0, smax, abs_tol, 1e-13).value;
    }
    if (sing_b) {
        int k = sub_order(d.beta);
        double p = k * (1.0 + d.beta) - 1.0;
        double smax = std::pow(hi - lo, 1.0 / k);
        auto g = [&](double s) -> Cplx {
            double t = hi - std::pow(s, k);
            if (t <= d.a) t = std::nextafter(d.a, hi);
            double w = k * (p == 0.0 ? 1.0 : std::pow(s, p));
            double rest = d.alpha != 0.0 ? std::pow(std::max(t - d.a, 0.0), d.alpha) : 1.0;
            return w * d.smooth(t) * rest * f(t);
        };
        return integrate_adaptive(g, 0.0, smax, abs_tol, 1e-13).value;
    }
    auto g = [&](double t) -> Cplx { return d.density(t) * f(t); };
    return integrate_adaptive(g, lo, hi, abs_tol, 1e-13).value;
}

} // namespace pvc
