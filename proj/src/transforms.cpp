#include "pvc/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

namespace pvc {

namespace {

// Shared rule cache: transforms re-request the same (n, alpha, beta) rules
// thousands of times in ladder loops.
const QuadRule& cached_jacobi(int n, double alpha, double beta) {
    static std::map<std::tuple<int, double, double>, QuadRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(n, alpha, beta);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, gauss_jacobi(n, alpha, beta)).first;
    return it->second;
}

// Family rule on [a,b] for the weight (t-a)^alpha (b-t)^beta.
void interval_rule(const IntervalDensity& d, int n, std::vector<double>& x,
                   std::vector<double>& w) {
    const QuadRule& base = cached_jacobi(n, d.beta, d.alpha);
    double m = 0.5 * (d.a + d.b), rho = 0.5 * (d.b - d.a);
    double scale = std::pow(rho, d.alpha + d.beta + 1.0);
    x.resize(base.size());
    w.resize(base.size());
    for (int k = 0; k < base.size(); ++k) {
        x[k] = m + rho * base.x[k];
        w[k] = scale * base.w[k];
    }
}

} // namespace

// ---------------------------------------------------------------------------
// EpsGrid

std::vector<double> EpsGrid::values() const {
    std::vector<double> v;
    if (!(eps_max > 0.0) || !(eps_min > 0.0) || !(ratio > 0.0) || ratio >= 1.0)
        throw InputError("EpsGrid: need eps_max > eps_min > 0 and ratio in (0,1)");
    double e = eps_max;
    while (e >= eps_min * (1.0 - 1e-12)) {
        v.push_back(e);
        e *= ratio;
        if (v.size() > 4096) break;
    }
    return v;
}

EpsGrid EpsGrid::spanning(const ComplexMeasure& m, Cplx z, double eps_min, double ratio) {
    EpsGrid g;
    g.eps_max = std::max(m.extent_with(z), 1e-300);
    g.eps_min = eps_min > 0.0 ? eps_min : 1e-12 * g.eps_max;
    g.ratio = ratio;
    return g;
}

EpsGrid EpsGrid::refined() const {
    EpsGrid g = *this;
    g.ratio = std::sqrt(ratio);
    return g;
}

// ---------------------------------------------------------------------------
// KernelSpec

KernelSpec KernelSpec::cauchy() { return KernelSpec{}; }

KernelSpec KernelSpec::riesz_planar(int index, double power) {
    KernelSpec k;
    k.kind = Kind::RieszPlanar;
    k.index = index;
    k.power = power;
    k.label = "riesz(" + std::to_string(index) + ")";
    return k;
}

KernelSpec KernelSpec::custom(std::function<Cplx(Cplx)> f, std::string label) {
    KernelSpec k;
    k.kind = Kind::CustomOdd;
    k.fn = std::move(f);
    k.label = std::move(label);
    return k;
}

Cplx KernelSpec::eval(Cplx x) const {
    switch (kind) {
        case Kind::Cauchy:
            return 1.0 / x;
        case Kind::RieszPlanar: {
            double comp = index == 1 ? x.real() : x.imag();
            return {comp / std::pow(std::abs(x), power), 0.0};
        }
        case Kind::CustomOdd:
            return fn ? fn(x) : Cplx(0.0, 0.0);
    }
    return {0.0, 0.0};
}

bool KernelSpec::odd_sampled(unsigned seed) const {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 24; ++i) {
        Cplx x(u(rng), u(rng));
        if (std::abs(x) < 0.05) {
            --i;
            continue;
        }
        Cplx s = eval(x) + eval(-x);
        double mag = std::abs(eval(x)) + std::abs(eval(-x)) + 1e-300;
        if (std::abs(s) > 1e-12 * mag) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Closed-form references

namespace ref {

Cplx arcsine(double a, double b, Cplx z) {
    double m = 0.5 * (a + b), rho = 0.5 * (b - a);
    Cplx zh = (z - m) / rho;
    return -1.0 / (rho * sqrt_zz_m1(zh));
}

Cplx semicircle(Cplx z) { return sqrt_zz_m1(z) - z; }

Cplx uniform(double a, double b, Cplx z) { return std::log((b - z) / (a - z)) / (b - a); }

double uniform_pv(double a, double b, double x) {
    return std::log((b - x) / (x - a)) / (b - a);
}

} // namespace ref

// ---------------------------------------------------------------------------
// Interval paths

namespace {

// Closed truncated transform for the pure Chebyshev weight family on [a,b]
// at real x strictly inside: (scale/pi) * int over the kept pieces of
// dt / (sqrt((t-a)(b-t)) (t-x)). The two-sided case telescopes into a single
// stable log ratio via cos(th) - cos(phi) = -2 sin((th+phi)/2) sin((th-phi)/2),
// which keeps the small-eps values at absolute rounding accuracy.
double arcsine_eps_closed(const IntervalDensity& d, double x, double eps) {
    double m = 0.5 * (d.a + d.b), rho = 0.5 * (d.b - d.a);
    double chi = (x - m) / rho;
    double phi = std::acos(std::clamp(chi, -1.0, 1.0));
    double sphi = std::sin(phi);
    double eh = eps / rho;
    double ul = chi - eh, ur = chi + eh;
    bool left = ul > -1.0, right = ur < 1.0;
    auto S = [&](double u) {   // sin((phi + acos(u))/2), u in [-1,1]
        return std::sin(0.5 * (phi + std::acos(std::clamp(u, -1.0, 1.0))));
    };
    double delta;
    if (left && right) {
        delta = 2.0 * std::log(S(ur) / S(ul));
    } else if (right) {
        delta = 2.0 * std::log(S(ur)) + std::log(2.0 / eh);
    } else if (left) {
        delta = -2.0 * std::log(S(ul)) - std::log(2.0 / eh);
    } else {
        return 0.0;
    }
    return d.scale / (kPi * rho * sphi) * delta;
}

// Kept pieces of [a,b] after removing (x-eps, x+eps); empty pieces omitted.
struct Pieces {
    double l0 = 0, l1 = -1, r0 = 0, r1 = -1;
};

Pieces excision_pieces(double a, double b, double x, double half_chord) {
    Pieces p;
    double lo = x - half_chord, hi = x + half_chord;
    if (lo > a) {
        p.l0 = a;
        p.l1 = std::min(lo, b);
    }
    if (hi < b) {
        p.r0 = std::max(hi, a);
        p.r1 = b;
    }
    return p;
}

double uniform_eps_closed(const IntervalDensity& d, double x, double eps) {
    Pieces p = excision_pieces(d.a, d.b, x, eps);
    double acc = 0.0;
    if (p.l1 > p.l0) acc += std::log(std::abs(p.l1 - x)) - std::log(std::abs(p.l0 - x));
    if (p.r1 > p.r0) acc += std::log(std::abs(p.r1 - x)) - std::log(std::abs(p.r0 - x));
    return d.scale / (d.b - d.a) * acc;
}

Cplx interval_full_cauchy(const IntervalDensity& d, Cplx z, const EvalOptions& opts) {
    auto f = [&](double t) { return 1.0 / (Cplx(t, 0.0) - z); };
    double dx = std::max({d.a - z.real(), 0.0, z.real() - d.b});
    double dist = std::hypot(dx, z.imag());
    if (dist >= 0.35 * (d.b - d.a)) {
        // Spectral rule with a doubling check.
        std::vector<double> x, w;
        interval_rule(d, opts.nodes, x, w);
        Cplx v1{0, 0};
        for (size_t k = 0; k < x.size(); ++k) v1 += w[k] * d.smooth(x[k]) * f(x[k]);
        interval_rule(d, 2 * opts.nodes, x, w);
        Cplx v2{0, 0};
        for (size_t k = 0; k < x.size(); ++k) v2 += w[k] * d.smooth(x[k]) * f(x[k]);
        if (std::abs(v2 - v1) <= std::max(opts.quad_tol, 1e-12 * std::abs(v2))) return v2;
    }
    double proj = std::clamp(z.real(), d.a, d.b);
    if (proj <= d.a || proj >= d.b)
        return integrate_interval_piece(d, d.a, d.b, f, opts.quad_tol);
    return integrate_interval_piece(d, d.a, proj, f, 0.5 * opts.quad_tol) +
           integrate_interval_piece(d, proj, d.b, f, 0.5 * opts.quad_tol);
}

Cplx interval_cauchy_eps(const IntervalDensity& d, Cplx z, double eps, const EvalOptions& opts) {
    double im = z.imag();
    if (std::abs(im) >= eps) return interval_full_cauchy(d, z, opts);
    double s = std::sqrt(std::max(eps * eps - im * im, 0.0));
    double x = z.real();
    if (x + s <= d.a || x - s >= d.b) return interval_full_cauchy(d, z, opts);
    if (im == 0.0 && std::abs((x - 0.5 * (d.a + d.b)) / (0.5 * (d.b - d.a))) < 1.0 - 1e-12) {
        if (d.family == IntervalFamily::Arcsine)
            return {arcsine_eps_closed(d, x, eps), 0.0};
        if (d.family == IntervalFamily::Uniform)
            return {uniform_eps_closed(d, x, eps), 0.0};
    }
    auto f = [&](double t) { return 1.0 / (Cplx(t, 0.0) - z); };
    Pieces p = excision_pieces(d.a, d.b, x, s);
    Cplx acc{0, 0};
    if (p.l1 > p.l0) acc += integrate_interval_piece(d, p.l0, p.l1, f, 0.5 * opts.quad_tol);
    if (p.r1 > p.r0) acc += integrate_interval_piece(d, p.r0, p.r1, f, 0.5 * opts.quad_tol);
    return acc;
}

// Principal value of the pure weight (t-a)^alpha (b-t)^beta against the
// Cauchy kernel at interior x: closed forms for the exponent pairs the named
// families use, numerical subtraction otherwise.
double weight_pv(const IntervalDensity& d, double x, const EvalOptions& opts) {
    double m = 0.5 * (d.a + d.b);
    if (d.alpha == -0.5 && d.beta == -0.5) return 0.0;
    if (d.alpha == 0.0 && d.beta == 0.0) return std::log((d.b - x) / (x - d.a));
    if (d.alpha == 0.5 && d.beta == 0.5) return kPi * (m - x);
    double wx = d.weight_only(x);
    auto piece = [&](double lo, double hi, double expo, bool map_left) -> double {
        // (w(t) - w(x)) / (t - x), absorbing the singular endpoint by power map.
        int k = expo == 0.0 ? 1
                            : (expo == -0.5 || expo == 0.5
                                   ? 2
                                   : std::max(1, static_cast<int>(std::ceil(2.0 / (1.0 + expo)))));
        double smax = std::pow(hi - lo, 1.0 / k);
        auto g = [&](double sv) -> Cplx {
            double t = map_left ? lo + std::pow(sv, k) : hi - std::pow(sv, k);
            t = std::clamp(t, std::nextafter(d.a, d.b), std::nextafter(d.b, d.a));
            double jac = k * std::pow(sv, k - 1.0);
            return Cplx((d.weight_only(t) - wx) / (t - x) * jac, 0.0);
        };
        return integrate_adaptive(g, 0.0, smax, 0.5 * opts.quad_tol, 1e-13).value.real();
    };
    double acc = piece(d.a, x, d.alpha, true) + piece(x, d.b, d.beta, false);
    return acc + wx * std::log((d.b - x) / (x - d.a));
}

Cplx interval_pv_onsupport(const IntervalDensity& d, double x, const EvalOptions& opts) {
    std::vector<double> xs, ws;
    interval_rule(d, opts.nodes, xs, ws);
    double hx = d.smooth(x);
    double guard = 1e-7 * (d.b - d.a);
    double acc = 0.0;
    for (size_t k = 0; k < xs.size(); ++k) {
        double dt = xs[k] - x;
        double q = std::abs(dt) < guard ? d.smooth_deriv(x) : (d.smooth(xs[k]) - hx) / dt;
        acc += ws[k] * q;
    }
    return Cplx(acc + hx * weight_pv(d, x, opts), 0.0);
}

// ---------------------------------------------------------------------------
// Curve paths

Cplx curve_full_cauchy(const CurveDensity& c, Cplx z, const EvalOptions& opts) {
    int n = std::max(256, c.samples);
    Cplx prev{0, 0};
    for (int round = 0; round < 8; ++round) {
        Cplx acc{0, 0};
        for (int i = 0; i < n; ++i) {
            double t = 2.0 * kPi * i / n;
            Cplx zeta = c.point(t);
            acc += c.density_at(zeta) * c.tangent(t) / (zeta - z);
        }
        acc *= 2.0 * kPi / n;
        if (round > 0 && std::abs(acc - prev) <= std::max(opts.quad_tol, 1e-13 * std::abs(acc)))
            return acc;
        prev = acc;
        n *= 2;
    }
    return prev;
}

Cplx curve_cauchy_eps(const CurveDensity& c, Cplx z, double eps, const EvalOptions& opts) {
    if (c.min_dist(z) > eps) return curve_full_cauchy(c, z, opts);
    // Parameter-space excision: keep {t : |zeta(t)-z| > eps}.
    int m = static_cast<int>(c.arc_t.size()) - 1;
    auto dist2 = [&](double t) { return norm2(c.point(t) - z); };
    double e2 = eps * eps;
    std::vector<char> keep(m);
    for (int i = 0; i < m; ++i) keep[i] = dist2(2.0 * kPi * i / m) > e2;
    bool all = true, none = true;
    for (char k : keep) {
        all = all && k;
        none = none && !k;
    }
    if (all) return curve_full_cauchy(c, z, opts);
    if (none) return {0.0, 0.0};
    auto bisect = [&](double t0, double t1) {
        for (int it = 0; it < 60; ++it) {
            double tm = 0.5 * (t0 + t1);
            if ((dist2(tm) > e2) == (dist2(t0) > e2))
                t0 = tm;
            else
                t1 = tm;
        }
        return 0.5 * (t0 + t1);
    };
    // Collect kept segments, starting from a dropped sample.
    int start = 0;
    while (keep[start]) ++start;
    Cplx acc{0, 0};
    auto integrand = [&](double t) -> Cplx {
        Cplx zeta = c.point(t);
        return c.density_at(zeta) * c.tangent(t) / (zeta - z);
    };
    int i = start;
    int visited = 0;
    while (visited < m) {
        // Advance to the next kept run.
        while (visited < m && !keep[i % m]) {
            ++i;
            ++visited;
        }
        if (visited >= m) break;
        int runlo = i;
        while (visited < m && keep[i % m]) {
            ++i;
            ++visited;
        }
        int runhi = i; // first dropped after the run
        double t_in = bisect(2.0 * kPi * (runlo - 1) / m, 2.0 * kPi * runlo / m);
        double t_out = bisect(2.0 * kPi * runhi / m, 2.0 * kPi * (runhi - 1) / m);
        if (t_out < t_in) t_out += 2.0 * kPi;
        acc += integrate_adaptive(integrand, t_in, t_out, 0.5 * opts.quad_tol, 1e-13).value;
    }
    return acc;
}

Cplx curve_pv_onsupport(const CurveDensity& c, double t0, const EvalOptions& opts) {
    Cplx z0 = c.point(t0);
    Cplx g0 = c.density_at(z0);
    int n = std::max(512, 4 * opts.nodes);
    Cplx prev{0, 0};
    for (int round = 0; round < 7; ++round) {
        Cplx acc{0, 0};
        for (int j = 0; j < n; ++j) {
            double t = t0 + 2.0 * kPi * (j + 0.5) / n;
            Cplx zeta = c.point(t);
            Cplx term = c.density_at(zeta) * c.tangent(t) / (zeta - z0);
            term -= g0 * 0.5 / std::tan(0.5 * (t - t0));
            acc += term;
        }
        acc *= 2.0 * kPi / n;
        if (round > 0 && std::abs(acc - prev) <= std::max(opts.quad_tol, 1e-13 * std::abs(acc)))
            return acc;
        prev = acc;
        n *= 2;
    }
    return prev;
}

// ---------------------------------------------------------------------------
// Area paths

Cplx area_polar_around(const AreaDensity& ad, Cplx z, double s0) {
    int mth = 180;
    const QuadRule& g = cached_jacobi(16, 0.0, 0.0);
    Cplx acc{0, 0};
    for (int j = 0; j < mth; ++j) {
        double th = 2.0 * kPi * (j + 0.5) / mth;
        double s1 = ad.ray_exit(z, th);
        if (s1 <= s0) continue;
        Cplx phase = std::exp(Cplx(0.0, -th));
        Cplx ray{0, 0};
        double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
        for (int k = 0; k < g.size(); ++k) {
            double s = mid + half * g.x[k];
            ray += g.w[k] * ad.density(z + s * std::exp(Cplx(0.0, th)));
        }
        acc += phase * ray * half;
    }
    return acc * (2.0 * kPi / mth);
}

Cplx area_tensor_cauchy(const AreaDensity& ad, Cplx z, double eps) {
    double dist = -ad.boundary_dist(z);
    bool near = dist < 0.2 * std::max(ad.x1 - ad.x0, ad.y1 - ad.y0);
    auto kernel = [&](Cplx w) -> Cplx {
        if (eps > 0.0 && std::abs(w - z) <= eps) return {0.0, 0.0};
        return 1.0 / (w - z);
    };
    if (ad.region == AreaDensity::Region::Disk) {
        int nu = near ? 96 : 48, mth = near ? 256 : 128;
        const QuadRule& g = cached_jacobi(nu, 0.0, 0.0);
        Cplx acc{0, 0};
        for (int i = 0; i < nu; ++i) {
            double u = 0.5 * (g.x[i] + 1.0), wu = 0.5 * g.w[i];
            double r = ad.radius * std::sqrt(u);
            for (int j = 0; j < mth; ++j) {
                double th = 2.0 * kPi * j / mth;
                Cplx w = ad.center + Cplx(r * std::cos(th), r * std::sin(th));
                acc += ad.density(w) * kernel(w) * wu * (2.0 * kPi / mth);
            }
        }
        return acc * ad.radius * ad.radius * 0.5;
    }
    int nq = near ? 128 : 64;
    const QuadRule& g = cached_jacobi(nq, 0.0, 0.0);
    Cplx acc{0, 0};
    for (int i = 0; i < nq; ++i)
        for (int j = 0; j < nq; ++j) {
            Cplx w(0.5 * (ad.x0 + ad.x1) + 0.5 * (ad.x1 - ad.x0) * g.x[i],
                   0.5 * (ad.y0 + ad.y1) + 0.5 * (ad.y1 - ad.y0) * g.x[j]);
            acc += ad.density(w) * kernel(w) * g.w[i] * g.w[j];
        }
    return acc * 0.25 * (ad.x1 - ad.x0) * (ad.y1 - ad.y0);
}

Cplx area_cauchy_eps(const AreaDensity& ad, Cplx z, double eps) {
    double bd = ad.boundary_dist(z);
    if (bd >= 0.0) return area_polar_around(ad, z, eps);
    if (eps <= -bd) return area_tensor_cauchy(ad, z, 0.0);
    return area_tensor_cauchy(ad, z, eps);   // sample-resolution excision
}

} // namespace

// ---------------------------------------------------------------------------
// Public transforms

Cplx cauchy_eps(const ComplexMeasure& m, Cplx z, double eps, const EvalOptions& opts) {
    if (!(eps > 0.0)) throw InputError("cauchy_eps: eps must be positive");
    Cplx acc{0, 0};
    for (const auto& c : m.components()) {
        if (std::holds_alternative<Atom>(c.shape)) {
            const auto& at = std::get<Atom>(c.shape);
            if (std::abs(at.location - z) > eps) acc += c.coef * at.weight / (at.location - z);
        } else if (std::holds_alternative<IntervalDensity>(c.shape)) {
            acc += c.coef * interval_cauchy_eps(std::get<IntervalDensity>(c.shape), z, eps, opts);
        } else if (std::holds_alternative<CurveDensity>(c.shape)) {
            acc += c.coef * curve_cauchy_eps(std::get<CurveDensity>(c.shape), z, eps, opts);
        } else {
            acc += c.coef * area_cauchy_eps(std::get<AreaDensity>(c.shape), z, eps);
        }
    }
    return acc;
}

namespace {

Cplx pv_value(const ComplexMeasure& m, Cplx z, double scale, const EvalOptions& opts) {
    Cplx acc{0, 0};
    for (const auto& c : m.components()) {
        if (std::holds_alternative<Atom>(c.shape)) {
            const auto& at = std::get<Atom>(c.shape);
            acc += c.coef * at.weight / (at.location - z);
        } else if (std::holds_alternative<IntervalDensity>(c.shape)) {
            const auto& d = std::get<IntervalDensity>(c.shape);
            double margin = 1e-12 * (d.b - d.a);
            if (std::abs(z.imag()) <= 1e-10 * scale && z.real() > d.a + margin &&
                z.real() < d.b - margin) {
                acc += c.coef * interval_pv_onsupport(d, z.real(), opts);
            } else {
                acc += c.coef * interval_full_cauchy(d, z, opts);
            }
        } else if (std::holds_alternative<CurveDensity>(c.shape)) {
            const auto& cd = std::get<CurveDensity>(c.shape);
            double t0 = cd.nearest_param(z);
            if (std::abs(cd.point(t0) - z) <= 1e-9 * scale) {
                acc += c.coef * curve_pv_onsupport(cd, t0, opts);
            } else {
                acc += c.coef * curve_full_cauchy(cd, z, opts);
            }
        } else {
            const auto& ad = std::get<AreaDensity>(c.shape);
            acc += c.coef * area_cauchy_eps(ad, z, ad.boundary_dist(z) >= 0.0 ? 0.0 : 1e-300);
        }
    }
    return acc;
}

} // namespace

EvalResult cauchy_pv(const ComplexMeasure& m, Cplx z, const EvalOptions& opts) {
    if (!(opts.tol > 0.0)) throw InputError("cauchy_pv: tol must be positive");
    double scale = std::max(m.extent_with(z), 1e-30);
    for (const auto& c : m.components())
        if (const auto* at = std::get_if<Atom>(&c.shape))
            if (std::abs(at->location - z) <= 1e-12 * scale)
                throw InputError("principal value at atom excluded by definition");

    EvalResult res;
    res.value = pv_value(m, z, scale, opts);

    if (opts.ladder_check) {
        double d0 = m.support_dist(z);
        double eps0 = d0 > 1e-9 * scale ? d0 : scale;
        double floor = opts.eps_floor_factor * scale;
        double e = eps0;
        int stable = 0;
        for (int k = 0; k < opts.eps_rungs && e >= floor; ++k) {
            res.epsilons.push_back(e);
            res.ladder.push_back(cauchy_eps(m, z, e, opts));
            size_t n = res.ladder.size();
            if (n >= 2) {
                double diff = std::abs(res.ladder[n - 1] - res.ladder[n - 2]);
                stable = diff <= 1e-3 * opts.tol ? stable + 1 : 0;
                if (stable >= 2) break;   // ladder already flat
            }
            e *= opts.eps_ratio;
        }
        size_t n = res.ladder.size();
        if (n >= 2) {
            res.tail_estimate = std::abs(res.ladder[n - 1] - res.ladder[n - 2]);
            if (res.tail_estimate <= opts.tol) {
                res.status = EvalStatus::Converged;
            } else {
                // Trend of the last few rung-to-rung differences.
                int lookback = static_cast<int>(std::min<size_t>(8, n - 1));
                int growing = 0;
                double prev = -1.0;
                for (int i = static_cast<int>(n) - lookback; i < static_cast<int>(n); ++i) {
                    double diff = std::abs(res.ladder[i] - res.ladder[i - 1]);
                    if (prev >= 0.0 && diff > 1.2 * prev) ++growing;
                    prev = diff;
                }
                res.status = growing >= lookback - 1 ? EvalStatus::Diverging
                                                     : EvalStatus::Oscillating;
            }
        }
    }
    return res;
}

double cauchy_maximal(const ComplexMeasure& m, Cplx z, const EpsGrid& grid,
                      const EvalOptions& opts) {
    if (grid.ratio < 0.5 - 1e-12)
        throw InputError("cauchy_maximal: grid rung ratio must be <= 2");
    double best = 0.0;
    for (double e : grid.values()) best = std::max(best, std::abs(cauchy_eps(m, z, e, opts)));
    return best;
}

double conjugate_poisson(const ComplexMeasure& m, double x, double h, const EvalOptions& opts) {
    if (!(h > 0.0)) throw InputError("conjugate_poisson: h must be positive");
    if (!m.on_real_line(1e-12 * std::max(m.support_diameter(), 1.0)))
        throw InputError("conjugate_poisson: measure must be supported on the real line");
    Cplx acc{0, 0};
    auto ker = [&](double t) { return (x - t) / (sq(x - t) + h * h); };
    for (const auto& c : m.components()) {
        if (std::holds_alternative<Atom>(c.shape)) {
            const auto& at = std::get<Atom>(c.shape);
            acc += c.coef * at.weight * ker(at.location.real());
        } else {
            const auto& d = std::get<IntervalDensity>(c.shape);
            auto f = [&](double t) { return Cplx(ker(t), 0.0); };
            double proj = std::clamp(x, d.a, d.b);
            if (proj > d.a && proj < d.b) {
                acc += c.coef * (integrate_interval_piece(d, d.a, proj, f, 0.5 * opts.quad_tol) +
                                 integrate_interval_piece(d, proj, d.b, f, 0.5 * opts.quad_tol));
            } else {
                acc += c.coef * integrate_interval_piece(d, d.a, d.b, f, opts.quad_tol);
            }
        }
    }
    return acc.real();
}

double poisson(const ComplexMeasure& m, double x, double y, const EvalOptions& opts) {
    if (!(y > 0.0)) throw InputError("poisson: y must be positive");
    if (!m.on_real_line(1e-12 * std::max(m.support_diameter(), 1.0)))
        throw InputError("poisson: components off the real line rejected");
    Cplx acc{0, 0};
    auto ker = [&](double t) { return y / (kPi * (sq(x - t) + y * y)); };
    for (const auto& c : m.components()) {
        if (std::holds_alternative<Atom>(c.shape)) {
            const auto& at = std::get<Atom>(c.shape);
            acc += c.coef * at.weight * ker(at.location.real());
        } else {
            const auto& d = std::get<IntervalDensity>(c.shape);
            auto f = [&](double t) { return Cplx(ker(t), 0.0); };
            double proj = std::clamp(x, d.a, d.b);
            if (proj > d.a && proj < d.b) {
                acc += c.coef * (integrate_interval_piece(d, d.a, proj, f, 0.5 * opts.quad_tol) +
                                 integrate_interval_piece(d, proj, d.b, f, 0.5 * opts.quad_tol));
            } else {
                acc += c.coef * integrate_interval_piece(d, d.a, d.b, f, opts.quad_tol);
            }
        }
    }
    return acc.real();
}

double riesz_r1(const ComplexMeasure& m, double x, double y, double z, bool use_variation,
                const EvalOptions& opts) {
    if (!(z > 0.0)) throw InputError("riesz_r1: z must be positive");
    auto ker = [&](double u, double v) {
        return z / std::pow(sq(u - x) + sq(v - y) + z * z, 1.5);
    };
    Cplx acc{0, 0};
    for (const auto& c : m.components()) {
        Cplx coef = use_variation ? Cplx(std::abs(c.coef), 0.0) : c.coef;
        if (std::holds_alternative<Atom>(c.shape)) {
            const auto& at = std::get<Atom>(c.shape);
            Cplx w = use_variation ? Cplx(std::abs(at.weight), 0.0) : at.weight;
            acc += coef * w * ker(at.location.real(), at.location.imag());
        } else if (std::holds_alternative<IntervalDensity>(c.shape)) {
            const auto& d = std::get<IntervalDensity>(c.shape);
            auto f = [&](double t) -> Cplx {
                double k = ker(t, 0.0);
                if (use_variation && d.smooth(t) < 0.0) k = -k;
                return {k, 0.0};
            };
            double proj = std::clamp(x, d.a, d.b);
            if (proj > d.a && proj < d.b) {
                acc += coef * (integrate_interval_piece(d, d.a, proj, f, 0.5 * opts.quad_tol) +
                               integrate_interval_piece(d, proj, d.b, f, 0.5 * opts.quad_tol));
            } else {
                acc += coef * integrate_interval_piece(d, d.a, d.b, f, opts.quad_tol);
            }
        } else if (std::holds_alternative<CurveDensity>(c.shape)) {
            const auto& cd = std::get<CurveDensity>(c.shape);
            int n = 4 * cd.samples;
            Cplx s{0, 0};
            for (int i = 0; i < n; ++i) {
                double t = 2.0 * kPi * i / n;
                Cplx zeta = cd.point(t);
                Cplx elem = cd.density_at(zeta) * cd.tangent(t);
                if (use_variation) elem = std::abs(elem);
                s += elem * ker(zeta.real(), zeta.imag());
            }
            acc += coef * s * (2.0 * kPi / n);
        } else {
            const auto& ad = std::get<AreaDensity>(c.shape);
            // Polar panels around (x,y): the kernel scale is z.
            Cplx w0(x, y);
            int mth = 128;
            const QuadRule& g = cached_jacobi(12, 0.0, 0.0);
            Cplx s{0, 0};
            for (int j = 0; j < mth; ++j) {
                double th = 2.0 * kPi * (j + 0.5) / mth;
                double smax = ad.ray_exit(w0, th);
                if (ad.boundary_dist(w0) < 0.0) {
                    // Start where the ray first meets the region.
                    double far = std::hypot(ad.x1 - ad.x0, ad.y1 - ad.y0) +
                                 std::abs(ad.boundary_dist(w0));
                    smax = far;
                }
                if (smax <= 0.0) continue;
                double lo = 0.0, step = std::max(z, 1e-6 * smax);
                Cplx dir = std::exp(Cplx(0.0, th));
                while (lo < smax) {
                    double hi = std::min(smax, lo == 0.0 ? step : lo * 4.0);
                    if (hi - lo < 1e-14 * smax) break;
                    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
                    for (int k = 0; k < g.size(); ++k) {
                        double sv = mid + half * g.x[k];
                        Cplx w = w0 + sv * dir;
                        Cplx rho = ad.density(w);
                        if (use_variation) rho = std::abs(rho);
                        s += g.w[k] * half * rho * ker(w.real(), w.imag()) * sv;
                    }
                    lo = hi;
                }
            }
            acc += coef * s * (2.0 * kPi / mth);
        }
    }
    return acc.real();
}

Cplx odd_kernel_eps(const KernelSpec& K, const ComplexMeasure& m, Cplx x, double eps,
                    const EvalOptions& opts) {
    if (!K.odd_sampled()) throw InputError("non-odd kernel rejected");
    if (!(eps > 0.0)) throw InputError("odd_kernel_eps: eps must be positive");
    if (K.kind == KernelSpec::Kind::Cauchy) return cauchy_eps(m, x, eps, opts);
    NodeSet ns = gather_nodes(m, opts.nodes);
    Cplx acc{0, 0};
    for (size_t i = 0; i < ns.nodes.size(); ++i) {
        Cplx dz = ns.nodes[i] - x;
        if (std::abs(dz) > eps) acc += ns.weights[i] * K.eval(dz);
    }
    return acc;
}

Cplx kernel_symmetry_residual(const KernelSpec& K, Cplx x, Cplx y, Cplx z) {
    if (x == y || y == z || z == x)
        throw InputError("kernel_symmetry_residual: points must be pairwise distinct");
    Cplx kxy = K.eval(x - y), kyz = K.eval(y - z), kzx = K.eval(z - x);
    return kxy * kyz + kyz * kzx + kzx * kxy;
}

DiffCoeffs kernel_diff_coeffs(Cplx a, Cplx b, Cplx c) {
    if (a == b) throw InputError("kernel_diff_coeffs: a == b rejected");
    return DiffCoeffs{(b - c) / (b - a), (a - c) / (a - b)};
}

} // namespace pvc
