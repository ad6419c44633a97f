#include "pvc/comb.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pvc {

namespace {

double support_min(const ComplexMeasure& m) {
    double lo = std::numeric_limits<double>::max();
    for (const auto& c : m.components()) {
        if (const auto* d = std::get_if<IntervalDensity>(&c.shape)) lo = std::min(lo, d->a);
        if (const auto* at = std::get_if<Atom>(&c.shape)) lo = std::min(lo, at->location.real());
    }
    return lo;
}

double support_max(const ComplexMeasure& m) {
    double hi = -std::numeric_limits<double>::max();
    for (const auto& c : m.components()) {
        if (const auto* d = std::get_if<IntervalDensity>(&c.shape)) hi = std::max(hi, d->b);
        if (const auto* at = std::get_if<Atom>(&c.shape)) hi = std::max(hi, at->location.real());
    }
    return hi;
}

void require_positive_line(const ComplexMeasure& m) {
    if (!m.on_real_line() || !m.is_positive())
        throw InputError("comb geometry requires a positive measure on the real line");
}

double total_density(const ComplexMeasure& m, double x) {
    double g = 0.0;
    for (const auto& c : m.components()) {
        if (const auto* d = std::get_if<IntervalDensity>(&c.shape)) {
            if (x > d->a && x < d->b) {
                double t = std::clamp(x, d->a + 1e-13 * (d->b - d->a),
                                      d->b - 1e-13 * (d->b - d->a));
                g += c.coef.real() * d->density(t);
            }
        }
    }
    return g;
}

double interval_mass_between(const ComplexMeasure& m, double x0, double x1) {
    double acc = 0.0;
    for (const auto& c : m.components()) {
        if (const auto* d = std::get_if<IntervalDensity>(&c.shape))
            acc += c.coef.real() * d->mass(x0, x1);
        if (const auto* at = std::get_if<Atom>(&c.shape)) {
            double u = at->location.real();
            if (u > x0 && u <= x1) acc += (c.coef * at->weight).real();
        }
    }
    return acc;
}

} // namespace

Cplx conformal_F(const ComplexMeasure& m, Cplx z, std::optional<Cplx> base,
                 const EvalOptions& opts) {
    require_positive_line(m);
    if (z.imag() < 0.0) throw InputError("conformal_F: z must lie in the closed upper half-plane");
    Cplx b = base.value_or(Cplx(support_max(m), 0.0));
    if (b.imag() < 0.0) throw InputError("conformal_F: base must lie in the closed half-plane");
    EvalOptions o = opts;
    o.ladder_check = false;
    auto field = [&](Cplx w) { return cauchy_pv(m, w, o).value; };
    double lift = std::max({0.5 * m.support_diameter(), z.imag(), b.imag(), 1e-3});
    // base -> base + i lift -> (Re z, lift) -> z. Vertical legs touch the
    // support only at their endpoints; substituting y = y0 + s^2 there keeps
    // the outer integrand bounded against the inverse-sqrt field blowup.
    auto vertical = [&](double x, double y0, double y1) {   // upward from y0
        double smax = std::sqrt(y1 - y0);
        auto f = [&](double s) { return field(Cplx(x, y0 + s * s)) * Cplx(0, 2.0 * s); };
        return integrate_adaptive(f, 0.0, smax, 1e-10, 1e-10, 2000).value;
    };
    Cplx acc = vertical(b.real(), b.imag(), lift);
    Cplx p1 = Cplx(b.real(), lift), p2 = Cplx(z.real(), lift);
    if (p1 != p2) {
        Cplx dir = p2 - p1;
        auto f = [&](double t) { return field(p1 + t * dir) * dir; };
        acc += integrate_adaptive(f, 0.0, 1.0, 1e-10, 1e-10, 2000).value;
    }
    acc -= vertical(z.real(), z.imag(), lift);
    return acc;
}

std::vector<double> default_x_grid(const ComplexMeasure& m, int n, double pad) {
    require_positive_line(m);
    double lo = support_min(m), hi = support_max(m);
    double diam = std::max(hi - lo, 1e-6);
    if (pad < 0.0) pad = 0.5 * diam;
    std::set<double> pts;
    pts.insert(lo - pad);
    pts.insert(hi + pad);
    std::vector<std::pair<double, double>> segs;   // intervals of the support
    for (const auto& c : m.components())
        if (const auto* d = std::get_if<IntervalDensity>(&c.shape)) segs.emplace_back(d->a, d->b);
    std::sort(segs.begin(), segs.end());
    int per = std::max(8, n / std::max<int>(1, static_cast<int>(segs.size()) + 2));
    for (auto& [a, b] : segs) {
        // Cosine clustering toward the endpoints, where the trace turns.
        for (int i = 0; i <= per; ++i) {
            double th = kPi * i / per;
            pts.insert(0.5 * (a + b) - 0.5 * (b - a) * std::cos(th));
        }
    }
    // Gaps and pads, linear.
    std::vector<double> anchor;
    anchor.push_back(lo - pad);
    for (auto& [a, b] : segs) {
        anchor.push_back(a);
        anchor.push_back(b);
    }
    anchor.push_back(hi + pad);
    std::sort(anchor.begin(), anchor.end());
    for (size_t i = 0; i + 1 < anchor.size(); ++i) {
        double a = anchor[i], b = anchor[i + 1];
        if (b - a < 1e-12 * diam) continue;
        int fill = std::max(4, per / 2);
        for (int k = 1; k < fill; ++k) pts.insert(a + (b - a) * k / fill);
    }
    return {pts.begin(), pts.end()};
}

BoundaryTrace boundary_trace(const ComplexMeasure& m, const std::vector<double>& grid,
                             const EvalOptions& opts) {
    require_positive_line(m);
    if (grid.size() < 2) throw InputError("boundary_trace: need at least two grid points");
    EvalOptions o = opts;
    o.ladder_check = false;
    BoundaryTrace tr;
    tr.pts.resize(grid.size());

    // Boundary derivative: pv transform (real on the line) + i pi density.
    std::vector<double> pv(grid.size(), 0.0);
    std::vector<char> ok(grid.size(), 1);
    for (size_t i = 0; i < grid.size(); ++i) {
        try {
            pv[i] = cauchy_pv(m, Cplx(grid[i], 0.0), o).value.real();
        } catch (const std::exception&) {
            ok[i] = 0;
        }
    }
    for (size_t i = 0; i < grid.size(); ++i) {
        if (ok[i]) continue;
        ++tr.interpolated;
        size_t l = i, r = i;
        while (l > 0 && !ok[l]) --l;
        while (r + 1 < grid.size() && !ok[r]) ++r;
        if (ok[l] && ok[r] && r > l)
            pv[i] = pv[l] + (pv[r] - pv[l]) * (grid[i] - grid[l]) / (grid[r] - grid[l]);
        else if (ok[l])
            pv[i] = pv[l];
        else if (ok[r])
            pv[i] = pv[r];
    }

    // Cumulative F: the real part integrates the pv values on fixed panels,
    // substituting t = e +/- s^2 on segments that touch a component endpoint
    // (the field blows up like an inverse square root there); the imaginary
    // part is pi times the exact segment mass.
    std::vector<double> endpoints;
    for (const auto& c : m.components()) {
        if (const auto* dd = std::get_if<IntervalDensity>(&c.shape)) {
            endpoints.push_back(dd->a);
            endpoints.push_back(dd->b);
        }
        if (const auto* at = std::get_if<Atom>(&c.shape))
            endpoints.push_back(at->location.real());
    }
    double diam = std::max(grid.back() - grid.front(), 1e-30);
    auto is_endpoint = [&](double t) {
        for (double e : endpoints)
            if (std::abs(t - e) <= 1e-12 * diam) return true;
        return false;
    };
    static const QuadRule g10 = gauss_legendre(10);
    static const QuadRule g16 = gauss_legendre(16);
    auto field = [&](double t, double fb) {
        try {
            return cauchy_pv(m, Cplx(t, 0.0), o).value.real();
        } catch (const std::exception&) {
            return fb;
        }
    };
    std::function<double(double, double, double)> seg_re =
        [&](double a, double b, double fb) -> double {
        bool sa = is_endpoint(a), sb = is_endpoint(b);
        if (sa && sb) {
            double mid = 0.5 * (a + b);
            return seg_re(a, mid, fb) + seg_re(mid, b, fb);
        }
        double acc = 0.0;
        if (sa || sb) {
            double smax = std::sqrt(b - a);
            for (int k = 0; k < g16.size(); ++k) {
                double s = 0.5 * smax * (g16.x[k] + 1.0);
                double t = sa ? a + s * s : b - s * s;
                acc += 0.5 * smax * g16.w[k] * 2.0 * s * field(t, fb);
            }
            return acc;
        }
        for (int k = 0; k < g10.size(); ++k) {
            double t = 0.5 * (a + b) + 0.5 * (b - a) * g10.x[k];
            acc += 0.5 * (b - a) * g10.w[k] * field(t, fb);
        }
        return acc;
    };
    std::vector<Cplx> F(grid.size());
    F[0] = {0.0, 0.0};
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        double a = grid[i], b = grid[i + 1];
        double dre = seg_re(a, b, 0.5 * (pv[i] + pv[i + 1]));
        double dim = kPi * interval_mass_between(m, a, b);
        F[i + 1] = F[i] + Cplx(dre, dim);
    }
    // Normalize: F real (== 0) at the rightmost support point.
    double bx = support_max(m);
    size_t bi = 0;
    double bd = std::numeric_limits<double>::max();
    for (size_t i = 0; i < grid.size(); ++i) {
        double d = std::abs(grid[i] - bx);
        if (d < bd) {
            bd = d;
            bi = i;
        }
    }
    Cplx shift = F[bi];
    for (size_t i = 0; i < grid.size(); ++i) {
        tr.pts[i].x = grid[i];
        tr.pts[i].F = F[i] - shift;
        tr.pts[i].Fp = Cplx(pv[i], kPi * total_density(m, grid[i]));
    }
    return tr;
}

CombCheckResult comb_check(const std::vector<Cplx>& poly) {
    CombCheckResult res;
    if (poly.size() < 2) {
        res.comb_like = true;
        return res;
    }
    double span = 0.0;
    for (const Cplx& p : poly) span = std::max(span, std::abs(p));
    double tol = 1e-9 * std::max(span, 1.0);
    for (size_t v = 0; v < poly.size(); ++v) {
        double x0 = poly[v].real(), y0 = poly[v].imag();
        bool hit = false;
        for (size_t s = 0; s + 1 < poly.size() && !hit; ++s) {
            if (s == v || s + 1 == v) continue;   // segments incident to the vertex
            double py = poly[s].imag() - y0, qy = poly[s + 1].imag() - y0;
            if (!((py > tol && qy < -tol) || (py < -tol && qy > tol))) continue;
            double t = py / (py - qy);
            double xc = poly[s].real() + t * (poly[s + 1].real() - poly[s].real());
            if (xc > x0 + tol) hit = true;
        }
        if (hit) res.violations.push_back(v);
    }
    res.comb_like = res.violations.empty();
    return res;
}

VhFractions vh_classify(BoundaryTrace& trace, double tol_angle) {
    VhFractions fr;
    size_t n = trace.pts.size();
    if (n == 0) return fr;
    std::vector<double> seglen(n > 1 ? n - 1 : 0);
    for (size_t i = 0; i + 1 < n; ++i) seglen[i] = std::abs(trace.pts[i + 1].F - trace.pts[i].F);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double w = 0.0;
        if (i > 0) w += 0.5 * seglen[i - 1];
        if (i + 1 < n) w += 0.5 * seglen[i];
        Cplx d = trace.pts[i].Fp;
        double mag = std::abs(d);
        char cls = 'N';
        if (!std::isfinite(mag)) {
            cls = 'V';   // density blow-up at interval endpoints
        } else if (mag > 0.0) {
            if (std::abs(d.real()) < tol_angle * mag)
                cls = 'V';
            else if (std::abs(d.imag()) < tol_angle * mag)
                cls = 'H';
        }
        trace.pts[i].cls = cls;
        total += w;
        if (cls == 'V')
            fr.vertical += w;
        else if (cls == 'H')
            fr.horizontal += w;
        else
            fr.neither += w;
    }
    if (total > 0.0) {
        fr.vertical /= total;
        fr.horizontal /= total;
        fr.neither /= total;
    }
    return fr;
}

VhFractions vh_classify(const ComplexMeasure& m, const std::vector<double>& x_grid,
                        double tol_angle, const EvalOptions& opts) {
    BoundaryTrace tr = boundary_trace(m, x_grid, opts);
    return vh_classify(tr, tol_angle);
}

WidomReport widom_sum(const HarmonicMeasureSpec& spec, const EvalOptions& opts) {
    WidomReport rep;
    EvalOptions o = opts;
    o.ladder_check = false;
    auto gprime = [&](double x) {
        // G'(x) in a gap: -Re of the transform there.
        return -cauchy_pv(spec.measure, Cplx(x, 0.0), o).value.real();
    };
    double running = 0.0;
    for (size_t k = 0; k + 1 < spec.intervals.size(); ++k) {
        double gl = spec.intervals[k].second, gr = spec.intervals[k + 1].first;
        double pad = 1e-9 * (gr - gl);
        double lo = gl + pad, hi = gr - pad;
        double flo = gprime(lo), fhi = gprime(hi);
        if (!(flo > 0.0 && fhi < 0.0))
            throw ConvergenceError("widom_sum: gap derivative does not bracket a critical point");
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = gprime(mid);
            if (fm > 0.0)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-14 * (gr - gl)) break;
        }
        double c = 0.5 * (lo + hi);
        double gv = greens_function(spec, Cplx(c, 0.0), opts).value;
        rep.critical_points.push_back(c);
        rep.green_values.push_back(gv);
        running += gv;
        rep.partial_sums.push_back(running);
    }
    rep.sum = running;
    return rep;
}

CombReport comb_report(const ComplexMeasure& m, int grid_n, double tol_angle,
                       const EvalOptions& opts) {
    CombReport rep;
    std::vector<double> grid = default_x_grid(m, grid_n);
    rep.trace = boundary_trace(m, grid, opts);
    std::vector<Cplx> poly;
    poly.reserve(rep.trace.pts.size());
    for (const auto& p : rep.trace.pts) poly.push_back(p.F);
    CombCheckResult cc = comb_check(poly);
    rep.comb_like = cc.comb_like;
    rep.violations = cc.violations;
    rep.vh = vh_classify(rep.trace, tol_angle);
    double len = 0.0, lo = std::numeric_limits<double>::max(), hi = -lo;
    for (size_t i = 0; i < poly.size(); ++i) {
        if (i + 1 < poly.size()) len += std::abs(poly[i + 1] - poly[i]);
        lo = std::min(lo, poly[i].imag());
        hi = std::max(hi, poly[i].imag());
    }
    rep.rect_length = len;
    rep.strip_height = hi - lo;

    std::vector<double> grid2 = default_x_grid(m, 2 * grid_n);
    BoundaryTrace t2 = boundary_trace(m, grid2, opts);
    double len2 = 0.0;
    for (size_t i = 0; i + 1 < t2.pts.size(); ++i) len2 += std::abs(t2.pts[i + 1].F - t2.pts[i].F);
    rep.refine_ratio = len > 0.0 ? len2 / len : 1.0;
    rep.rect_label = rep.refine_ratio < 1.05 ? "rectifiable at resolution"
                                             : "non-rectifiable trend";
    return rep;
}

} // namespace pvc
