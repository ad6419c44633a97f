#include "pvc/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pvc {

ComplexMeasure arcsine_measure(double a, double b) {
    return make_measure({Component{Cplx(1.0, 0.0), IntervalDensity::arcsine(a, b)}});
}

ComplexMeasure semicircle_measure() {
    return make_measure({Component{Cplx(1.0, 0.0), IntervalDensity::semicircle(-1.0, 1.0)}});
}

ComplexMeasure circle_current(Cplx normalization) {
    if (normalization == Cplx(0.0, 0.0)) throw InputError("circle_current: zero normalization");
    return make_measure(
        {Component{normalization, CurveDensity::circle(Cplx(0.0, 0.0), 1.0)}});
}

// ---------------------------------------------------------------------------
// Harmonic measure of an interval union

namespace {

double rad_poly(const std::vector<std::pair<double, double>>& sys, double t) {
    double v = 1.0;
    for (auto& [a, b] : sys) v *= (t - a) * (t - b);
    return v;
}

// ∫_gap f(t)/sqrt(Rad(t)) dt via the Chebyshev rule on the gap: the gap-edge
// square roots are absorbed, the remaining factor is smooth and positive.
double gap_integral(const std::vector<std::pair<double, double>>& sys, double gl, double gr,
                    const std::function<double(double)>& f, int n) {
    double m = 0.5 * (gl + gr), rho = 0.5 * (gr - gl);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        double th = kPi * (2.0 * k + 1.0) / (2.0 * n);
        double t = m + rho * std::cos(th);
        double q = rad_poly(sys, t) / ((t - gl) * (t - gr));   // negative inside the gap
        acc += f(t) / std::sqrt(-q);
    }
    return acc * kPi / n;
}

std::vector<double> poly_from_roots(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        std::vector<double> nc(c.size() + 1, 0.0);
        for (size_t i = 0; i < c.size(); ++i) {
            nc[i + 1] += c[i];
            nc[i] -= r * c[i];
        }
        c = std::move(nc);
    }
    return c;
}

} // namespace

HarmonicMeasureSpec harmonic_measure(std::vector<std::pair<double, double>> intervals,
                                     const HarmonicSolveOptions& opts) {
    if (intervals.empty()) throw InputError("harmonic_measure: need at least one interval");
    std::sort(intervals.begin(), intervals.end());
    for (auto& [a, b] : intervals)
        if (!(a < b)) throw InputError("harmonic_measure: degenerate interval");
    for (size_t i = 0; i + 1 < intervals.size(); ++i)
        if (!(intervals[i].second < intervals[i + 1].first))
            throw InputError("harmonic_measure: intervals must be disjoint and ordered");

    int n = static_cast<int>(intervals.size());
    int gaps = n - 1;
    double span = intervals.back().second - intervals.front().first;

    std::vector<double> roots(gaps);
    for (int k = 0; k < gaps; ++k)
        roots[k] = 0.5 * (intervals[k].second + intervals[k + 1].first);

    // Per-gap weighted-mean update; each update stays inside its gap because
    // the weight q_k/sqrt(Rad) has one sign there.
    for (int it = 0; it < opts.max_iter && gaps > 0; ++it) {
        double delta = 0.0;
        for (int k = 0; k < gaps; ++k) {
            double gl = intervals[k].second, gr = intervals[k + 1].first;
            auto qk = [&](double t) {
                double v = 1.0;
                for (int m2 = 0; m2 < gaps; ++m2)
                    if (m2 != k) v *= (t - roots[m2]);
                return v;
            };
            double denom = gap_integral(intervals, gl, gr, qk, opts.quad_nodes);
            double numer = gap_integral(intervals, gl, gr,
                                        [&](double t) { return t * qk(t); }, opts.quad_nodes);
            double next = numer / denom;
            delta = std::max(delta, std::abs(next - roots[k]));
            roots[k] = next;
        }
        if (delta < opts.tol * span) break;
        if (it == opts.max_iter - 1) {
            std::ostringstream os;
            os << "harmonic_measure: gap-root iteration stalled; brackets:";
            for (int k = 0; k < gaps; ++k)
                os << " (" << intervals[k].second << "," << intervals[k + 1].first
                   << ")~" << roots[k];
            throw ConvergenceError(os.str());
        }
    }

    std::vector<double> pc = poly_from_roots(roots);

    auto build = [&](double scale) {
        std::vector<Component> comps;
        for (int j = 0; j < n; ++j)
            comps.push_back(
                Component{Cplx(1.0, 0.0), IntervalDensity::equilibrium(intervals, j, pc, scale)});
        return make_measure(std::move(comps));
    };

    ComplexMeasure raw = build(1.0);
    double raw_mass = raw.mass().real();
    if (!(raw_mass > 0.0)) throw ConvergenceError("harmonic_measure: nonpositive raw mass");

    HarmonicMeasureSpec spec;
    spec.intervals = intervals;
    spec.gap_roots = roots;
    spec.raw_mass = raw_mass;
    spec.norm = 1.0 / raw_mass;
    spec.poly = pc;
    spec.measure = build(spec.norm);

    // Robin constant from the potential at the first interval's midpoint.
    double mid = 0.5 * (intervals[0].first + intervals[0].second);
    spec.robin_constant = 0.0;
    GreenEval g0 = greens_function(spec, Cplx(mid, 0.0));
    spec.robin_constant = -g0.value;
    return spec;
}

// ---------------------------------------------------------------------------
// Green's function

namespace {

// ∫ density_j(y) log|z-y| dy for one equilibrium/interval component.
double log_potential_component(const IntervalDensity& d, Cplx z, const EvalOptions& opts) {
    bool on = std::abs(z.imag()) <= 1e-13 && z.real() > d.a && z.real() < d.b;
    if (!on) {
        // Smooth integrand: family rule with a doubling check.
        auto f = [&](double y) { return Cplx(std::log(std::abs(z - y)), 0.0); };
        Cplx v1 = interval_rule_integral(d, opts.nodes, f);
        Cplx v2 = interval_rule_integral(d, 2 * opts.nodes, f);
        if (std::abs(v1 - v2) <= std::max(1e-11, 1e-12 * std::abs(v2))) return v2.real();
        double proj = std::clamp(z.real(), d.a, d.b);
        if (proj <= d.a || proj >= d.b)
            return integrate_interval_piece(d, d.a, d.b, f, opts.quad_tol).real();
        return (integrate_interval_piece(d, d.a, proj, f, 0.5 * opts.quad_tol) +
                integrate_interval_piece(d, proj, d.b, f, 0.5 * opts.quad_tol))
            .real();
    }
    double x = z.real();
    auto f = [&](double y) { return Cplx(std::log(std::abs(x - y)), 0.0); };
    return (integrate_interval_piece(d, d.a, x, f, 0.5 * opts.quad_tol) +
            integrate_interval_piece(d, x, d.b, f, 0.5 * opts.quad_tol))
        .real();
}

} // namespace

GreenEval greens_function(const HarmonicMeasureSpec& spec, Cplx z, const EvalOptions& opts) {
    GreenEval g;
    g.point = z;
    double pot = 0.0;
    for (const auto& c : spec.measure.components()) {
        const auto& d = std::get<IntervalDensity>(c.shape);
        pot += c.coef.real() * log_potential_component(d, z, opts);
    }
    g.value = pot + spec.robin_constant;

    EvalOptions o = opts;
    o.ladder_check = false;
    Cplx C = cauchy_pv(spec.measure, z, o).value;
    bool on_support = false;
    double dens = 0.0;
    for (const auto& c : spec.measure.components()) {
        const auto& d = std::get<IntervalDensity>(c.shape);
        if (std::abs(z.imag()) <= 1e-13 && z.real() > d.a && z.real() < d.b) {
            on_support = true;
            dens += c.coef.real() * d.density(z.real());
        }
    }
    if (on_support) {
        g.gx = -C.real();
        g.gy = kPi * dens;   // upper-side limit
    } else {
        g.gx = -C.real();
        g.gy = C.imag();
    }
    return g;
}

// ---------------------------------------------------------------------------
// Homogeneity

bool homogeneity_check(const std::vector<std::pair<double, double>>& intervals, double delta,
                       double r) {
    if (!(delta > 0.0) || delta > 2.0) throw InputError("homogeneity_check: delta in (0,2]");
    if (!(r > 0.0)) throw InputError("homogeneity_check: r must be positive");
    std::vector<std::pair<double, double>> sys = intervals;
    std::sort(sys.begin(), sys.end());
    auto inter_len = [&](double lo, double hi) {
        double acc = 0.0;
        for (auto& [a, b] : sys) acc += std::max(0.0, std::min(b, hi) - std::max(a, lo));
        return acc;
    };
    std::vector<double> xs;
    for (auto& [a, b] : sys) {
        xs.push_back(a);
        xs.push_back(b);
        for (int i = 1; i < 33; ++i) xs.push_back(a + (b - a) * i / 33.0);
    }
    std::vector<double> hs;
    for (double h = r; h > 1e-7 * r; h *= 0.75) hs.push_back(h);
    for (double x : xs)
        for (double h : hs)
            if (inter_len(x - h, x + h) < delta * h - 1e-12 * (1.0 + delta * h)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Curve example with a region-wise algebraic field

DeGiorgiGeometry default_degiorgi_geometry(int n_disks) {
    if (n_disks < 1) n_disks = 1;
    DeGiorgiGeometry g;
    g.outer = CurveDensity::circle(Cplx(0.0, 0.0), 2.2, CurveDensityKind::Radical2);
    for (int k = 0; k < n_disks; ++k) {
        double th = 0.5 + 2.0 * kPi * k / n_disks;
        Cplx c = 1.55 * Cplx(std::cos(th), std::sin(th));
        g.disks.emplace_back(c, 0.18);
    }
    return g;
}

DeGiorgiGeometry degiorgi_cluster_geometry(int max_level) {
    if (max_level < 1) max_level = 1;
    DeGiorgiGeometry g;
    g.outer = CurveDensity::circle(Cplx(0.0, 0.0), 3.6, CurveDensityKind::Radical2);
    for (int j = 1; j <= max_level; ++j)
        for (int k = 1; k <= j; ++k) {
            Cplx c = 2.0 + (1.0 / j) * std::exp(Cplx(0.0, 2.0 * kPi * k / j));
            g.disks.emplace_back(c, 1.0 / (10.0 * j * j));
        }
    return g;
}

Cplx degiorgi_target(const DeGiorgiGeometry& geom, Cplx z) {
    Cplx s = sqrt_zz_m1(z);
    for (auto& [c, r] : geom.disks)
        if (std::abs(z - c) < r) return z - s;
    if (geom.outer.min_dist(z) > 0.0 && std::abs(z - geom.outer.center) <
                                            std::abs(geom.outer.point(0.0) - geom.outer.center))
        return z + s;   // between the outer curve and the disks
    return z - s;
}

DeGiorgiMeasure degiorgi_example(const DeGiorgiGeometry& geom, const EvalOptions& opts) {
    for (auto& [c, r] : geom.disks) {
        if (!(r > 0.0)) throw InputError("degiorgi_example: disk radius must be positive");
        // Disks must avoid the slit [-1,1].
        double dx = std::max({-1.0 - c.real(), 0.0, c.real() - 1.0});
        if (std::hypot(dx, c.imag()) <= r)
            throw InputError("degiorgi_example: disk touches the slit [-1,1]");
    }
    for (size_t i = 0; i < geom.disks.size(); ++i)
        for (size_t j = i + 1; j < geom.disks.size(); ++j)
            if (std::abs(geom.disks[i].first - geom.disks[j].first) <=
                geom.disks[i].second + geom.disks[j].second)
                throw InputError("degiorgi_example: disks must be disjoint");

    std::vector<Component> curves;
    curves.push_back(Component{Cplx(1.0, 0.0), geom.outer});
    for (auto& [c, r] : geom.disks)
        curves.push_back(Component{Cplx(-1.0, 0.0),
                                   CurveDensity::circle(c, r, CurveDensityKind::Radical2)});
    ComplexMeasure unit_curves = make_measure(curves);
    ComplexMeasure mu0 = semicircle_measure();

    EvalOptions o = opts;
    o.ladder_check = false;

    // Probe in the intermediate region, away from the disks and the slit.
    Cplx probe(0.0, 1.5);
    Cplx target = probe + sqrt_zz_m1(probe);
    Cplx v1 = cauchy_pv(unit_curves, probe, o).value;
    Cplx c0 = cauchy_pv(mu0, probe, o).value;
    Cplx kappa = (target - c0) / v1;

    std::vector<Component> all;
    all.push_back(Component{kappa, geom.outer});
    for (auto& [c, r] : geom.disks)
        all.push_back(
            Component{-kappa, CurveDensity::circle(c, r, CurveDensityKind::Radical2)});
    all.push_back(Component{Cplx(1.0, 0.0), IntervalDensity::semicircle(-1.0, 1.0)});

    DeGiorgiMeasure out;
    out.measure = make_measure(std::move(all));
    out.curve_coefficient = kappa;

    // Verify the remaining regions.
    out.probes.push_back(geom.disks[0].first);                    // inside a disk
    out.probes.push_back(Cplx(2.9, 0.4));                         // outside the outer curve
    out.probes.push_back(Cplx(0.0, -1.5));                        // intermediate, other side
    out.probes.push_back(Cplx(-2.6, -1.1));                       // outside
    for (Cplx p : out.probes) {
        Cplx got = cauchy_pv(out.measure, p, o).value;
        out.residuals.push_back(std::abs(got - degiorgi_target(geom, p)));
        out.max_residual = std::max(out.max_residual, out.residuals.back());
    }
    return out;
}

} // namespace pvc
