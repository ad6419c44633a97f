#include "pvc/identities.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pvc/parallel.hpp"

namespace pvc {

namespace {

Cplx field_value(const ComplexMeasure& m, Cplx z, const EvalOptions& opts) {
    EvalOptions o = opts;
    o.ladder_check = false;
    return cauchy_pv(m, z, o).value;
}

} // namespace

std::vector<Cplx> quadratic_test_points(const ComplexMeasure& m, int ring_n, int inner_n,
                                        std::uint64_t seed) {
    double radius = 0.5 * m.support_diameter();
    if (!(radius > 0.0)) radius = 1.0;
    std::vector<Cplx> pts;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.0, 2.0 * kPi);
    double phase1 = jitter(rng), phase2 = jitter(rng);
    int half = ring_n / 2;
    for (int i = 0; i < half; ++i)
        pts.push_back(1.5 * radius * std::exp(Cplx(0.0, phase1 + 2.0 * kPi * i / half)));
    for (int i = 0; i < ring_n - half; ++i)
        pts.push_back(3.0 * radius *
                      std::exp(Cplx(0.0, phase2 + 2.0 * kPi * i / (ring_n - half))));
    // Interior points when the support is a curve with known interior: probe
    // well inside, rejecting any too close to the support.
    std::uniform_real_distribution<double> ur(0.05, 0.45), uth(0.0, 2.0 * kPi);
    int added = 0, guard = 0;
    while (added < inner_n && guard++ < 1000) {
        Cplx z = ur(rng) * radius * std::exp(Cplx(0.0, uth(rng)));
        if (m.support_dist(z) > 0.1 * radius) {
            pts.push_back(z);
            ++added;
        }
    }
    return pts;
}

IdentityReport verify_quadratic(const ComplexMeasure& m, const std::vector<Cplx>& points,
                                double tol, const EvalOptions& opts) {
    if (!m.is_continuous())
        throw InputError("verify_quadratic: continuous measure required (no atoms)");
    IdentityReport rep;
    rep.points = points;
    rep.tolerance = tol;
    rep.nodes = opts.nodes;
    rep.lhs.resize(points.size());
    rep.rhs.resize(points.size());
    rep.residuals.resize(points.size());
    rep.inconclusive_flags.assign(points.size(), 0);

    EvalOptions inner = opts;
    inner.ladder_check = false;

    // Outer integral of C(t) dmu(t)/(t - z), component-wise; the inner
    // principal value is evaluated on the fly at the outer quadrature points.
    auto lhs_at = [&](Cplx z, bool& bad) -> Cplx {
        Cplx acc{0, 0};
        for (const auto& c : m.components()) {
            if (std::holds_alternative<IntervalDensity>(c.shape)) {
                const auto& d = std::get<IntervalDensity>(c.shape);
                auto f = [&](double t) -> Cplx {
                    Cplx ct = field_value(m, Cplx(t, 0.0), inner);
                    return ct / (Cplx(t, 0.0) - z);
                };
                double proj = std::clamp(z.real(), d.a, d.b);
                if (std::abs(z.imag()) > 1e-12 && proj > d.a && proj < d.b) {
                    acc += c.coef *
                           (integrate_interval_piece(d, d.a, proj, f, 0.5 * opts.quad_tol) +
                            integrate_interval_piece(d, proj, d.b, f, 0.5 * opts.quad_tol));
                } else {
                    acc += c.coef * integrate_interval_piece(d, d.a, d.b, f, opts.quad_tol);
                }
            } else if (std::holds_alternative<CurveDensity>(c.shape)) {
                const auto& cd = std::get<CurveDensity>(c.shape);
                int n = std::max(256, cd.samples);
                Cplx prev{0, 0};
                for (int round = 0; round < 6; ++round) {
                    Cplx s{0, 0};
                    for (int i = 0; i < n; ++i) {
                        double t = 2.0 * kPi * i / n;
                        Cplx zeta = cd.point(t);
                        Cplx ct = field_value(m, zeta, inner);
                        s += ct * cd.density_at(zeta) * cd.tangent(t) / (zeta - z);
                    }
                    s *= 2.0 * kPi / n;
                    if (round > 0 &&
                        std::abs(s - prev) <= std::max(opts.quad_tol * 10, 1e-12 * std::abs(s))) {
                        prev = s;
                        break;
                    }
                    prev = s;
                    n *= 2;
                }
                acc += c.coef * prev;
            } else if (std::holds_alternative<AreaDensity>(c.shape)) {
                const auto& ad = std::get<AreaDensity>(c.shape);
                NodeSet ns = quadrature_nodes(Component{Cplx(1.0, 0.0), ad}, 4096);
                Cplx s{0, 0};
                for (size_t i = 0; i < ns.nodes.size(); ++i) {
                    Cplx ct = field_value(m, ns.nodes[i], inner);
                    s += ns.weights[i] * ct / (ns.nodes[i] - z);
                }
                acc += c.coef * s;
            } else {
                bad = true;
            }
        }
        return 2.0 * acc;
    };

    parallel_for(static_cast<long>(points.size()), [&](long i) {
        bool bad = false;
        Cplx z = points[i];
        Cplx lhs{0, 0}, rhs{0, 0};
        try {
            lhs = lhs_at(z, bad);
            Cplx cz = field_value(m, z, inner);
            rhs = cz * cz;
        } catch (const std::exception&) {
            bad = true;
        }
        rep.lhs[i] = lhs;
        rep.rhs[i] = rhs;
        rep.residuals[i] = std::abs(lhs - rhs);
        rep.inconclusive_flags[i] = bad ? 1 : 0;
    });

    for (size_t i = 0; i < points.size(); ++i) {
        if (rep.inconclusive_flags[i]) {
            ++rep.inconclusive;
            continue;
        }
        rep.max_residual = std::max(rep.max_residual, rep.residuals[i]);
    }
    rep.pass = rep.max_residual < tol && rep.inconclusive == 0;
    return rep;
}

IdentityReport verify_reflectionless(const ComplexMeasure& m, int sample_count, double tol,
                                     const EvalOptions& opts) {
    if (!m.is_continuous())
        throw InputError("reflectionless requires continuous measure");
    IdentityReport rep;
    rep.tolerance = tol;
    rep.nodes = sample_count;
    EvalOptions inner = opts;
    inner.ladder_check = false;
    for (int res = 0; res < 2; ++res) {
        int n = res == 0 ? sample_count : 2 * sample_count;
        NodeSet ns = gather_nodes(m, n);
        size_t base = rep.points.size();
        rep.points.resize(base + ns.nodes.size());
        rep.lhs.resize(rep.points.size());
        rep.rhs.resize(rep.points.size());
        rep.residuals.resize(rep.points.size());
        rep.inconclusive_flags.resize(rep.points.size(), 0);
        parallel_for(static_cast<long>(ns.nodes.size()), [&](long i) {
            Cplx z = ns.nodes[i];
            rep.points[base + i] = z;
            rep.rhs[base + i] = Cplx(0.0, 0.0);
            try {
                Cplx v = field_value(m, z, inner);
                rep.lhs[base + i] = v;
                rep.residuals[base + i] = std::abs(v);
            } catch (const std::exception&) {
                rep.inconclusive_flags[base + i] = 1;
            }
        });
    }
    for (size_t i = 0; i < rep.points.size(); ++i) {
        if (rep.inconclusive_flags[i]) {
            ++rep.inconclusive;
            continue;
        }
        rep.max_residual = std::max(rep.max_residual, rep.residuals[i]);
    }
    rep.pass = rep.max_residual < tol && rep.inconclusive == 0;
    return rep;
}

double antisymmetry_check(const ComplexMeasure& mu, const ComplexMeasure& nu,
                          const KernelSpec& K, double eps, const EvalOptions& opts) {
    if (!K.odd_sampled()) throw InputError("non-odd kernel rejected");
    if (!(eps > 0.0)) throw InputError("antisymmetry_check: eps must be positive");
    NodeSet a = gather_nodes(mu, opts.nodes);
    NodeSet b = gather_nodes(nu, opts.nodes);
    Cplx s1{0, 0}, s2{0, 0};
    for (size_t j = 0; j < b.nodes.size(); ++j) {
        Cplx acc{0, 0};
        for (size_t i = 0; i < a.nodes.size(); ++i) {
            Cplx dz = a.nodes[i] - b.nodes[j];
            if (std::abs(dz) > eps) acc += a.weights[i] * K.eval(dz);
        }
        s1 += b.weights[j] * acc;
    }
    for (size_t i = 0; i < a.nodes.size(); ++i) {
        Cplx acc{0, 0};
        for (size_t j = 0; j < b.nodes.size(); ++j) {
            Cplx dz = b.nodes[j] - a.nodes[i];
            if (std::abs(dz) > eps) acc += b.weights[j] * K.eval(dz);
        }
        s2 += a.weights[i] * acc;
    }
    return std::abs(s1 + s2);
}

std::vector<double> halfspace_diagnostic(const ComplexMeasure& mu, const KernelSpec& K, double c,
                                         const std::vector<double>& eps_ladder,
                                         const EvalOptions& opts) {
    if (!mu.is_positive()) throw InputError("halfspace_diagnostic: positive measure required");
    if (!K.odd_sampled()) throw InputError("non-odd kernel rejected");
    NodeSet ns = gather_nodes(mu, opts.nodes);
    std::vector<Cplx> right, left;
    std::vector<double> wr, wl;
    double scale = std::max(mu.support_diameter(), 1e-30);
    int on_line = 0;
    for (size_t i = 0; i < ns.nodes.size(); ++i) {
        double d = ns.nodes[i].real() - c;
        if (std::abs(d) <= 1e-13 * scale) {
            ++on_line;
            continue;
        }
        if (d > 0) {
            right.push_back(ns.nodes[i]);
            wr.push_back(ns.weights[i].real());
        } else {
            left.push_back(ns.nodes[i]);
            wl.push_back(ns.weights[i].real());
        }
    }
    if (on_line > static_cast<int>(ns.nodes.size()) / 100)
        throw InputError("halfspace_diagnostic: splitting line carries mass at sample resolution");
    if (right.empty() || left.empty())
        throw InputError("halfspace_diagnostic: degenerate split (one side empty)");
    std::vector<double> out;
    out.reserve(eps_ladder.size());
    for (double eps : eps_ladder) {
        double acc = 0.0;
        for (size_t i = 0; i < left.size(); ++i) {
            double inner = 0.0;
            for (size_t j = 0; j < right.size(); ++j) {
                Cplx dz = right[j] - left[i];
                if (std::abs(dz) > eps) inner += wr[j] * K.eval(dz).real();
            }
            acc += wl[i] * inner;
        }
        out.push_back(acc);
    }
    return out;
}

MaximalStats maximal_summability(const ComplexMeasure& m, int node_count,
                                 const std::vector<double>& cutoff_ladder,
                                 const std::vector<double>& eps_ladder,
                                 const EvalOptions& opts) {
    if (!m.is_continuous())
        throw InputError("maximal_summability: continuous measure required");
    MaximalStats st;
    NodeSet ns = gather_nodes(m, node_count);
    size_t N = ns.nodes.size();
    st.nodes = ns.nodes;
    st.node_weights.resize(N);
    for (size_t i = 0; i < N; ++i) st.node_weights[i] = std::abs(ns.weights[i]);
    st.cutoffs = cutoff_ladder;
    st.eps_values = eps_ladder;
    st.maximal_values.assign(N, 0.0);

    // One sweep computes both the per-node grid supremum and the eps-wise
    // L1 norms, in fixed-size blocks to bound the scratch matrix.
    st.eps_l1_norms.assign(eps_ladder.size(), 0.0);
    const size_t block = 4096;
    std::vector<std::vector<double>> abs_eps(std::min(block, N));
    for (size_t lo = 0; lo < N; lo += block) {
        size_t hi = std::min(N, lo + block);
        parallel_for(static_cast<long>(hi - lo), [&](long bi) {
            size_t i = lo + bi;
            abs_eps[bi].resize(eps_ladder.size());
            double best = 0.0;
            for (size_t k = 0; k < eps_ladder.size(); ++k) {
                double v = std::abs(cauchy_eps(m, ns.nodes[i], eps_ladder[k], opts));
                abs_eps[bi][k] = v;
                best = std::max(best, v);
            }
            st.maximal_values[i] = best;
        });
        for (size_t bi = 0; bi < hi - lo; ++bi)
            for (size_t k = 0; k < eps_ladder.size(); ++k)
                st.eps_l1_norms[k] += st.node_weights[lo + bi] * abs_eps[bi][k];
    }
    for (double v : st.maximal_values) st.max_maximal = std::max(st.max_maximal, v);

    for (double lam : cutoff_ladder) {
        double l1 = 0.0, tail = 0.0;
        for (size_t i = 0; i < N; ++i) {
            l1 += st.node_weights[i] * std::min(st.maximal_values[i], lam);
            if (st.maximal_values[i] > lam) tail += st.node_weights[i];
        }
        st.l1_truncated.push_back(l1);
        st.weak_values.push_back(lam * tail);
        st.weak_quasinorm = std::max(st.weak_quasinorm, lam * tail);
    }

    // Fit l1 = a + b ln(Lambda).
    size_t K = st.cutoffs.size();
    if (K >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        for (size_t k = 0; k < K; ++k) {
            double x = std::log(st.cutoffs[k]), y = st.l1_truncated[k];
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            syy += y * y;
        }
        double n = static_cast<double>(K);
        double denom = n * sxx - sx * sx;
        st.fit_slope = (n * sxy - sx * sy) / denom;
        st.fit_intercept = (sy - st.fit_slope * sx) / n;
        double ss_tot = syy - sy * sy / n;
        double ss_res = 0.0;
        for (size_t k = 0; k < K; ++k) {
            double pred = st.fit_intercept + st.fit_slope * std::log(st.cutoffs[k]);
            ss_res += sq(st.l1_truncated[k] - pred);
        }
        st.fit_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    }

    bool stabilized = K >= 2 && std::abs(st.l1_truncated[K - 1] - st.l1_truncated[K - 2]) <=
                                    0.01 * std::max(st.l1_truncated[K - 1], 1e-300);
    double wmax = 0.0, wmin = std::numeric_limits<double>::max();
    for (double w : st.weak_values) {
        wmax = std::max(wmax, w);
        wmin = std::min(wmin, w);
    }
    bool weak_bounded = wmax > 0.0 && wmax / std::max(wmin, 1e-300) < 1.5;
    if (stabilized)
        st.cls = SummabilityClass::Summable;
    else if (st.fit_r2 > 0.99 && st.fit_slope > 0.0 && weak_bounded)
        st.cls = SummabilityClass::WeakOnly;
    else
        st.cls = SummabilityClass::Divergent;
    return st;
}

Cplx ball_mass(const ComplexMeasure& m, Cplx w, double r) {
    Cplx acc{0, 0};
    for (const auto& c : m.components()) {
        if (std::holds_alternative<Atom>(c.shape)) {
            const auto& at = std::get<Atom>(c.shape);
            if (std::abs(at.location - w) < r) acc += c.coef * at.weight;
        } else if (std::holds_alternative<IntervalDensity>(c.shape)) {
            const auto& d = std::get<IntervalDensity>(c.shape);
            if (std::abs(w.imag()) < r) {
                double s = std::sqrt(r * r - sq(w.imag()));
                acc += c.coef * d.mass(w.real() - s, w.real() + s);
            }
        } else if (std::holds_alternative<CurveDensity>(c.shape)) {
            const auto& cd = std::get<CurveDensity>(c.shape);
            int n = static_cast<int>(cd.arc_t.size()) - 1;
            Cplx s{0, 0};
            for (int i = 0; i < n; ++i) {
                double t = 2.0 * kPi * i / n;
                Cplx z = cd.point(t);
                if (std::abs(z - w) < r) s += cd.density_at(z) * cd.tangent(t);
            }
            acc += c.coef * s * (2.0 * kPi / n);
        } else {
            const auto& ad = std::get<AreaDensity>(c.shape);
            int mth = 128;
            const int nu = 24;
            QuadRule g = gauss_legendre(nu);
            Cplx s{0, 0};
            for (int j = 0; j < mth; ++j) {
                double th = 2.0 * kPi * (j + 0.5) / mth;
                double smax = std::min(r, ad.ray_exit(w, th));
                if (ad.boundary_dist(w) < 0.0) smax = r;   // sample-resolution outside case
                if (smax <= 0.0) continue;
                for (int k = 0; k < nu; ++k) {
                    double sv = 0.5 * smax * (g.x[k] + 1.0);
                    Cplx z = w + sv * std::exp(Cplx(0.0, th));
                    s += 0.5 * smax * g.w[k] * ad.density(z) * sv;
                }
            }
            acc += c.coef * s * (2.0 * kPi / mth);
        }
    }
    return acc;
}

RatioTrace density_point_trace(const ComplexMeasure& m, Cplx w, const std::vector<double>& radii,
                               const EvalOptions& opts) {
    for (size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] < radii[i - 1]))
            throw InputError("density_point_trace: radii must be positive decreasing");
    RatioTrace tr;
    tr.radii = radii;
    for (double r : radii) {
        if (!(r > 0.0)) throw InputError("density_point_trace: radii must be positive");
        double mr = std::abs(ball_mass(m, w, r)) / (kPi * r * r);
        double rv = riesz_r1(m, w.real(), w.imag(), r, /*use_variation=*/true, opts);
        tr.mass_ratio.push_back(mr);
        tr.riesz_value.push_back(rv);
        tr.quotient.push_back(rv > 1e-300 ? mr / rv : 0.0);
    }
    return tr;
}

} // namespace pvc
