#include "pvc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace pvc {

QuadRule gauss_legendre(int n) {
    if (n < 1) throw InputError("gauss_legendre: n must be >= 1");
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton from the Chebyshev-based initial guess.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

namespace {

// Symmetric tridiagonal eigensolve (implicit QL with shifts), also rotating a
// row vector of first-components used for Golub-Welsch weights.
void tql_first_row(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    int n = static_cast<int>(d.size());
    if (n == 1) return;
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            for (; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m == l) break;
            if (++iter > 60) throw ConvergenceError("gauss_jacobi: eigensolve failed");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double rr = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(rr, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                double b = c * e[i];
                rr = std::hypot(f, g);
                e[i + 1] = rr;
                if (rr == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / rr;
                c = g / rr;
                g = d[i + 1] - p;
                rr = (d[i] - g) * s + 2.0 * c * b;
                p = s * rr;
                d[i + 1] = g + p;
                g = c * rr - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (rr == 0.0 && m - 1 >= l) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // Sort ascending, carrying the first-row entries.
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
    std::vector<double> d2(n), z2(n);
    for (int i = 0; i < n; ++i) {
        d2[i] = d[idx[i]];
        z2[i] = z[idx[i]];
    }
    d.swap(d2);
    z.swap(z2);
}

} // namespace

QuadRule gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw InputError("gauss_jacobi: n must be >= 1");
    if (alpha <= -1.0 || beta <= -1.0)
        throw InputError("gauss_jacobi: exponents must be > -1 for integrability");

    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);

    if (alpha == -0.5 && beta == -0.5) {
        // Chebyshev, first kind.
        for (int k = 0; k < n; ++k) {
            r.x[k] = std::cos(kPi * (2.0 * (n - k) - 1.0) / (2.0 * n));
            r.w[k] = kPi / n;
        }
        return r;
    }
    if (alpha == 0.5 && beta == 0.5) {
        // Chebyshev, second kind.
        for (int k = 0; k < n; ++k) {
            double th = kPi * (n - k) / (n + 1.0);
            r.x[k] = std::cos(th);
            r.w[k] = kPi / (n + 1.0) * sq(std::sin(th));
        }
        return r;
    }
    if (alpha == 0.0 && beta == 0.0) return gauss_legendre(n);

    // Golub-Welsch from the three-term recurrence coefficients.
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0), z(n, 0.0);
    double ab = alpha + beta;
    d[0] = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        double kk = k;
        double den = (2.0 * kk + ab) * (2.0 * kk + ab + 2.0);
        d[k] = (beta * beta - alpha * alpha) / den;
    }
    for (int k = 1; k < n; ++k) {
        double kk = k;
        double b2;
        if (k == 1)
            b2 = 4.0 * (alpha + 1.0) * (beta + 1.0) / (sq(ab + 2.0) * (ab + 3.0));
        else
            b2 = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
                 (sq(2.0 * kk + ab) * (2.0 * kk + ab + 1.0) * (2.0 * kk + ab - 1.0));
        e[k - 1] = std::sqrt(b2);
    }
    double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                          std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    z[0] = 1.0;
    tql_first_row(d, e, z);
    for (int k = 0; k < n; ++k) {
        r.x[k] = d[k];
        r.w[k] = mu0 * z[k] * z[k];
    }
    return r;
}

QuadRule mapped_jacobi(int n, double alpha, double beta, double a, double b) {
    QuadRule base = gauss_jacobi(n, alpha, beta);
    double m = 0.5 * (a + b), rho = 0.5 * (b - a);
    double scale = std::pow(rho, alpha + beta + 1.0);
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int k = 0; k < n; ++k) {
        r.x[k] = m + rho * base.x[k];
        r.w[k] = scale * base.w[k];
    }
    return r;
}

namespace {

struct Panel {
    double a, b;
    Cplx coarse, fine;
    double err;
};

const QuadRule& rule7() {
    static QuadRule r = gauss_legendre(7);
    return r;
}
const QuadRule& rule15() {
    static QuadRule r = gauss_legendre(15);
    return r;
}

Panel eval_panel(const std::function<Cplx(double)>& f, double a, double b) {
    Panel p{a, b, {0, 0}, {0, 0}, 0.0};
    double m = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int k = 0; k < 7; ++k) p.coarse += rule7().w[k] * f(m + h * rule7().x[k]);
    for (int k = 0; k < 15; ++k) p.fine += rule15().w[k] * f(m + h * rule15().x[k]);
    p.coarse *= h;
    p.fine *= h;
    p.err = std::abs(p.fine - p.coarse);
    return p;
}

} // namespace

AdaptResult integrate_adaptive(const std::function<Cplx(double)>& f, double a, double b,
                               double abs_tol, double rel_tol, int max_panels) {
    AdaptResult out;
    if (a == b) return out;
    auto cmp = [](const Panel& l, const Panel& r) { return l.err < r.err; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
    Cplx total{0, 0};
    double err = 0.0;
    Panel first = eval_panel(f, a, b);
    total = first.fine;
    err = first.err;
    heap.push(first);
    int panels = 1;
    while (panels < max_panels) {
        double tol = std::max(abs_tol, rel_tol * std::abs(total));
        if (err <= tol) break;
        Panel worst = heap.top();
        heap.pop();
        if (worst.b - worst.a < 1e-15 * (std::abs(worst.a) + std::abs(worst.b) + 1.0)) {
            // Cannot split further; accept its fine estimate.
            if (heap.empty()) break;
            err -= worst.err;
            continue;
        }
        double mid = 0.5 * (worst.a + worst.b);
        Panel l = eval_panel(f, worst.a, mid);
        Panel r = eval_panel(f, mid, worst.b);
        total += l.fine + r.fine - worst.fine;
        err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
        ++panels;
    }
    out.value = total;
    out.err = err;
    out.panels = panels;
    out.converged = err <= std::max(abs_tol, rel_tol * std::abs(total)) * 1.0001 + 1e-300;
    return out;
}

double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               double abs_tol, double rel_tol, int max_panels) {
    auto g = [&f](double t) { return Cplx(f(t), 0.0); };
    return integrate_adaptive(g, a, b, abs_tol, rel_tol, max_panels).value.real();
}

} // namespace pvc
