#include "sewald/window.h"

#include "sewald/specfun.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sewald {

namespace {

void validate(const WindowSpec& spec) {
    if (spec.P < 2 || spec.P % 2 != 0)
        throw std::invalid_argument("window size P must be an even integer >= 2");
    if (!(spec.h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (!(spec.beta > 0.0)) throw std::invalid_argument("window shape beta must be positive");
}

// Solve the (nu+1) x (nu+1) Vandermonde system V c = y in extended precision.
void solve_vandermonde(int n, const long double* nodes, long double* y, double* out) {
    std::vector<long double> a(static_cast<size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        long double p = 1.0L;
        for (int i = 0; i < n; ++i) {
            a[static_cast<size_t>(j) * n + i] = p;
            p *= nodes[j];
        }
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row)
            if (std::fabs(static_cast<double>(a[static_cast<size_t>(row) * n + col])) >
                std::fabs(static_cast<double>(a[static_cast<size_t>(piv) * n + col])))
                piv = row;
        if (piv != col) {
            for (int i = col; i < n; ++i)
                std::swap(a[static_cast<size_t>(col) * n + i],
                          a[static_cast<size_t>(piv) * n + i]);
            std::swap(y[col], y[piv]);
        }
        for (int row = col + 1; row < n; ++row) {
            const long double f =
                a[static_cast<size_t>(row) * n + col] / a[static_cast<size_t>(col) * n + col];
            for (int i = col; i < n; ++i)
                a[static_cast<size_t>(row) * n + i] -= f * a[static_cast<size_t>(col) * n + i];
            y[row] -= f * y[col];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        long double s = y[row];
        for (int i = row + 1; i < n; ++i)
            s -= a[static_cast<size_t>(row) * n + i] * static_cast<long double>(out[i]);
        out[row] = static_cast<double>(s / a[static_cast<size_t>(row) * n + row]);
    }
}

} // namespace

std::string window_kind_name(WindowKind kind) {
    switch (kind) {
        case WindowKind::kb: return "kb";
        case WindowKind::pkb: return "pkb";
        case WindowKind::tg: return "tg";
    }
    return "pkb";
}

WindowKind window_kind_from_name(const std::string& name) {
    if (name == "kb") return WindowKind::kb;
    if (name == "pkb") return WindowKind::pkb;
    if (name == "tg") return WindowKind::tg;
    throw std::invalid_argument("unknown window kind: " + name);
}

WindowSpec WindowSpec::make(WindowKind kind, int P, double h) {
    WindowSpec spec;
    spec.kind = kind;
    spec.P = P;
    spec.h = h;
    spec.beta = 2.5 * P;
    spec.nu = std::min(P / 2 + 2, 10);
    spec.alpha = 0.91 * 0.5 * M_PI * P;
    validate(spec);
    return spec;
}

double kb_eval(const WindowSpec& spec, double r) {
    const double aw = spec.half_width();
    if (std::fabs(r) > aw) return 0.0;
    const double t = r / aw;
    const double arg = std::max(1.0 - t * t, 0.0);
    return bessel_I0(spec.beta * std::sqrt(arg)) / bessel_I0(spec.beta);
}

double kb_hat(const WindowSpec& spec, double k) {
    const double aw = spec.half_width();
    const double beta = spec.beta;
    const double s = beta * beta - k * k * aw * aw;
    const double front = 2.0 * aw / bessel_I0(beta);
    if (s > 1e-6) {
        const double rt = std::sqrt(s);
        return front * std::sinh(rt) / rt;
    }
    if (s < -1e-6) {
        const double rt = std::sqrt(-s);
        return front * std::sin(rt) / rt;
    }
    return front * (1.0 + s / 6.0 + s * s / 120.0);
}

PiecewisePolyWindow pkb_build(const WindowSpec& spec) {
    validate(spec);
    const int nu = spec.nu;
    if (nu < 1) throw std::invalid_argument("polynomial degree must be at least 1");
    const int n = nu + 1;

    PiecewisePolyWindow win;
    win.P = spec.P;
    win.nu = nu;
    win.h = spec.h;
    win.coef.resize(static_cast<size_t>(spec.P) * n);

    std::vector<long double> nodes(n), values(n);
    for (int j = 0; j < n; ++j) nodes[j] = std::cos(static_cast<long double>(j) * M_PI / nu);

    for (int l = -spec.P / 2; l < spec.P / 2; ++l) {
        const double a = l * spec.h;
        const double mid = a + 0.5 * spec.h;
        for (int j = 0; j < n; ++j) {
            const double r = mid + 0.5 * spec.h * static_cast<double>(nodes[j]);
            values[j] = kb_eval(spec, r);
        }
        solve_vandermonde(n, nodes.data(), values.data(),
                          win.coef.data() + static_cast<size_t>(l + spec.P / 2) * n);
    }
    return win;
}

double pkb_eval(const PiecewisePolyWindow& win, double r) {
    const double aw = 0.5 * win.h * win.P;
    if (std::fabs(r) > aw) return 0.0;
    int l = static_cast<int>(std::floor(r / win.h));
    l = std::clamp(l, -win.P / 2, win.P / 2 - 1);
    const double u = 2.0 * (r - l * win.h) / win.h - 1.0;
    const double* c = win.coef.data() + static_cast<size_t>(l + win.P / 2) * (win.nu + 1);
    double acc = 0.0;
    for (int i = win.nu; i >= 0; --i) acc = c[i] + acc * u;
    return acc;
}

double tg_eval(const WindowSpec& spec, double r) {
    const double aw = spec.half_width();
    if (std::fabs(r) > aw) return 0.0;
    const double t = r / aw;
    return std::exp(-spec.alpha * t * t);
}

double ug_hat(const WindowSpec& spec, double k) {
    const double aw = spec.half_width();
    return std::sqrt(M_PI / spec.alpha) * aw * std::exp(-k * k * aw * aw / (4.0 * spec.alpha));
}

Window::Window(const WindowSpec& spec) : spec_(spec) {
    validate(spec);
    if (spec_.kind == WindowKind::tg && !(spec_.alpha > 0.0))
        throw std::invalid_argument("window shape alpha must be positive");
    if (spec_.kind == WindowKind::pkb) poly_ = pkb_build(spec_);
}

double Window::eval1d(double r) const {
    switch (spec_.kind) {
        case WindowKind::kb: return kb_eval(spec_, r);
        case WindowKind::pkb: return pkb_eval(poly_, r);
        case WindowKind::tg: return tg_eval(spec_, r);
    }
    return 0.0;
}

double Window::hat1d(double k) const {
    return spec_.kind == WindowKind::tg ? ug_hat(spec_, k) : kb_hat(spec_, k);
}

double tensor_window_eval(const Window& win, const Vec3& r) {
    return win.eval1d(r[0]) * win.eval1d(r[1]) * win.eval1d(r[2]);
}

} // namespace sewald
