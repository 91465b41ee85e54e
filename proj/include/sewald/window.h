#pragma once

#include "sewald/domain.h"

#include <vector>

namespace sewald {

enum class WindowKind { kb, pkb, tg };

std::string window_kind_name(WindowKind kind);
WindowKind window_kind_from_name(const std::string& name);

// Spreading window on P grid points with support [-a_w, a_w], a_w = hP/2.
struct WindowSpec {
    WindowKind kind = WindowKind::pkb;
    int P = 8;
    double h = 1.0;
    double beta = 20.0;
    int nu = 6;
    double alpha = 0.0;

    double half_width() const { return 0.5 * h * static_cast<double>(P); }

    // All shape parameters tied to P: beta = 2.5P, nu = min(P/2+2, 10),
    // alpha = 0.91 (pi/2) P.
    static WindowSpec make(WindowKind kind, int P, double h);
};

// Polynomial approximation of the Kaiser-Bessel window: one degree-nu
// polynomial per grid subinterval, in the local coordinate u in [-1, 1].
struct PiecewisePolyWindow {
    int P = 0;
    int nu = 0;
    double h = 1.0;
    std::vector<double> coef;
};

double kb_eval(const WindowSpec& spec, double r);
double kb_hat(const WindowSpec& spec, double k);

PiecewisePolyWindow pkb_build(const WindowSpec& spec);
double pkb_eval(const PiecewisePolyWindow& win, double r);

double tg_eval(const WindowSpec& spec, double r);
double ug_hat(const WindowSpec& spec, double k);

// Immutable constructed window; evaluation is pure.
class Window {
  public:
    explicit Window(const WindowSpec& spec);
    const WindowSpec& spec() const { return spec_; }
    double eval1d(double r) const;
    // Transform divided out in the scaling step: exact KB transform for both
    // KB and PKB, untruncated-Gaussian transform for TG.
    double hat1d(double k) const;

  private:
    WindowSpec spec_;
    PiecewisePolyWindow poly_;
};

double tensor_window_eval(const Window& win, const Vec3& r);

} // namespace sewald
