#include "sewald/domain.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sewald {

Screening screening_of(Kernel kind) {
    return kind == Kernel::rotlet ? Screening::ewald : Screening::hasimoto;
}

const char* kernel_name(Kernel kind) {
    switch (kind) {
        case Kernel::stokeslet: return "stokeslet";
        case Kernel::stresslet: return "stresslet";
        case Kernel::rotlet: return "rotlet";
    }
    return "?";
}

bool kernel_from_name(const std::string& name, Kernel& out) {
    if (name == "stokeslet") { out = Kernel::stokeslet; return true; }
    if (name == "stresslet") { out = Kernel::stresslet; return true; }
    if (name == "rotlet") { out = Kernel::rotlet; return true; }
    return false;
}

int strength_components(Kernel kind) {
    return kind == Kernel::stresslet ? 9 : 3;
}

void validate_system(const SourceSystem& s) {
    if (s.d < 0 || s.d > 3)
        throw std::invalid_argument("periodicity d must be in 0..3");
    for (int i = 0; i < 3; ++i)
        if (!(s.cell.L[i] > 0.0))
            throw std::invalid_argument("cell lengths must be positive");
    if (s.f.size() != s.x.size())
        throw std::invalid_argument("strength count does not match position count");
    if (s.kind == Kernel::stresslet) {
        if (s.nu.size() != s.x.size())
            throw std::invalid_argument("stresslet needs one orientation per source");
    } else if (!s.nu.empty()) {
        throw std::invalid_argument("orientations only apply to the stresslet");
    }
    for (const Vec3& p : s.x)
        for (int i = 0; i < 3; ++i)
            if (!std::isfinite(p[i]))
                throw std::invalid_argument("non-finite source position");
}

double source_quantity(const SourceSystem& s) {
    double q = 0.0;
    if (s.kind == Kernel::stresslet) {
        for (std::size_t n = 0; n < s.size(); ++n)
            q += norm2(s.f[n]) * norm2(s.nu[n]);
    } else {
        for (const Vec3& fn : s.f) q += norm2(fn);
    }
    return q;
}

Vec3 wrap_position(const Vec3& x, const Cell& cell, int d) {
    Vec3 y = x;
    for (int i = 0; i < d; ++i) {
        y[i] = std::fmod(y[i], cell.L[i]);
        if (y[i] < 0.0) y[i] += cell.L[i];
    }
    return y;
}

Vec3 minimum_image(const Vec3& r, const Cell& cell, int d) {
    Vec3 y = r;
    for (int i = 0; i < d; ++i) {
        y[i] -= cell.L[i] * std::floor(y[i] / cell.L[i] + 0.5);
    }
    return y;
}

} // namespace sewald
