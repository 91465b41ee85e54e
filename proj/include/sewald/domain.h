#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace sewald {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;
using Ten3 = std::array<Mat3, 3>; // t[j][l][m]

using cplx = std::complex<double>;
using CVec3 = std::array<cplx, 3>;
using CMat3 = std::array<CVec3, 3>;
using CTen3 = std::array<CMat3, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) { a[0] += b[0]; a[1] += b[1]; a[2] += b[2]; return a; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec3& a) { return dot(a, a); }

enum class Kernel { stokeslet, stresslet, rotlet };

enum class Screening { ewald, hasimoto };

// Screening family attached to each kernel's scalar base kernel.
Screening screening_of(Kernel kind);

const char* kernel_name(Kernel kind);
bool kernel_from_name(const std::string& name, Kernel& out);

// Number of independent source strength components fed to the grid
// (3 for vector strengths, 9 for the stresslet's q (x) nu outer product).
int strength_components(Kernel kind);

struct Cell {
    std::array<double, 3> L{1.0, 1.0, 1.0};
    double volume() const { return L[0] * L[1] * L[2]; }
};

// Periodicity d in {0,1,2,3}: the first d axes are periodic, the rest free.
struct Periodicity {
    int d = 3;
    bool periodic(int axis) const { return axis < d; }
};

struct SourceSystem {
    Kernel kind = Kernel::stokeslet;
    Cell cell;
    int d = 3;
    std::vector<Vec3> x;        // positions, inside the primary cell
    std::vector<Vec3> f;        // stokeslet/rotlet strengths, or stresslet q
    std::vector<Vec3> nu;       // stresslet orientation vectors (empty otherwise)

    std::size_t size() const { return x.size(); }
};

struct TargetSet {
    std::vector<Vec3> x;
    bool same_as_sources = false;

    static TargetSet from_sources(const SourceSystem& s) {
        return TargetSet{s.x, true};
    }
};

// Validates invariants (sizes, coordinates in the cell, d range) and throws
// std::invalid_argument on violation.
void validate_system(const SourceSystem& s);

// Q = sum |f_n|^2 for vector strengths, sum_{lm} (q_l nu_m)^2 for the stresslet.
double source_quantity(const SourceSystem& s);

// Fold a coordinate into [0, L) in each periodic direction; free directions
// are left untouched.
Vec3 wrap_position(const Vec3& x, const Cell& cell, int d);

// Nearest periodic image of a separation vector: each periodic component is
// shifted into [-L/2, L/2). Free components pass through.
Vec3 minimum_image(const Vec3& r, const Cell& cell, int d);

} // namespace sewald
