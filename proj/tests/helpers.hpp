#pragma once

#include <cmath>
#include <functional>

#include "diskflow/geometry.hpp"

namespace diskflow::testing {

inline constexpr double kPi = 3.14159265358979323846;

// Scalar field from a callable of the reference Cartesian coordinates.
inline Field scalar_of(const ReferenceDisk& disk,
                       const std::function<double(double, double)>& f) {
    Field out(0, Frame::Eulerian, disk.n_r(), disk.n_theta());
    for (int j = 0; j < disk.n_r(); ++j)
        for (int i = 0; i < disk.n_theta(); ++i)
            out.comp(0)(j, i) = f(disk.y1(j, i), disk.y2(j, i));
    return out;
}

inline Field vector_of(const ReferenceDisk& disk,
                       const std::function<double(double, double)>& f1,
                       const std::function<double(double, double)>& f2) {
    Field out(1, Frame::Eulerian, disk.n_r(), disk.n_theta());
    for (int j = 0; j < disk.n_r(); ++j)
        for (int i = 0; i < disk.n_theta(); ++i) {
            out.comp(0)(j, i) = f1(disk.y1(j, i), disk.y2(j, i));
            out.comp(1)(j, i) = f2(disk.y1(j, i), disk.y2(j, i));
        }
    return out;
}

// Divergence-free strain seed (a x1, -a x2).
inline Field quadrupole(const ReferenceDisk& disk, double a) {
    return vector_of(disk, [a](double x, double) { return a * x; },
                     [a](double, double y) { return -a * y; });
}

inline Field rotation_seed(const ReferenceDisk& disk, double omega) {
    return vector_of(disk, [omega](double, double y) { return -omega * y; },
                     [omega](double x, double) { return omega * x; });
}

} // namespace diskflow::testing
