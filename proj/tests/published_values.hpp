#pragma once

#include <cstddef>

// Reference values from the published instability / mixed-scheme experiment
// tables for the abandonment queue with lambda = 0.9, mu = 1, theta = 0.5.
// Each entry carries the number of significant digits it was printed with;
// comparisons accept a relative deviation of 10^(1-digits).

namespace bdpe_test {

struct ForwardTableRow {
    int n;
    double p;            // steady-state probability, 2 significant digits
    double fwd;          // forward recurrence seeded with the rounded mean cost
    int fwd_digits;
    double pert;         // same, mean cost moved up by one spacing step
    int pert_digits;
};

inline constexpr ForwardTableRow kForwardTable[] = {
    {0, 5.0e-1, 0.44279513, 8, 0.44279513, 8},
    {1, 3.0e-1, 0.62523145, 8, 0.62523145, 8},
    {2, 1.4e-1, 0.72108723, 8, 0.72108723, 8},
    {3, 4.9e-2, 0.77914855, 8, 0.77914855, 8},
    {4, 1.5e-2, 0.81773474, 8, 0.81773474, 8},
    {5, 3.7e-3, 0.84509690, 8, 0.84509690, 8},
    {6, 8.4e-4, 0.86544800, 8, 0.86544800, 8},
    {7, 1.7e-4, 0.88114626, 8, 0.88114626, 8},
    {8, 3.0e-5, 0.89360768, 8, 0.89360768, 8},
    {9, 5.0e-6, 0.90373094, 8, 0.90373094, 8},
    {10, 7.4e-7, 0.91211248, 8, 0.91211248, 8},
    {11, 1.0e-7, 0.91916304, 8, 0.91916304, 8},
    {12, 1.3e-8, 0.92517434, 8, 0.92517435, 8},
    {13, 1.6e-9, 0.93035909, 8, 0.93035915, 8},
    {14, 1.8e-10, 0.93487590, 8, 0.93487647, 8},
    {15, 1.9e-11, 0.9388453, 7, 0.9388507, 7},
    {16, 1.9e-12, 0.9423595, 7, 0.9424134, 7},
    {17, 1.8e-13, 0.9454791, 7, 0.9460477, 7},
    {18, 1.6e-14, 0.9481179, 7, 0.9544357, 7},
    {19, 1.4e-15, 0.9486149, 7, 1.0223229, 8},
    {20, 1.1e-16, 0.9258667, 7, 1.8267420, 8},
    {21, 8.9e-18, 0.6066468, 7, 1.2e1, 2},
    {22, 6.6e-19, -3.7e0, 2, 1.5e2, 2},
    {23, 4.8e-20, -6.4e1, 2, 2.1e3, 2},
    {24, 3.3e-21, -9.3e2, 2, 3.0e4, 2},
    {25, 2.2e-22, -1.4e4, 2, 4.5e5, 2},
    {26, 1.4e-23, -2.2e5, 2, 7.0e6, 2},
    {27, 8.8e-25, -3.5e6, 2, 1.1e8, 2},
    {28, 5.3e-26, -5.8e7, 2, 1.9e9, 2},
    {29, 3.1e-27, -1.0e9, 2, 3.2e10, 2},
};

struct MixedTableRow {
    int n;
    double phi;          // mixed scheme, frontier 42, seed 0; 15 digits
    double zeta_ratio;   // |zeta A_n / phi_n| relative amplification, 3 digits
    double t_down;       // mean passage time n+1 -> n
    int t_down_digits;
    double t_up;         // mean passage time n -> n+1, 2 digits
};

inline constexpr MixedTableRow kMixedTable[] = {
    {12, 0.925174342237504, 6.47e-2, 0.150, 3, 8.4e7},
    {13, 0.930359089413224, 6.00e-2, 0.140, 3, 7.0e8},
    {14, 0.934875921107126, 5.57e-2, 0.131, 3, 6.2e9},
    {15, 0.938845492334662, 5.21e-2, 0.123, 3, 5.9e10},
    {16, 0.942361160780650, 4.89e-2, 0.116, 3, 5.9e11},
    {17, 0.945496267896444, 4.61e-2, 0.109, 3, 6.2e12},
    {18, 0.948309214061184, 4.36e-2, 0.104, 3, 6.9e13},
    {19, 0.950847068147842, 4.13e-2, 0.099, 2, 8.4e14},
    {20, 0.953148181463212, 3.93e-2, 0.094, 2, 9.8e15},
    {21, 0.955244111686174, 3.75e-2, 0.090, 2, 1.3e17},
    {22, 0.957161059916347, 3.58e-2, 0.086, 2, 1.7e18},
    {23, 0.958920958494403, 3.42e-2, 0.082, 2, 2.3e19},
    {24, 0.960542304575400, 3.28e-2, 0.079, 2, 3.4e20},
    {25, 0.962040806065022, 3.15e-2, 0.076, 2, 5.0e21},
    {26, 0.963429887334373, 3.03e-2, 0.073, 2, 7.8e22},
    {27, 0.964721088932251, 2.92e-2, 0.071, 2, 1.3e24},
    {28, 0.965924386304869, 2.82e-2, 0.068, 2, 2.1e25},
    {29, 0.967048446017873, 2.72e-2, 0.066, 2, 3.6e26},
};

// Summary metrics of the same instance, mixed scheme with frontier 42.
inline constexpr double kRefZeta = 0.398515613690624;     // 15 digits
inline constexpr double kRefBeta0 = -0.417521221604055;   // 15 digits
inline constexpr double kRefSigma2 = 0.589053281069282;   // 15 digits
inline constexpr double kRefTp0 = 0.761;                  // 3 digits
inline constexpr double kRefT10 = 1.117;                  // 3-4 digits
inline constexpr double kRefBeta1 = 0.025;                // 2 digits

inline double printed_tol(int digits) {
    double tol = 10.0;
    for (int i = 0; i < digits; ++i) tol /= 10.0;
    return tol;
}

}  // namespace bdpe_test
