#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace panelcap {

// ---------------------------------------------------------------------------
// Physical constants
// ---------------------------------------------------------------------------

/// Vacuum permittivity and derived factors. epsilon0 is CODATA 2018.
struct PhysicalConstants {
    static constexpr double epsilon0 = 8.8541878128e-12;  // F/m
    static constexpr double pi = 3.141592653589793238462643383279502884;
    /// 1 / (4 pi eps0), V·m/C
    static constexpr double coulomb_constant = 1.0 / (4.0 * pi * epsilon0);
    /// 4 pi eps0 · 1 m, the farad unit used for normalized capacitances.
    static constexpr double four_pi_eps0 = 4.0 * pi * epsilon0;
};

inline constexpr double kSqrtPi = 1.7724538509055160272981674833411451828;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or malformed input (degenerate geometry, bad JSON, ...).
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// Structurally invalid mesh: overlapping tiles/panels, conflicting voltages.
class MeshError : public Error {
  public:
    using Error::Error;
};

/// Numerical failure: ill-conditioning, residual violation, non-convergence,
/// or a dense matrix exceeding the configured memory cap.
class NumericsError : public Error {
  public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Small numeric helpers
// ---------------------------------------------------------------------------

/// Neumaier compensated accumulator. The corner sums of the analytic
/// kernels cancel strongly for touching rectangles; compensation keeps the
/// result reproducible at the 1e-15 level.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

}  // namespace panelcap
