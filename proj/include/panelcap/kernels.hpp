#pragma once

#include "panelcap/geometry.hpp"

namespace panelcap {

/// Accuracy tiers for the coupling coefficients P_ij.
enum class KernelTier {
    PointCharge,        ///< 1/(4 pi eps0 d) between centers; exact self term
    CenterCollocation,  ///< potential averaged over one tile, point source at the other's center
    GalerkinQuadruple   ///< exact quadruple integral averaged over both tiles (default)
};

const char* tier_name(KernelTier t);
KernelTier tier_from_name(const std::string& name);  // "point" | "double" | "quad"

/// Corner sign (-1)^(i+j+k+l) of the 16-corner sums.
double sign_factor(int i, int j, int k, int l);

// ---------------------------------------------------------------------------
// Quadruple integrals I, in m^3.
//
// I is the five-fold Gaussian-transform integral whose closed forms the
// kernels evaluate; it relates to the plain quadruple integral of 1/r by
//   I = (sqrt(pi)/2) * Int_{S1} Int_{S2} dA1 dA2 / r,
// and to the coupling coefficient by
//   P  = 2 I / (sqrt(pi) * 4 pi eps0 * S1 * S2).
//
// Each function evaluates a 16-corner signed sum with corner differences
//   x = a_i - c_j,  y = b_k - d_l  (parallel)  or  y = b_k - y_c, z = z_c - d_l
// (perpendicular). A summand carrying an inverse hyperbolic or inverse
// tangent factor is skipped when its cubic prefactor has magnitude below
// 1e-30 * scale^3 (scale = largest rectangle side): at that size the term's
// true value is negligible and evaluating it would form inf * 0.
// ---------------------------------------------------------------------------

/// Parallel rectangles with nonzero normal separation z_c.
double parallel_quadruple_I(const RectLimits& limits, double z_c);

/// Coplanar rectangles (z_c = 0 limit); they may touch or overlap.
double coplanar_quadruple_I(const RectLimits& limits);

/// Self coupling of a w x h rectangle.
double self_quadruple_I(double w, double h);

/// Perpendicular rectangles in the canonical frame (see CanonicalPair).
double perpendicular_quadruple_I(const RectLimits& limits, double y_c, double z_c);

/// Dispatches a canonical pair to the matching closed form.
double quadruple_I(const CanonicalPair& pair);

// ---------------------------------------------------------------------------
// Coupling coefficients P, in 1/farad.
// ---------------------------------------------------------------------------

/// Point-charge coupling 1/(4 pi eps0 d). d = 0 is an error; self coupling
/// takes the collocation path instead.
double point_charge_P(double d);

/// Potential of a unit point charge at `target`, averaged over `source`:
///   P = 1/(4 pi eps0 S) * Int_{source} dA / |r - target|.
/// Finite for any target, including points inside the source rectangle.
double collocation_double_P(const Tile& source, const Vec3& target);

/// Coupling between two tiles of one mesh at the requested tier.
/// Symmetric for GalerkinQuadruple (bit-exact: the pair is put in a
/// canonical order before evaluation).
double coupling_P(const Tile& t1, const Tile& t2, KernelTier tier);

}  // namespace panelcap
