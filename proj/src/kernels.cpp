#include "panelcap/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace panelcap {

const char* tier_name(KernelTier t) {
    switch (t) {
        case KernelTier::PointCharge: return "point";
        case KernelTier::CenterCollocation: return "double";
        case KernelTier::GalerkinQuadruple: return "quad";
    }
    return "?";
}

KernelTier tier_from_name(const std::string& name) {
    if (name == "point") return KernelTier::PointCharge;
    if (name == "double") return KernelTier::CenterCollocation;
    if (name == "quad") return KernelTier::GalerkinQuadruple;
    throw InvalidInput("unknown kernel tier '" + name + "' (expected point, double or quad)");
}

double sign_factor(int i, int j, int k, int l) {
    return ((i + j + k + l) % 2 == 0) ? 1.0 : -1.0;
}

namespace {

void check_rectangles(const RectLimits& L) {
    if (!(L.a0 < L.a1) || !(L.b0 < L.b1) || !(L.c0 < L.c1) || !(L.d0 < L.d1))
        throw InvalidInput("degenerate rectangle: every side must have positive length");
}

double largest_side(const RectLimits& L) {
    return std::max(std::max(L.a1 - L.a0, L.b1 - L.b0),
                    std::max(L.c1 - L.c0, L.d1 - L.d0));
}

/// Threshold below which a cubic prefactor makes its summand negligible.
double skip_threshold(const RectLimits& L) {
    const double s = largest_side(L);
    return 1e-30 * s * s * s;
}

/// Orders the two rectangles of a parallel pair deterministically so that
/// exchanging them reproduces the sum bit for bit.
RectLimits ordered(const RectLimits& L) {
    const auto first = std::tie(L.a0, L.a1, L.b0, L.b1);
    const auto second = std::tie(L.c0, L.c1, L.d0, L.d1);
    if (second < first) return RectLimits{L.c0, L.c1, L.d0, L.d1, L.a0, L.a1, L.b0, L.b1};
    return L;
}

}  // namespace

double parallel_quadruple_I(const RectLimits& limits, double z_c) {
    check_rectangles(limits);
    if (z_c == 0.0)
        throw InvalidInput("parallel_quadruple_I needs z_c != 0; use coplanar_quadruple_I");

    const RectLimits L = ordered(limits);
    const double skip = skip_threshold(L);
    const double z = z_c;
    const double z2 = z * z;
    const double a[2] = {L.a0, L.a1}, b[2] = {L.b0, L.b1};
    const double c[2] = {L.c0, L.c1}, d[2] = {L.d0, L.d1};

    NeumaierSum acc;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double x = a[i] - c[j];
            const double x2 = x * x;
            const double rxz = std::sqrt(x2 + z2);
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    const double y = b[k] - d[l];
                    const double y2 = y * y;
                    const double A = sign_factor(i, j, k, l);
                    const double r = std::sqrt(x2 + y2 + z2);

                    acc.add(A * (kSqrtPi / 12.0) * (-x2 - y2 + 2.0 * z2) * r);

                    const double cy = y * (x2 - z2);
                    if (std::abs(cy) > skip)
                        acc.add(A * (kSqrtPi / 4.0) * cy * std::asinh(y / rxz));

                    const double cx = x * (y2 - z2);
                    if (std::abs(cx) > skip)
                        acc.add(A * (kSqrtPi / 4.0) * cx * std::asinh(x / std::sqrt(y2 + z2)));

                    const double cxyz = x * y * z;
                    if (std::abs(cxyz) > skip)
                        acc.add(-A * (kSqrtPi / 2.0) * cxyz * std::atan(x * y / (z * r)));
                }
        }
    return acc.value();
}

double coplanar_quadruple_I(const RectLimits& limits) {
    check_rectangles(limits);

    const RectLimits L = ordered(limits);
    const double skip = skip_threshold(L);
    const double a[2] = {L.a0, L.a1}, b[2] = {L.b0, L.b1};
    const double c[2] = {L.c0, L.c1}, d[2] = {L.d0, L.d1};

    NeumaierSum acc;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double x = a[i] - c[j];
            const double x2 = x * x;
            const double ax = std::abs(x);
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    const double y = b[k] - d[l];
                    const double y2 = y * y;
                    const double A = sign_factor(i, j, k, l);

                    acc.add(A * (kSqrtPi / 12.0) * (-x2 - y2) * std::sqrt(x2 + y2));

                    // z -> 0 turns asinh(y / sqrt(x^2 + z^2)) into asinh(y / |x|).
                    const double cy = y * x2;
                    if (std::abs(cy) > skip)
                        acc.add(A * (kSqrtPi / 4.0) * cy * std::asinh(y / ax));

                    const double cx = x * y2;
                    if (std::abs(cx) > skip)
                        acc.add(A * (kSqrtPi / 4.0) * cx * std::asinh(x / std::abs(y)));
                }
        }
    return acc.value();
}

double self_quadruple_I(double w, double h) {
    if (!(w > 0.0) || !(h > 0.0))
        throw InvalidInput("self_quadruple_I needs positive side lengths");
    const double x = w, y = h;
    const double diag = std::sqrt(x * x + y * y);
    return (kSqrtPi / 3.0) * (x * x * x + y * y * y) +
           (kSqrtPi / 3.0) * (-x * x - y * y) * diag +
           kSqrtPi * (y * x * x * std::asinh(y / x) + x * y * y * std::asinh(x / y));
}

double perpendicular_quadruple_I(const RectLimits& limits, double y_c, double z_c) {
    check_rectangles(limits);

    const double skip = skip_threshold(limits);
    const double a[2] = {limits.a0, limits.a1}, b[2] = {limits.b0, limits.b1};
    const double c[2] = {limits.c0, limits.c1}, d[2] = {limits.d0, limits.d1};

    NeumaierSum acc;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double x = a[i] - c[j];
            const double x2 = x * x;
            for (int k = 0; k < 2; ++k) {
                const double y = b[k] - y_c;
                const double y2 = y * y;
                const double rxy = std::sqrt(x2 + y2);
                for (int l = 0; l < 2; ++l) {
                    const double z = z_c - d[l];
                    const double z2 = z * z;
                    const double A = sign_factor(i, j, k, l);
                    const double r = std::sqrt(x2 + y2 + z2);

                    acc.add(-A * (kSqrtPi / 6.0) * y * z * r);

                    const double c1 = z * (3.0 * x2 - z2);
                    if (std::abs(c1) > skip)
                        acc.add(A * (kSqrtPi / 12.0) * c1 * std::asinh(y / std::sqrt(x2 + z2)));

                    const double c2 = y * (3.0 * x2 - y2);
                    if (std::abs(c2) > skip)
                        acc.add(A * (kSqrtPi / 12.0) * c2 * std::asinh(z / rxy));

                    const double cxyz = x * y * z;
                    if (std::abs(cxyz) > skip)
                        acc.add(A * (kSqrtPi / 2.0) * cxyz * std::asinh(x / std::sqrt(y2 + z2)));

                    const double cz = x * z2;
                    if (std::abs(cz) > skip)
                        acc.add(-A * (kSqrtPi / 4.0) * cz * std::atan(x * y / (z * r)));

                    const double cy = x * y2;
                    if (std::abs(cy) > skip)
                        acc.add(-A * (kSqrtPi / 4.0) * cy * std::atan(x * z / (y * r)));

                    const double cx = x2 * x;
                    if (std::abs(cx) > skip)
                        acc.add(-A * (kSqrtPi / 12.0) * cx * std::atan(y * z / (x * r)));
                }
            }
        }
    return acc.value();
}

double quadruple_I(const CanonicalPair& pair) {
    switch (pair.relation) {
        case PairRelation::Self:
            return self_quadruple_I(pair.limits.a1 - pair.limits.a0,
                                    pair.limits.b1 - pair.limits.b0);
        case PairRelation::Coplanar:
            return coplanar_quadruple_I(pair.limits);
        case PairRelation::ParallelOffset:
            return parallel_quadruple_I(pair.limits, pair.z_c);
        case PairRelation::Perpendicular:
            return perpendicular_quadruple_I(pair.limits, pair.y_c, pair.z_c);
        case PairRelation::Skew:
            break;
    }
    throw InvalidInput("no closed form for skew rectangle pairs");
}

double point_charge_P(double d) {
    if (!(d > 0.0))
        throw InvalidInput("point_charge_P needs d > 0; self coupling uses the collocation path");
    return PhysicalConstants::coulomb_constant / d;
}

namespace {

/// log(p + r) evaluated without cancellation for p < 0, where
/// r = sqrt(p^2 + q2) and q2 = r^2 - p^2 > 0.
double log_p_plus_r(double p, double r, double q2) {
    if (p < 0.0) return std::log(q2) - std::log(r - p);
    return std::log(p + r);
}

}  // namespace

double collocation_double_P(const Tile& source, const Vec3& target) {
    if (!(source.area() > 0.0)) throw InvalidInput("degenerate tile");

    const double z = target[source.normal] - source.offset;
    const double x0 = target[source.u_axis()];
    const double y0 = target[source.v_axis()];
    const double z2 = z * z;
    const double skip = 1e-30 * std::max(source.u.length(), source.v.length());
    const double xs[2] = {source.u.lo - x0, source.u.hi - x0};
    const double ys[2] = {source.v.lo - y0, source.v.hi - y0};

    NeumaierSum acc;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double x = xs[i];
            const double y = ys[j];
            const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            const double r = std::sqrt(x * x + y * y + z2);

            if (std::abs(x) > skip) acc.add(sgn * x * log_p_plus_r(y, r, x * x + z2));
            if (std::abs(y) > skip) acc.add(sgn * y * log_p_plus_r(x, r, y * y + z2));
            if (std::abs(z) > skip) acc.add(-sgn * z * std::atan(x * y / (z * r)));
        }
    return acc.value() * PhysicalConstants::coulomb_constant / source.area();
}

namespace {

auto tile_key(const Tile& t) {
    return std::make_tuple(index(t.normal), t.offset, t.u.lo, t.u.hi, t.v.lo, t.v.hi);
}

}  // namespace

double coupling_P(const Tile& t1, const Tile& t2, KernelTier tier) {
    switch (tier) {
        case KernelTier::PointCharge: {
            if (t1.same_geometry(t2)) return collocation_double_P(t1, t1.center());
            return point_charge_P(distance(t1.center(), t2.center()));
        }
        case KernelTier::CenterCollocation: {
            if (t1.same_geometry(t2)) return collocation_double_P(t1, t1.center());
            return collocation_double_P(t1, t2.center());
        }
        case KernelTier::GalerkinQuadruple: {
            // Deterministic pair order makes P(t1,t2) == P(t2,t1) bit for bit.
            const Tile* first = &t1;
            const Tile* second = &t2;
            if (tile_key(t2) < tile_key(t1)) std::swap(first, second);
            const CanonicalPair pair = canonicalize_pair(*first, *second);
            const double I = quadruple_I(pair);
            return 2.0 * I /
                   (kSqrtPi * PhysicalConstants::four_pi_eps0 * first->area() * second->area());
        }
    }
    throw InvalidInput("unknown kernel tier");
}

}  // namespace panelcap
