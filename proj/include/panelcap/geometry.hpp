#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "panelcap/common.hpp"

namespace panelcap {

// ---------------------------------------------------------------------------
// Basic geometry
// ---------------------------------------------------------------------------

enum class Axis : int { X = 0, Y = 1, Z = 2 };

inline int index(Axis a) { return static_cast<int>(a); }
inline Axis axis_from_index(int i) { return static_cast<Axis>(((i % 3) + 3) % 3); }
Axis axis_from_name(const std::string& name);  // "x" | "y" | "z"
const char* axis_name(Axis a);

struct Vec3 {
    double v[3] = {0.0, 0.0, 0.0};

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
    double& operator[](Axis a) { return v[index(a)]; }
    double operator[](Axis a) const { return v[index(a)]; }
};

double distance(const Vec3& a, const Vec3& b);

/// Closed interval [lo, hi] on one coordinate axis.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

// ---------------------------------------------------------------------------
// Panels, tiles, meshes
// ---------------------------------------------------------------------------

/// An axis-aligned rectangular conductor patch, the unit of user input.
/// u_range/v_range live in the two in-plane axes ordered by axis name
/// (normal z -> u along x, v along y; normal y -> u along x, v along z;
/// normal x -> u along y, v along z).
struct Panel {
    Axis normal = Axis::Z;
    double offset = 0.0;    // position of the plane along the normal, m
    Interval u_range;
    Interval v_range;
    int n_u = 1;
    int n_v = 1;
    int conductor_id = 0;
    double voltage = 0.0;   // V

    /// Throws InvalidInput if a range is degenerate or a count is < 1.
    void validate() const;
};

/// One mesh element. In-plane intervals use the cyclic axis convention:
/// for normal axis k, u lies along axis (k+1)%3 and v along (k+2)%3, so
/// canonical integration frames are deterministic.
struct Tile {
    Axis normal = Axis::Z;
    double offset = 0.0;
    Interval u;
    Interval v;
    int conductor_id = 0;

    Axis u_axis() const { return axis_from_index(index(normal) + 1); }
    Axis v_axis() const { return axis_from_index(index(normal) + 2); }

    double area() const { return u.length() * v.length(); }
    Vec3 center() const;

    /// Extent of the tile along an arbitrary world axis; degenerate
    /// [offset, offset] along the normal.
    Interval along(Axis a) const;

    /// Geometric identity (conductor id not considered).
    bool same_geometry(const Tile& o) const;
};

struct Mesh {
    std::vector<Tile> tiles;
    std::map<int, double> conductor_voltage;

    std::size_t size() const { return tiles.size(); }
};

// ---------------------------------------------------------------------------
// Canonical integration frames
// ---------------------------------------------------------------------------

enum class PairRelation { Self, Coplanar, ParallelOffset, Perpendicular, Skew };

const char* relation_name(PairRelation r);

/// Integration limits of a rectangle pair: the first rectangle spans
/// [a0,a1] x [b0,b1] and the second [c0,c1] x [d0,d1] in the canonical frame.
struct RectLimits {
    double a0 = 0, a1 = 0;
    double b0 = 0, b1 = 0;
    double c0 = 0, c1 = 0;
    double d0 = 0, d1 = 0;
};

/// A tile pair reduced to the frame the analytic kernels integrate in.
///
/// Parallel relations: both rectangles use a shared in-plane coordinate
/// system and z_c is the normal separation (0 for Self/Coplanar).
/// Perpendicular: the shared axis is the frame's x; the first tile lies in
/// the plane z = z_c with in-plane coordinates (x, y), the second in the
/// plane y = y_c with in-plane coordinates (x, z).
struct CanonicalPair {
    PairRelation relation = PairRelation::Skew;
    RectLimits limits;
    double z_c = 0.0;
    double y_c = 0.0;  // Perpendicular only
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Splits a panel into n_u x n_v equal rectangles, row-major with u fastest.
std::vector<Tile> subdivide_panel(const Panel& panel);

/// Builds a mesh from panels: subdivides each, checks same-plane panels for
/// positive-area overlap and conductors for conflicting voltages.
Mesh mesh_from_panels(std::span<const Panel> panels);

/// Two width x depth plates, gap apart along z, centered on the z axis.
/// Conductor 0 (upper plate, z = +gap/2) at +1 V, conductor 1 at -1 V,
/// each meshed n x n.
Mesh build_parallel_plate(double width, double depth, double gap, int n);

/// Closed cube surface of the given edge length centered at the origin,
/// single conductor at 1 V, each face meshed n x n. Tiles on adjacent faces
/// share edges but never overlap.
Mesh build_cube(double edge, int n);

/// A single square plate in the z = 0 plane at 1 V, meshed n x n.
Mesh build_square(double side, int n);

/// Classifies a tile pair and expresses it in the canonical frame.
/// Throws MeshError if the tiles overlap with positive area without being
/// identical. Skew never occurs for axis-aligned tiles.
CanonicalPair canonicalize_pair(const Tile& t1, const Tile& t2);

/// Parses the geometry JSON format:
///   {"panels": [{"normal": "z", "offset": 0.0, "u": [lo,hi], "v": [lo,hi],
///                "nu": 4, "nv": 4, "conductor": 0, "voltage": 1.0}, ...]}
/// Lengths in meters, voltages in volts.
std::vector<Panel> panels_from_json(std::istream& in);
std::vector<Panel> panels_from_json_file(const std::string& path);

}  // namespace panelcap
