#include "panelcap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace panelcap {

Axis axis_from_name(const std::string& name) {
    if (name == "x") return Axis::X;
    if (name == "y") return Axis::Y;
    if (name == "z") return Axis::Z;
    throw InvalidInput("unknown axis name '" + name + "' (expected x, y or z)");
}

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
    }
    return "?";
}

const char* relation_name(PairRelation r) {
    switch (r) {
        case PairRelation::Self: return "self";
        case PairRelation::Coplanar: return "coplanar";
        case PairRelation::ParallelOffset: return "parallel-offset";
        case PairRelation::Perpendicular: return "perpendicular";
        case PairRelation::Skew: return "skew";
    }
    return "?";
}

double distance(const Vec3& a, const Vec3& b) {
    const double dx = a.v[0] - b.v[0];
    const double dy = a.v[1] - b.v[1];
    const double dz = a.v[2] - b.v[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void Panel::validate() const {
    if (!(u_range.length() > 0.0) || !(v_range.length() > 0.0))
        throw InvalidInput("panel ranges must have strictly positive length");
    if (n_u < 1 || n_v < 1)
        throw InvalidInput("panel subdivision counts must be at least 1");
    if (!std::isfinite(offset) || !std::isfinite(voltage))
        throw InvalidInput("panel offset and voltage must be finite");
}

Vec3 Tile::center() const {
    Vec3 c;
    c[normal] = offset;
    c[u_axis()] = u.mid();
    c[v_axis()] = v.mid();
    return c;
}

Interval Tile::along(Axis a) const {
    if (a == normal) return {offset, offset};
    if (a == u_axis()) return u;
    return v;
}

bool Tile::same_geometry(const Tile& o) const {
    return normal == o.normal && offset == o.offset && u.lo == o.u.lo &&
           u.hi == o.u.hi && v.lo == o.v.lo && v.hi == o.v.hi;
}

std::vector<Tile> subdivide_panel(const Panel& panel) {
    panel.validate();

    // The panel's u runs along the first in-plane axis in name order.
    const int k = index(panel.normal);
    const Axis name_u = axis_from_index(k == 0 ? 1 : 0);

    const double du = panel.u_range.length() / panel.n_u;
    const double dv = panel.v_range.length() / panel.n_v;

    std::vector<Tile> tiles;
    tiles.reserve(static_cast<std::size_t>(panel.n_u) * panel.n_v);
    for (int iv = 0; iv < panel.n_v; ++iv) {
        const Interval vi{panel.v_range.lo + iv * dv, panel.v_range.lo + (iv + 1) * dv};
        for (int iu = 0; iu < panel.n_u; ++iu) {
            const Interval ui{panel.u_range.lo + iu * du, panel.u_range.lo + (iu + 1) * du};
            Tile t;
            t.normal = panel.normal;
            t.offset = panel.offset;
            t.conductor_id = panel.conductor_id;
            // Map the name-ordered panel intervals onto the tile's cyclic axes.
            if (t.u_axis() == name_u) {
                t.u = ui;
                t.v = vi;
            } else {
                t.u = vi;
                t.v = ui;
            }
            tiles.push_back(t);
        }
    }
    return tiles;
}

namespace {

bool intervals_overlap(const Interval& a, const Interval& b) {
    return std::min(a.hi, b.hi) - std::max(a.lo, b.lo) > 0.0;
}

bool panels_overlap(const Panel& p, const Panel& q) {
    if (p.normal != q.normal || p.offset != q.offset) return false;
    return intervals_overlap(p.u_range, q.u_range) &&
           intervals_overlap(p.v_range, q.v_range);
}

}  // namespace

Mesh mesh_from_panels(std::span<const Panel> panels) {
    if (panels.empty()) throw InvalidInput("mesh needs at least one panel");
    for (std::size_t i = 0; i < panels.size(); ++i) {
        panels[i].validate();
        for (std::size_t j = i + 1; j < panels.size(); ++j) {
            if (panels_overlap(panels[i], panels[j])) {
                std::ostringstream msg;
                msg << "panels " << i << " and " << j
                    << " overlap with positive area on the same plane";
                throw MeshError(msg.str());
            }
        }
    }

    Mesh mesh;
    for (const Panel& p : panels) {
        auto [it, inserted] = mesh.conductor_voltage.emplace(p.conductor_id, p.voltage);
        if (!inserted && it->second != p.voltage) {
            std::ostringstream msg;
            msg << "conductor " << p.conductor_id << " has conflicting voltages "
                << it->second << " and " << p.voltage;
            throw MeshError(msg.str());
        }
        auto tiles = subdivide_panel(p);
        mesh.tiles.insert(mesh.tiles.end(), tiles.begin(), tiles.end());
    }
    return mesh;
}

Mesh build_parallel_plate(double width, double depth, double gap, int n) {
    if (!(width > 0.0) || !(depth > 0.0) || !(gap > 0.0))
        throw InvalidInput("plate dimensions and gap must be positive");
    if (n < 1) throw InvalidInput("subdivision count must be at least 1");

    const Interval ux{-width / 2.0, width / 2.0};
    const Interval vy{-depth / 2.0, depth / 2.0};
    const Panel upper{Axis::Z, +gap / 2.0, ux, vy, n, n, 0, +1.0};
    const Panel lower{Axis::Z, -gap / 2.0, ux, vy, n, n, 1, -1.0};
    const Panel panels[] = {upper, lower};
    return mesh_from_panels(panels);
}

Mesh build_cube(double edge, int n) {
    if (!(edge > 0.0)) throw InvalidInput("cube edge must be positive");
    if (n < 1) throw InvalidInput("subdivision count must be at least 1");

    const double h = edge / 2.0;
    const Interval span{-h, h};
    std::vector<Panel> panels;
    for (int k = 0; k < 3; ++k) {
        for (double side : {-h, h}) {
            panels.push_back(Panel{axis_from_index(k), side, span, span, n, n, 0, 1.0});
        }
    }
    return mesh_from_panels(panels);
}

Mesh build_square(double side, int n) {
    if (!(side > 0.0)) throw InvalidInput("square side must be positive");
    if (n < 1) throw InvalidInput("subdivision count must be at least 1");
    const Interval span{-side / 2.0, side / 2.0};
    const Panel panel{Axis::Z, 0.0, span, span, n, n, 0, 1.0};
    const Panel panels[] = {panel};
    return mesh_from_panels(panels);
}

namespace {

Axis third_axis(Axis a, Axis b) {
    return axis_from_index(3 - index(a) - index(b));
}

RectLimits limits_from(const Interval& a, const Interval& b, const Interval& c,
                       const Interval& d) {
    return RectLimits{a.lo, a.hi, b.lo, b.hi, c.lo, c.hi, d.lo, d.hi};
}

}  // namespace

CanonicalPair canonicalize_pair(const Tile& t1, const Tile& t2) {
    CanonicalPair pair;
    if (t1.normal == t2.normal) {
        pair.limits = limits_from(t1.u, t1.v, t2.u, t2.v);
        pair.z_c = t2.offset - t1.offset;
        if (pair.z_c == 0.0) {
            if (t1.same_geometry(t2)) {
                pair.relation = PairRelation::Self;
            } else if (intervals_overlap(t1.u, t2.u) && intervals_overlap(t1.v, t2.v)) {
                throw MeshError("coplanar tiles overlap with positive area without being identical");
            } else {
                pair.relation = PairRelation::Coplanar;
            }
        } else {
            pair.relation = PairRelation::ParallelOffset;
        }
        return pair;
    }

    // Perpendicular frame: shared axis -> x, t2's normal -> y, t1's normal -> z.
    const Axis shared = third_axis(t1.normal, t2.normal);
    pair.relation = PairRelation::Perpendicular;
    pair.limits = limits_from(t1.along(shared), t1.along(t2.normal),
                              t2.along(shared), t2.along(t1.normal));
    pair.y_c = t2.offset;
    pair.z_c = t1.offset;
    return pair;
}

std::vector<Panel> panels_from_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("geometry JSON parse error: ") + e.what());
    }

    std::vector<Panel> panels;
    try {
        if (!doc.is_object() || !doc.contains("panels") || !doc["panels"].is_array())
            throw InvalidInput("geometry JSON must be an object with a 'panels' array");
        for (const auto& jp : doc["panels"]) {
            Panel p;
            p.normal = axis_from_name(jp.at("normal").get<std::string>());
            p.offset = jp.at("offset").get<double>();
            const auto& u = jp.at("u");
            const auto& v = jp.at("v");
            if (!u.is_array() || u.size() != 2 || !v.is_array() || v.size() != 2)
                throw InvalidInput("panel 'u' and 'v' must be [lo, hi] arrays");
            p.u_range = {u[0].get<double>(), u[1].get<double>()};
            p.v_range = {v[0].get<double>(), v[1].get<double>()};
            p.n_u = jp.at("nu").get<int>();
            p.n_v = jp.at("nv").get<int>();
            p.conductor_id = jp.at("conductor").get<int>();
            p.voltage = jp.at("voltage").get<double>();
            p.validate();
            panels.push_back(p);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("geometry JSON field error: ") + e.what());
    }
    if (panels.empty()) throw InvalidInput("geometry JSON contains no panels");
    return panels;
}

std::vector<Panel> panels_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open geometry file: " + path);
    return panels_from_json(in);
}

}  // namespace panelcap
