#pragma once

// Grid sampling of a parametrized surface and Wavefront OBJ output.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "singcrit/germ.hpp"

namespace singcrit {

struct MeshSpec {
  Vec2 u_range{-1.0, 1.0};
  Vec2 v_range{-1.0, 1.0};
  int u_res = 32;  // grid points along u
  int v_res = 32;  // grid points along v
};

struct Mesh {
  int u_res = 0;
  int v_res = 0;
  std::vector<Vec3> vertices;  // row-major: v index outer, u index inner

  std::size_t face_count() const {
    return 2 * static_cast<std::size_t>(u_res - 1) * static_cast<std::size_t>(v_res - 1);
  }
};

inline void validate(const MeshSpec& spec) {
  if (spec.u_res < 2 || spec.v_res < 2)
    throw Error(ErrorCode::InvalidArgument, "mesh resolution must be at least 2 along each axis");
  for (double x : {spec.u_range[0], spec.u_range[1], spec.v_range[0], spec.v_range[1]})
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "mesh ranges must be finite");
}

inline Mesh sample(const MapGerm& f, const MeshSpec& spec) {
  validate(spec);
  Mesh m{spec.u_res, spec.v_res, {}};
  m.vertices.reserve(static_cast<std::size_t>(spec.u_res) * static_cast<std::size_t>(spec.v_res));
  for (int i = 0; i < spec.v_res; ++i) {
    const double v = spec.v_range[0] + (spec.v_range[1] - spec.v_range[0]) * i / (spec.v_res - 1);
    for (int j = 0; j < spec.u_res; ++j) {
      const double u = spec.u_range[0] + (spec.u_range[1] - spec.u_range[0]) * j / (spec.u_res - 1);
      const Vec3 p = f.evaluate(u, v);
      for (double x : p)
        if (!std::isfinite(x))
          throw Error(ErrorCode::InvalidArgument,
                      "surface is not finite at (" + std::to_string(u) + ", " + std::to_string(v) + ")");
      m.vertices.push_back(p);
    }
  }
  return m;
}

/// `v x y z` lines, then two `f` triangles per grid cell with 1-based indices.
inline void write_obj(const Mesh& m, std::ostream& out) {
  char buf[96];
  for (const Vec3& p : m.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p[0], p[1], p[2]);
    out << buf;
  }
  auto id = [&](int i, int j) { return i * m.u_res + j + 1; };
  for (int i = 0; i + 1 < m.v_res; ++i)
    for (int j = 0; j + 1 < m.u_res; ++j) {
      out << "f " << id(i, j) << ' ' << id(i, j + 1) << ' ' << id(i + 1, j + 1) << '\n';
      out << "f " << id(i, j) << ' ' << id(i + 1, j + 1) << ' ' << id(i + 1, j) << '\n';
    }
}

}  // namespace singcrit
