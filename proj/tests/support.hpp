#pragma once

#include <cstdint>
#include <vector>

#include "fscm/mesh.hpp"

namespace fscm::test {

// Structured mesh of the rectangle [x0,x1] x [y0,y1], interior-first, bit 0
// set on every boundary vertex.
inline MeshPtr rectangle_mesh(double x0, double x1, double y0, double y1, int nx, int ny) {
  std::vector<Point2> pts;
  std::vector<std::uint32_t> masks;
  std::vector<std::size_t> index((nx + 1) * (ny + 1));
  auto boundary = [&](int i, int j) { return i == 0 || j == 0 || i == nx || j == ny; };
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        if (boundary(i, j) != (pass == 1)) continue;
        index[j * (nx + 1) + i] = pts.size();
        pts.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny});
        masks.push_back(pass == 1 ? 1U : 0U);
      }
    }
  }
  std::vector<Triangle> tris;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t a = index[j * (nx + 1) + i];
      const std::size_t b = index[j * (nx + 1) + i + 1];
      const std::size_t c = index[(j + 1) * (nx + 1) + i + 1];
      const std::size_t d = index[(j + 1) * (nx + 1) + i];
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  }
  return std::make_shared<const TriMesh>(std::move(pts), std::move(tris), std::move(masks));
}

}  // namespace fscm::test
