#include "magnl/mesh_io.hpp"

#include <cstdio>
#include <fstream>

#include "magnl/errors.hpp"

namespace magnl {

std::string mesh_to_text(const Mesh& mesh) {
  std::string out;
  char line[160];

  std::snprintf(line, sizeof line, "nodes %d\n", mesh.n_nodes());
  out += line;
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    std::snprintf(line, sizeof line, "%d %.17g %.17g\n", i, mesh.nodes[i].x, mesh.nodes[i].y);
    out += line;
  }

  std::snprintf(line, sizeof line, "triangles %d\n", mesh.n_tris());
  out += line;
  for (int t = 0; t < mesh.n_tris(); ++t) {
    std::snprintf(line, sizeof line, "%d %d %d %d\n", t, mesh.tris[t][0], mesh.tris[t][1],
                  mesh.tris[t][2]);
    out += line;
  }

  std::snprintf(line, sizeof line, "boundary_edges %zu\n", mesh.boundary.size());
  out += line;
  for (const BoundaryEdge& e : mesh.boundary) {
    std::snprintf(line, sizeof line, "%d %d %s\n", e.a, e.b, e.hole ? "hole" : "outer");
    out += line;
  }
  return out;
}

void write_mesh_text(const Mesh& mesh, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << mesh_to_text(mesh);
}

}  // namespace magnl
