#ifndef MAGNL_MESH_IO_HPP
#define MAGNL_MESH_IO_HPP

#include <string>

#include "magnl/geometry.hpp"

namespace magnl {

/// Plain-text mesh format:
///   nodes <N>            followed by lines "id x y"
///   triangles <T>        followed by lines "id n1 n2 n3"
///   boundary_edges <B>   followed by lines "n1 n2 outer|hole"
std::string mesh_to_text(const Mesh& mesh);
void write_mesh_text(const Mesh& mesh, const std::string& path);

}  // namespace magnl

#endif  // MAGNL_MESH_IO_HPP
