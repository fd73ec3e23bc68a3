#pragma once

#include <string>

#include "logsp/grid.hpp"

namespace logsp {

/// LSPF field file: 16-byte header (magic "LSPF", u32 n, f64 L, little
/// endian) followed by n*n little-endian doubles, row-major.
void write_field(const std::string& path, const Field2D& u);
Field2D read_field(const std::string& path);

/// "x,y,value" rows, one per node.
void write_field_csv(const std::string& path, const Field2D& u);

}  // namespace logsp
