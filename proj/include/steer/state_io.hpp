#pragma once

// JSON state files:
//   { "dimA": 2, "dimB": 2, "rho": [[re, im], ...] }   (row-major, (dimA*dimB)^2 pairs)

#include <filesystem>
#include <iosfwd>

#include "steer/qops.hpp"

namespace steer {

BipartiteState read_state(std::istream& in);
BipartiteState read_state_file(const std::filesystem::path& path);
void write_state(const BipartiteState& state, std::ostream& out);

}  // namespace steer
