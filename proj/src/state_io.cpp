#include "steer/state_io.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace steer {

using nlohmann::json;

BipartiteState read_state(std::istream& in) {
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("state file: malformed JSON: ") + e.what());
  }
  try {
    const auto dim_a = doc.at("dimA").get<std::size_t>();
    const auto dim_b = doc.at("dimB").get<std::size_t>();
    const json& entries = doc.at("rho");
    const std::size_t n = dim_a * dim_b;
    if (n == 0 || !entries.is_array() || entries.size() != n * n) {
      throw std::invalid_argument("state file: 'rho' must hold (dimA*dimB)^2 [re, im] pairs");
    }
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n * n; ++k) {
      const json& e = entries[k];
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("state file: entries must be [re, im] pairs");
      m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) =
          Complex(e[0].get<double>(), e[1].get<double>());
    }
    return BipartiteState(dim_a, dim_b, std::move(m));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("state file: ") + e.what());
  }
}

BipartiteState read_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file " + path.string());
  return read_state(in);
}

void write_state(const BipartiteState& state, std::ostream& out) {
  json doc;
  doc["dimA"] = state.dim_a();
  doc["dimB"] = state.dim_b();
  json entries = json::array();
  const Matrix& m = state.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  }
  doc["rho"] = std::move(entries);
  out << doc.dump() << '\n';
}

}  // namespace steer
