#include "bfai/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bfai {

namespace {

Matrix matrix_from_flat(const std::vector<double>& flat, int rows, int cols,
                        const char* field) {
  if (static_cast<long>(flat.size()) != static_cast<long>(rows) * cols)
    throw std::invalid_argument(std::string("instance_from_json: field '") + field +
                                "' has wrong length");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = flat[static_cast<size_t>(r) * cols + c];
  return m;
}

}  // namespace

ProblemInstance instance_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("instance_from_json: ") + e.what());
  }
  for (const char* field : {"k", "m", "mu", "sigma2", "gamma"})
    if (!j.contains(field))
      throw std::invalid_argument(std::string("instance_from_json: missing field '") + field +
                                  "'");
  const int k = j.at("k").get<int>();
  const int m = j.at("m").get<int>();
  if (k < 1 || m < 0) throw std::invalid_argument("instance_from_json: bad dimensions");
  auto mu_flat = j.at("mu").get<std::vector<double>>();
  auto sigma2_flat = j.at("sigma2").get<std::vector<double>>();
  auto gamma = j.at("gamma").get<std::vector<double>>();
  if (static_cast<int>(gamma.size()) != m)
    throw std::invalid_argument("instance_from_json: gamma must have m entries");
  return ProblemInstance(matrix_from_flat(mu_flat, k, m + 1, "mu"),
                         matrix_from_flat(sigma2_flat, k, m + 1, "sigma2"), std::move(gamma));
}

std::string instance_to_json(const ProblemInstance& instance) {
  nlohmann::ordered_json j;
  j["k"] = instance.k;
  j["m"] = instance.m;
  j["mu"] = instance.mu.data();
  j["sigma2"] = instance.sigma2.data();
  j["gamma"] = instance.gamma;
  return j.dump(2) + "\n";
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_instance: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

void save_instance(const ProblemInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_instance: cannot open '" + path + "'");
  out << instance_to_json(instance);
}

}  // namespace bfai
