#pragma once

#include <string>
#include <string_view>

#include "bfai/problem.hpp"

namespace bfai {

/// Instance file format: a JSON object with fields k, m, mu (row-major
/// k*(m+1) array), sigma2 (same shape), gamma (length m).
ProblemInstance instance_from_json(std::string_view text);
std::string instance_to_json(const ProblemInstance& instance);

ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& instance, const std::string& path);

}  // namespace bfai
