#pragma once

#include "isl/policy.hpp"

#include <iosfwd>
#include <string>

namespace isl {

// A trained controller on disk: either a policy network (with the spec
// needed to rebuild it) or a raw decision vector from a direct problem.
struct StoredPolicy {
  bool direct = false;
  PolicySpec spec; // meaningful when !direct
  Index dim = 0;   // meaningful when direct
  ParameterSet params;
};

void save_params(const StoredPolicy& stored, std::ostream& out);
void save_params_file(const StoredPolicy& stored, const std::string& path);

// Throws std::runtime_error with a line-numbered message on malformed input.
StoredPolicy load_params(std::istream& in, const std::string& origin);
StoredPolicy load_params_file(const std::string& path);

} // namespace isl
