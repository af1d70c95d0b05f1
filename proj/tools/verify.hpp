#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace cxhess::cli {

using Json = nlohmann::ordered_json;

// Suites: core, modulus, barrier, radial. Each returns
// {"checks": [{"name", "pass", ...}], "pass": bool}.
Json run_suite(const std::string& suite, std::uint64_t seed);

const std::vector<std::string>& suite_names();

} // namespace cxhess::cli
