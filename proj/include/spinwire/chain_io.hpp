#pragma once

#include <string>

#include <json.hpp>

#include "spinwire/chain_model.hpp"

namespace spinwire {

// Flat record {n, j, gamma, h}. Reading also accepts {"preset": name, "n": N, ...}
// with the preset's parameters and expands it to explicit arrays:
//   xx_minimal: j1        xx_multi: boundary (array)
//   xy_minimal: j1, h1, gamma, h        pst: (none)
nlohmann::json to_json(const ChainSpec& spec);
ChainSpec chain_from_json(const nlohmann::json& record);

ChainSpec load_chain(const std::string& path);

}  // namespace spinwire
