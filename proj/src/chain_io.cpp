#include "spinwire/chain_io.hpp"

#include <fstream>
#include <stdexcept>

namespace spinwire {

using nlohmann::json;

json to_json(const ChainSpec& spec) {
  return json{{"n", spec.size()}, {"j", spec.j}, {"gamma", spec.gamma}, {"h", spec.h}};
}

namespace {

double number(const json& record, const char* key) {
  if (!record.contains(key) || !record.at(key).is_number())
    throw std::invalid_argument(std::string("chain record needs numeric '") + key + "'");
  return record.at(key).get<double>();
}

int length(const json& record) {
  if (!record.contains("n") || !record.at("n").is_number_integer())
    throw std::invalid_argument("chain record needs integer 'n'");
  return record.at("n").get<int>();
}

ChainSpec expand_preset(const json& record) {
  const auto name = record.at("preset").get<std::string>();
  const int n = length(record);
  if (name == "xx_minimal") return xx_minimal(n, number(record, "j1"));
  if (name == "xx_multi") {
    if (!record.contains("boundary") || !record.at("boundary").is_array())
      throw std::invalid_argument("xx_multi preset needs a 'boundary' array");
    const auto boundary = record.at("boundary").get<std::vector<double>>();
    return xx_multi_param(n, boundary);
  }
  if (name == "xy_minimal")
    return xy_minimal(n, number(record, "j1"), number(record, "h1"), number(record, "gamma"),
                      number(record, "h"));
  if (name == "pst") return pst_chain(n);
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace

ChainSpec chain_from_json(const json& record) {
  if (!record.is_object()) throw std::invalid_argument("chain record must be an object");
  try {
    if (record.contains("preset")) return expand_preset(record);
    const int n = length(record);
    ChainSpec spec{record.at("j").get<std::vector<double>>(),
                   record.at("gamma").get<std::vector<double>>(),
                   record.at("h").get<std::vector<double>>()};
    if (spec.size() != n) throw std::invalid_argument("'h' length differs from 'n'");
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed chain record: ") + e.what());
  }
}

ChainSpec load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file " + path);
  json record;
  try {
    in >> record;
  } catch (const json::exception& e) {
    throw std::invalid_argument("spec file is not valid JSON: " + std::string(e.what()));
  }
  return chain_from_json(record);
}

}  // namespace spinwire
