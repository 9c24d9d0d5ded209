#include "hypercqed/cli/config.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "hypercqed/error.hpp"

namespace hypercqed::cli {

namespace {

constexpr std::array<std::pair<Task, std::string_view>, 9> kTasks{{
    {Task::spectrum, "spectrum"},
    {Task::dos, "dos"},
    {Task::jspectral, "jspectral"},
    {Task::greens, "greens"},
    {Task::boundstate, "boundstate"},
    {Task::boundstate2, "boundstate2"},
    {Task::dynamics, "dynamics"},
    {Task::spinmodel, "spinmodel"},
    {Task::flatband, "flatband"},
}};

void only_keys(const nlohmann::json& j, std::string_view where, std::set<std::string> allowed) {
  if (!j.is_object()) throw InvalidSpecError(std::string(where) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw InvalidSpecError("unknown key '" + k + "' in " + std::string(where));
  }
}

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidSpecError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string_view to_string(Task t) noexcept {
  for (const auto& [k, s] : kTasks)
    if (k == t) return s;
  return "?";
}

Task task_from_string(std::string_view s) {
  for (const auto& [k, n] : kTasks)
    if (n == s) return k;
  throw InvalidSpecError("unknown task '" + std::string(s) + "'");
}

RunConfig config_from_json(const nlohmann::json& j) {
  only_keys(j, "config", {"lattice", "model", "task", "params", "output", "seed"});
  RunConfig c;
  if (!j.contains("task")) throw InvalidSpecError("config needs a 'task'");
  c.task = task_from_string(get_or<std::string>(j, "task", ""));

  if (j.contains("lattice")) {
    const auto& l = j.at("lattice");
    only_keys(l, "lattice", {"p", "q", "rings", "kind"});
    c.lattice.p = get_or(l, "p", c.lattice.p);
    c.lattice.q = get_or(l, "q", c.lattice.q);
    c.lattice.rings = get_or(l, "rings", c.lattice.rings);
    c.lattice.kind = lattice_kind_from_string(get_or<std::string>(l, "kind", std::string(to_string(c.lattice.kind))));
  }
  c.lattice.validate();

  if (j.contains("model")) {
    const auto& m = j.at("model");
    only_keys(m, "model", {"t", "qubits"});
    c.t = get_or(m, "t", c.t);
    if (m.contains("qubits")) {
      if (!m.at("qubits").is_array()) throw InvalidSpecError("model.qubits must be an array");
      for (const auto& q : m.at("qubits")) {
        only_keys(q, "qubit", {"site", "delta", "g"});
        if (!q.contains("site") || !q.contains("delta") || !q.contains("g"))
          throw InvalidSpecError("each qubit needs site, delta and g");
        const auto site = get_or<long long>(q, "site", -1);
        if (site < 0) throw InvalidSpecError("qubit site must be non-negative");
        c.qubits.push_back({static_cast<std::size_t>(site), get_or(q, "delta", 0.0), get_or(q, "g", 0.0)});
      }
    }
  }
  if (!(c.t != 0.0) || !std::isfinite(c.t)) throw InvalidSpecError("hopping t must be finite and nonzero");

  c.params = j.value("params", nlohmann::json::object());
  if (!c.params.is_object()) throw InvalidSpecError("params must be an object");
  c.output = get_or<std::string>(j, "output", c.output);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json q = nlohmann::json::array();
  for (const auto& x : c.qubits) q.push_back({{"site", x.site}, {"delta", x.delta}, {"g", x.g}});
  return {
      {"lattice", {{"p", c.lattice.p}, {"q", c.lattice.q}, {"rings", c.lattice.rings}, {"kind", to_string(c.lattice.kind)}}},
      {"model", {{"t", c.t}, {"qubits", q}}},
      {"task", to_string(c.task)},
      {"params", c.params},
      {"output", c.output},
      {"seed", c.seed},
  };
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidSpecError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
  const std::string canon = config_to_json(c).dump();
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(canon.data(), canon.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw NumericError("SHA-256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace hypercqed::cli
