#pragma once

// Run configuration for the command-line driver: one task per JSON document.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypercqed/hamiltonian.hpp"
#include "hypercqed/tessellation.hpp"

namespace hypercqed::cli {

enum class Task { spectrum, dos, jspectral, greens, boundstate, boundstate2, dynamics, spinmodel, flatband };

std::string_view to_string(Task t) noexcept;
Task task_from_string(std::string_view s);

struct RunConfig {
  LatticeSpec lattice;
  double t = 1.0;
  std::vector<QubitSpec> qubits;
  Task task = Task::spectrum;
  nlohmann::json params = nlohmann::json::object();  // task-specific, see README
  std::string output = "hypercqed-out";
  std::uint64_t seed = 0;
};

/// Throws InvalidSpecError on missing/ill-typed fields or unknown keys.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

/// Reads and parses a config file (IoError / InvalidSpecError).
RunConfig load_config(const std::string& path);

/// Hex SHA-256 of the canonical (sorted-key, compact) JSON form.
std::string config_hash(const RunConfig& c);

}  // namespace hypercqed::cli
