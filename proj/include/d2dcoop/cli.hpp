#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "d2dcoop/config.hpp"

namespace d2dcoop {

// Exit statuses shared by the command entry points.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitValidationFailed = 4;

int cmd_analyze(const SystemConfig& cfg, std::ostream& out);
int cmd_simulate(const SystemConfig& cfg, std::ostream& out);
int cmd_optimize(const SystemConfig& cfg, std::ostream& out);
int cmd_validate(const SystemConfig& cfg, std::ostream& out);
int cmd_sweep(const SystemConfig& cfg, const std::string& sweep_key,
              const std::vector<double>& values, std::ostream& out);

}  // namespace d2dcoop
