#pragma once

#include <ostream>

#include "irs/io.hpp"

namespace irs::io::commands {

// Each command validates the config, writes its files under out_dir and
// reports a short summary on `out`. Failures are thrown.
void solve(const ScenarioConfig& cfg, std::ostream& out);
void pattern(const ScenarioConfig& cfg, std::ostream& out);
void gl_map(const ScenarioConfig& cfg, std::ostream& out);
void multibeam(const ScenarioConfig& cfg, std::ostream& out);
void prephase(const ScenarioConfig& cfg, std::ostream& out);
void oracle(const ScenarioConfig& cfg, std::ostream& out);
// Recomputes the metrics record of an existing weight file.
void evaluate(const ScenarioConfig& cfg, const std::string& weights_path, std::ostream& out);

} // namespace irs::io::commands
