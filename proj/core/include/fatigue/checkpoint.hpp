#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fatigue/evolution.hpp"

namespace fatigue {

/// Complete trace up to its last recorded step, plus the resolved config it
/// was produced with. Stored as JSON; doubles round-trip exactly.
///
///   {"format": "fatigue-checkpoint", "version": 1, "config": "...",
///    "T", "steps", "tau", "eps", "laws": {...},
///    "alpha0", "u0", "V0", "zeta0": {"rows", "data"}, "energy0": [elastic, gradient],
///    "records": [{"step", "t", "alpha", "u", "V", "zeta", "energy", "diss_inc", ...}],
///    "warnings": [...]}
struct Checkpoint {
  EvolutionTrace trace;
  std::string config_text;
};

std::string checkpoint_json(const EvolutionTrace& trace, std::string_view config_text);
/// Throws std::runtime_error on malformed input.
Checkpoint parse_checkpoint(std::string_view text);

void save_checkpoint(const std::filesystem::path& path, const EvolutionTrace& trace, std::string_view config_text);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace fatigue
