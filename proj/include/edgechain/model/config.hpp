#pragma once

#include "edgechain/model/model_spec.hpp"

#include <istream>
#include <string>

namespace edgechain {

/// Parse a key/value model description.
///
///   dimension         = 1
///   drift             = tanh_x level=0 amplitude=0.2 rate=1 slope_t=0
///   covariance        = constant level=1
///   innovations       = modulated_mixture separation=1.2 base=0.3 swing=0.15 rate=1
///   horizon           = 1
///   steps             = 16
///   envelope_order    = 2
///   ellipticity_lower = 0.5
///   ellipticity_upper = 2
///
/// '#' starts a comment. Unknown keys, presets or preset parameters raise ConfigError.
ModelSpec parse_model_config(std::istream& in);
ModelSpec load_model_config(const std::string& path);

/// Canonical one-line-per-key rendering, suitable for provenance fields.
std::string describe_model(const ModelSpec& spec);

}  // namespace edgechain
