#pragma once

#include "sigaug/model.hpp"

#include <string>

namespace sigaug {

/// Versioned text serialization of ModelParams. Fields appear in declaration
/// order, scalars as "%.17g", so save -> load round-trips exactly and the
/// layout is portable across implementations.
void save_model(const ModelParams& p, const std::string& path);
ModelParams load_model(const std::string& path);

}  // namespace sigaug
