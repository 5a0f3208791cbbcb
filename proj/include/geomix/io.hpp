#pragma once

// JSON dataset and fit files ("schema_version": 1).

#include <string>

#include "geomix/mixed_effects.hpp"
#include "geomix/simulation.hpp"

namespace geomix {

inline constexpr int kSchemaVersion = 1;

Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& ds, const std::string& path);
Dataset parse_dataset(const std::string& text);
std::string dump_dataset(const Dataset& ds);

FixedEffectsModel load_fit(const std::string& path);
void save_fit(const FixedEffectsModel& model, const std::string& path);
FixedEffectsModel parse_fit(const std::string& text);
std::string dump_fit(const FixedEffectsModel& model);

/// JSON object for one point: {"space": ..., "y": [...]} plus t and z when given.
std::string dump_prediction(const ObjectPoint& y, double t, const Eigen::VectorXd& z);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace geomix
