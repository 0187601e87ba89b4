#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "walkplan/dfpg.hpp"

namespace walkplan {

/// {n, cell_size_m, cells: n strings over {O,I,F}, h_segments: n+1 strings of
/// n chars over {D,W,N}, v_segments: n strings of n+1 chars}.
nlohmann::json dfpg_to_json(const Dfpg& g);
Dfpg dfpg_from_json(const nlohmann::json& j);

/// JSON array of [x, y] pairs in meters.
nlohmann::json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const nlohmann::json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

Dfpg load_dfpg(const std::filesystem::path& path);
void save_dfpg(const std::filesystem::path& path, const Dfpg& g);
Trajectory load_trajectory(const std::filesystem::path& path);
void save_trajectory(const std::filesystem::path& path, const Trajectory& t);

}  // namespace walkplan
