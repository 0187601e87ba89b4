#include "walkplan/dfpg_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace walkplan {

namespace {

char cell_char(CellLabel l) {
  switch (l) {
    case CellLabel::Out: return 'O';
    case CellLabel::In: return 'I';
    case CellLabel::Furn: return 'F';
  }
  return '?';
}

CellLabel parse_cell(char ch) {
  switch (ch) {
    case 'O': return CellLabel::Out;
    case 'I': return CellLabel::In;
    case 'F': return CellLabel::Furn;
    default: throw std::runtime_error(std::string("dfpg json: bad cell label '") + ch + "'");
  }
}

char segment_char(SegmentLabel l) {
  switch (l) {
    case SegmentLabel::Door: return 'D';
    case SegmentLabel::Wall: return 'W';
    case SegmentLabel::None: return 'N';
  }
  return '?';
}

SegmentLabel parse_segment(char ch) {
  switch (ch) {
    case 'D': return SegmentLabel::Door;
    case 'W': return SegmentLabel::Wall;
    case 'N': return SegmentLabel::None;
    default: throw std::runtime_error(std::string("dfpg json: bad segment label '") + ch + "'");
  }
}

}  // namespace

nlohmann::json dfpg_to_json(const Dfpg& g) {
  const int n = g.n();
  nlohmann::json cells = nlohmann::json::array();
  for (int r = 0; r < n; ++r) {
    std::string row(static_cast<std::size_t>(n), '?');
    for (int c = 0; c < n; ++c) row[c] = cell_char(g.cell(r, c));
    cells.push_back(row);
  }
  nlohmann::json h = nlohmann::json::array();
  for (int r = 0; r <= n; ++r) {
    std::string row(static_cast<std::size_t>(n), '?');
    for (int c = 0; c < n; ++c) row[c] = segment_char(g.segment({Axis::Horizontal, r, c}));
    h.push_back(row);
  }
  nlohmann::json v = nlohmann::json::array();
  for (int r = 0; r < n; ++r) {
    std::string row(static_cast<std::size_t>(n + 1), '?');
    for (int c = 0; c <= n; ++c) row[c] = segment_char(g.segment({Axis::Vertical, r, c}));
    v.push_back(row);
  }
  return {{"n", n}, {"cell_size_m", g.cell_size_m()}, {"cells", cells}, {"h_segments", h}, {"v_segments", v}};
}

Dfpg dfpg_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  Dfpg g(n, j.at("cell_size_m").get<double>());
  const auto& cells = j.at("cells");
  const auto& h = j.at("h_segments");
  const auto& v = j.at("v_segments");
  if (cells.size() != static_cast<std::size_t>(n) || h.size() != static_cast<std::size_t>(n + 1) ||
      v.size() != static_cast<std::size_t>(n))
    throw std::runtime_error("dfpg json: row count mismatch");
  for (int r = 0; r < n; ++r) {
    const auto row = cells[r].get<std::string>();
    if (row.size() != static_cast<std::size_t>(n)) throw std::runtime_error("dfpg json: cell row length");
    for (int c = 0; c < n; ++c) g.set_cell(r, c, parse_cell(row[c]));
  }
  for (int r = 0; r <= n; ++r) {
    const auto row = h[r].get<std::string>();
    if (row.size() != static_cast<std::size_t>(n)) throw std::runtime_error("dfpg json: h segment row length");
    for (int c = 0; c < n; ++c) g.set_segment({Axis::Horizontal, r, c}, parse_segment(row[c]));
  }
  for (int r = 0; r < n; ++r) {
    const auto row = v[r].get<std::string>();
    if (row.size() != static_cast<std::size_t>(n + 1)) throw std::runtime_error("dfpg json: v segment row length");
    for (int c = 0; c <= n; ++c) g.set_segment({Axis::Vertical, r, c}, parse_segment(row[c]));
  }
  return g;
}

nlohmann::json trajectory_to_json(const Trajectory& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : t.points) arr.push_back({p.x, p.y});
  return arr;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::runtime_error("trajectory json: expected an array");
  Trajectory t;
  t.points.reserve(j.size());
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw std::runtime_error("trajectory json: expected [x, y] pairs");
    t.points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return t;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

nlohmann::json read_json_file(const std::filesystem::path& path) { return nlohmann::json::parse(read_text_file(path)); }

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(1) + "\n");
}

Dfpg load_dfpg(const std::filesystem::path& path) { return dfpg_from_json(read_json_file(path)); }
void save_dfpg(const std::filesystem::path& path, const Dfpg& g) { write_json_file(path, dfpg_to_json(g)); }
Trajectory load_trajectory(const std::filesystem::path& path) { return trajectory_from_json(read_json_file(path)); }
void save_trajectory(const std::filesystem::path& path, const Trajectory& t) {
  write_json_file(path, trajectory_to_json(t));
}

}  // namespace walkplan
