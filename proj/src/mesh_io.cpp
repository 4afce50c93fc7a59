#include "finsim/mesh_io.hpp"

#include "finsim/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace finsim {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class NodeTable {
 public:
  int add(long id, const Vec3d& p, int line_no) {
    if (index_.count(id)) parse_fail(line_no, "duplicate node id " + std::to_string(id));
    const int k = static_cast<int>(points_.size());
    index_[id] = k;
    points_.push_back(p);
    return k;
  }
  int lookup(long id, int line_no) const {
    const auto it = index_.find(id);
    if (it == index_.end()) parse_fail(line_no, "unknown node id " + std::to_string(id));
    return it->second;
  }
  Points3d matrix() const {
    Points3d m(3, static_cast<Eigen::Index>(points_.size()));
    for (std::size_t i = 0; i < points_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = points_[i];
    return m;
  }
  std::size_t size() const { return points_.size(); }

 private:
  std::unordered_map<long, int> index_;
  std::vector<Vec3d> points_;
};

template <int N>
Eigen::Matrix<std::int32_t, N, Eigen::Dynamic> to_matrix(const std::vector<std::array<int, N>>& rows) {
  Eigen::Matrix<std::int32_t, N, Eigen::Dynamic> m(N, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int k = 0; k < N; ++k) m(k, static_cast<Eigen::Index>(i)) = rows[i][k];
  return m;
}

}  // namespace

NeutralMesh read_neutral(std::istream& in) {
  enum class Section { None, Nodes, Hexes, Displacements, Triangles } section = Section::None;
  NodeTable nodes;
  std::vector<std::array<int, 8>> hexes;
  std::vector<std::array<int, 3>> tris;
  std::vector<std::pair<int, Vec3d>> disp;  // (line, value) keyed later
  std::vector<std::pair<long, int>> disp_ids;
  NeutralMesh out;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      if (body.rfind("provenance:", 0) == 0) out.provenance = trim(body.substr(11));
      continue;
    }
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    const std::string key = lower(first);
    if (key == "nodes" || key == "hexes" || key == "displacements" || key == "triangles") {
      section = key == "nodes"    ? Section::Nodes
                : key == "hexes"  ? Section::Hexes
                : key == "triangles" ? Section::Triangles
                                     : Section::Displacements;
      continue;
    }
    std::istringstream row(line);
    long id = 0;
    if (!(row >> id)) parse_fail(line_no, "expected an integer id, got '" + first + "'");
    switch (section) {
      case Section::None:
        parse_fail(line_no, "data before any section header");
      case Section::Nodes: {
        Vec3d p;
        if (!(row >> p[0] >> p[1] >> p[2])) parse_fail(line_no, "node needs x y z");
        nodes.add(id, p, line_no);
        break;
      }
      case Section::Hexes: {
        std::array<int, 8> e{};
        for (int k = 0; k < 8; ++k) {
          long n = 0;
          if (!(row >> n)) parse_fail(line_no, "hex needs 8 node ids");
          e[k] = nodes.lookup(n, line_no);
        }
        hexes.push_back(e);
        break;
      }
      case Section::Triangles: {
        std::array<int, 3> t{};
        for (int k = 0; k < 3; ++k) {
          long n = 0;
          if (!(row >> n)) parse_fail(line_no, "triangle needs 3 node ids");
          t[k] = nodes.lookup(n, line_no);
        }
        tris.push_back(t);
        break;
      }
      case Section::Displacements: {
        Vec3d d;
        if (!(row >> d[0] >> d[1] >> d[2])) parse_fail(line_no, "displacement needs dx dy dz");
        disp.emplace_back(line_no, d);
        disp_ids.emplace_back(id, line_no);
        break;
      }
    }
    std::string extra;
    if (row >> extra) parse_fail(line_no, "trailing data '" + extra + "'");
  }
  out.hex.nodes = nodes.matrix();
  out.hex.elements = to_matrix<8>(hexes);
  if (!disp.empty()) {
    Points3d d = Points3d::Zero(3, out.hex.nodes.cols());
    std::vector<char> seen(static_cast<std::size_t>(d.cols()), 0);
    for (std::size_t i = 0; i < disp.size(); ++i) {
      const int k = nodes.lookup(disp_ids[i].first, disp_ids[i].second);
      d.col(k) = disp[i].second;
      seen[static_cast<std::size_t>(k)] = 1;
    }
    require(disp.size() == nodes.size() && std::all_of(seen.begin(), seen.end(), [](char c) { return c; }),
            ErrorCode::CardinalityMismatch,
            "displacement section lists " + std::to_string(disp.size()) + " entries for " +
                std::to_string(nodes.size()) + " nodes");
    out.hex.displacements = std::move(d);
  }
  if (!tris.empty()) {
    TriMesh s;
    s.vertices = out.hex.nodes;
    s.triangles = to_matrix<3>(tris);
    compute_normals(s);
    out.surface = std::move(s);
  }
  return out;
}

NeutralMesh read_neutral(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open '" + path + "'");
  return read_neutral(in);
}

void write_neutral(std::ostream& out, const HexMesh& hex, const std::string& provenance) {
  out << "# finsim neutral mesh\n";
  if (!provenance.empty()) out << "# provenance: " << provenance << '\n';
  out << "nodes\n";
  for (Eigen::Index i = 0; i < hex.node_count(); ++i)
    out << i + 1 << ' ' << fmt_double(hex.nodes(0, i)) << ' ' << fmt_double(hex.nodes(1, i)) << ' '
        << fmt_double(hex.nodes(2, i)) << '\n';
  out << "hexes\n";
  for (Eigen::Index e = 0; e < hex.element_count(); ++e) {
    out << e + 1;
    for (int k = 0; k < 8; ++k) out << ' ' << hex.elements(k, e) + 1;
    out << '\n';
  }
  if (hex.displacements) {
    out << "displacements\n";
    for (Eigen::Index i = 0; i < hex.node_count(); ++i)
      out << i + 1 << ' ' << fmt_double((*hex.displacements)(0, i)) << ' ' << fmt_double((*hex.displacements)(1, i))
          << ' ' << fmt_double((*hex.displacements)(2, i)) << '\n';
  }
}

void write_neutral(std::ostream& out, const TriMesh& surface, const std::string& provenance) {
  out << "# finsim neutral mesh (surface)\n";
  if (!provenance.empty()) out << "# provenance: " << provenance << '\n';
  out << "nodes\n";
  for (Eigen::Index i = 0; i < surface.vertex_count(); ++i)
    out << i + 1 << ' ' << fmt_double(surface.vertices(0, i)) << ' ' << fmt_double(surface.vertices(1, i)) << ' '
        << fmt_double(surface.vertices(2, i)) << '\n';
  out << "triangles\n";
  for (Eigen::Index t = 0; t < surface.triangle_count(); ++t)
    out << t + 1 << ' ' << surface.triangles(0, t) + 1 << ' ' << surface.triangles(1, t) + 1 << ' '
        << surface.triangles(2, t) + 1 << '\n';
}

DeckImport read_fem_deck(std::istream& in) {
  enum class Mode { Skip, Node, Element } mode = Mode::Skip;
  DeckImport out;
  NodeTable nodes;
  std::vector<std::array<int, 8>> hexes;
  std::vector<long> pending;  // element record split over continuation lines
  std::string raw;
  int line_no = 0;

  auto split_csv = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.rfind("**", 0) == 0) continue;
    if (line[0] == '*') {
      if (!pending.empty()) parse_fail(line_no, "incomplete element record before new card");
      const auto parts = split_csv(line);
      const std::string card = upper(parts[0]);
      if (card == "*NODE") {
        mode = Mode::Node;
      } else if (card == "*ELEMENT") {
        std::string type;
        for (std::size_t i = 1; i < parts.size(); ++i) {
          const std::string p = upper(parts[i]);
          if (p.rfind("TYPE", 0) == 0) {
            const auto eq = p.find('=');
            if (eq != std::string::npos) type = trim(p.substr(eq + 1));
          }
        }
        if (type == "C3D8R" || type == "C3D8" || type == "C3D8I") {
          mode = Mode::Element;
        } else {
          mode = Mode::Skip;
          out.warnings.push_back("line " + std::to_string(line_no) + ": skipping *ELEMENT of type '" + type + "'");
        }
      } else {
        mode = Mode::Skip;
        out.warnings.push_back("line " + std::to_string(line_no) + ": ignoring card " + card);
      }
      continue;
    }
    if (mode == Mode::Skip) continue;
    const auto parts = split_csv(line);
    if (mode == Mode::Node) {
      if (parts.size() < 4) parse_fail(line_no, "*NODE record needs id, x, y, z");
      try {
        nodes.add(std::stol(parts[0]), Vec3d(std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3])),
                  line_no);
      } catch (const std::logic_error&) {
        parse_fail(line_no, "malformed *NODE record");
      }
    } else {
      for (const auto& p : parts) {
        if (p.empty()) continue;
        try {
          pending.push_back(std::stol(p));
        } catch (const std::logic_error&) {
          parse_fail(line_no, "malformed *ELEMENT record");
        }
      }
      if (pending.size() > 9) parse_fail(line_no, "C3D8 record has more than 8 nodes");
      if (pending.size() == 9) {
        std::array<int, 8> e{};
        for (int k = 0; k < 8; ++k) e[k] = nodes.lookup(pending[k + 1], line_no);
        hexes.push_back(e);
        pending.clear();
      }
    }
  }
  if (!pending.empty()) parse_fail(line_no, "truncated element record at end of deck");
  out.hex.nodes = nodes.matrix();
  out.hex.elements = to_matrix<8>(hexes);
  return out;
}

DeckImport read_fem_deck(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open '" + path + "'");
  return read_fem_deck(in);
}

void write_obj(std::ostream& out, const TriMesh& mesh) {
  out << "# finsim surface: " << mesh.vertex_count() << " vertices, " << mesh.triangle_count() << " triangles\n";
  for (Eigen::Index i = 0; i < mesh.vertex_count(); ++i)
    out << "v " << fmt_double(mesh.vertices(0, i)) << ' ' << fmt_double(mesh.vertices(1, i)) << ' '
        << fmt_double(mesh.vertices(2, i)) << '\n';
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t)
    out << "f " << mesh.triangles(0, t) + 1 << ' ' << mesh.triangles(1, t) + 1 << ' ' << mesh.triangles(2, t) + 1
        << '\n';
}

void write_obj(const std::string& path, const TriMesh& mesh) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot write '" + path + "'");
  write_obj(out, mesh);
}

}  // namespace finsim
