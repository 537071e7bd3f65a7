#include "matelab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace matelab {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_or_throw(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw std::runtime_error("cannot open " + path);
  return f;
}

}  // namespace

void write_grid_csv(const std::vector<double>& values, std::size_t n,
                    const std::string& path) {
  FilePtr f = open_or_throw(path, "wb");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      std::fprintf(f.get(), j + 1 < n ? "%.17g," : "%.17g", values[i * n + j]);
    std::fputc('\n', f.get());
  }
}

void write_pgm16(const std::vector<double>& values, std::size_t n,
                 const std::string& path) {
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  double span = hi > lo ? hi - lo : 1.0;
  FilePtr f = open_or_throw(path, "wb");
  std::fprintf(f.get(), "P5\n%zu %zu\n65535\n", n, n);
  for (double v : values) {
    auto q = static_cast<unsigned>(65535.0 * (v - lo) / span);
    unsigned char hi_byte = static_cast<unsigned char>(q >> 8);
    unsigned char lo_byte = static_cast<unsigned char>(q & 0xff);
    std::fputc(hi_byte, f.get());
    std::fputc(lo_byte, f.get());
  }
}

void write_map(const MatedMap& map, const std::string& path) {
  FilePtr f = open_or_throw(path, "wb");
  std::fprintf(f.get(), "# n %d vertices %d edges %d faces %d\n", map.n,
               map.vertex_count(), map.edge_count(), map.face_count());
  for (std::size_t e = 0; e < map.edges.size(); ++e) {
    const char* label =
        map.edges[e].label == MapEdge::Label::tree
            ? "tree"
            : map.edges[e].label == MapEdge::Label::dual_tree ? "dual"
                                                              : "glue";
    std::fprintf(f.get(), "edge %zu %d %d %s\n", e, map.edges[e].u,
                 map.edges[e].v, label);
  }
  for (std::size_t v = 0; v < map.rotation.size(); ++v) {
    std::fprintf(f.get(), "%zu:", v);
    for (std::size_t k = 0; k < map.rotation[v].size(); ++k)
      std::fprintf(f.get(), k == 0 ? " %d" : ",%d", map.rotation[v][k]);
    std::fputc('\n', f.get());
  }
}

Config read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Config cfg;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) cfg[key] = value;
  }
  return cfg;
}

void write_config(const Config& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& [k, v] : config) out << k << " = " << v << "\n";
}

double parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size())
      throw std::invalid_argument("parse_rational: trailing characters");
    return v;
  }
  double num = std::stod(text.substr(0, slash));
  double den = std::stod(text.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("parse_rational: zero divisor");
  return num / den;
}

}  // namespace matelab
