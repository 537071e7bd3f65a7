#pragma once

#include <map>
#include <string>
#include <vector>

#include "matelab/gff.hpp"
#include "matelab/peanosphere.hpp"

namespace matelab {

void write_grid_csv(const std::vector<double>& values, std::size_t n,
                    const std::string& path);

// 16-bit PGM, affine-scaled to the value range.
void write_pgm16(const std::vector<double>& values, std::size_t n,
                 const std::string& path);

// Edge list plus rotation system, one `vertex: dart,dart,...` line per
// vertex.
void write_map(const MatedMap& map, const std::string& path);

// Plain key=value configuration files; '#' starts a comment.
using Config = std::map<std::string, std::string>;
Config read_config(const std::string& path);
void write_config(const Config& config, const std::string& path);

// Parses "8/3" or "2.5" style rational strings.
double parse_rational(const std::string& text);

}  // namespace matelab
