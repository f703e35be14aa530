#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace scanpath {

// Shortest decimal rendering that round-trips the exact double value.
std::string fmt_double(double v);

// Writes content to a temp file in the target directory, then renames over
// the destination, so readers never observe a partial file.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

// Runs fn(i) for i in [0,n) on up to `jobs` threads. jobs <= 1 runs inline.
// Callers index into preallocated output slots, so results are ordered
// identically regardless of the thread count.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace scanpath
