#pragma once

#include <string>

#include "sklab/skeleton.hpp"

namespace sklab {

/// JSON container for a skeleton decomposition: dims, R, C, Z (row-major
/// [re, im] pairs), delta_used, algorithm_tag and seed. Doubles are printed
/// shortest-round-trip, so Z survives a round trip bit-exactly.
std::string to_json_string(const SkeletonDecomposition& s);
SkeletonDecomposition skeleton_from_json_string(const std::string& text);

void save_skeleton(const std::string& path, const SkeletonDecomposition& s);
SkeletonDecomposition load_skeleton(const std::string& path);

}  // namespace sklab
