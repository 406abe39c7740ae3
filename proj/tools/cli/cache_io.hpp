#pragma once

// Persistence of the simple-character cache as a JSON file.

#include <iosfwd>
#include <string>

#include "weylkit/weyl_modules.hpp"

namespace weylkit::cli {

inline constexpr int kCacheFormatVersion = 1;

/// Loads entries into cache. A missing file loads nothing; an unreadable or
/// malformed one is reported on warn and ignored. Returns the number loaded.
std::size_t load_cache(const std::string& path, SimpleCharacterCache& cache, std::ostream& warn);

/// Writes every entry of cache to path (through a temporary file and rename).
void save_cache(const std::string& path, const SimpleCharacterCache& cache);

}  // namespace weylkit::cli
