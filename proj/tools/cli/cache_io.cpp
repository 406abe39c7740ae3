#include "cli/cache_io.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

namespace weylkit::cli {

using nlohmann::json;

std::size_t load_cache(const std::string& path, SimpleCharacterCache& cache, std::ostream& warn) {
  std::ifstream in(path);
  if (!in) return 0;
  std::vector<std::pair<SimpleCharacterCache::Key, Character>> entries;
  try {
    json doc = json::parse(in);
    if (doc.at("format_version").get<int>() != kCacheFormatVersion)
      throw std::runtime_error("unsupported format_version");
    for (const auto& e : doc.at("entries")) {
      SimpleCharacterCache::Key key{e.at("system").get<std::string>(), e.at("p").get<std::uint32_t>(),
                                    Weight(e.at("weight").get<std::vector<int>>())};
      Character ch;
      for (const auto& term : e.at("character")) {
        Weight w(term.at(0).get<std::vector<int>>());
        if (w.rank() != key.weight.rank()) throw std::runtime_error("weight of the wrong rank");
        ch.add(w, term.at(1).get<std::int64_t>());
      }
      if (ch[key.weight] != 1) throw std::runtime_error("entry for " + key.weight.to_string() + " is not a simple character");
      entries.emplace_back(std::move(key), std::move(ch));
    }
  } catch (const std::exception& ex) {
    warn << "warning: ignoring corrupt cache file " << path << " (" << ex.what() << "); it will be rebuilt\n";
    return 0;
  }
  for (auto& [k, ch] : entries) cache.insert(k, std::move(ch));
  return entries.size();
}

void save_cache(const std::string& path, const SimpleCharacterCache& cache) {
  json entries = json::array();
  for (const auto& [key, ch] : cache.snapshot()) {
    json terms = json::array();
    for (const auto& [w, m] : ch.terms()) terms.push_back(json::array({w.coords(), m}));
    entries.push_back({{"system", key.system}, {"p", key.p}, {"weight", key.weight.coords()}, {"character", terms}});
  }
  json doc = {{"format_version", kCacheFormatVersion}, {"entries", entries}};
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp);
    out << doc.dump() << "\n";
    if (!out) throw std::runtime_error("cannot write cache file " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace weylkit::cli
