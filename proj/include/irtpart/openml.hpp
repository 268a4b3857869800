#ifndef IRTPART_OPENML_HPP
#define IRTPART_OPENML_HPP

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "irtpart/arff.hpp"
#include "irtpart/digest.hpp"

namespace irtpart {

inline std::string default_cache_dir() {
  if (const char* env = std::getenv("IRT_PARTITION_CACHE"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::string(home) + "/.cache/irt-partition";
  return ".irt-partition-cache";
}

struct OpenmlConfig {
  std::string base_url = "https://www.openml.org";
  std::string cache_dir = default_cache_dir();
  bool offline = false;
  std::string positive_label;  // empty = minority class
  std::string target_name;     // empty = metadata default, else last nominal
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

/// Write-to-temp then atomic rename, so concurrent fetchers never expose a
/// partially written cache entry.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(data.data(), (std::streamsize)data.size());
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// scheme://host[:port]/path -> (origin, path)
inline std::pair<std::string, std::string> split_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error("malformed URL: " + url);
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

inline std::string http_get(const std::string& origin, const std::string& path) {
  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(30);
  client.set_read_timeout(120);
  auto res = client.Get(path);
  if (!res) throw Error("HTTP request failed for " + origin + path + ": " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw Error("HTTP " + std::to_string(res->status) + " for " + origin + path);
  return res->body;
}

}  // namespace detail

/// Fetch a dataset by OpenML id: metadata JSON, then the ARFF it names, both
/// cached under {cache_dir}/{id}/. Cache hits make no network calls; the ARFF
/// is checksummed against the cached metadata on every load.
inline Dataset fetch_openml(int dataset_id, const OpenmlConfig& cfg = {}) {
  if (dataset_id <= 0) throw DataError("fetch_openml: dataset id must be positive");

  const std::filesystem::path dir = std::filesystem::path(cfg.cache_dir) / std::to_string(dataset_id);
  const std::filesystem::path arff_path = dir / "dataset.arff";
  const std::filesystem::path meta_path = dir / "meta.json";

  std::string meta_text, arff_text;
  if (std::filesystem::exists(arff_path) && std::filesystem::exists(meta_path)) {
    meta_text = detail::read_file(meta_path);
    arff_text = detail::read_file(arff_path);
  } else {
    if (cfg.offline)
      throw Error("fetch_openml: offline mode and dataset " + std::to_string(dataset_id) +
                  " is not cached under " + dir.string());
    meta_text = detail::http_get(cfg.base_url, "/api/v1/json/data/" + std::to_string(dataset_id));
    const auto meta = nlohmann::json::parse(meta_text);
    const auto& desc = meta.at("data_set_description");
    const auto [origin, path] = detail::split_url(desc.at("url").get<std::string>());
    arff_text = detail::http_get(origin, path);
    detail::write_file_atomic(arff_path, arff_text);
    detail::write_file_atomic(meta_path, meta_text);
  }

  const auto meta = nlohmann::json::parse(meta_text);
  const auto& desc = meta.at("data_set_description");
  if (desc.contains("md5_checksum")) {
    const std::string expected = desc["md5_checksum"].get<std::string>();
    if (!expected.empty() && md5_hex(arff_text) != expected)
      throw DataError("fetch_openml: checksum mismatch for cached dataset " +
                      std::to_string(dataset_id));
  }

  std::string target = cfg.target_name;
  if (target.empty() && desc.contains("default_target_attribute") &&
      desc["default_target_attribute"].is_string())
    target = desc["default_target_attribute"].get<std::string>();
  return parse_arff(arff_text, cfg.positive_label, target);
}

}  // namespace irtpart

#endif
