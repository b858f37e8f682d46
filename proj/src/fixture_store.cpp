#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ossrecon/collectors.hpp"

namespace ossrecon {

namespace {

// Strips the scheme so the canonical form (and the fixture hash) is stable
// across http/https test-server substitutions.
std::string host_of(const std::string& base_url) {
  std::string host = base_url;
  if (auto pos = host.find("://"); pos != std::string::npos) host = host.substr(pos + 3);
  while (!host.empty() && host.back() == '/') host.pop_back();
  return host;
}

std::string endpoint_slug(const HttpRequestKey& key) {
  std::string raw = key.method + "_" + key.path;
  std::string slug;
  for (char c : raw) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    slug.push_back(ok ? c : '_');
  }
  while (slug.find("__") != std::string::npos)
    slug.erase(slug.find("__"), 1);
  if (!slug.empty() && slug.back() == '_') slug.pop_back();
  if (slug.size() > 64) slug.resize(64);
  return to_lower_ascii(slug);
}

}  // namespace

std::string HttpRequestKey::canonical() const {
  auto sorted = query;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream ss;
  ss << method << '\n' << host_of(base_url) << '\n' << path << '\n';
  for (const auto& [k, v] : sorted) ss << k << '=' << v << '&';
  ss << '\n' << body;
  return ss.str();
}

std::string FixtureStore::request_hash(const HttpRequestKey& key) {
  return hex64(fnv1a64(key.canonical()));
}

std::filesystem::path FixtureStore::file_for(const HttpRequestKey& key) const {
  return dir_ / (endpoint_slug(key) + "-" + request_hash(key) + ".json");
}

std::optional<HttpResponse> FixtureStore::load(const HttpRequestKey& key) const {
  std::ifstream in(file_for(key), std::ios::binary);
  if (!in) return std::nullopt;
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.contains("status") || !doc.contains("body"))
    return std::nullopt;
  HttpResponse response;
  response.status = doc["status"].get<int>();
  response.body = doc["body"].get<std::string>();
  return response;
}

void FixtureStore::save(const HttpRequestKey& key, const HttpResponse& response) const {
  std::filesystem::create_directories(dir_);
  nlohmann::ordered_json doc;
  doc["endpoint"] = key.method + " " + host_of(key.base_url) + key.path;
  doc["request_hash"] = request_hash(key);
  doc["status"] = response.status;
  doc["body"] = response.body;
  std::ofstream out(file_for(key), std::ios::binary | std::ios::trunc);
  out << doc.dump(2) << '\n';
}

}  // namespace ossrecon
