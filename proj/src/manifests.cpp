#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ossrecon/collectors.hpp"

namespace ossrecon {

namespace {

// Leading range sigils in version requirements ("^1.2", "~=1.0", ">=2").
// What remains must look like a concrete version, otherwise the dependency
// cannot be queried and is skipped with a warning.
std::string strip_version_sigils(std::string v) {
  v = trim(v);
  while (!v.empty() && (v[0] == '^' || v[0] == '~' || v[0] == '>' || v[0] == '<' || v[0] == '=' ||
                        v[0] == 'v'))
    v.erase(v.begin());
  return trim(v);
}

bool looks_like_version(const std::string& v) {
  if (v.empty()) return false;
  if (v.find('*') != std::string::npos || v.find(' ') != std::string::npos) return false;
  return v[0] >= '0' && v[0] <= '9';
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read manifest: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_dep(ManifestScan& scan, const std::filesystem::path& file, std::string name,
             std::string version, const std::string& ecosystem) {
  version = strip_version_sigils(version);
  if (!looks_like_version(version)) {
    scan.warnings.push_back(file.filename().string() + ": dependency '" + name +
                            "' has no concrete version; skipped");
    return;
  }
  scan.dependencies.push_back({std::move(name), std::move(version), ecosystem});
}

// Only the [dependencies] table: direct runtime dependencies. Handles
// `name = "1.2"` and `name = { version = "1.2", ... }` forms.
ManifestScan parse_cargo_toml(const std::filesystem::path& file) {
  ManifestScan scan;
  bool in_deps = false;
  for (const auto& raw : split(read_file(file), '\n')) {
    std::string line = trim(raw);
    if (auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      in_deps = trim(line) == "[dependencies]";
      continue;
    }
    if (!in_deps) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string name = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!name.empty() && name.front() == '"' && name.back() == '"')
      name = name.substr(1, name.size() - 2);

    std::string version;
    if (!value.empty() && value.front() == '"') {
      auto close = value.find('"', 1);
      if (close != std::string::npos) version = value.substr(1, close - 1);
    } else if (!value.empty() && value.front() == '{') {
      auto vpos = value.find("version");
      if (vpos != std::string::npos) {
        auto open = value.find('"', vpos);
        auto close = open == std::string::npos ? std::string::npos : value.find('"', open + 1);
        if (close != std::string::npos) version = value.substr(open + 1, close - open - 1);
      }
      if (version.empty()) {
        scan.warnings.push_back(file.filename().string() + ": dependency '" + name +
                                "' has no version key; skipped");
        continue;
      }
    }
    add_dep(scan, file, name, version, "crates.io");
  }
  return scan;
}

// Pinned `name==version` lines only; requirement ranges and includes are not
// resolvable to a single version and are skipped with a warning.
ManifestScan parse_requirements_txt(const std::filesystem::path& file) {
  ManifestScan scan;
  for (const auto& raw : split(read_file(file), '\n')) {
    std::string line = trim(raw);
    if (auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '-') continue;  // pip options (-r, -e, --hash, ...)
    auto eq = line.find("==");
    if (eq == std::string::npos) {
      scan.warnings.push_back(file.filename().string() + ": '" + line +
                              "' is not pinned with ==; skipped");
      continue;
    }
    std::string name = trim(line.substr(0, eq));
    std::string version = trim(line.substr(eq + 2));
    if (auto extra = name.find('['); extra != std::string::npos) name = name.substr(0, extra);
    if (auto semi = version.find(';'); semi != std::string::npos)
      version = trim(version.substr(0, semi));
    add_dep(scan, file, name, version, "PyPI");
  }
  return scan;
}

ManifestScan parse_package_json(const std::filesystem::path& file) {
  ManifestScan scan;
  nlohmann::json doc = nlohmann::json::parse(read_file(file), nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw std::runtime_error("invalid JSON in " + file.string());
  if (auto it = doc.find("dependencies"); it != doc.end() && it->is_object()) {
    for (const auto& [name, value] : it->items()) {
      if (!value.is_string()) continue;
      add_dep(scan, file, name, value.get<std::string>(), "npm");
    }
  }
  return scan;
}

}  // namespace

ManifestScan parse_manifest(const std::filesystem::path& file) {
  const std::string name = file.filename().string();
  if (name == "Cargo.toml") return parse_cargo_toml(file);
  if (name == "package.json") return parse_package_json(file);
  if (name == "requirements.txt" || name.ends_with(".txt")) return parse_requirements_txt(file);
  throw std::runtime_error("unrecognized manifest format: " + name +
                           " (supported: Cargo.toml, requirements.txt, package.json)");
}

}  // namespace ossrecon
