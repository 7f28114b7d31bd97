#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/errors.hpp"
#include "forge/io.hpp"
#include "forge/version.hpp"

namespace forge {

// Provenance record for one command run: inputs are digested so a re-run can
// verify it saw the same data, outputs are digested so byte-identical
// reproduction is checkable from the manifests alone.
struct RunManifest {
  std::string command_line;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  std::string started_at;
  std::string finished_at;
  std::vector<std::pair<std::string, std::string>> inputs;   // (path, digest)
  std::vector<std::pair<std::string, std::string>> outputs;  // (path, digest)

  void add_input(const std::filesystem::path& p) { inputs.push_back({p.string(), file_digest(p)}); }

  void add_output(const std::filesystem::path& p) {
    outputs.push_back({p.string(), file_digest(p)});
  }

  // One aggregate entry for a directory of many files (partition dumps):
  // digest of the sorted (name, digest) lines.
  void add_output_dir(const std::filesystem::path& dir) {
    std::vector<std::string> entries;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
      if (e.is_regular_file())
        entries.push_back(e.path().filename().string() + ":" + file_digest(e.path()));
    std::sort(entries.begin(), entries.end());
    std::string blob;
    for (const auto& s : entries) blob += s + "\n";
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(blob.data(), blob.size())));
    outputs.push_back({dir.string() + "/", buf});
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["command_line"] = command_line;
    j["seed"] = seed;
    j["config"] = config;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    auto in = nlohmann::json::array();
    for (const auto& [p, d] : inputs) in.push_back({{"path", p}, {"digest", d}});
    auto out = nlohmann::json::array();
    for (const auto& [p, d] : outputs) out.push_back({{"path", p}, {"digest", d}});
    j["inputs"] = std::move(in);
    j["outputs"] = std::move(out);
    return j;
  }
};

// Archive directories already carry manifest.json; the run record is merged
// into its "runs" list so each output directory holds exactly one manifest.
inline void merge_run_into_archive_manifest(const std::filesystem::path& dir,
                                            const RunManifest& rm) {
  const auto path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw ValidationError("no archive manifest to merge into: " + path.string());
  nlohmann::json m;
  in >> m;
  in.close();
  if (!m.contains("runs")) m["runs"] = nlohmann::json::array();
  m["runs"].push_back(rm.to_json());
  write_text(path, m.dump(2) + "\n");
}

inline void write_run_manifest(const std::filesystem::path& dir, const RunManifest& rm) {
  if (std::filesystem::exists(dir / "manifest.json")) {
    merge_run_into_archive_manifest(dir, rm);
    return;
  }
  write_text(dir / "run_manifest.json", rm.to_json().dump(2) + "\n");
}

}  // namespace forge
