#pragma once

#include <string>

#include "sphrase/trainer.hpp"

namespace sphrase {

/// Snapshot of everything a run needs to be reproduced: the full training
/// configuration plus input/output paths. In deterministic mode, re-running
/// from the same manifest produces a byte-identical embedding file.
struct RunManifest {
  std::string tool = "sphrase";
  std::string version;
  std::string created_utc;  // stamped at write time
  std::string command;
  std::string corpus_path;
  std::string vocab_path;   // empty: vocabulary built from the corpus
  std::string output_path;
  std::uint64_t min_count = 100;
  std::size_t max_phrase_len = 10;
  TrainConfig config;

  std::string to_json() const;
  /// Throws InvalidConfig when the text is not a valid manifest.
  static RunManifest from_json(const std::string& text);
};

void save_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

}  // namespace sphrase
