#include "sphrase/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sphrase/errors.hpp"

namespace sphrase {

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = tool;
  j["version"] = version;
  j["created_utc"] = created_utc;
  j["command"] = command;
  j["inputs"] = {{"corpus", corpus_path}, {"vocab", vocab_path}};
  j["output"] = output_path;
  j["min_count"] = min_count;
  j["max_phrase_len"] = max_phrase_len;
  j["config"] = {
      {"regime", std::string(to_string(config.regime))},
      {"window", config.window},
      {"dim", config.dim},
      {"epochs", config.epochs},
      {"initial_lr", config.initial_lr},
      {"decay", config.decay},
      {"batch_tokens", config.batch_tokens},
      {"num_sampled", config.num_sampled},
      {"seed", config.seed},
      {"threads", config.threads},
      {"deterministic", config.deterministic},
      {"checkpoint_dir", config.checkpoint_dir},
  };
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("manifest is not valid JSON: ") + e.what());
  }
  RunManifest m;
  try {
    m.tool = j.value("tool", "sphrase");
    m.version = j.value("version", "");
    m.created_utc = j.value("created_utc", "");
    m.command = j.value("command", "");
    if (j.contains("inputs")) {
      m.corpus_path = j["inputs"].value("corpus", "");
      m.vocab_path = j["inputs"].value("vocab", "");
    }
    m.output_path = j.value("output", "");
    m.min_count = j.value("min_count", std::uint64_t{100});
    m.max_phrase_len = j.value("max_phrase_len", std::size_t{10});
    const nlohmann::json& c = j.at("config");
    const std::string regime_name = c.at("regime").get<std::string>();
    const auto regime = parse_regime(regime_name);
    if (!regime) {
      throw InvalidConfig("unknown regime in manifest: " + regime_name);
    }
    m.config.regime = *regime;
    m.config.window = c.at("window").get<std::size_t>();
    m.config.dim = c.at("dim").get<std::size_t>();
    m.config.epochs = c.at("epochs").get<std::size_t>();
    m.config.initial_lr = c.at("initial_lr").get<double>();
    m.config.decay = c.at("decay").get<double>();
    m.config.batch_tokens = c.at("batch_tokens").get<std::size_t>();
    m.config.num_sampled = c.at("num_sampled").get<std::size_t>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.threads = c.value("threads", std::size_t{1});
    m.config.deterministic = c.value("deterministic", true);
    m.config.checkpoint_dir = c.value("checkpoint_dir", "");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("incomplete manifest: ") + e.what());
  }
  return m;
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << manifest.to_json();
  if (!out.good()) throw IoError("failed writing manifest: " + path);
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return RunManifest::from_json(text.str());
}

}  // namespace sphrase
