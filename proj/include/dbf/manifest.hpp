#ifndef DBF_MANIFEST_HPP
#define DBF_MANIFEST_HPP

// Run manifest embedded in every JSON document the CLI emits. Contains only
// inputs-derived data so identical invocations produce byte-identical output.

#include <string>
#include <vector>

#include <json.hpp>

#include "dbf/field.hpp"

namespace dbf {

struct RunManifest {
  std::string subcommand;
  nlohmann::json flags = nlohmann::json::object();  // normalized flag values
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string field_fingerprint;  // hash of (p, m, n, modulus)
  std::string tool_version = kToolVersion;

  nlohmann::json to_json() const {
    return nlohmann::json{{"subcommand", subcommand},
                          {"flags", flags},
                          {"inputs", inputs},
                          {"outputs", outputs},
                          {"field_fingerprint", field_fingerprint},
                          {"tool_version", tool_version}};
  }
};

}  // namespace dbf

#endif  // DBF_MANIFEST_HPP
