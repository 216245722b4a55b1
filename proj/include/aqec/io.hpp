// Copyright 2026 The aqecsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aqec/core.hpp"

namespace aqec {

const char* toolkit_version();

std::uint64_t fnv1a64(std::string_view data);

/// Canonical hash of a JSON config (nlohmann dumps with sorted keys).
std::uint64_t config_hash(const nlohmann::json& j);

/// CSV emitter; every file starts with a comment line carrying the config
/// hash and toolkit version, then a header row.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns,
              std::uint64_t config_hash);

    void row(const std::vector<double>& values);
    void row_labeled(const std::string& label, const std::vector<double>& values);

  private:
    std::ofstream out_;
    size_t n_cols_;
};

/// Schema-checked config loading: unknown fields are rejected, types are
/// enforced. The published schema mirror lives in docs/config-schema.json.
struct FieldSpec {
    enum class Type { Number, Integer, String, Boolean, Object, Array };
    std::string name;
    Type type;
    bool required = false;
};

void validate_fields(const nlohmann::json& obj, const std::vector<FieldSpec>& fields,
                     const std::string& context);

nlohmann::json load_json_file(const std::string& path);

}  // namespace aqec
