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

#include "aqec/io.hpp"

#include <iomanip>
#include <sstream>

namespace aqec {

const char* toolkit_version() { return "0.1.0"; }

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t config_hash(const nlohmann::json& j) { return fnv1a64(j.dump()); }

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     std::uint64_t hash)
    : out_(path), n_cols_(columns.size()) {
    if (!out_) throw ConfigError("cannot open output file: " + path);
    out_ << "# aqecsim " << toolkit_version() << " config_hash=" << std::hex << hash << std::dec
         << "\n";
    for (size_t i = 0; i < columns.size(); ++i) {
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }
    out_ << std::setprecision(12);
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_cols_) throw StructuralError("CSV row width mismatch");
    for (size_t i = 0; i < values.size(); ++i) {
        out_ << values[i] << (i + 1 < values.size() ? "," : "\n");
    }
}

void CsvWriter::row_labeled(const std::string& label, const std::vector<double>& values) {
    if (values.size() + 1 != n_cols_) throw StructuralError("CSV row width mismatch");
    out_ << label;
    for (double v : values) out_ << "," << v;
    out_ << "\n";
}

namespace {

bool type_matches(const nlohmann::json& v, FieldSpec::Type t) {
    switch (t) {
        case FieldSpec::Type::Number: return v.is_number();
        case FieldSpec::Type::Integer: return v.is_number_integer();
        case FieldSpec::Type::String: return v.is_string();
        case FieldSpec::Type::Boolean: return v.is_boolean();
        case FieldSpec::Type::Object: return v.is_object();
        case FieldSpec::Type::Array: return v.is_array();
    }
    return false;
}

const char* type_name(FieldSpec::Type t) {
    switch (t) {
        case FieldSpec::Type::Number: return "number";
        case FieldSpec::Type::Integer: return "integer";
        case FieldSpec::Type::String: return "string";
        case FieldSpec::Type::Boolean: return "boolean";
        case FieldSpec::Type::Object: return "object";
        case FieldSpec::Type::Array: return "array";
    }
    return "?";
}

}  // namespace

void validate_fields(const nlohmann::json& obj, const std::vector<FieldSpec>& fields,
                     const std::string& context) {
    if (!obj.is_object()) throw ConfigError(context + ": expected a JSON object");
    for (const auto& f : fields) {
        auto it = obj.find(f.name);
        if (it == obj.end()) {
            if (f.required) throw ConfigError(context + ": missing required field '" + f.name + "'");
            continue;
        }
        if (!type_matches(*it, f.type)) {
            throw ConfigError(context + ": field '" + f.name + "' must be " + type_name(f.type));
        }
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const auto& f : fields) {
            if (f.name == it.key()) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError(context + ": unknown field '" + it.key() + "'");
    }
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return j;
}

}  // namespace aqec
