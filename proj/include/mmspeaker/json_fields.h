// Copyright 2026 The mmspeaker Authors.
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

// Typed field access on parsed JSON that reports the field path on failure
// instead of throwing.

#ifndef MMSPEAKER_JSON_FIELDS_H_
#define MMSPEAKER_JSON_FIELDS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace mmspeaker {

using Json = nlohmann::ordered_json;

namespace json_internal {

inline absl::Status FieldError(absl::string_view path, absl::string_view what) {
  return absl::DataLossError(absl::StrCat("field '", path, "': ", what));
}

template <typename T>
absl::StatusOr<T> Convert(const Json& value, absl::string_view path) {
  if constexpr (std::is_same_v<T, double>) {
    if (!value.is_number()) return FieldError(path, "expected a number");
    return value.get<double>();
  } else if constexpr (std::is_same_v<T, int>) {
    if (!value.is_number_integer()) {
      return FieldError(path, "expected an integer");
    }
    return value.get<int>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!value.is_string()) return FieldError(path, "expected a string");
    return value.get<std::string>();
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    if (!value.is_array()) return FieldError(path, "expected an array");
    std::vector<double> out;
    out.reserve(value.size());
    for (const Json& v : value) {
      if (!v.is_number()) return FieldError(path, "expected numbers");
      out.push_back(v.get<double>());
    }
    return out;
  } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
    if (!value.is_array()) return FieldError(path, "expected an array");
    std::vector<std::string> out;
    out.reserve(value.size());
    for (const Json& v : value) {
      if (!v.is_string()) return FieldError(path, "expected strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  } else {
    static_assert(sizeof(T) == 0, "unsupported field type");
  }
}

}  // namespace json_internal

template <typename T>
absl::StatusOr<T> RequiredField(const Json& object, absl::string_view key,
                                absl::string_view prefix = "") {
  const std::string path = absl::StrCat(prefix, key);
  if (!object.is_object()) {
    return json_internal::FieldError(prefix, "expected an object");
  }
  auto it = object.find(std::string(key));
  if (it == object.end()) return json_internal::FieldError(path, "missing");
  return json_internal::Convert<T>(*it, path);
}

template <typename T>
absl::StatusOr<std::optional<T>> OptionalField(const Json& object,
                                               absl::string_view key,
                                               absl::string_view prefix = "") {
  auto it = object.find(std::string(key));
  if (it == object.end()) return std::optional<T>();
  absl::StatusOr<T> value =
      json_internal::Convert<T>(*it, absl::StrCat(prefix, key));
  if (!value.ok()) return value.status();
  return std::optional<T>(*std::move(value));
}

// Parses one line; malformed JSON becomes a DataLoss status.
inline absl::StatusOr<Json> ParseJsonLine(std::string_view line) {
  Json parsed = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) return absl::DataLossError("malformed JSON");
  return parsed;
}

}  // namespace mmspeaker

#endif  // MMSPEAKER_JSON_FIELDS_H_
