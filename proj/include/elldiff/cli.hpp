#pragma once

#include <optional>
#include <string>

#include "json.hpp"

namespace elldiff::cli {

struct Options {
  std::optional<double> tol;
  std::optional<int> cutoff;
  std::optional<int> order;
};

struct Outcome {
  nlohmann::json response;
  /// 0 ok, 1 domain error, 2 schema error.
  int exit_code = 0;
};

/// Routes {"command": ..., "payload": ...} to the matching operation.
Outcome dispatch(const nlohmann::json& request, const Options& opts = {});

/// Parses text as JSON and dispatches it.
Outcome run_text(const std::string& text, const Options& opts = {});

/// Canonical rendering: sorted keys, two-space indent, trailing newline.
std::string render(const nlohmann::json& response);

}  // namespace elldiff::cli
