// SPDX-License-Identifier: Apache-2.0
//
// Process-wide warning sink. Defaults to stderr; tests and bindings can
// silence or capture it.

#pragma once

#include <functional>
#include <string>

namespace mdsd::log {

using Sink = std::function<void(const std::string&)>;

/// Replaces the sink and returns the previous one. An empty sink discards.
Sink set_warning_sink(Sink sink);
void warn(const std::string& message);

}  // namespace mdsd::log
