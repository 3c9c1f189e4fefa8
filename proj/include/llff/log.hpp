#pragma once

#include <functional>
#include <string_view>

namespace llff {

using WarningHandler = std::function<void(std::string_view)>;

/// Emits a diagnostic through the installed handler (stderr by default).
void warn(std::string_view message);

/// Installs a handler and returns the previous one. Pass an empty function to restore stderr.
WarningHandler set_warning_handler(WarningHandler handler);

} // namespace llff
