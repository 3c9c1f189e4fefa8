#include "llff/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace llff {
namespace {
std::mutex g_mutex;
WarningHandler g_handler;
} // namespace

void warn(std::string_view message) {
  std::scoped_lock lock{g_mutex};
  if (g_handler) {
    g_handler(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::scoped_lock lock{g_mutex};
  return std::exchange(g_handler, std::move(handler));
}

} // namespace llff
