#include "hsl/log.hpp"

#include <cstdio>
#include <cstdlib>

namespace hsl {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("HSL_LOG");
    if (!env) return 0;
    const int v = std::atoi(env);
    return v < 0 ? 0 : v;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[hsl] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::fprintf(stderr, "[hsl:debug] %s\n", msg.c_str());
}

}  // namespace hsl
