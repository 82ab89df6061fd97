#pragma once

#include <string>

namespace hsl {

/// 0 = quiet, 1 = info, 2 = debug; read once from HSL_LOG.
int log_level();

void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace hsl
