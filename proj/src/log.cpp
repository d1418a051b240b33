#include "hyprank/log.hpp"

#include <cstdlib>
#include <cstring>

namespace hyprank {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("HYPRANK_LOG");
    if (!env || !*env) return 1;
    if (std::strcmp(env, "quiet") == 0) return 0;
    if (std::strcmp(env, "debug") == 0) return 2;
    return std::atoi(env);
  }();
  return level;
}

}  // namespace hyprank
