#pragma once

#include <cstdio>

namespace hyprank {

// Verbosity from HYPRANK_LOG: 0 errors only, 1 progress (default), 2 debug.
int log_level();

#define HYPRANK_INFO(...)                    \
  do {                                       \
    if (::hyprank::log_level() >= 1) {       \
      std::fprintf(stderr, __VA_ARGS__);     \
      std::fprintf(stderr, "\n");            \
    }                                        \
  } while (0)

#define HYPRANK_DEBUG(...)                   \
  do {                                       \
    if (::hyprank::log_level() >= 2) {       \
      std::fprintf(stderr, __VA_ARGS__);     \
      std::fprintf(stderr, "\n");            \
    }                                        \
  } while (0)

}  // namespace hyprank
