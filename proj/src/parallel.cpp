#include "microloc/parallel.hpp"

#include <cstdlib>
#include <string>

namespace microloc {

unsigned thread_count() {
    if (const char* env = std::getenv("MICROLOC_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace microloc
