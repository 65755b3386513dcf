#include "schurlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace schurlab {

std::size_t thread_budget() {
    if (const char* env = std::getenv("OPINT_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n > 0) return static_cast<std::size_t>(n);
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace schurlab
