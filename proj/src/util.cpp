#include "eik/util.hpp"

#include <cstdlib>
#include <thread>

namespace eik {

int thread_count() {
    if (const char* env = std::getenv("GRAPH_EIKONAL_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) {
            unsigned hw = std::thread::hardware_concurrency();
            return hw > 0 ? std::min(v, static_cast<int>(hw)) : v;
        }
    }
    return 1;
}

} // namespace eik
