#include "safdim/parallel.hpp"

#include <algorithm>

namespace safdim::par {

namespace {

unsigned default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 8u);
}

std::atomic<unsigned> g_max_workers{0};  // 0 = not set yet

}  // namespace

unsigned max_workers() {
    unsigned n = g_max_workers.load();
    return n == 0 ? default_workers() : n;
}

void set_max_workers(unsigned n) { g_max_workers.store(n == 0 ? 1 : n); }

}  // namespace safdim::par
