#include "cxhess/parallel.hpp"

#include <atomic>

namespace cxhess {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned n) noexcept { g_max_threads.store(n); }

unsigned max_threads() noexcept {
    const unsigned cap = g_max_threads.load();
    if (cap != 0) return cap;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace cxhess
