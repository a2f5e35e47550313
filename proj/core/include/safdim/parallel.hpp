#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace safdim::par {

// Worker cap for the data-parallel sections. Results never depend on it:
// work is split into fixed chunks and merged in chunk order.
unsigned max_workers();
void set_max_workers(unsigned n);

template <class T, class Fn>
std::vector<T> map_chunks(std::size_t n_chunks, Fn&& fn) {
    std::vector<T> out(n_chunks);
    std::size_t workers = std::min<std::size_t>(max_workers(), n_chunks);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_chunks; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n_chunks || failed.load()) return;
                try {
                    out[i] = fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
    return out;
}

}  // namespace safdim::par
