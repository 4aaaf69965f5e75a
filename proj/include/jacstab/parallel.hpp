#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace jacstab {

// Worker-thread cap: JACSTAB_THREADS (integer >= 1) when set, otherwise the
// hardware count clamped to 8. Output ordering never depends on this.
inline unsigned thread_count() {
    if (const char* env = std::getenv("JACSTAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw std::invalid_argument("JACSTAB_THREADS must be an integer >= 1");
        return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (hw > 8 ? 8 : hw);
}

// Runs f(i) for i in [0, n) across threads; callers write results into
// index-addressed slots so merged output stays deterministic.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    const unsigned workers = thread_count();
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    for (unsigned w = 0; w < used; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace jacstab
