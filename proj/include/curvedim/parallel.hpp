#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace curvedim {

// Runs fn(begin, end) over [0, total) split into fixed-size chunks. Chunk
// boundaries depend only on total and chunk_size, never on the worker count,
// so per-chunk results can be merged in chunk order to give output that is
// identical for any number of workers.
template <typename Fn>
void parallel_chunks(std::size_t total, std::size_t chunk_size, int workers, Fn&& fn) {
    if (total == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t n_chunks = (total + chunk_size - 1) / chunk_size;
    if (workers <= 1 || n_chunks == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), n_chunks);
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace curvedim
