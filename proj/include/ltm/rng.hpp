#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ltm {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Small deterministic generator; identical across platforms so seeded reports
// are byte-reproducible.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {
        // decorrelate trivially related seeds
        splitmix64(state);
        splitmix64(state);
    }

    std::uint64_t next_u64() { return splitmix64(state); }
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
};

// Independent per-sample stream: results do not depend on thread count.
inline Rng sample_rng(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= (index + 1) * 0x9e3779b97f4a7c15ULL;
    return Rng(s);
}

inline unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LTM_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
    }
    return hw;
}

// Index-parallel loop with deterministic work assignment; fn(i) must only
// touch per-index state.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned nt = std::min<std::size_t>(thread_budget(), n == 0 ? 1 : n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += nt) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace ltm
