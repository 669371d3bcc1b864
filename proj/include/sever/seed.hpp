#pragma once

#include <cstdint>
#include <initializer_list>

namespace sever {

/// splitmix64 finalizer.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for a job identified by integer coordinates under a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> coords) noexcept {
    std::uint64_t s = mix_seed(master);
    for (auto c : coords) {
        s = mix_seed(s ^ mix_seed(c + 0x632be59bd9b4e019ULL));
    }
    return s;
}

}  // namespace sever
