#ifndef GRFORGE_RANDOM_H
#define GRFORGE_RANDOM_H

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace grforge {

// Platform-stable seed mixing: FNV-1a over each part, folded with splitmix64.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> parts);

/*
  mt19937_64 with an explicit rejection-sampling index draw. The standard
  distributions are implementation-defined, which would make datasets differ
  between standard libraries.
*/
class SeededRandom {
    std::mt19937_64 engine_;

public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, bound); bound must be positive.
    std::size_t index(std::size_t bound);

    // `count` distinct values from [0, population), sorted ascending.
    std::vector<std::size_t> sample(std::size_t population, std::size_t count);
};

}

#endif
