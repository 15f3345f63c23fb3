#include "grforge/random.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

using namespace std;

namespace grforge {
namespace {
uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t fnv1a(string_view text) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}
}

uint64_t derive_seed(uint64_t master, initializer_list<string_view> parts) {
    uint64_t state = splitmix64(master);
    for (string_view part : parts)
        state = splitmix64(state ^ fnv1a(part));
    return state;
}

size_t SeededRandom::index(size_t bound) {
    if (bound == 0)
        throw invalid_argument("empty range");
    const uint64_t b = bound;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    uint64_t draw;
    do {
        draw = engine_();
    } while (draw >= limit);
    return static_cast<size_t>(draw % b);
}

vector<size_t> SeededRandom::sample(size_t population, size_t count) {
    if (count > population)
        throw invalid_argument("sample larger than population");
    vector<size_t> pool(population);
    iota(pool.begin(), pool.end(), 0);
    for (size_t i = 0; i < count; ++i)
        swap(pool[i], pool[i + index(population - i)]);
    pool.resize(count);
    sort(pool.begin(), pool.end());
    return pool;
}

}
