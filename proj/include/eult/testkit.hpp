#ifndef EULT_TESTKIT_HPP
#define EULT_TESTKIT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eult/counting.hpp"
#include "eult/multigraph.hpp"

namespace eult {

// Deterministic Eulerian-circuit instance generator: superimposes random
// directed cycles, retrying until the union is weakly connected.
struct GenSpec {
    int32_t nodes = 5;
    int32_t cycles = 2;
    int32_t min_cycle_len = 2;
    int32_t max_cycle_len = 6;
    int64_t multiplicity_cap = 3;   // duplicate cycle edges accumulate up to this
    uint64_t seed = 1;
    bool simple = false;            // reject self-loops and parallel edges
};

Multigraph gen_random_eulerian(const GenSpec& spec);

// Order-k de Bruijn multigraph of a text: nodes are (k-1)-mers, one edge unit
// per k-mer occurrence. The text itself witnesses an Eulerian trail.
Multigraph gen_debruijn(const std::string& text, int k);

// Splitmix-style generator; stable across platforms so that seeded instances
// are reproducible everywhere.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t bound) { return next() % bound; }
};

// Checks the last-departure crossing rule against SCCs recomputed on every
// remaining graph along an Eulerian trail (given as copy ids).
bool oracle_crossings_check(const Multigraph& g, NodeId v0,
                            const std::vector<CopyId>& walk);

}  // namespace eult

#endif
