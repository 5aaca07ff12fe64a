#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace branchwalk {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Random stream with hand-rolled variate transforms so that results are
// bit-identical across platforms and thread schedules.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform on (0, 1]
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    bool bernoulli(double p) { return uniform() <= p; }

    // uniform integer in [0, bound)
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)) % bound;
    }

  private:
    std::mt19937_64 engine_;
};

// Stream for one replicate, derived by counter-based splitting so replicates
// are independent of each other and of the execution schedule.
inline Rng replicate_stream(std::uint64_t root_seed, std::uint64_t replicate) {
    return Rng(splitmix64(root_seed ^ splitmix64(replicate + 0x51ed2701ULL)));
}

}  // namespace branchwalk
