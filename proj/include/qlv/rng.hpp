// rng.hpp -- seeded randomness for reproducible runs
// One engine, one bits-to-double rule, so identical seeds give identical
// output across platforms. The generator name travels with every artifact
// that used it.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qlv {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static const char* name() { return "mt19937_64"; }

    // uniform on [0, 1) from the top 53 bits
    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller, one branch discarded to keep the stream layout obvious
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace qlv
