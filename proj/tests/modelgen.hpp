// modelgen.hpp -- seeded random models for property tests
#pragma once

#include <vector>

#include "qlv/model.hpp"
#include "testutil.hpp"

namespace testkit {

// gamma_0 = 0 with well-separated excited levels, Gibbs weights at beta,
// couplings drawn at the given scale
inline qlv::ModelSpec random_model(qlv::Rng& rng, int d, int N, double v_scale,
                                   double beta = 1.0) {
    qlv::ModelSpec m;
    m.system.d = d;
    m.system.H_S = random_hermitian(rng, d);
    for (int i = 0; i < N; ++i)
        m.system.V.push_back(random_matrix(rng, d, d, v_scale));
    m.bath.N = N;
    m.bath.gamma.resize(size_t(N) + 1, 0.0);
    for (int i = 1; i <= N; ++i)
        m.bath.gamma[size_t(i)] = 0.5 + 0.7 * i + 0.2 * rng.uniform();
    m.bath.weights = qlv::gibbs_weights(m.bath.gamma, beta);
    m.bath.beta = beta;
    qlv::validate(m);
    return m;
}

} // namespace testkit
