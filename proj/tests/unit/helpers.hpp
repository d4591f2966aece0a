#pragma once

#include "lopa/error.hpp"
#include "lopa/linalg.hpp"
#include "lopa/system.hpp"

#include <gtest/gtest.h>

#include <initializer_list>
#include <random>

namespace testing_helpers {

using namespace lopa;

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (const auto& r : rows) {
        Index j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline CMatrix cmat(std::initializer_list<std::initializer_list<double>> rows) { return mat(rows).cast<Complex>(); }

inline FirstOrderSystem wave() { return FirstOrderSystem({mat({{0, 1}, {1, 0}})}, "wave"); }

/// gamma log-uniform in [gmin, gmax], tau and eta uniform in [-span, span].
inline Frequency random_frequency(std::mt19937_64& rng, Index d, double gmin = 1e-2, double gmax = 1e2,
                                  double span = 5.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> lg(std::log(gmin), std::log(gmax));
    Vector eta(d - 1);
    for (Index j = 0; j + 1 < d; ++j) eta(j) = span * u(rng);
    return Frequency(span * u(rng), eta, std::exp(lg(rng)));
}

/// Kind of the lopa::Error thrown by f; records a failure if nothing is thrown.
template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorKind::InvalidArgument;
}

}  // namespace testing_helpers
