// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "svr/kernels.hpp"

using namespace svr;

namespace {

// Independent polynomial forms of the 3x3 family VRP for the first three
// passes, written from the generating sequences by hand. They are the oracle
// for vrp_iterated below; keep them separate from the library path.
double poly_vrp_pass0(double a) {
    const double n = 1.0 + 2.0 * a;
    const double d = 1.0 + 2.0 * a * a;
    return n * n * n * n / (d * d);
}
double poly_vrp_pass1(double a) {
    const double n = 1.0 + 2.0 * a;
    const double d = 3.0 + 8.0 * a + 8.0 * a * a;
    return 81.0 * n * n * n * n / (d * d);
}
double poly_vrp_pass2(double a) {
    const double n = 1.0 + 2.0 * a;
    const double d = 19.0 + 64.0 * a + 58.0 * a * a;
    return 81.0 * 81.0 * n * n * n * n / (d * d);
}

} // namespace

TEST_CASE("generating kernel basic shapes") {
    const GeneratingKernel1D half = generating_kernel(0.5, 1);
    REQUIRE(half.coeffs.size() == 3);
    CHECK(half.coeffs[0] == 0.5);
    CHECK(half.coeffs[1] == 1.0);
    CHECK(half.coeffs[2] == 0.5);

    const GeneratingKernel1D delta = generating_kernel(0.0, 2);
    CHECK(delta.coeffs == std::vector<double>{0, 0, 1, 0, 0});

    const GeneratingKernel1D box = generating_kernel(1.0, 1);
    CHECK(box.coeffs == std::vector<double>{1, 1, 1});

    CHECK_THROWS_AS(generating_kernel(-0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(generating_kernel(1.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(generating_kernel(0.5, 0), std::invalid_argument);
}

TEST_CASE("generating kernel symmetry and positivity over the parameter grid") {
    for (int L = 1; L <= 3; ++L) {
        for (int i = 0; i <= 100; ++i) {
            const GeneratingKernel1D u = generating_kernel(i / 100.0, L);
            REQUIRE(static_cast<int>(u.coeffs.size()) == 2 * L + 1);
            CHECK(u.center() > 0.0);
            for (int l = 0; l <= L; ++l) {
                CHECK(u.coeffs[L + l] == u.coeffs[L - l]);
                CHECK(u.coeffs[L + l] >= 0.0);
            }
        }
    }
}

TEST_CASE("atomic kernel entries at a=1/2") {
    // expand the outer product by hand: generator (1/2, 1, 1/2), sum 2,
    // kernel = outer/4 -> corners 1/16, edges 1/8, center 1/4
    const Kernel2D k = atomic_kernel(0.5, 1);
    CHECK(k.at(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(k.at(1, 0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(k.at(0, 1) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(k.at(1, 1) == doctest::Approx(0.0625).epsilon(1e-15));
}

TEST_CASE("atomic kernel endpoints are delta and box") {
    for (int L = 1; L <= 3; ++L) {
        const Kernel2D d = atomic_kernel(0.0, L);
        const Kernel2D d_ref = delta_kernel(L);
        const Kernel2D b = atomic_kernel(1.0, L);
        const Kernel2D b_ref = box_kernel(L);
        for (size_t i = 0; i < d.coeffs.size(); ++i) {
            CHECK(d.coeffs[i] == d_ref.coeffs[i]);
            CHECK(b.coeffs[i] == b_ref.coeffs[i]);
        }
    }
}

TEST_CASE("every constructed kernel is normalized and non-negative") {
    for (int L = 1; L <= 3; ++L) {
        for (int i = 0; i <= 100; ++i) {
            const Kernel2D k = atomic_kernel(i / 100.0, L);
            double sum = 0.0;
            for (double c : k.coeffs) {
                CHECK(c >= 0.0);
                sum += c;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("delta and box kernels") {
    const Kernel2D d1 = delta_kernel(1);
    CHECK(d1.coeffs == std::vector<double>{0, 0, 0, 0, 1, 0, 0, 0, 0});
    CHECK(delta_kernel(2).coeffs.size() == 25);
    CHECK(vrp(delta_kernel(1)) == doctest::Approx(1.0));
    CHECK(vrp(delta_kernel(3)) == doctest::Approx(1.0));

    for (double c : box_kernel(1).coeffs) CHECK(c == doctest::Approx(1.0 / 9).epsilon(1e-15));
    CHECK(vrp(box_kernel(1)) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(vrp(box_kernel(3)) == doctest::Approx(49.0).epsilon(1e-12));
}

TEST_CASE("gaussian kernel limits") {
    const Kernel2D tiny = gaussian_kernel(0.05, 1);
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (dx || dy) CHECK(tiny.at(dx, dy) < 1e-12);
    CHECK(tiny.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    const Kernel2D wide = gaussian_kernel(100.0, 1);
    for (double c : wide.coeffs) CHECK(std::abs(c - 1.0 / 9) < 1e-3);

    CHECK_THROWS_AS(gaussian_kernel(0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_kernel(-1.0, 1), std::invalid_argument);
}

TEST_CASE("sigma from a") {
    CHECK(sigma_from_a(std::exp(-0.5)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sigma_from_a(std::exp(-2.0)) == doctest::Approx(0.5).epsilon(1e-14));
    const double sigma = 0.8;
    CHECK(sigma_from_a(std::exp(-1.0 / (2.0 * sigma * sigma))) ==
          doctest::Approx(sigma).epsilon(1e-14));
    CHECK_THROWS_AS(sigma_from_a(0.0), std::invalid_argument);
    CHECK_THROWS_AS(sigma_from_a(1.0), std::invalid_argument);
}

TEST_CASE("atomic kernels equal truncated gaussians entrywise") {
    for (int L = 1; L <= 3; ++L) {
        for (int i = 1; i <= 99; ++i) {
            const double a = i / 100.0;
            const Kernel2D atom = atomic_kernel(a, L);
            const Kernel2D gauss = gaussian_kernel(sigma_from_a(a), L);
            for (size_t j = 0; j < atom.coeffs.size(); ++j)
                CHECK(std::abs(atom.coeffs[j] - gauss.coeffs[j]) < 1e-12);
        }
    }
}

TEST_CASE("vrp agrees with the trace and closed evaluations") {
    // 0.140625 is the sum of squares of the explicit a=1/2 kernel above
    CHECK(vrp(atomic_kernel(0.5, 1)) == doctest::Approx(1.0 / 0.140625).epsilon(1e-14));
    CHECK(vrp_trace(atomic_kernel(0.5, 1)) == doctest::Approx(1.0 / (0.375 * 0.375)).epsilon(1e-14));
    CHECK(vrp_trace(box_kernel(1)) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(vrp_trace(delta_kernel(2)) == doctest::Approx(1.0).epsilon(1e-14));

    for (int L = 1; L <= 3; ++L) {
        for (int i = 0; i <= 100; ++i) {
            const double a = i / 100.0;
            const Kernel2D k = atomic_kernel(a, L);
            const double direct = vrp(k);
            CHECK(vrp_trace(k) == doctest::Approx(direct).epsilon(1e-12));
            CHECK(vrp_atomic(a, L) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("vrp_atomic anchor values") {
    CHECK(vrp_atomic(0.25, 1) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(vrp_atomic(1.0, 1) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(vrp_atomic(0.5, 1) == doctest::Approx(64.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("vrp_atomic is strictly increasing with range [1, K^2]") {
    for (int L = 1; L <= 3; ++L) {
        const double k2 = (2.0 * L + 1) * (2.0 * L + 1);
        CHECK(vrp_atomic(0.0, L) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(vrp_atomic(1.0, L) == doctest::Approx(k2).epsilon(1e-14));
        double prev = vrp_atomic(0.0, L);
        for (int i = 1; i <= 100; ++i) {
            const double cur = vrp_atomic(i / 100.0, L);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("repeated box sequences") {
    const GeneratingKernel1D b1 = repeated_box_1d(1, 1);
    for (double c : b1.coeffs) CHECK(c == doctest::Approx(1.0 / 3).epsilon(1e-15));

    const GeneratingKernel1D b2 = repeated_box_1d(2, 1);
    const std::vector<double> expect{1, 2, 3, 2, 1};
    REQUIRE(b2.coeffs.size() == 5);
    for (size_t i = 0; i < 5; ++i)
        CHECK(b2.coeffs[i] == doctest::Approx(expect[i] / 9.0).epsilon(1e-15));

    // pass count 0 is the identity element: a single unit coefficient
    const GeneratingKernel1D b0 = repeated_box_1d(0, 2);
    CHECK(b0.coeffs == std::vector<double>{1.0});
    CHECK(b0.half_width == 0);
}

TEST_CASE("iterated generator") {
    const GeneratingKernel1D same = iterated_generating(0.37, 0, 2);
    CHECK(same.coeffs == generating_kernel(0.37, 2).coeffs);

    const GeneratingKernel1D t1 = iterated_generating(1.0, 1, 1);
    const std::vector<double> expect1{1, 2, 3, 2, 1};
    REQUIRE(t1.coeffs.size() == 5);
    for (size_t i = 0; i < 5; ++i)
        CHECK(t1.coeffs[i] == doctest::Approx(expect1[i] / 3.0).epsilon(1e-15));

    const GeneratingKernel1D t2 = iterated_generating(0.5, 1, 1);
    const std::vector<double> expect2{0.5, 1.5, 2.0, 1.5, 0.5};
    REQUIRE(t2.coeffs.size() == 5);
    for (size_t i = 0; i < 5; ++i)
        CHECK(t2.coeffs[i] == doctest::Approx(expect2[i] / 3.0).epsilon(1e-15));
}

TEST_CASE("iterated vrp anchors") {
    CHECK(vrp_iterated(1.0, 1, 1) == doctest::Approx(6561.0 / 361.0).epsilon(1e-14));
    CHECK(vrp_iterated(1.0, 2, 1) ==
          doctest::Approx(81.0 * 81.0 * 81.0 / (141.0 * 141.0)).epsilon(1e-14));
    CHECK(vrp_iterated(0.0, 1, 1) == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("iterated vrp matches the hand-expanded polynomials") {
    for (int i = 0; i <= 100; ++i) {
        const double a = i / 100.0;
        CHECK(vrp_iterated(a, 0, 1) == doctest::Approx(poly_vrp_pass0(a)).epsilon(1e-12));
        CHECK(vrp_iterated(a, 1, 1) == doctest::Approx(poly_vrp_pass1(a)).epsilon(1e-12));
        CHECK(vrp_iterated(a, 2, 1) == doctest::Approx(poly_vrp_pass2(a)).epsilon(1e-12));
    }
}

TEST_CASE("cumulative and incremental reduction limits") {
    CHECK(p_max_at_iteration(0, 2) == doctest::Approx(25.0).epsilon(1e-14));
    CHECK(p_max_at_iteration(7, 1) == doctest::Approx(68.62).epsilon(2e-4));
    CHECK(p_max_at_iteration(3, 3) == doctest::Approx(209.20).epsilon(1e-4));

    CHECK(r_max_at_iteration(0, 3) == doctest::Approx(49.0).epsilon(1e-14));
    CHECK(std::abs(r_max_at_iteration(1, 1) - 2.019) < 1e-3);
    CHECK(std::abs(r_max_at_iteration(2, 2) - 1.473) < 1e-3);
}

TEST_CASE("incremental reduction decays with the pass index") {
    for (int L = 1; L <= 3; ++L) {
        double prev = r_max_at_iteration(1, L);
        for (int n = 2; n <= 12; ++n) {
            const double cur = r_max_at_iteration(n, L);
            CHECK(cur < prev);
            CHECK(cur > 1.0);
            prev = cur;
        }
    }
}
