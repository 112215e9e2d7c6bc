#include <cmath>

#include "doctest.h"
#include "qlni/dispersion.hpp"
#include "qlni/rng.hpp"
#include "qlni/spectral.hpp"

using namespace qlni;

namespace {

FiberUnderTest beta2_only_fiber() {
    FiberUnderTest f;
    f.length_m = 10.0;
    f.beta2 = 1.06125e-25;
    return f;
}

}  // namespace

TEST_CASE("taylor phase") {
    SUBCASE("only the constant term survives at zero detuning") {
        FiberUnderTest f;
        f.length_m = 7.0;
        f.beta0 = 1.25;
        f.beta1 = 3e-9;
        f.beta2 = 1e-25;
        f.beta3 = 1e-39;
        CHECK(taylor_phase(f, {0.0}) == f.length_m * f.beta0);
    }

    SUBCASE("second-order value") {
        // L beta2 dw^2 / 2 evaluated directly
        const FiberUnderTest f = beta2_only_fiber();
        CHECK(taylor_phase(f, {2.0131e13}) ==
              doctest::Approx(215.039581055625).epsilon(1e-12));
    }

    SUBCASE("linear in the fiber length") {
        FiberUnderTest f = beta2_only_fiber();
        f.beta0 = 0.3;
        f.beta1 = -2e-9;
        const double phase_1 = taylor_phase(f, {1.5e13});
        f.length_m *= 2.0;
        CHECK(taylor_phase(f, {1.5e13}) == 2.0 * phase_1);
    }

    SUBCASE("orders above the stored coefficients are rejected") {
        CHECK_THROWS_AS(taylor_phase(beta2_only_fiber(), {1e13}, 4), DomainError);
        CHECK_THROWS_AS(taylor_phase(beta2_only_fiber(), {1e13}, -1), DomainError);
    }
}

TEST_CASE("summed signal+idler phase") {
    SUBCASE("constant term doubles at zero detuning") {
        FiberUnderTest f;
        f.beta0 = 0.7;
        f.length_m = 3.0;
        CHECK(quantum_like_phase(f, {0.0}) == 2.0 * f.length_m * f.beta0);
    }

    SUBCASE("second-order term enters without the 1/2") {
        const FiberUnderTest f = beta2_only_fiber();
        CHECK(quantum_like_phase(f, {2.0131e13}) ==
              doctest::Approx(430.07916211125).epsilon(1e-12));
    }

    SUBCASE("odd orders never enter, bit for bit") {
        CounterRng rng(31337);
        for (int i = 0; i < 1000; ++i) {
            FiberUnderTest f = beta2_only_fiber();
            f.beta0 = rng.next_double();
            f.beta1 = (2.0 * rng.next_double() - 1.0) * 1e-8;
            f.beta3 = (2.0 * rng.next_double() - 1.0) * 1e-38;
            FiberUnderTest even = f;
            even.beta1 = 0.0;
            even.beta3 = 0.0;
            const double dw = (2.0 * rng.next_double() - 1.0) * 2e13;
            CHECK(quantum_like_phase(f, {dw}) == quantum_like_phase(even, {dw}));
        }
    }

    SUBCASE("matches the two-sided taylor sum over the sweep band") {
        CounterRng rng(1234);
        const Wavelength pump = Wavelength::from_nm(780.3);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            FiberUnderTest f = beta2_only_fiber();
            f.beta0 = rng.next_double();
            f.beta1 = (2.0 * rng.next_double() - 1.0) * 1e-8;
            f.beta3 = (2.0 * rng.next_double() - 1.0) * 1e-38;
            const double nm = 1535.0 + 10.0 * rng.next_double();
            const Detuning dw = detuning_from_degeneracy(Wavelength::from_nm(nm), pump);
            const double sum =
                taylor_phase(f, dw) + taylor_phase(f, {-dw.rad_per_s});
            worst = std::max(worst, std::abs(sum - quantum_like_phase(f, dw)));
        }
        CHECK(worst <= 1e-9);
    }

    SUBCASE("even in the detuning") {
        const FiberUnderTest f = beta2_only_fiber();
        for (double dw : {1e12, 7.7e12, 2.01e13})
            CHECK(quantum_like_phase(f, {dw}) == quantum_like_phase(f, {-dw}));
    }
}

TEST_CASE("classical single-beam phase") {
    SUBCASE("constant term at zero detuning") {
        FiberUnderTest f;
        f.beta0 = 0.9;
        f.length_m = 5.0;
        CHECK(classical_phase(f, {0.0}) == f.length_m * f.beta0);
    }

    SUBCASE("curvature at zero detuning is half the summed-phase curvature") {
        FiberUnderTest f = beta2_only_fiber();
        f.beta0 = 0.4;
        f.beta1 = 1e-9;
        f.beta3 = 1e-40;
        const double h = 1e11;  // central finite differences
        const double curv_classical =
            classical_phase(f, {h}) - 2.0 * classical_phase(f, {0.0}) + classical_phase(f, {-h});
        const double curv_summed = quantum_like_phase(f, {h}) -
                                   2.0 * quantum_like_phase(f, {0.0}) +
                                   quantum_like_phase(f, {-h});
        CHECK(curv_classical / (h * h) ==
              doctest::Approx(f.length_m * f.beta2).epsilon(1e-6));
        CHECK(curv_summed / curv_classical == doctest::Approx(2.0).epsilon(1e-6));
    }

    SUBCASE("pure third-order fiber gives an odd phase") {
        FiberUnderTest f;
        f.beta3 = 2e-39;
        for (double dw : {5e11, 1e13})
            CHECK(classical_phase(f, {dw}) == -classical_phase(f, {-dw}));
    }
}

TEST_CASE("dispersion parameter conversion") {
    const Wavelength lambda0 = Wavelength::from_nm(1560.6);

    CHECK(d_from_beta2(0.0, lambda0).ps_per_nm_km == 0.0);

    // beta2 = -D lambda0^2 / (2 pi c) evaluated directly
    CHECK(beta2_from_d({-82.08}, lambda0) ==
          doctest::Approx(1.061255567527276e-25).epsilon(1e-12));
    CHECK(d_from_beta2(1.061255567527276e-25, lambda0).ps_per_nm_km ==
          doctest::Approx(-82.08).epsilon(1e-12));

    SUBCASE("exact inverse pair") {
        for (double d : {-82.08, -17.0, 0.5, 20.3}) {
            const double back = d_from_beta2(beta2_from_d({d}, lambda0), lambda0).ps_per_nm_km;
            CHECK(std::abs(back - d) <= 1e-12 * std::abs(d));
        }
    }

    SUBCASE("negative D means positive beta2") {
        CHECK(beta2_from_d({-82.08}, lambda0) > 0.0);
    }
}
