#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chainnoise/quanta.hpp"
#include "oracles.hpp"

using namespace chainnoise;

TEST_CASE("physical constants") {
    CHECK(constants::planck_h == 6.62607015e-34);
    CHECK(constants::boltzmann_k == 1.380649e-23);
    CHECK(constants::electron_charge == 1.602176634e-19);
    CHECK(constants::hbar == doctest::Approx(1.054571817e-34).epsilon(1e-12));
    CHECK(constants::vacuum_quanta == 0.5);
    // handy ratios: k/h = 20.8366 GHz/K, e/h = 241.80 GHz/mV
    CHECK(constants::boltzmann_k / constants::planck_h ==
          doctest::Approx(20.8366191233e9).epsilon(1e-10));
    CHECK(constants::electron_charge / constants::planck_h ==
          doctest::Approx(241.798924208e12).epsilon(1e-10));
}

TEST_CASE("thermal occupancy: vacuum limit and reference values") {
    const Frequency f45(4.5e9), f90(9e9);
    CHECK(thermal_occupancy(TemperatureK(0.0), f45).quanta == 0.5);
    CHECK(thermal_occupancy(TemperatureK(1e-12), f45).quanta == doctest::Approx(0.5));
    // frozen from the Bose-form oracle at 30 significant digits
    CHECK(thermal_occupancy(TemperatureK(4.0), f45).quanta ==
          doctest::Approx(18.5259382925355183).epsilon(1e-12));
    CHECK(thermal_occupancy(TemperatureK(4.0), f90).quanta ==
          doctest::Approx(9.26971644284330508).epsilon(1e-12));
}

TEST_CASE("thermal occupancy agrees with the Bose-form oracle") {
    oracle::Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const double t = rng.uniform(1e-3, 300.0);
        const double f = rng.uniform(1e8, 2e10);
        CHECK(thermal_occupancy(TemperatureK(t), Frequency(f)).quanta ==
              doctest::Approx(oracle::thermal_occ(t, f)).epsilon(1e-11));
    }
}

TEST_CASE("thermal occupancy monotonicity and floor") {
    oracle::Rng rng(12);
    for (int i = 0; i < 300; ++i) {
        const double t = rng.uniform(0.0, 50.0);
        const double f = rng.uniform(5e8, 2e10);
        const double n = thermal_occupancy(TemperatureK(t), Frequency(f)).quanta;
        CHECK(n >= 0.5);
        CHECK(thermal_occupancy(TemperatureK(t + 0.5), Frequency(f)).quanta >= n);
        CHECK(thermal_occupancy(TemperatureK(t), Frequency(f * 1.3)).quanta <= n);
    }
}

TEST_CASE("classical limit: n hf/k approaches t above 20 hf/k") {
    for (double f : {1e9, 4.5e9, 9e9}) {
        const double t_min = 20.0 * constants::planck_h * f / constants::boltzmann_k;
        for (double t : {t_min, 2.0 * t_min, 10.0 * t_min}) {
            const double n = thermal_occupancy(TemperatureK(t), Frequency(f)).quanta;
            const double t_lin = raw::occupancy_to_kelvin(n, f);
            CHECK(std::fabs(t_lin - t) / t < 0.01);
        }
    }
}

TEST_CASE("linear reporting conversion and its inverse") {
    const Frequency f(4.5e9);
    CHECK(occupancy_to_temperature(Occupancy(0.5), f).kelvin ==
          doctest::Approx(0.107982969150739978).epsilon(1e-12));
    CHECK(occupancy_to_temperature(Occupancy(0.0), f).kelvin == 0.0);
    // a 4 K bath's occupancy maps back to ~4 K in the linear convention
    CHECK(occupancy_to_temperature(Occupancy(18.5259382925355183), f).kelvin ==
          doctest::Approx(4.00097164626275067).epsilon(1e-12));
    CHECK(occupancy_to_temperature(Occupancy(18.53), f).kelvin ==
          doctest::Approx(4.00184883672642359).epsilon(1e-12));

    oracle::Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const double n = rng.uniform(0.0, 1e3);
        const double fr = rng.uniform(1e8, 2e10);
        const double back =
            occupancy_from_temperature(occupancy_to_temperature(Occupancy(n), Frequency(fr)),
                                       Frequency(fr))
                .quanta;
        CHECK(back == doctest::Approx(n).epsilon(1e-12));
    }
}

TEST_CASE("decibel and dBm conversions") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(18.0) == doctest::Approx(63.0957344480193249).epsilon(1e-13));
    CHECK(to_watts(PowerDbm(-30.0)).watts == doctest::Approx(1e-6).epsilon(1e-13));
    CHECK(to_watts(PowerDbm(0.0)).watts == doctest::Approx(1e-3).epsilon(1e-13));

    oracle::Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        const double db = rng.uniform(-80.0, 80.0);
        CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
        const double lin = rng.uniform(1e-6, 1e8);
        CHECK(db_to_linear(linear_to_db(lin)) == doctest::Approx(lin).epsilon(1e-12));
        const double dbm = rng.uniform(-90.0, 30.0);
        CHECK(to_dbm(to_watts(PowerDbm(dbm))).dbm == doctest::Approx(dbm).epsilon(1e-12));
    }
}

TEST_CASE("domain types reject out-of-range values") {
    CHECK_THROWS_AS(Frequency(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Frequency(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(Frequency(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(TemperatureK(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(Occupancy(-1e-9), std::invalid_argument);
    CHECK_THROWS_AS(Efficiency(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Efficiency(1.0 + 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(GainLinear(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(PowerWatts(-1.0), std::invalid_argument);
    CHECK(Efficiency(1.0).value == 1.0);
    CHECK(TemperatureK(0.0).kelvin == 0.0);
}
