#include <doctest.h>

#include <json.hpp>

#include "chainnoise/config_io.hpp"
#include "chainnoise/csv.hpp"
#include "chainnoise/errors.hpp"
#include "chainnoise/freq_profile.hpp"
#include "chainnoise/units.hpp"
#include "oracles.hpp"

using namespace chainnoise;
using nlohmann::json;

namespace {

json valid_chain_doc() {
    return json::parse(R"({
      "frequency_grid": {"start_hz": 3.5e9, "stop_hz": 5.5e9, "points": 21},
      "stages": [
        {"kind": "loss", "label": "cold_input", "stage_temp_k": 0.03, "eta": 0.80},
        {"kind": "loss", "label": "warm_input", "stage_temp_k": 4.0,
         "eta": [[3.5e9, 0.82], [5.5e9, 0.78]]},
        {"kind": "paramp", "label": "twpa", "stage_temp_k": 4.0, "gain_db": 18.0,
         "excess_k": 1.9},
        {"kind": "loss", "label": "output", "stage_temp_k": 4.0, "eta": 0.61},
        {"kind": "follower", "label": "hemt", "stage_temp_k": 70.0, "gain_db": 40.0,
         "added_noise_k": 13.4}
      ],
      "idler_mode": "same-as-signal",
      "pump_freq_hz": 8.979e9,
      "band_avg": {"lo_hz": 3.5e9, "hi_hz": 5.5e9}
    })");
}

}  // namespace

TEST_CASE("frequency profiles: interpolation and clamping") {
    const FreqProfile c = FreqProfile::constant(0.8);
    CHECK(c(1e9) == 0.8);
    CHECK(c.is_constant());

    const FreqProfile t = FreqProfile::table({{3.5e9, 0.82}, {5.5e9, 0.78}});
    CHECK(t(3.5e9) == 0.82);
    CHECK(t(5.5e9) == 0.78);
    CHECK(t(4.5e9) == doctest::Approx(0.80).epsilon(1e-14));
    CHECK(t(4.0e9) == doctest::Approx(0.81).epsilon(1e-14));
    CHECK(t(1e9) == 0.82);   // clamped below
    CHECK(t(9e9) == 0.78);   // clamped above
    CHECK(t.min_value() == 0.78);
    CHECK(t.max_value() == 0.82);
    CHECK(t.shifted(0.1)(4.5e9) == doctest::Approx(0.90).epsilon(1e-14));

    CHECK_THROWS_AS(FreqProfile::table({}), std::invalid_argument);
    CHECK_THROWS_AS(FreqProfile::table({{5e9, 0.8}, {4e9, 0.9}}), std::invalid_argument);
    CHECK_THROWS_AS(FreqProfile::table({{4e9, 0.8}, {4e9, 0.9}}), std::invalid_argument);
}

TEST_CASE("chain config: a valid document parses into the expected chain") {
    const ChainConfig cfg = io::parse_chain_config(valid_chain_doc());
    CHECK(cfg.freq_grid_hz.size() == 21);
    CHECK(cfg.freq_grid_hz.front() == 3.5e9);
    CHECK(cfg.freq_grid_hz.back() == 5.5e9);
    REQUIRE(cfg.stages.size() == 5);
    CHECK(cfg.stages[0].kind == StageKind::Loss);
    CHECK(cfg.stages[1].eta(4.5e9) == doctest::Approx(0.80).epsilon(1e-14));
    CHECK(cfg.stages[2].kind == StageKind::ParametricAmp);
    CHECK(cfg.stages[2].excess_k == 1.9);
    CHECK(cfg.stages[4].kind == StageKind::Follower);
    CHECK(cfg.idler_mode == IdlerMode::SameAsSignal);
    CHECK(cfg.pump_freq_hz == 8.979e9);
    REQUIRE(cfg.band_hz.has_value());
    CHECK(cfg.band_hz->first == 3.5e9);
}

TEST_CASE("chain config: unknown keys are rejected by name") {
    json doc = valid_chain_doc();
    doc["surprise"] = 1;
    CHECK_THROWS_WITH_AS(io::parse_chain_config(doc), doctest::Contains("surprise"),
                         ConfigError);

    doc = valid_chain_doc();
    doc["stages"][0]["gain_db"] = 3.0;  // not a loss-stage key
    CHECK_THROWS_WITH_AS(io::parse_chain_config(doc), doctest::Contains("gain_db"),
                         ConfigError);

    doc = valid_chain_doc();
    doc["frequency_grid"]["step"] = 1e7;
    CHECK_THROWS_WITH_AS(io::parse_chain_config(doc), doctest::Contains("step"), ConfigError);

    doc = valid_chain_doc();
    doc["band_avg"]["center"] = 4.5e9;
    CHECK_THROWS_WITH_AS(io::parse_chain_config(doc), doctest::Contains("center"),
                         ConfigError);
}

TEST_CASE("chain config: missing keys, bad types, bad values") {
    json doc = valid_chain_doc();
    doc.erase("frequency_grid");
    CHECK_THROWS_WITH_AS(io::parse_chain_config(doc), doctest::Contains("frequency_grid"),
                         ConfigError);

    doc = valid_chain_doc();
    doc["stages"][0].erase("stage_temp_k");
    CHECK_THROWS_WITH_AS(io::parse_chain_config(doc), doctest::Contains("stage_temp_k"),
                         ConfigError);

    doc = valid_chain_doc();
    doc["stages"][2]["gain_db"] = "loud";
    CHECK_THROWS_AS(io::parse_chain_config(doc), ConfigError);

    doc = valid_chain_doc();
    doc["stages"][0]["eta"] = 1.3;
    CHECK_THROWS_AS(io::parse_chain_config(doc), ConfigError);

    doc = valid_chain_doc();
    doc["stages"][1]["eta"] = json::array({json::array({3.5e9, 0.8})});
    CHECK_NOTHROW(io::parse_chain_config(doc));  // single-point table is a constant

    doc = valid_chain_doc();
    doc["stages"][0]["kind"] = "mystery";
    CHECK_THROWS_WITH_AS(io::parse_chain_config(doc), doctest::Contains("mystery"),
                         ConfigError);

    doc = valid_chain_doc();
    doc["stages"][1]["label"] = "cold_input";  // duplicate
    CHECK_THROWS_WITH_AS(io::parse_chain_config(doc), doctest::Contains("duplicate"),
                         ConfigError);

    doc = valid_chain_doc();
    doc["stages"][0]["label"] = "bad label!";
    CHECK_THROWS_AS(io::parse_chain_config(doc), ConfigError);

    doc = valid_chain_doc();
    doc["idler_mode"] = "at-idler-frequency";
    doc.erase("pump_freq_hz");
    CHECK_THROWS_WITH_AS(io::parse_chain_config(doc), doctest::Contains("pump_freq_hz"),
                         ConfigError);

    doc = valid_chain_doc();
    doc["frequency_grid"]["points"] = 0;
    CHECK_THROWS_AS(io::parse_chain_config(doc), ConfigError);

    doc = valid_chain_doc();
    doc["frequency_grid"]["points"] = 2.5;
    CHECK_THROWS_AS(io::parse_chain_config(doc), ConfigError);
}

TEST_CASE("chain config: explicit idler profile key") {
    json doc = valid_chain_doc();
    doc["idler_mode"] = "explicit";
    doc["stages"][1]["eta_idler"] = 0.75;
    const ChainConfig cfg = io::parse_chain_config(doc);
    CHECK(cfg.idler_mode == IdlerMode::ExplicitProfile);
    REQUIRE(cfg.stages[1].eta_idler.has_value());
    CHECK((*cfg.stages[1].eta_idler)(4.5e9) == 0.75);
}

TEST_CASE("synth spec: junction and thermal kinds") {
    const json sntj = json::parse(R"({
      "kind": "sntj", "frequency_hz": 4.5e9, "chain_gain": 1e6,
      "n_sigma_off_quanta": 183.0, "rel_noise": 0.005, "seed": 42,
      "temperature_k": 0.04, "resistance_ohm": 48.2, "v_offset_v": 2e-6,
      "bias_grid": {"start_v": -2.5e-4, "stop_v": 2.5e-4, "points": 501}
    })");
    const io::SynthSpec s = io::parse_synth_spec(sntj);
    CHECK(s.kind == "sntj");
    CHECK(s.sntj.bias_grid_v.size() == 501);
    CHECK(s.sntj.bias_grid_v.front() == -2.5e-4);
    CHECK(s.seed == 42);

    // current-biased grid converts through the junction resistance
    json by_current = sntj;
    by_current.erase("bias_grid");
    by_current["bias_current_grid"] = {{"start_a", -5e-6}, {"stop_a", 5e-6}, {"points", 11}};
    const io::SynthSpec sc = io::parse_synth_spec(by_current);
    CHECK(sc.sntj.bias_grid_v.front() == doctest::Approx(-5e-6 * 48.2).epsilon(1e-13));

    json both = sntj;
    both["bias_current_grid"] = {{"start_a", -5e-6}, {"stop_a", 5e-6}, {"points", 11}};
    CHECK_THROWS_AS(io::parse_synth_spec(both), ConfigError);

    const json vts = json::parse(R"({
      "kind": "vts", "frequency_hz": 4.5e9, "chain_gain": 2e5,
      "n_sigma_quanta": 16.0, "rel_noise": 0.01, "seed": 1,
      "temperatures_k": [0.1, 1.0, 4.0]
    })");
    const io::SynthSpec v = io::parse_synth_spec(vts);
    CHECK(v.kind == "vts");
    CHECK(v.vts.temperatures_k.size() == 3);

    json bad = vts;
    bad["kind"] = "white";
    CHECK_THROWS_AS(io::parse_synth_spec(bad), ConfigError);
    bad = sntj;
    bad["extra"] = true;
    CHECK_THROWS_WITH_AS(io::parse_synth_spec(bad), doctest::Contains("extra"), ConfigError);
}

TEST_CASE("pump and monte-carlo specs") {
    const json pump = json::parse(R"({
      "delivered_dbm": -30.0,
      "path": [
        {"kind": "attenuator", "label": "att_4k", "attenuation_db": 10.0,
         "stage_temp_k": 4.0},
        {"kind": "coupler", "label": "dc", "coupling_db": 10.0, "stage_temp_k": 0.03,
         "termination_temp_k": 4.0}
      ]
    })");
    const io::PumpSpec p = io::parse_pump_spec(pump);
    CHECK(p.delivered_dbm == -30.0);
    REQUIRE(p.path.size() == 2);
    CHECK(p.path[1].kind == PumpPathElement::Kind::Coupler);
    CHECK(p.path[1].termination_temp_k == 4.0);

    json bad = pump;
    bad["path"][0]["coupling_db"] = 3.0;
    CHECK_THROWS_WITH_AS(io::parse_pump_spec(bad), doctest::Contains("coupling_db"),
                         ConfigError);

    const json mc = json::parse(R"({
      "n_samples": 1000, "seed": 7,
      "priors": [{"target": "output_power_db", "sigma": 0.3}]
    })");
    const McRequest r = io::parse_mc_spec(mc);
    CHECK(r.n_samples == 1000);
    CHECK(r.priors.size() == 1);
    CHECK(r.priors[0].sigma == 0.3);

    json badmc = mc;
    badmc["priors"][0]["sigma"] = -0.1;
    CHECK_THROWS_AS(io::parse_mc_spec(badmc), ConfigError);
}

TEST_CASE("unit grammar") {
    using units::Unit;
    CHECK(units::parse_quantity("4.5GHz", Unit::Hertz) == doctest::Approx(4.5e9));
    CHECK(units::parse_quantity("-30dBm", Unit::DbMilliwatt) == -30.0);
    CHECK(units::parse_quantity("0.7mA", Unit::Amps) == doctest::Approx(7e-4));
    CHECK(units::parse_quantity("30mK", Unit::Kelvin) == doctest::Approx(0.03));
    CHECK(units::parse_quantity("48.2Ohm", Unit::Ohms) == doctest::Approx(48.2));
    CHECK(units::parse_quantity("2uV", Unit::Volts) == doctest::Approx(2e-6));
    CHECK(units::parse_quantity("2\xC2\xB5V", Unit::Volts) == doctest::Approx(2e-6));
    CHECK(units::parse_quantity("18dB", Unit::Decibel) == 18.0);
    CHECK(units::parse_quantity("100", Unit::Volts) == 100.0);  // bare: base unit
    CHECK(units::parse_quantity(" 5.5 GHz ", Unit::Hertz) == doctest::Approx(5.5e9));
    CHECK(units::parse_quantity("100nW", Unit::Watts) == doctest::Approx(1e-7));
    CHECK(units::parse_quantity("80mOhm", Unit::Ohms) == doctest::Approx(0.08));

    CHECK_THROWS_AS(units::parse_quantity("4.5GHz", Unit::Volts), ConfigError);
    CHECK_THROWS_AS(units::parse_quantity("4.5QHz", Unit::Hertz), ConfigError);
    CHECK_THROWS_AS(units::parse_quantity("3mdB", Unit::Decibel), ConfigError);
    CHECK_THROWS_AS(units::parse_quantity("", Unit::Hertz), ConfigError);
    CHECK_THROWS_AS(units::parse_quantity("fast", Unit::Hertz), ConfigError);

    const auto [lo, hi] = units::parse_range("3.5GHz:5.5GHz", Unit::Hertz);
    CHECK(lo == doctest::Approx(3.5e9));
    CHECK(hi == doctest::Approx(5.5e9));
    CHECK_THROWS_AS(units::parse_range("5.5GHz:3.5GHz", Unit::Hertz), ConfigError);
    CHECK_THROWS_AS(units::parse_range("5.5GHz", Unit::Hertz), ConfigError);
}

TEST_CASE("csv numbers round-trip exactly") {
    oracle::Rng rng(51);
    for (int i = 0; i < 500; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-20.0, 20.0));
        const std::string s = csv::num(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(csv::num(0.0) == "0");
    CHECK(csv::num(1.5) == "1.5");
}
