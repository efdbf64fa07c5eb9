#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "risbo/config.hpp"
#include "risbo/errors.hpp"

using namespace risbo;
using nlohmann::json;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/risbo_config_test_" + name + ".json";
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("the desk preset is a small QPSK setup that validates cleanly") {
    const ExperimentConfig c = preset_config("desk");
    CHECK(c.dims.users == 3);
    CHECK(c.dims.rx_antennas == 3);
    CHECK(c.dims.ris_elements == 8);
    CHECK(c.dims.resolution_bits == 2);
    CHECK(c.modulation == ModulationKind::qpsk);
    CHECK(c.channel.kappa == 10.0);
    CHECK(c.training.n_pilots == 400);
    CHECK(c.training.q_iters == 3);
    CHECK(c.bo.n_iterations == 15);
    CHECK(c.eval.n_test_bits == 100000);
    CHECK(c.eval.snr_db.size() == 5);
    CHECK_NOTHROW(c.validate());

    // derived real-system sizes for 3 QPSK users on 3 antennas
    CHECK(c.real_users() == 6);
    CHECK(c.real_obs() == 6);
    CHECK(c.bits_per_vector() == 6);
    CHECK(c.symbols_for_bits(100000) == 16667);  // ceil(1e5 / 6)
}

TEST_CASE("the paper preset scales every section up") {
    const ExperimentConfig c = preset_config("paper");
    CHECK(c.dims.users == 5);
    CHECK(c.dims.rx_antennas == 5);
    CHECK(c.dims.ris_elements == 18);
    CHECK(c.training.n_pilots == 1000);
    CHECK(c.training.q_iters == 5);
    CHECK(c.bo.n_iterations == 25);
    CHECK(c.eval.n_test_bits == 800000);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("unknown presets are rejected with the field path") {
    CHECK_THROWS_AS(preset_config("large"), ConfigError);
    try {
        preset_config("large");
    } catch (const ConfigError& e) {
        CHECK(e.field_path() == "preset");
        CHECK(std::string(e.what()).find("large") != std::string::npos);
    }
}

TEST_CASE("partial documents override only the named fields") {
    const json doc = {{"dims", {{"users", 2}, {"ris_elements", 4}}},
                      {"bo", {{"n_iterations", 5}}}};
    const ExperimentConfig c = config_from_json(doc, preset_config("desk"));
    CHECK(c.dims.users == 2);
    CHECK(c.dims.ris_elements == 4);
    CHECK(c.dims.rx_antennas == 3);   // untouched desk value
    CHECK(c.bo.n_iterations == 5);
    CHECK(c.bo.snr_db == -12.0);      // untouched desk value
}

TEST_CASE("a preset key expands before the overrides apply") {
    const json doc = {{"preset", "paper"}, {"training", {{"q_iters", 2}}}};
    const ExperimentConfig c = config_from_json(doc, preset_config("desk"));
    CHECK(c.dims.users == 5);        // from the paper preset
    CHECK(c.training.q_iters == 2);  // override wins over the preset
    CHECK(c.training.n_pilots == 1000);
}

TEST_CASE("unknown keys are rejected with their dotted path") {
    const json top = {{"dimensions", {{"users", 2}}}};
    CHECK_THROWS_AS(config_from_json(top, preset_config("desk")), ConfigError);

    const json nested = {{"dims", {{"user", 2}}}};
    try {
        config_from_json(nested, preset_config("desk"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("dims") != std::string::npos);
        CHECK(std::string(e.what()).find("user") != std::string::npos);
    }
}

TEST_CASE("type mismatches name the offending field") {
    const json doc = {{"bo", {{"n_iterations", "many"}}}};
    try {
        config_from_json(doc, preset_config("desk"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field_path().find("n_iterations") != std::string::npos);
    }
}

TEST_CASE("validate names the field that violates its range") {
    ExperimentConfig c = preset_config("desk");
    c.eval.snr_db.clear();
    try {
        c.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field_path() == "eval.snr_db");
    }

    c = preset_config("desk");
    c.dims.users = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = preset_config("desk");
    c.channel.kappa = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = preset_config("desk");
    c.training.n_pilots = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = preset_config("desk");
    c.bo.n_iterations = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = preset_config("desk");
    c.bo.lengthscale = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = preset_config("desk");
    c.eval.n_test_bits = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = preset_config("desk");
    c.dims.resolution_bits = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("parse_config loads a file over a preset and validates") {
    const std::string path = write_temp(
        "good", R"({"preset": "desk", "dims": {"users": 2}, "eval": {"n_test_bits": 5000}})");
    const ExperimentConfig c = parse_config(path);
    CHECK(c.dims.users == 2);
    CHECK(c.eval.n_test_bits == 5000);
    std::remove(path.c_str());
}

TEST_CASE("parse_config reports missing files and malformed JSON") {
    CHECK_THROWS_AS(parse_config("/tmp/risbo_no_such_file.json"), ConfigError);

    const std::string path = write_temp("broken", "{\"dims\": ");
    CHECK_THROWS_AS(parse_config(path), ConfigError);
    std::remove(path.c_str());

    const std::string invalid = write_temp("invalid", R"({"dims": {"users": -3}})");
    CHECK_THROWS_AS(parse_config(invalid), ConfigError);
    std::remove(invalid.c_str());
}

TEST_CASE("configs round-trip exactly through their JSON document") {
    ExperimentConfig c = preset_config("paper");
    c.modulation = ModulationKind::bpsk;
    c.eval.seeds = {3, 1, 4};
    c.eval.reoptimize_per_snr = true;
    c.output_dir = "elsewhere";
    const json doc = config_to_json(c);
    CHECK(!doc.contains("preset"));
    const ExperimentConfig back = config_from_json(doc, preset_config("desk"));
    CHECK(config_to_json(back) == doc);
    CHECK(back.modulation == ModulationKind::bpsk);
    CHECK(back.eval.seeds == std::vector<std::uint64_t>{3, 1, 4});
    CHECK(back.eval.reoptimize_per_snr);
    CHECK(back.output_dir == "elsewhere");
    CHECK(back.bo.exhaustive_limit == c.bo.exhaustive_limit);
}

TEST_CASE("derived helpers reflect the modulation") {
    ExperimentConfig c = preset_config("desk");
    c.modulation = ModulationKind::bpsk;
    CHECK(c.real_users() == 3);
    CHECK(c.bits_per_vector() == 3);
    CHECK(c.symbols_for_bits(10) == 4);  // ceil(10 / 3)
    CHECK(c.train_config().epochs == c.training.epochs);
    CHECK(c.train_config().batch_size == c.training.batch_size);
    CHECK(c.train_config().learning_rate == c.training.learning_rate);
    CHECK(c.acquisition_search().restarts == c.bo.restarts);
    CHECK(c.acquisition_search().exhaustive_limit == c.bo.exhaustive_limit);
}
