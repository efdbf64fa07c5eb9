#include "risbo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "risbo/errors.hpp"

namespace risbo {
namespace {

/// Pulls typed fields out of one JSON object level, rejecting unknown keys
/// and prefixing every complaint with the dotted path.
class Section {
public:
    Section(const nlohmann::json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw ConfigError(path_, "expected a JSON object");
        }
    }

    template <typename T>
    void read(const char* key, T& out) {
        auto it = obj_.find(key);
        if (it == obj_.end()) {
            return;
        }
        seen_.insert(key);
        try {
            out = it->get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(field(key), "has the wrong JSON type");
        }
    }

    bool has(const char* key) {
        if (obj_.contains(key)) {
            seen_.insert(key);
            return true;
        }
        return false;
    }

    const nlohmann::json& at(const char* key) {
        seen_.insert(key);
        return obj_.at(key);
    }

    std::string field(const char* key) const {
        return path_.empty() ? std::string(key) : path_ + "." + key;
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (seen_.count(it.key()) == 0) {
                throw ConfigError(path_.empty() ? it.key() : path_ + "." + it.key(),
                                  "unknown key");
            }
        }
    }

private:
    const nlohmann::json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

void check(bool ok, const std::string& field, const std::string& message) {
    if (!ok) {
        throw ConfigError(field, message);
    }
}

}  // namespace

int ExperimentConfig::real_users() const {
    return modulation == ModulationKind::qpsk ? 2 * dims.users : dims.users;
}

int ExperimentConfig::bits_per_vector() const {
    return dims.users * constellation().bits_per_symbol();
}

Eigen::Index ExperimentConfig::symbols_for_bits(long long n_bits) const {
    const long long per_vector = bits_per_vector();
    return static_cast<Eigen::Index>((n_bits + per_vector - 1) / per_vector);
}

TrainConfig ExperimentConfig::train_config() const {
    TrainConfig t;
    t.epochs = training.epochs;
    t.batch_size = training.batch_size;
    t.learning_rate = training.learning_rate;
    return t;
}

AcquisitionSearch ExperimentConfig::acquisition_search() const {
    AcquisitionSearch s;
    s.restarts = bo.restarts;
    s.sweeps = bo.sweeps;
    s.section_steps = bo.section_steps;
    s.exhaustive_limit = bo.exhaustive_limit;
    return s;
}

void ExperimentConfig::validate() const {
    check(dims.users >= 1, "dims.users", "must be >= 1");
    check(dims.rx_antennas >= 1, "dims.rx_antennas", "must be >= 1");
    check(dims.ris_elements >= 1, "dims.ris_elements", "must be >= 1");
    check(dims.resolution_bits >= 1 && dims.resolution_bits <= 8, "dims.resolution_bits",
          "must be in [1, 8]");

    check(std::isfinite(channel.kappa) && channel.kappa >= 0.0, "channel.kappa",
          "must be finite and >= 0");
    check(std::isfinite(channel.beta) && channel.beta > 0.0, "channel.beta", "must be > 0");
    check(std::isfinite(channel.gamma) && channel.gamma > 0.0, "channel.gamma", "must be > 0");

    check(training.n_pilots >= 1, "training.n_pilots", "must be >= 1");
    check(training.q_iters >= 1, "training.q_iters", "must be >= 1");
    check(std::isfinite(training.learning_rate) && training.learning_rate > 0.0,
          "training.learning_rate", "must be > 0");
    check(training.epochs >= 1, "training.epochs", "must be >= 1");
    check(training.batch_size >= 1, "training.batch_size", "must be >= 1");

    check(bo.n_iterations >= 2, "bo.n_iterations", "must be >= 2");
    check(std::isfinite(bo.snr_db), "bo.snr_db", "must be finite");
    check(std::isfinite(bo.lengthscale) && bo.lengthscale > 0.0, "bo.lengthscale",
          "must be > 0");
    check(std::isfinite(bo.jitter) && bo.jitter >= 0.0, "bo.jitter", "must be >= 0");
    check(std::isfinite(bo.observation_noise) && bo.observation_noise >= 0.0,
          "bo.observation_noise", "must be >= 0");
    check(bo.restarts >= 1, "bo.restarts", "must be >= 1");
    check(bo.sweeps >= 1, "bo.sweeps", "must be >= 1");
    check(bo.section_steps >= 1, "bo.section_steps", "must be >= 1");
    check(bo.exhaustive_limit >= 1, "bo.exhaustive_limit", "must be >= 1");

    check(!eval.snr_db.empty(), "eval.snr_db", "must not be empty");
    for (double s : eval.snr_db) {
        check(std::isfinite(s), "eval.snr_db", "entries must be finite");
    }
    check(eval.n_test_bits >= 1, "eval.n_test_bits", "must be >= 1");
    check(eval.n_validation_bits >= 1, "eval.n_validation_bits", "must be >= 1");

    check(!output_dir.empty(), "output_dir", "must not be empty");
}

ExperimentConfig preset_config(const std::string& name) {
    if (name == "desk") {
        return ExperimentConfig{};  // the field defaults are the desk preset
    }
    if (name == "paper") {
        ExperimentConfig c;
        c.dims = DimsConfig{5, 5, 18, 2};
        c.channel = ChannelConfig{10.0, 1.0, 1.0};
        c.modulation = ModulationKind::qpsk;
        c.training = TrainingSection{1000, 5, 0.01, 70, 32};
        c.bo.n_iterations = 25;
        c.bo.snr_db = -8.0;
        c.bo.lengthscale = 4.0;
        c.eval.snr_db = {-12.0, -10.0, -8.0, -6.0, -4.0};
        c.eval.n_test_bits = 800000;
        return c;
    }
    throw ConfigError("preset", "unknown preset `" + name + "` (expected `desk` or `paper`)");
}

ExperimentConfig config_from_json(const nlohmann::json& doc, const ExperimentConfig& base) {
    Section root(doc, "");

    ExperimentConfig c = base;
    if (root.has("preset")) {
        std::string name;
        root.read("preset", name);
        c = preset_config(name);
    }

    if (root.has("dims")) {
        Section s(root.at("dims"), "dims");
        s.read("users", c.dims.users);
        s.read("rx_antennas", c.dims.rx_antennas);
        s.read("ris_elements", c.dims.ris_elements);
        s.read("resolution_bits", c.dims.resolution_bits);
        s.finish();
    }
    if (root.has("channel")) {
        Section s(root.at("channel"), "channel");
        s.read("kappa", c.channel.kappa);
        s.read("beta", c.channel.beta);
        s.read("gamma", c.channel.gamma);
        s.finish();
    }
    if (root.has("modulation")) {
        std::string name;
        root.read("modulation", name);
        try {
            c.modulation = modulation_from_string(name);
        } catch (const InvalidParameterError&) {
            throw ConfigError("modulation", "must be `bpsk` or `qpsk`");
        }
    }
    if (root.has("training")) {
        Section s(root.at("training"), "training");
        s.read("n_pilots", c.training.n_pilots);
        s.read("q_iters", c.training.q_iters);
        s.read("learning_rate", c.training.learning_rate);
        s.read("epochs", c.training.epochs);
        s.read("batch_size", c.training.batch_size);
        s.finish();
    }
    if (root.has("bo")) {
        Section s(root.at("bo"), "bo");
        s.read("n_iterations", c.bo.n_iterations);
        s.read("snr_db", c.bo.snr_db);
        s.read("lengthscale", c.bo.lengthscale);
        s.read("jitter", c.bo.jitter);
        s.read("observation_noise", c.bo.observation_noise);
        s.read("restarts", c.bo.restarts);
        s.read("sweeps", c.bo.sweeps);
        s.read("section_steps", c.bo.section_steps);
        s.read("exhaustive_limit", c.bo.exhaustive_limit);
        s.finish();
    }
    if (root.has("eval")) {
        Section s(root.at("eval"), "eval");
        s.read("snr_db", c.eval.snr_db);
        s.read("n_test_bits", c.eval.n_test_bits);
        s.read("n_validation_bits", c.eval.n_validation_bits);
        s.read("seeds", c.eval.seeds);
        s.read("reoptimize_per_snr", c.eval.reoptimize_per_snr);
        s.finish();
    }
    root.read("output_dir", c.output_dir);
    root.finish();

    c.validate();
    return c;
}

ExperimentConfig parse_config(const std::string& path, const std::string& preset_name) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot open file `" + path + "`");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(doc, preset_config(preset_name));
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    return nlohmann::json{
        {"dims",
         {{"users", c.dims.users},
          {"rx_antennas", c.dims.rx_antennas},
          {"ris_elements", c.dims.ris_elements},
          {"resolution_bits", c.dims.resolution_bits}}},
        {"channel",
         {{"kappa", c.channel.kappa}, {"beta", c.channel.beta}, {"gamma", c.channel.gamma}}},
        {"modulation", to_string(c.modulation)},
        {"training",
         {{"n_pilots", c.training.n_pilots},
          {"q_iters", c.training.q_iters},
          {"learning_rate", c.training.learning_rate},
          {"epochs", c.training.epochs},
          {"batch_size", c.training.batch_size}}},
        {"bo",
         {{"n_iterations", c.bo.n_iterations},
          {"snr_db", c.bo.snr_db},
          {"lengthscale", c.bo.lengthscale},
          {"jitter", c.bo.jitter},
          {"observation_noise", c.bo.observation_noise},
          {"restarts", c.bo.restarts},
          {"sweeps", c.bo.sweeps},
          {"section_steps", c.bo.section_steps},
          {"exhaustive_limit", c.bo.exhaustive_limit}}},
        {"eval",
         {{"snr_db", c.eval.snr_db},
          {"n_test_bits", c.eval.n_test_bits},
          {"n_validation_bits", c.eval.n_validation_bits},
          {"seeds", c.eval.seeds},
          {"reoptimize_per_snr", c.eval.reoptimize_per_snr}}},
        {"output_dir", c.output_dir}};
}

}  // namespace risbo
