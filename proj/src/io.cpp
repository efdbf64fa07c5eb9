#include "risbo/io.hpp"

#include <Eigen/Core>
#include <cstdio>
#include <fstream>

#include "risbo/errors.hpp"

namespace risbo {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline mangling
    if (!out) {
        throw InvalidStateError("cannot open `" + path.string() + "` for writing");
    }
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_trace_csv(const std::filesystem::path& path, const RunResult& result) {
    if (result.trace.empty()) {
        throw InvalidParameterError("write_trace_csv: empty trace");
    }
    std::ofstream out = open_for_write(path);
    const Eigen::Index elements = result.trace.front().phi.size();
    out << "iter,ber,running_min_ber,ser,train_loss";
    for (Eigen::Index p = 0; p < elements; ++p) {
        out << ",phi_" << p;
    }
    out << "\n";
    for (const TraceEntry& entry : result.trace) {
        out << entry.iteration << "," << format_double(entry.ber) << ","
            << format_double(result.running_min_ber(entry.iteration)) << ","
            << format_double(entry.ser) << "," << format_double(entry.mean_training_loss);
        const RealVector angles = entry.phi.angles();
        for (Eigen::Index p = 0; p < elements; ++p) {
            out << "," << format_double(angles[p]);
        }
        out << "\n";
    }
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRecord>& records) {
    std::ofstream out = open_for_write(path);
    out << "snr_db,detector,ber,n_bits\n";
    for (const SweepRecord& r : records) {
        out << format_double(r.snr_db) << "," << to_string(r.detector) << ","
            << format_double(r.ber) << "," << r.n_bits << "\n";
    }
}

nlohmann::json make_manifest(const ExperimentConfig& config, std::uint64_t master_seed,
                             const std::string& subcommand) {
    return nlohmann::json{
        {"config", config_to_json(config)},
        {"master_seed", master_seed},
        {"subcommand", subcommand},
        {"versions",
         {{"risbo", "0.1.0"},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)}}}};
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out = open_for_write(path);
    out << doc.dump(2) << "\n";
}

}  // namespace risbo
