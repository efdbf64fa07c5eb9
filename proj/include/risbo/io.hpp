#ifndef RISBO_IO_HPP
#define RISBO_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "risbo/config.hpp"
#include "risbo/eval.hpp"
#include "risbo/jointopt.hpp"

namespace risbo {

/// Shortest text that round-trips a double (printf %.17g).
std::string format_double(double value);

/// Columns: iter,ber,running_min_ber,ser,train_loss,phi_0..phi_{P-1}; one row
/// per trace entry, angles in radians. Deterministic byte-for-byte under a
/// fixed seed (wall-clock durations are deliberately not part of the file).
void write_trace_csv(const std::filesystem::path& path, const RunResult& result);

/// Columns: snr_db,detector,ber,n_bits in record order.
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRecord>& records);

/// Deterministic run manifest: full config, master seed, subcommand, library
/// versions. Wall time lives in a separate timing file so that reruns with
/// one seed are byte-identical.
nlohmann::json make_manifest(const ExperimentConfig& config, std::uint64_t master_seed,
                             const std::string& subcommand);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace risbo

#endif
