#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "barogram/io.hpp"
#include "barogram/reconstruct.hpp"

namespace barogram::cli {

// Exit codes shared by every subcommand: 0 when every requested output was
// written, 2 for problems with inputs or configuration (the message names
// the offending file or key), 1 for anything unexpected.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

// Fixed default RNG seed so repeated invocations agree unless the user
// explicitly asks for variation.
inline constexpr std::uint64_t kDefaultSeed = 42;

inline constexpr const char* kVersion = "1.0.0";

struct SimulateOptions {
    std::vector<std::string> inputs;  // stimulus wav(s)
    std::string out;                  // trace csv; a directory when several inputs
    std::string sensor_cfg;           // optional key=value sensor description
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
    // Command-line overrides; unset values defer to the config / defaults.
    std::optional<double> distance_m;
    std::optional<double> spl_db;
    std::optional<double> orientation_gain;
    std::optional<double> speed_of_sound_mps;
    std::optional<double> absorption_db_per_m_per_khz;
    std::optional<double> initial_phase_rad;
    // Set when re-running a manifest: the recorded effective sensor wins
    // over any config file.
    std::optional<io::SensorConfig> inline_config;
};

struct NoiseOptions {
    std::string trace;
    std::string out;
    int window_size = 256;
    int hop = 64;
    double mean_window_s = 0.0;
    double highpass_cutoff_hz = 40.0;  // 0 disables the highpass
    int highpass_order = 3;
};

struct CalibrateOptions {
    // Measured-pair mode: both paths set, auto_mode false.
    std::string reference;
    std::string recovered;
    // Auto mode: synthesize a sweep, run it through the simulated sensor,
    // and calibrate against the recovered trace.
    bool auto_mode = false;
    std::string sensor_cfg;
    std::optional<io::SensorConfig> inline_config;
    std::optional<double> distance_m;
    std::optional<double> spl_db;
    std::uint64_t seed = kDefaultSeed;
    double sweep_from_hz = 1.0;
    double sweep_to_hz = 1000.0;
    double sweep_duration_s = 10.0;
    int sweep_rate_hz = 44100;

    int bands = 40;
    double band_width_hz = 25.0;
    double start_hz = 0.0;
    double gain_cap = EqualizerProfile{}.gain_cap;
    std::string out;
};

struct ReconstructOptions {
    std::vector<std::string> traces;
    std::string noise;
    std::string eq;
    std::string out;  // wav; a directory when several traces
    bool emit_stages = false;
    int jobs = 1;
    PipelineConfig pipeline;
    std::string mask = "ratio";  // "ratio" or "binary"
};

struct EvaluateOptions {
    std::string metric;  // "wer" or "snr"
    // wer inputs
    std::string ref_text;
    std::string hyp_text;
    // snr inputs
    std::string signal;
    std::string reference;
    bool staged = false;
    std::string trace;  // staged mode re-runs the pipeline on these
    std::string noise;
    std::string eq;
    std::string out;  // optional report csv; stdout when empty
};

int cmd_simulate(const SimulateOptions& opt);
int cmd_noise(const NoiseOptions& opt);
int cmd_calibrate(const CalibrateOptions& opt);
int cmd_reconstruct(const ReconstructOptions& opt);
int cmd_evaluate(const EvaluateOptions& opt);

// Re-run a previously recorded manifest. Effective parameters, including
// the full sensor description, come from the manifest itself; paths inside
// it are used as recorded.
int run_manifest(const std::string& path);

}  // namespace barogram::cli
