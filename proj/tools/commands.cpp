#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "barogram/filter.hpp"
#include "barogram/metrics.hpp"
#include "barogram/sensor.hpp"

namespace barogram::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

// Shortest decimal that parses back to the identical double: a manifest
// rerun must compute with exactly the values this run used.
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }

double kv_double(const io::KeyValueFile& kv, const std::string& key) {
    const std::string& text = kv.get(key);
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        fail("cannot parse " + key + " from '" + text + "'");
    }
}

int kv_int(const io::KeyValueFile& kv, const std::string& key) {
    const std::string& text = kv.get(key);
    try {
        std::size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        fail("cannot parse " + key + " from '" + text + "'");
    }
}

std::uint64_t kv_u64(const io::KeyValueFile& kv, const std::string& key) {
    const std::string& text = kv.get(key);
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        fail("cannot parse " + key + " from '" + text + "'");
    }
}

bool kv_bool(const io::KeyValueFile& kv, const std::string& key) {
    const std::string& text = kv.get(key);
    if (text == "1") return true;
    if (text == "0") return false;
    fail("cannot parse " + key + " from '" + text + "' (expected 0 or 1)");
}

// Removes this run's outputs unless the command finished, so a failed run
// never leaves partial files behind.
class OutputGuard {
  public:
    OutputGuard() = default;
    OutputGuard(const OutputGuard&) = delete;
    OutputGuard& operator=(const OutputGuard&) = delete;
    ~OutputGuard() {
        if (!armed_) return;
        for (const auto& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    void track(const std::string& path) { paths_.push_back(path); }
    void disarm() { armed_ = false; }

  private:
    std::vector<std::string> paths_;
    bool armed_ = true;
};

std::string manifest_path_for(const std::string& out) {
    return fs::path(out).replace_extension(".manifest").string();
}

// Paths that do not exist as given fall back to $BAROGRAM_CONFIG_DIR, so
// bundled sensor descriptions can be named without their full location.
std::string resolve_config_path(const std::string& given) {
    if (given.empty()) return given;
    std::error_code ec;
    if (fs::exists(given, ec)) return given;
    if (const char* dir = std::getenv("BAROGRAM_CONFIG_DIR"); dir && *dir) {
        const fs::path alt = fs::path(dir) / given;
        if (fs::exists(alt, ec)) return alt.string();
    }
    return given;  // let the reader report the path the user gave
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(dir + ": cannot create directory (" + ec.message() + ")");
}

// Runs fn(0..n-1) on up to `jobs` threads. All items are attempted; the
// first failing item (in input order) is rethrown after the pool drains.
void run_parallel(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

io::SensorConfig base_sensor(const std::string& cfg_path,
                             const std::optional<io::SensorConfig>& inline_cfg) {
    if (inline_cfg) return *inline_cfg;
    if (!cfg_path.empty()) return io::read_sensor_config(resolve_config_path(cfg_path));
    return {};
}

// Records the effective sensor and source inline so a rerun does not
// depend on the original config file. The noise-shape curve has no
// configurable interpolation (always log-frequency), so points alone
// restore it exactly.
void put_sensor(io::KeyValueFile& kv, const io::SensorConfig& cfg) {
    kv.set("sensor.adc_rate_hz", fmt(cfg.model.adc_rate_hz));
    kv.set("sensor.effective_bandwidth_hz", fmt(cfg.model.effective_bandwidth_hz));
    kv.set("sensor.response_points", io::curve_to_inline(cfg.model.response));
    kv.set("sensor.response_interpolation",
           cfg.model.response.interpolation == FrequencyResponseCurve::Interpolation::LogFrequency
               ? "log"
               : "linear");
    kv.set("sensor.noise_psd_pa", fmt(cfg.model.noise_psd_pa));
    kv.set("sensor.noise_shape_points", io::curve_to_inline(cfg.model.noise_shape));
    kv.set("sensor.baseline_pa", fmt(cfg.model.baseline_pa));
    kv.set("sensor.baseline_drift_amp_pa", fmt(cfg.model.baseline_drift_amp_pa));
    kv.set("sensor.baseline_drift_period_s", fmt(cfg.model.baseline_drift_period_s));
    kv.set("source.distance_m", fmt(cfg.source.distance_m));
    kv.set("source.spl_db", fmt(cfg.source.spl_db));
    kv.set("source.initial_phase_rad", fmt(cfg.source.initial_phase_rad));
    kv.set("source.orientation_gain", fmt(cfg.source.orientation_gain));
    kv.set("source.speed_of_sound_mps", fmt(cfg.source.speed_of_sound_mps));
    kv.set("source.absorption_db_per_m_per_khz", fmt(cfg.source.absorption_db_per_m_per_khz));
}

const char* const kStageSuffixes[] = {
    "_stage_a_pat.wav",      "_stage_b_normalized.wav", "_stage_c_highpassed.wav",
    "_stage_d_denoised.wav", "_stage_e_equalized.wav",
};

std::vector<std::string> stage_paths_for(const std::string& out) {
    const fs::path p(out);
    const std::string base = (p.parent_path() / p.stem()).string();
    std::vector<std::string> paths;
    for (const char* suffix : kStageSuffixes) paths.push_back(base + suffix);
    return paths;
}

}  // namespace

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const SimulateOptions& opt) {
    if (opt.inputs.empty()) fail("simulate: at least one --in is required");

    io::SensorConfig cfg = base_sensor(opt.sensor_cfg, opt.inline_config);
    if (opt.distance_m) cfg.source.distance_m = *opt.distance_m;
    if (opt.spl_db) cfg.source.spl_db = *opt.spl_db;
    if (opt.orientation_gain) cfg.source.orientation_gain = *opt.orientation_gain;
    if (opt.speed_of_sound_mps) cfg.source.speed_of_sound_mps = *opt.speed_of_sound_mps;
    if (opt.absorption_db_per_m_per_khz)
        cfg.source.absorption_db_per_m_per_khz = *opt.absorption_db_per_m_per_khz;
    if (opt.initial_phase_rad) cfg.source.initial_phase_rad = *opt.initial_phase_rad;

    struct Job {
        std::string in, out, manifest;
    };
    std::vector<Job> jobs;
    if (opt.inputs.size() > 1 || fs::is_directory(opt.out)) {
        ensure_directory(opt.out);
        for (const auto& in : opt.inputs) {
            const std::string out = (fs::path(opt.out) / (fs::path(in).stem().string() + ".csv")).string();
            for (const auto& j : jobs)
                if (j.out == out)
                    fail("simulate: inputs '" + j.in + "' and '" + in + "' both map to " + out);
            jobs.push_back({in, out, manifest_path_for(out)});
        }
    } else {
        jobs.push_back({opt.inputs.front(), opt.out, manifest_path_for(opt.out)});
    }

    OutputGuard guard;
    for (const auto& j : jobs) {
        guard.track(j.out);
        guard.track(j.manifest);
    }

    std::vector<std::string> status(jobs.size());
    run_parallel(jobs.size(), opt.jobs, [&](std::size_t i) {
        const Job& job = jobs[i];
        const AudioSignal stimulus = io::read_wav(job.in);
        const PressureTrace trace = simulate_sensor(stimulus, cfg.source, cfg.model, opt.seed);
        io::write_trace_csv(job.out, trace);

        io::KeyValueFile kv;
        kv.set("command", "simulate");
        kv.set("in", job.in);
        kv.set("out", job.out);
        kv.set("seed", fmt(opt.seed));
        put_sensor(kv, cfg);
        io::write_key_value(job.manifest, kv, "manifest");

        status[i] = "wrote " + job.out + " (" + std::to_string(trace.samples.size()) +
                    " samples at " + std::to_string(trace.sample_rate) + " Hz)\nwrote " + job.manifest;
    });
    guard.disarm();
    for (const auto& s : status) std::cout << s << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// noise
// ---------------------------------------------------------------------------

int cmd_noise(const NoiseOptions& opt) {
    const PressureTrace trace = io::read_trace_csv(opt.trace);
    // Mirror the reconstruction front end so the profile lives in the same
    // units the pipeline subtracts in: mean removal, then the highpass.
    AudioSignal ambient = pat(trace, opt.mean_window_s);
    if (opt.highpass_cutoff_hz > 0.0)
        ambient = highpass(ambient, opt.highpass_cutoff_hz, opt.highpass_order);
    const NoiseProfile profile = characterize_noise(ambient, opt.window_size, opt.hop);

    OutputGuard guard;
    const std::string manifest = manifest_path_for(opt.out);
    guard.track(opt.out);
    guard.track(manifest);
    io::write_noise_csv(opt.out, profile);

    io::KeyValueFile kv;
    kv.set("command", "noise");
    kv.set("trace", opt.trace);
    kv.set("out", opt.out);
    kv.set("window", fmt(opt.window_size));
    kv.set("hop", fmt(opt.hop));
    kv.set("mean_window_s", fmt(opt.mean_window_s));
    kv.set("highpass_cutoff_hz", fmt(opt.highpass_cutoff_hz));
    kv.set("highpass_order", fmt(opt.highpass_order));
    io::write_key_value(manifest, kv, "manifest");
    guard.disarm();

    std::cout << "wrote " << opt.out << " (" << profile.magnitude.size() << " bins at "
              << profile.sample_rate << " Hz)\nwrote " << manifest << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

int cmd_calibrate(const CalibrateOptions& opt) {
    const bool pair_given = !opt.reference.empty() || !opt.recovered.empty();
    if (opt.auto_mode && pair_given)
        fail("calibrate: --auto replaces --reference/--recovered; give one or the other");
    if (!opt.auto_mode && (opt.reference.empty() || opt.recovered.empty()))
        fail("calibrate: provide both --reference and --recovered, or use --auto");

    AudioSignal reference;
    AudioSignal recovered;
    io::SensorConfig cfg;
    if (opt.auto_mode) {
        cfg = base_sensor(opt.sensor_cfg, opt.inline_config);
        if (opt.distance_m) cfg.source.distance_m = *opt.distance_m;
        if (opt.spl_db) cfg.source.spl_db = *opt.spl_db;
        reference = sine_sweep(opt.sweep_from_hz, opt.sweep_to_hz, opt.sweep_duration_s,
                               opt.sweep_rate_hz);
        const PressureTrace trace = simulate_sensor(reference, cfg.source, cfg.model, opt.seed);
        recovered = pat(trace);
    } else {
        reference = io::read_wav(opt.reference);
        recovered = io::read_wav(opt.recovered);
    }

    const EqualizerProfile profile = calibrate_equalizer(
        reference, recovered, opt.bands, opt.band_width_hz, opt.start_hz, opt.gain_cap);

    OutputGuard guard;
    const std::string manifest = manifest_path_for(opt.out);
    guard.track(opt.out);
    guard.track(manifest);
    io::write_eq_csv(opt.out, profile);

    io::KeyValueFile kv;
    kv.set("command", "calibrate");
    kv.set("mode", opt.auto_mode ? "auto" : "files");
    if (opt.auto_mode) {
        kv.set("seed", fmt(opt.seed));
        kv.set("sweep_from_hz", fmt(opt.sweep_from_hz));
        kv.set("sweep_to_hz", fmt(opt.sweep_to_hz));
        kv.set("sweep_duration_s", fmt(opt.sweep_duration_s));
        kv.set("sweep_rate_hz", fmt(opt.sweep_rate_hz));
    } else {
        kv.set("reference", opt.reference);
        kv.set("recovered", opt.recovered);
    }
    kv.set("bands", fmt(opt.bands));
    kv.set("band_width_hz", fmt(opt.band_width_hz));
    kv.set("start_hz", fmt(opt.start_hz));
    kv.set("gain_cap", fmt(opt.gain_cap));
    kv.set("out", opt.out);
    if (opt.auto_mode) put_sensor(kv, cfg);
    io::write_key_value(manifest, kv, "manifest");
    guard.disarm();

    std::cout << "wrote " << opt.out << " (" << profile.gains.size() << " bands of "
              << fmt(profile.band_width_hz) << " Hz)\nwrote " << manifest << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// reconstruct
// ---------------------------------------------------------------------------

int cmd_reconstruct(const ReconstructOptions& opt) {
    if (opt.traces.empty()) fail("reconstruct: at least one --trace is required");

    PipelineConfig config = opt.pipeline;
    if (opt.mask == "ratio")
        config.hpss.mask_kind = HpssParams::MaskKind::Ratio;
    else if (opt.mask == "binary")
        config.hpss.mask_kind = HpssParams::MaskKind::Binary;
    else
        fail("reconstruct: --mask must be 'ratio' or 'binary', got '" + opt.mask + "'");

    const NoiseProfile noise = io::read_noise_csv(opt.noise);
    const EqualizerProfile eq = io::read_eq_csv(opt.eq);
    if (noise.window_size != config.hpss.window_size)
        fail("reconstruct: noise profile window (" + std::to_string(noise.window_size) +
             ") does not match the analysis window (" + std::to_string(config.hpss.window_size) +
             "); re-measure the profile or adjust --hpss-window");

    struct Job {
        std::string trace, out, manifest;
    };
    std::vector<Job> jobs;
    if (opt.traces.size() > 1 || fs::is_directory(opt.out)) {
        ensure_directory(opt.out);
        for (const auto& trace : opt.traces) {
            const std::string out =
                (fs::path(opt.out) / (fs::path(trace).stem().string() + "_rec.wav")).string();
            for (const auto& j : jobs)
                if (j.out == out)
                    fail("reconstruct: traces '" + j.trace + "' and '" + trace + "' both map to " + out);
            jobs.push_back({trace, out, manifest_path_for(out)});
        }
    } else {
        jobs.push_back({opt.traces.front(), opt.out, manifest_path_for(opt.out)});
    }

    OutputGuard guard;
    for (const auto& j : jobs) {
        guard.track(j.out);
        guard.track(j.manifest);
        if (opt.emit_stages)
            for (const auto& p : stage_paths_for(j.out)) guard.track(p);
    }

    std::vector<std::string> status(jobs.size());
    run_parallel(jobs.size(), opt.jobs, [&](std::size_t i) {
        const Job& job = jobs[i];
        const PressureTrace trace = io::read_trace_csv(job.trace);
        if (trace.sample_rate != noise.sample_rate)
            fail("sample rate mismatch between " + job.trace + " (" +
                 std::to_string(trace.sample_rate) + " Hz) and " + opt.noise + " (" +
                 std::to_string(noise.sample_rate) + " Hz)");

        PipelineStages stages;
        const AudioSignal out =
            ds1_pipeline(trace, noise, eq, config, opt.emit_stages ? &stages : nullptr);
        // The pipeline already normalized to --target-peak; write verbatim.
        io::write_wav(job.out, out, /*peak_normalize=*/false);

        std::string extra;
        if (opt.emit_stages) {
            const std::vector<std::string> paths = stage_paths_for(job.out);
            const AudioSignal* sigs[] = {&stages.pat, &stages.normalized, &stages.highpassed,
                                         &stages.denoised, &stages.equalized};
            for (std::size_t k = 0; k < paths.size(); ++k) {
                // Stage taps are diagnostics in pipeline-internal units;
                // peak-normalize them for listening.
                io::write_wav(paths[k], *sigs[k]);
                extra += "\nwrote " + paths[k];
            }
        }

        io::KeyValueFile kv;
        kv.set("command", "reconstruct");
        kv.set("trace", job.trace);
        kv.set("noise", opt.noise);
        kv.set("eq", opt.eq);
        kv.set("out", job.out);
        kv.set("emit_stages", fmt(opt.emit_stages));
        kv.set("target_peak", fmt(config.target_peak));
        kv.set("mean_window_s", fmt(config.pat_mean_window_s));
        kv.set("highpass_cutoff_hz", fmt(config.highpass_cutoff_hz));
        kv.set("highpass_order", fmt(config.highpass_order));
        kv.set("hpss_window", fmt(config.hpss.window_size));
        kv.set("hpss_hop", fmt(config.hpss.hop));
        kv.set("time_kernel", fmt(config.hpss.time_kernel));
        kv.set("freq_kernel", fmt(config.hpss.freq_kernel));
        kv.set("iterations", fmt(config.hpss.n_iter));
        kv.set("mask", opt.mask);
        kv.set("alpha_harmonic", fmt(config.subtraction.alpha_harmonic));
        kv.set("alpha_percussive", fmt(config.subtraction.alpha_percussive));
        kv.set("spectral_floor", fmt(config.subtraction.spectral_floor));
        kv.set("eq_window", fmt(config.eq_window_size));
        kv.set("eq_hop", fmt(config.eq_hop));
        io::write_key_value(job.manifest, kv, "manifest");

        status[i] = "wrote " + job.out + " (" + std::to_string(out.samples.size()) +
                    " samples at " + std::to_string(out.sample_rate) + " Hz)" + extra +
                    "\nwrote " + job.manifest;
    });
    guard.disarm();
    for (const auto& s : status) std::cout << s << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

namespace {

AudioSignal trimmed_for_snr(const AudioSignal& sig, std::size_t trim) {
    AudioSignal out;
    out.sample_rate = sig.sample_rate;
    out.samples.assign(sig.samples.begin() + static_cast<std::ptrdiff_t>(trim),
                       sig.samples.end() - static_cast<std::ptrdiff_t>(trim));
    return out;
}

// Per-stage SNR skips one analysis window at each edge (synthesis boundary
// transients) whenever the signal is long enough to leave an interior.
double stage_snr(const AudioSignal& stage, const AudioSignal& reference) {
    constexpr std::size_t kEdge = 256;
    const std::size_t trim = stage.samples.size() > 3 * kEdge ? kEdge : 0;
    return snr_reference(trimmed_for_snr(stage, trim), trimmed_for_snr(reference, trim));
}

}  // namespace

int cmd_evaluate(const EvaluateOptions& opt) {
    std::string csv;
    if (opt.metric == "wer") {
        if (opt.ref_text.empty() || opt.hyp_text.empty())
            fail("evaluate wer: --ref and --hyp are required");
        const Transcript ref = tokenize(read_text_file(opt.ref_text));
        const Transcript hyp = tokenize(read_text_file(opt.hyp_text));
        const WerBreakdown b = wer(ref, hyp);
        csv = "n,substitutions,deletions,insertions,wer\n" + fmt(b.reference_length) + "," +
              fmt(b.substitutions) + "," + fmt(b.deletions) + "," + fmt(b.insertions) + "," +
              fmt(b.wer) + "\n";
    } else if (opt.metric == "snr" && !opt.staged) {
        if (opt.signal.empty()) fail("evaluate snr: --signal is required (or use --staged)");
        const AudioSignal sig = io::read_wav(opt.signal);
        const AudioSignal ref = io::read_wav(opt.reference);
        if (sig.sample_rate != ref.sample_rate)
            fail("sample rate mismatch between " + opt.signal + " (" +
                 std::to_string(sig.sample_rate) + " Hz) and " + opt.reference + " (" +
                 std::to_string(ref.sample_rate) + " Hz)");
        if (sig.samples.size() != ref.samples.size())
            fail("length mismatch between " + opt.signal + " (" +
                 std::to_string(sig.samples.size()) + " samples) and " + opt.reference + " (" +
                 std::to_string(ref.samples.size()) + " samples)");
        csv = "snr_db\n" + fmt(snr_reference(sig, ref)) + "\n";
    } else if (opt.metric == "snr" && opt.staged) {
        if (opt.trace.empty() || opt.noise.empty() || opt.eq.empty())
            fail("evaluate snr --staged: --trace, --noise, and --eq are required");
        const PressureTrace trace = io::read_trace_csv(opt.trace);
        const NoiseProfile noise = io::read_noise_csv(opt.noise);
        const EqualizerProfile eq = io::read_eq_csv(opt.eq);
        const AudioSignal reference = io::read_wav(opt.reference);
        if (reference.sample_rate != trace.sample_rate)
            fail("sample rate mismatch between " + opt.trace + " (" +
                 std::to_string(trace.sample_rate) + " Hz) and " + opt.reference + " (" +
                 std::to_string(reference.sample_rate) + " Hz)");
        if (reference.samples.size() != trace.samples.size())
            fail("length mismatch between " + opt.trace + " (" + std::to_string(trace.samples.size()) +
                 " samples) and " + opt.reference + " (" + std::to_string(reference.samples.size()) +
                 " samples)");
        if (trace.sample_rate != noise.sample_rate)
            fail("sample rate mismatch between " + opt.trace + " (" +
                 std::to_string(trace.sample_rate) + " Hz) and " + opt.noise + " (" +
                 std::to_string(noise.sample_rate) + " Hz)");

        PipelineStages stages;
        ds1_pipeline(trace, noise, eq, PipelineConfig{}, &stages);
        csv = "stage,snr_db\n";
        csv += "pat," + fmt(stage_snr(stages.pat, reference)) + "\n";
        csv += "highpass," + fmt(stage_snr(stages.highpassed, reference)) + "\n";
        csv += "denoise," + fmt(stage_snr(stages.denoised, reference)) + "\n";
        csv += "equalize," + fmt(stage_snr(stages.equalized, reference)) + "\n";
    } else {
        fail("evaluate: metric must be 'wer' or 'snr'");
    }

    if (opt.out.empty()) {
        std::cout << csv;
        return kExitOk;
    }

    OutputGuard guard;
    const std::string manifest = manifest_path_for(opt.out);
    guard.track(opt.out);
    guard.track(manifest);
    {
        std::ofstream f(opt.out, std::ios::binary);
        if (!f) fail(opt.out + ": cannot open for writing");
        f << csv;
        if (!f) fail(opt.out + ": write failed");
    }

    io::KeyValueFile kv;
    kv.set("command", "evaluate");
    kv.set("metric", opt.metric);
    if (opt.metric == "wer") {
        kv.set("ref", opt.ref_text);
        kv.set("hyp", opt.hyp_text);
    } else {
        kv.set("staged", fmt(opt.staged));
        if (opt.staged) {
            kv.set("trace", opt.trace);
            kv.set("noise", opt.noise);
            kv.set("eq", opt.eq);
        } else {
            kv.set("signal", opt.signal);
        }
        kv.set("reference", opt.reference);
    }
    kv.set("out", opt.out);
    io::write_key_value(manifest, kv, "manifest");
    guard.disarm();

    std::cout << "wrote " << opt.out << "\nwrote " << manifest << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// manifest rerun
// ---------------------------------------------------------------------------

int run_manifest(const std::string& path) {
    const io::KeyValueFile kv = io::read_key_value(path);
    const std::string base_dir = fs::path(path).parent_path().string();

    std::function<int()> run;
    try {
        const std::string command = kv.get("command");
        if (command == "simulate") {
            SimulateOptions o;
            o.inputs = {kv.get("in")};
            o.out = kv.get("out");
            o.seed = kv_u64(kv, "seed");
            o.inline_config = io::sensor_config_from_entries(kv, path, base_dir);
            run = [o] { return cmd_simulate(o); };
        } else if (command == "noise") {
            NoiseOptions o;
            o.trace = kv.get("trace");
            o.out = kv.get("out");
            o.window_size = kv_int(kv, "window");
            o.hop = kv_int(kv, "hop");
            o.mean_window_s = kv_double(kv, "mean_window_s");
            o.highpass_cutoff_hz = kv_double(kv, "highpass_cutoff_hz");
            o.highpass_order = kv_int(kv, "highpass_order");
            run = [o] { return cmd_noise(o); };
        } else if (command == "calibrate") {
            CalibrateOptions o;
            const std::string mode = kv.get("mode");
            if (mode != "auto" && mode != "files")
                throw std::runtime_error("unknown calibrate mode '" + mode + "'");
            o.auto_mode = mode == "auto";
            if (o.auto_mode) {
                o.seed = kv_u64(kv, "seed");
                o.sweep_from_hz = kv_double(kv, "sweep_from_hz");
                o.sweep_to_hz = kv_double(kv, "sweep_to_hz");
                o.sweep_duration_s = kv_double(kv, "sweep_duration_s");
                o.sweep_rate_hz = kv_int(kv, "sweep_rate_hz");
                o.inline_config = io::sensor_config_from_entries(kv, path, base_dir);
            } else {
                o.reference = kv.get("reference");
                o.recovered = kv.get("recovered");
            }
            o.bands = kv_int(kv, "bands");
            o.band_width_hz = kv_double(kv, "band_width_hz");
            o.start_hz = kv_double(kv, "start_hz");
            o.gain_cap = kv_double(kv, "gain_cap");
            o.out = kv.get("out");
            run = [o] { return cmd_calibrate(o); };
        } else if (command == "reconstruct") {
            ReconstructOptions o;
            o.traces = {kv.get("trace")};
            o.noise = kv.get("noise");
            o.eq = kv.get("eq");
            o.out = kv.get("out");
            o.emit_stages = kv_bool(kv, "emit_stages");
            o.mask = kv.get("mask");
            o.pipeline.target_peak = kv_double(kv, "target_peak");
            o.pipeline.pat_mean_window_s = kv_double(kv, "mean_window_s");
            o.pipeline.highpass_cutoff_hz = kv_double(kv, "highpass_cutoff_hz");
            o.pipeline.highpass_order = kv_int(kv, "highpass_order");
            o.pipeline.hpss.window_size = kv_int(kv, "hpss_window");
            o.pipeline.hpss.hop = kv_int(kv, "hpss_hop");
            o.pipeline.hpss.time_kernel = kv_int(kv, "time_kernel");
            o.pipeline.hpss.freq_kernel = kv_int(kv, "freq_kernel");
            o.pipeline.hpss.n_iter = kv_int(kv, "iterations");
            o.pipeline.subtraction.alpha_harmonic = kv_double(kv, "alpha_harmonic");
            o.pipeline.subtraction.alpha_percussive = kv_double(kv, "alpha_percussive");
            o.pipeline.subtraction.spectral_floor = kv_double(kv, "spectral_floor");
            o.pipeline.eq_window_size = kv_int(kv, "eq_window");
            o.pipeline.eq_hop = kv_int(kv, "eq_hop");
            run = [o] { return cmd_reconstruct(o); };
        } else if (command == "evaluate") {
            EvaluateOptions o;
            o.metric = kv.get("metric");
            if (o.metric == "wer") {
                o.ref_text = kv.get("ref");
                o.hyp_text = kv.get("hyp");
            } else if (o.metric == "snr") {
                o.staged = kv_bool(kv, "staged");
                if (o.staged) {
                    o.trace = kv.get("trace");
                    o.noise = kv.get("noise");
                    o.eq = kv.get("eq");
                } else {
                    o.signal = kv.get("signal");
                }
                o.reference = kv.get("reference");
            } else {
                throw std::runtime_error("unknown evaluate metric '" + o.metric + "'");
            }
            o.out = kv.get("out");
            run = [o] { return cmd_evaluate(o); };
        } else {
            throw std::runtime_error("unknown manifest command '" + command + "'");
        }
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return run();
}

}  // namespace barogram::cli
