#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace barogram;

    CLI::App app{
        "barogram: acoustic capture through a differential-pressure sensor and speech "
        "reconstruction from the recorded traces"};
    app.set_version_flag("--version", std::string("barogram ") + cli::kVersion);
    app.require_subcommand(0, 1);

    std::string manifest_path;
    app.add_option("--from-manifest", manifest_path,
                   "re-run a recorded manifest instead of giving a subcommand; all effective "
                   "parameters come from the manifest and outputs are reproduced byte-identically");

    int rc = cli::kExitOk;

    cli::SimulateOptions sim;
    CLI::App* s = app.add_subcommand(
        "simulate", "render stimulus wav files into differential-pressure traces");
    s->add_option("--in", sim.inputs,
                  "stimulus wav, 16-bit mono (repeat for a batch; --out then names a directory)")
        ->required();
    s->add_option("--out", sim.out, "output trace csv (a directory when several inputs)")
        ->required();
    s->add_option("--sensor", sim.sensor_cfg,
                  "sensor/source config file; names that do not exist as given are also searched "
                  "under $BAROGRAM_CONFIG_DIR");
    s->add_option("--seed", sim.seed,
                  "sensor self-noise RNG seed (default 42; equal seeds give byte-identical traces)");
    s->add_option("--distance", sim.distance_m, "source distance in metres (overrides the config)");
    s->add_option("--spl", sim.spl_db,
                  "SPL of a full-scale stimulus, dB re 20 uPa (overrides the config)");
    s->add_option("--orientation", sim.orientation_gain, "inlet alignment factor in [0, 1]");
    s->add_option("--speed-of-sound", sim.speed_of_sound_mps, "speed of sound in m/s");
    s->add_option("--absorption", sim.absorption_db_per_m_per_khz,
                  "atmospheric absorption in dB per metre per kHz");
    s->add_option("--phase", sim.initial_phase_rad, "source initial phase in radians");
    s->add_option("--jobs", sim.jobs, "worker threads for batch runs (default 1)");
    s->callback([&] { rc = cli::cmd_simulate(sim); });

    cli::NoiseOptions noi;
    CLI::App* n = app.add_subcommand(
        "noise", "measure a per-bin noise profile from a speech-free trace");
    n->add_option("--trace", noi.trace, "ambient (speech-free) trace csv")->required();
    n->add_option("--out", noi.out, "output noise profile csv")->required();
    n->add_option("--window", noi.window_size, "analysis window size in samples (default 256)");
    n->add_option("--hop", noi.hop, "analysis hop in samples (default 64)");
    n->add_option("--mean-window", noi.mean_window_s,
                  "sliding mean window in seconds for trace-to-audio conversion (0 = global mean)");
    n->add_option("--highpass-cutoff", noi.highpass_cutoff_hz,
                  "highpass cutoff in Hz applied before measuring, matching the reconstruction "
                  "front end (0 disables; default 40)");
    n->add_option("--highpass-order", noi.highpass_order, "highpass order (default 3)");
    n->callback([&] { rc = cli::cmd_noise(noi); });

    cli::CalibrateOptions cal;
    CLI::App* c = app.add_subcommand(
        "calibrate", "derive per-band equalizer gains from a reference/recovered pair");
    c->add_option("--reference", cal.reference, "clean reference wav");
    c->add_option("--recovered", cal.recovered,
                  "wav recovered from the sensor for the same content");
    c->add_flag("--auto", cal.auto_mode,
                "synthesize a sweep, run it through the simulated sensor, and calibrate against "
                "the recovered trace (replaces --reference/--recovered)");
    c->add_option("--sensor", cal.sensor_cfg,
                  "sensor config for --auto; also searched under $BAROGRAM_CONFIG_DIR");
    c->add_option("--seed", cal.seed, "sensor self-noise RNG seed for --auto (default 42)");
    c->add_option("--sweep-from", cal.sweep_from_hz, "sweep start frequency in Hz (default 1)");
    c->add_option("--sweep-to", cal.sweep_to_hz, "sweep end frequency in Hz (default 1000)");
    c->add_option("--sweep-duration", cal.sweep_duration_s, "sweep length in seconds (default 10)");
    c->add_option("--sweep-rate", cal.sweep_rate_hz, "sweep sample rate in Hz (default 44100)");
    c->add_option("--distance", cal.distance_m, "source distance in metres for --auto");
    c->add_option("--spl", cal.spl_db, "full-scale SPL in dB for --auto");
    c->add_option("--bands", cal.bands, "number of equalizer bands (default 40)");
    c->add_option("--band-width", cal.band_width_hz, "band width in Hz (default 25)");
    c->add_option("--start", cal.start_hz, "lower edge of the first band in Hz (default 0)");
    c->add_option("--gain-cap", cal.gain_cap, "upper bound on any band gain (default +30 dB)");
    c->add_option("--out", cal.out, "output equalizer csv")->required();
    c->callback([&] { rc = cli::cmd_calibrate(cal); });

    cli::ReconstructOptions rec;
    CLI::App* r = app.add_subcommand(
        "reconstruct", "recover audible speech from pressure traces");
    r->add_option("--trace", rec.traces,
                  "input trace csv (repeat for a batch; --out then names a directory)")
        ->required();
    r->add_option("--noise", rec.noise, "noise profile csv from the 'noise' subcommand")
        ->required();
    r->add_option("--eq", rec.eq, "equalizer csv from the 'calibrate' subcommand")->required();
    r->add_option("--out", rec.out, "output wav (a directory when several traces)")->required();
    r->add_flag("--emit-stages", rec.emit_stages,
                "also write the intermediate taps as <out>_stage_a_pat.wav, _stage_b_normalized, "
                "_stage_c_highpassed, _stage_d_denoised, _stage_e_equalized");
    r->add_option("--jobs", rec.jobs, "worker threads for batch runs (default 1)");
    r->add_option("--target-peak", rec.pipeline.target_peak,
                  "peak of the normalized output (default 1.0)");
    r->add_option("--mean-window", rec.pipeline.pat_mean_window_s,
                  "sliding mean window in seconds for trace-to-audio conversion (0 = global mean)");
    r->add_option("--highpass-cutoff", rec.pipeline.highpass_cutoff_hz,
                  "highpass cutoff in Hz (default 40)");
    r->add_option("--highpass-order", rec.pipeline.highpass_order, "highpass order (default 3)");
    r->add_option("--hpss-window", rec.pipeline.hpss.window_size,
                  "harmonic/percussive analysis window (default 256)");
    r->add_option("--hpss-hop", rec.pipeline.hpss.hop, "harmonic/percussive hop (default 64)");
    r->add_option("--time-kernel", rec.pipeline.hpss.time_kernel,
                  "median kernel across frames, odd (default 17)");
    r->add_option("--freq-kernel", rec.pipeline.hpss.freq_kernel,
                  "median kernel across bins, odd (default 17)");
    r->add_option("--iterations", rec.pipeline.hpss.n_iter,
                  "harmonic/percussive refinement passes (default 1)");
    r->add_option("--mask", rec.mask, "separation mask: ratio or binary (default ratio)")
        ->check(CLI::IsMember({"ratio", "binary"}));
    r->add_option("--alpha-harmonic", rec.pipeline.subtraction.alpha_harmonic,
                  "noise over-subtraction factor for the harmonic branch (default 1.0)");
    r->add_option("--alpha-percussive", rec.pipeline.subtraction.alpha_percussive,
                  "noise over-subtraction factor for the percussive branch (default 0.3)");
    r->add_option("--floor", rec.pipeline.subtraction.spectral_floor,
                  "relative spectral floor in [0, 1] (default 0.01)");
    r->add_option("--eq-window", rec.pipeline.eq_window_size,
                  "equalizer analysis window (default 256)");
    r->add_option("--eq-hop", rec.pipeline.eq_hop, "equalizer hop (default 64)");
    r->callback([&] { rc = cli::cmd_reconstruct(rec); });

    cli::EvaluateOptions ev;
    CLI::App* e = app.add_subcommand(
        "evaluate", "score reconstructions: word error rate or SNR reports");
    e->require_subcommand(1);
    CLI::App* ew = e->add_subcommand("wer", "word error rate between two transcript text files");
    ew->add_option("--ref", ev.ref_text, "reference transcript text file")->required();
    ew->add_option("--hyp", ev.hyp_text, "hypothesis transcript text file")->required();
    ew->add_option("--out", ev.out, "report csv (printed to stdout when omitted)");
    ew->callback([&] {
        ev.metric = "wer";
        rc = cli::cmd_evaluate(ev);
    });
    CLI::App* es = e->add_subcommand(
        "snr", "reference SNR of a wav, or per-stage SNRs of the reconstruction pipeline");
    es->add_option("--signal", ev.signal, "wav under test");
    es->add_option("--reference", ev.reference,
                   "clean reference wav (same rate and length as the signal)")
        ->required();
    es->add_flag("--staged", ev.staged,
                 "re-run the pipeline on --trace/--noise/--eq with default settings and report "
                 "the SNR after each stage; edges of one analysis window are excluded");
    es->add_option("--trace", ev.trace, "trace csv for --staged");
    es->add_option("--noise", ev.noise, "noise profile csv for --staged");
    es->add_option("--eq", ev.eq, "equalizer csv for --staged");
    es->add_option("--out", ev.out, "report csv (printed to stdout when omitted)");
    es->callback([&] {
        ev.metric = "snr";
        rc = cli::cmd_evaluate(ev);
    });

    try {
        app.parse(argc, argv);
        if (!manifest_path.empty()) {
            if (!app.get_subcommands().empty())
                throw std::runtime_error(
                    "--from-manifest replaces the subcommand; give one or the other");
            rc = cli::run_manifest(manifest_path);
        } else if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return cli::kExitUsage;
        }
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return cli::kExitUsage;
    } catch (const std::runtime_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return cli::kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return cli::kExitInternal;
    }
    return rc;
}
