#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "barogram/io.hpp"
#include "barogram/sensor.hpp"
#include "barogram/signal.hpp"
#include "doctest.h"

using namespace barogram;
namespace fs = std::filesystem;

using doctest::Contains;

namespace {

// Per-case scratch directory, removed on destruction.
struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("barogram_io_test_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream f(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) lines.push_back(line);
    return lines;
}

void put_le(std::string& buf, std::uint32_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Minimal hand-built WAV so format rejections can be exercised field by field.
std::string make_wav_bytes(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                           std::uint16_t bits, const std::vector<std::int16_t>& data,
                           bool junk_chunk = false) {
    std::string body;
    body += "WAVE";
    if (junk_chunk) {
        body += "LIST";
        put_le(body, 3, 4);  // odd size: reader must skip the alignment byte
        body += "abc";
        body.push_back('\0');  // word-alignment padding
    }
    body += "fmt ";
    put_le(body, 16, 4);
    put_le(body, format, 2);
    put_le(body, channels, 2);
    put_le(body, rate, 4);
    put_le(body, rate * channels * bits / 8, 4);
    put_le(body, channels * bits / 8, 2);
    put_le(body, bits, 2);
    body += "data";
    put_le(body, static_cast<std::uint32_t>(data.size() * 2), 4);
    for (std::int16_t s : data) put_le(body, static_cast<std::uint16_t>(s), 2);

    std::string out = "RIFF";
    put_le(out, static_cast<std::uint32_t>(body.size()), 4);
    out += body;
    return out;
}

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("wav survives a write/read round trip at 16-bit precision") {
    TempDir dir;
    AudioSignal sig;
    sig.sample_rate = 2200;
    sig.samples = {0.0, 1.0, -1.0, 0.5, -0.25, 0.123456, -0.9999};
    const std::string path = dir.file("round.wav");
    io::write_wav(path, sig, /*peak_normalize=*/false);
    auto back = io::read_wav(path);
    CHECK(back.sample_rate == 2200);
    REQUIRE(back.samples.size() == sig.samples.size());
    for (std::size_t i = 0; i < sig.samples.size(); ++i)
        CHECK(std::abs(back.samples[i] - sig.samples[i]) <= 1.0 / 32768.0 + 1e-12);
}

TEST_CASE("wav writer normalizes the peak to -1 dBFS when asked") {
    TempDir dir;
    AudioSignal sig;
    sig.sample_rate = 8000;
    sig.samples = {0.25, -0.5, 0.1};
    const std::string path = dir.file("norm.wav");
    io::write_wav(path, sig);  // peak_normalize defaults on
    auto back = io::read_wav(path);
    CHECK(std::abs(peak_abs(back.samples) - std::pow(10.0, -1.0 / 20.0)) <= 1.0 / 32768.0 + 1e-9);
    // Relative shape is preserved by the uniform scaling.
    CHECK(back.samples[0] / back.samples[1] == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("an all-zero wav stays zero through normalization") {
    TempDir dir;
    AudioSignal sig;
    sig.sample_rate = 2200;
    sig.samples.assign(100, 0.0);
    const std::string path = dir.file("zero.wav");
    io::write_wav(path, sig);
    auto back = io::read_wav(path);
    for (double v : back.samples) CHECK(v == 0.0);
}

TEST_CASE("wav reader skips unknown chunks including odd-sized ones") {
    TempDir dir;
    const std::string path = dir.file("junk.wav");
    write_bytes(path, make_wav_bytes(1, 1, 2200, 16, {100, -200, 300}, /*junk_chunk=*/true));
    auto back = io::read_wav(path);
    CHECK(back.sample_rate == 2200);
    REQUIRE(back.samples.size() == 3);
    CHECK(back.samples[0] == doctest::Approx(100.0 / 32768.0));
    CHECK(back.samples[1] == doctest::Approx(-200.0 / 32768.0));
}

TEST_CASE("wav reader rejects what it cannot represent") {
    TempDir dir;
    const std::string missing = dir.file("absent.wav");
    CHECK_THROWS_WITH_AS(io::read_wav(missing), Contains("cannot open"), std::runtime_error);

    const std::string garbage = dir.file("garbage.wav");
    write_text(garbage, "this is not audio");
    CHECK_THROWS_WITH_AS(io::read_wav(garbage), Contains("RIFF"), std::runtime_error);

    const std::string stereo = dir.file("stereo.wav");
    write_bytes(stereo, make_wav_bytes(1, 2, 44100, 16, {0, 0}));
    CHECK_THROWS_WITH_AS(io::read_wav(stereo), Contains("mono"), std::runtime_error);

    const std::string eightbit = dir.file("eight.wav");
    write_bytes(eightbit, make_wav_bytes(1, 1, 44100, 8, {0}));
    CHECK_THROWS_WITH_AS(io::read_wav(eightbit), Contains("16-bit"), std::runtime_error);

    const std::string wrong_codec = dir.file("float.wav");
    write_bytes(wrong_codec, make_wav_bytes(3, 1, 44100, 16, {0}));
    CHECK_THROWS_WITH_AS(io::read_wav(wrong_codec), Contains("PCM"), std::runtime_error);

    const std::string truncated = dir.file("short.wav");
    std::string bytes = make_wav_bytes(1, 1, 2200, 16, {1, 2, 3, 4});
    bytes.resize(bytes.size() - 5);
    write_bytes(truncated, bytes);
    CHECK_THROWS_WITH_AS(io::read_wav(truncated), Contains("truncated"), std::runtime_error);
}

TEST_CASE("trace csv round-trips samples and rate") {
    TempDir dir;
    PressureTrace trace;
    trace.sample_rate = 2200;
    trace.samples = {5.0, 5.25, 4.753123456, 5.000000001, -0.125};
    const std::string path = dir.file("trace.csv");
    io::write_trace_csv(path, trace);

    auto lines = read_lines(path);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "# barogram-trace v1 rate_hz=2200");
    CHECK(lines[1] == "time_s,pressure_pa");

    auto back = io::read_trace_csv(path);
    CHECK(back.sample_rate == 2200);
    REQUIRE(back.samples.size() == trace.samples.size());
    for (std::size_t i = 0; i < trace.samples.size(); ++i)
        CHECK(std::abs(back.samples[i] - trace.samples[i]) <= 1e-9);
}

TEST_CASE("trace csv writes are byte-identical for identical traces") {
    TempDir dir;
    PressureTrace trace;
    trace.sample_rate = 2200;
    for (int i = 0; i < 100; ++i) trace.samples.push_back(5.0 + std::sin(i * 0.37));
    io::write_trace_csv(dir.file("a.csv"), trace);
    io::write_trace_csv(dir.file("b.csv"), trace);
    std::ifstream fa(dir.file("a.csv")), fb(dir.file("b.csv"));
    std::string a((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string b((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(a == b);
    CHECK(a.find('\r') == std::string::npos);  // LF newlines only
}

TEST_CASE("trace csv rejects malformed files") {
    TempDir dir;
    const std::string bare = dir.file("bare.csv");
    write_text(bare, "time_s,pressure_pa\n0.0,5.0\n");
    CHECK_THROWS_WITH_AS(io::read_trace_csv(bare), Contains("version header"), std::runtime_error);

    const std::string no_rate = dir.file("no_rate.csv");
    write_text(no_rate, "# barogram-trace v1\ntime_s,pressure_pa\n0.0,5.0\n");
    CHECK_THROWS_WITH_AS(io::read_trace_csv(no_rate), Contains("rate_hz"), std::runtime_error);

    const std::string bad_rate = dir.file("bad_rate.csv");
    write_text(bad_rate, "# barogram-trace v1 rate_hz=0\ntime_s,pressure_pa\n0.0,5.0\n");
    CHECK_THROWS_WITH_AS(io::read_trace_csv(bad_rate), Contains("positive"), std::runtime_error);

    const std::string bad_header = dir.file("bad_header.csv");
    write_text(bad_header, "# barogram-trace v1 rate_hz=2200\nwrong,columns\n0.0,5.0\n");
    CHECK_THROWS_WITH_AS(io::read_trace_csv(bad_header), Contains("time_s,pressure_pa"),
                         std::runtime_error);

    const std::string empty_body = dir.file("empty_body.csv");
    write_text(empty_body, "# barogram-trace v1 rate_hz=2200\ntime_s,pressure_pa\n");
    CHECK_THROWS_WITH_AS(io::read_trace_csv(empty_body), Contains("no samples"),
                         std::runtime_error);

    const std::string bad_row = dir.file("bad_row.csv");
    write_text(bad_row, "# barogram-trace v1 rate_hz=2200\ntime_s,pressure_pa\nnocomma\n");
    CHECK_THROWS_WITH_AS(io::read_trace_csv(bad_row), Contains("malformed row"),
                         std::runtime_error);

    const std::string bad_value = dir.file("bad_value.csv");
    write_text(bad_value, "# barogram-trace v1 rate_hz=2200\ntime_s,pressure_pa\n0.0,abc\n");
    CHECK_THROWS_WITH_AS(io::read_trace_csv(bad_value), Contains("cannot parse"),
                         std::runtime_error);
}

TEST_CASE("noise profile csv round-trips") {
    TempDir dir;
    NoiseProfile profile;
    profile.window_size = 256;
    profile.sample_rate = 2200;
    for (int k = 0; k < 129; ++k) profile.magnitude.push_back(1e-3 * std::sqrt(1.0 + k));
    const std::string path = dir.file("noise.csv");
    io::write_noise_csv(path, profile);
    auto back = io::read_noise_csv(path);
    CHECK(back.window_size == 256);
    CHECK(back.sample_rate == 2200);
    REQUIRE(back.magnitude.size() == 129);
    for (int k = 0; k < 129; ++k)
        CHECK(back.magnitude[k] == doctest::Approx(profile.magnitude[k]).epsilon(1e-9));
}

TEST_CASE("noise profile csv validates its own consistency") {
    TempDir dir;
    const std::string mismatched = dir.file("mismatch.csv");
    write_text(mismatched,
               "# barogram-noise v1 window=256 rate_hz=2200\nbin_index,magnitude\n0,1.0\n1,2.0\n");
    CHECK_THROWS_WITH_AS(io::read_noise_csv(mismatched), Contains("bin count"),
                         std::runtime_error);

    const std::string wrong_kind = dir.file("wrong_kind.csv");
    write_text(wrong_kind, "# barogram-eq v1 band_width_hz=25\nband_index,gain\n0,1.0\n");
    CHECK_THROWS_WITH_AS(io::read_noise_csv(wrong_kind), Contains("version header"),
                         std::runtime_error);
}

TEST_CASE("equalizer profile csv round-trips including the cap sentinel") {
    TempDir dir;
    EqualizerProfile profile = EqualizerProfile::unity(40, 25.0);
    profile.start_hz = 0.0;
    profile.gains[5] = 2.5;
    profile.gains[39] = profile.gain_cap;  // silent-band sentinel value
    const std::string path = dir.file("eq.csv");
    io::write_eq_csv(path, profile);
    auto back = io::read_eq_csv(path);
    CHECK(back.band_width_hz == 25.0);
    CHECK(back.start_hz == 0.0);
    CHECK(back.gain_cap == doctest::Approx(profile.gain_cap).epsilon(1e-12));
    REQUIRE(back.gains.size() == 40);
    CHECK(back.gains[5] == 2.5);
    CHECK(back.gains[39] == doctest::Approx(profile.gain_cap).epsilon(1e-12));
}

TEST_CASE("equalizer csv rejects empty or headerless files") {
    TempDir dir;
    const std::string no_bands = dir.file("empty.csv");
    write_text(no_bands, "# barogram-eq v1 band_width_hz=25\nband_index,gain\n");
    CHECK_THROWS_WITH_AS(io::read_eq_csv(no_bands), Contains("no bands"), std::runtime_error);

    const std::string missing_width = dir.file("no_width.csv");
    write_text(missing_width, "# barogram-eq v1\nband_index,gain\n0,1.0\n");
    CHECK_THROWS_WITH_AS(io::read_eq_csv(missing_width), Contains("band_width_hz"),
                         std::runtime_error);
}

TEST_CASE("response curve csv round-trips the default sensor curve") {
    TempDir dir;
    const auto curve = FrequencyResponseCurve::dps_default();
    const std::string path = dir.file("resp.csv");
    io::write_response_csv(path, curve);
    auto back = io::read_response_csv(path);
    REQUIRE(back.points.size() == curve.points.size());
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        CHECK(back.points[i].frequency_hz == curve.points[i].frequency_hz);
        CHECK(back.points[i].gain == curve.points[i].gain);
    }
}

TEST_CASE("response curve csv runs curve validation on load") {
    TempDir dir;
    const std::string single = dir.file("single.csv");
    write_text(single, "# barogram-response v1\nfrequency_hz,gain\n100,1.0\n");
    CHECK_THROWS_WITH_AS(io::read_response_csv(single), Contains("at least two"),
                         std::runtime_error);

    const std::string unsorted = dir.file("unsorted.csv");
    write_text(unsorted, "# barogram-response v1\nfrequency_hz,gain\n400,1.0\n100,0.5\n");
    CHECK_THROWS_WITH_AS(io::read_response_csv(unsorted), Contains("strictly increase"),
                         std::runtime_error);
}

TEST_CASE("key-value files preserve order and support lookups") {
    TempDir dir;
    io::KeyValueFile kv;
    kv.set("command", "simulate");
    kv.set("in", "speech.wav");
    kv.set("seed", "42");
    kv.set("in", "other.wav");  // update in place, order kept
    const std::string path = dir.file("run.manifest");
    io::write_key_value(path, kv, "manifest");

    auto lines = read_lines(path);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "# barogram-manifest v1");
    CHECK(lines[1] == "command=simulate");
    CHECK(lines[2] == "in=other.wav");
    CHECK(lines[3] == "seed=42");

    auto back = io::read_key_value(path);
    CHECK(back.has("seed"));
    CHECK(!back.has("bogus"));
    CHECK(back.get("in") == "other.wav");
    CHECK(back.get_or("bogus", "fallback") == "fallback");
    CHECK_THROWS_WITH_AS(back.get("bogus"), Contains("missing key: bogus"), std::runtime_error);
}

TEST_CASE("key-value parser skips comments and rejects non-assignments") {
    TempDir dir;
    const std::string ok = dir.file("ok.cfg");
    write_text(ok, "# comment\n\n  key = value with spaces  \nempty=\n");
    auto kv = io::read_key_value(ok);
    REQUIRE(kv.entries.size() == 2);
    CHECK(kv.get("key") == "value with spaces");
    CHECK(kv.get("empty").empty());

    const std::string bad = dir.file("bad.cfg");
    write_text(bad, "just some words\n");
    CHECK_THROWS_WITH_AS(io::read_key_value(bad), Contains("key=value"), std::runtime_error);
}

TEST_CASE("sensor config loads model and source fields") {
    TempDir dir;
    const std::string path = dir.file("sensor.cfg");
    write_text(path,
               "# test sensor\n"
               "sensor.adc_rate_hz=1800\n"
               "sensor.effective_bandwidth_hz=850\n"
               "sensor.response_points=50:1,400:1,650:0.15\n"
               "sensor.response_interpolation=log\n"
               "sensor.noise_psd_pa=0.004\n"
               "sensor.baseline_pa=4.5\n"
               "sensor.baseline_drift_amp_pa=0.25\n"
               "sensor.baseline_drift_period_s=1.5\n"
               "source.distance_m=0.1\n"
               "source.spl_db=72\n"
               "source.orientation_gain=0.5\n"
               "source.speed_of_sound_mps=340\n"
               "source.absorption_db_per_m_per_khz=2.5\n"
               "source.initial_phase_rad=0.1\n");
    auto cfg = io::read_sensor_config(path);
    CHECK(cfg.model.adc_rate_hz == 1800);
    CHECK(cfg.model.effective_bandwidth_hz == 850.0);
    REQUIRE(cfg.model.response.points.size() == 3);
    CHECK(cfg.model.response.points[2].frequency_hz == 650.0);
    CHECK(cfg.model.response.points[2].gain == 0.15);
    CHECK(cfg.model.noise_psd_pa == 0.004);
    CHECK(cfg.model.baseline_pa == 4.5);
    CHECK(cfg.model.baseline_drift_amp_pa == 0.25);
    CHECK(cfg.model.baseline_drift_period_s == 1.5);
    CHECK(cfg.source.distance_m == 0.1);
    CHECK(cfg.source.spl_db == 72.0);
    CHECK(cfg.source.orientation_gain == 0.5);
    CHECK(cfg.source.speed_of_sound_mps == 340.0);
    CHECK(cfg.source.absorption_db_per_m_per_khz == 2.5);
    CHECK(cfg.source.initial_phase_rad == 0.1);
}

TEST_CASE("sensor config resolves curve files relative to itself") {
    TempDir dir;
    FrequencyResponseCurve curve;
    curve.points = {{10.0, 1.0}, {500.0, 0.5}};
    io::write_response_csv(dir.file("curve.csv"), curve);
    const std::string path = dir.file("sensor.cfg");
    write_text(path, "sensor.response_csv=curve.csv\n");
    auto cfg = io::read_sensor_config(path);
    REQUIRE(cfg.model.response.points.size() == 2);
    CHECK(cfg.model.response.points[1].gain == 0.5);
}

TEST_CASE("sensor config rejects unknown keys by name") {
    TempDir dir;
    const std::string path = dir.file("sensor.cfg");
    write_text(path, "sensor.adc_rate_hz=2200\nsensor.bogus_knob=1\n");
    CHECK_THROWS_WITH_AS(io::read_sensor_config(path),
                         Contains("unknown config key: sensor.bogus_knob"), std::runtime_error);

    const std::string bad_interp = dir.file("interp.cfg");
    write_text(bad_interp, "sensor.response_interpolation=cubic\n");
    CHECK_THROWS_WITH_AS(io::read_sensor_config(bad_interp), Contains("'log' or 'linear'"),
                         std::runtime_error);
}

TEST_CASE("inline curve text round-trips") {
    const auto curve = FrequencyResponseCurve::dps_default();
    const std::string text = io::curve_to_inline(curve);
    auto back = io::curve_from_inline(text);
    REQUIRE(back.points.size() == curve.points.size());
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        CHECK(back.points[i].frequency_hz == curve.points[i].frequency_hz);
        CHECK(back.points[i].gain == curve.points[i].gain);
    }
    CHECK_THROWS_WITH_AS(io::curve_from_inline("100:1,200"), Contains("expected freq:gain"),
                         std::runtime_error);
}
