#include "barogram/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace barogram::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw std::runtime_error(path + ": " + why);
}

std::ifstream open_input(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream f(path, mode);
    if (!f) fail(path, "cannot open for reading");
    return f;
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(path, mode);
    if (!f) fail(path, "cannot open for writing");
    return f;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& path, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(path, "cannot parse " + what + " from '" + text + "'");
    }
}

long parse_long(const std::string& text, const std::string& path, const std::string& what) {
    try {
        std::size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(path, "cannot parse " + what + " from '" + text + "'");
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// "# barogram-<kind> v1 key=value key=value" -> attribute map
std::map<std::string, std::string> parse_version_line(const std::string& line,
                                                      const std::string& kind,
                                                      const std::string& path) {
    const std::string expect = "# barogram-" + kind + " v1";
    if (line.rfind(expect, 0) != 0)
        fail(path, "missing or unsupported version header (expected '" + expect + " ...')");
    std::map<std::string, std::string> attrs;
    std::istringstream rest(line.substr(expect.size()));
    std::string tok;
    while (rest >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) fail(path, "malformed header attribute '" + tok + "'");
        attrs[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return attrs;
}

// --- little-endian scalar helpers for the WAV container ---

template <typename T>
void write_le(std::ostream& out, T value) {
    unsigned char bytes[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
        bytes[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::istream& in, const std::string& path) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) fail(path, "truncated file");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return static_cast<T>(v);
}

}  // namespace

// ---------------------------------------------------------------------------
// WAV
// ---------------------------------------------------------------------------

AudioSignal read_wav(const std::string& path) {
    std::ifstream f = open_input(path, std::ios::binary);
    char tag[4];
    if (!f.read(tag, 4) || std::memcmp(tag, "RIFF", 4) != 0) fail(path, "not a RIFF file");
    read_le<std::uint32_t>(f, path);  // riff size, unused
    if (!f.read(tag, 4) || std::memcmp(tag, "WAVE", 4) != 0) fail(path, "not a WAVE file");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    AudioSignal out;

    while (f.read(tag, 4)) {
        const auto chunk_size = read_le<std::uint32_t>(f, path);
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            format = read_le<std::uint16_t>(f, path);
            channels = read_le<std::uint16_t>(f, path);
            rate = read_le<std::uint32_t>(f, path);
            read_le<std::uint32_t>(f, path);  // byte rate
            read_le<std::uint16_t>(f, path);  // block align
            bits = read_le<std::uint16_t>(f, path);
            if (chunk_size > 16) f.seekg(chunk_size - 16, std::ios::cur);
            have_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            if (!have_fmt) fail(path, "data chunk before fmt chunk");
            if (format != 1) fail(path, "only PCM (format 1) is supported");
            if (channels != 1) fail(path, "only mono is supported");
            if (bits != 16) fail(path, "only 16-bit samples are supported");
            const std::size_t n = chunk_size / 2;
            out.samples.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto s = read_le<std::int16_t>(f, path);
                out.samples[i] = static_cast<double>(s) / 32768.0;
            }
            out.sample_rate = static_cast<int>(rate);
            return out;
        } else {
            f.seekg(chunk_size + (chunk_size % 2), std::ios::cur);  // chunks are word-aligned
        }
    }
    fail(path, "no data chunk found");
}

void write_wav(const std::string& path, const AudioSignal& signal, bool peak_normalize) {
    if (signal.sample_rate <= 0) fail(path, "signal sample rate must be positive");
    std::ofstream f = open_output(path, std::ios::binary);

    double scale = 1.0;
    if (peak_normalize) {
        const double peak = peak_abs(signal.samples);
        if (peak > 0.0) scale = std::pow(10.0, -1.0 / 20.0) / peak;  // -1 dBFS
    }

    const auto n = static_cast<std::uint32_t>(signal.samples.size());
    const std::uint32_t data_bytes = n * 2;
    f.write("RIFF", 4);
    write_le<std::uint32_t>(f, 36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    write_le<std::uint32_t>(f, 16);
    write_le<std::uint16_t>(f, 1);  // PCM
    write_le<std::uint16_t>(f, 1);  // mono
    write_le<std::uint32_t>(f, static_cast<std::uint32_t>(signal.sample_rate));
    write_le<std::uint32_t>(f, static_cast<std::uint32_t>(signal.sample_rate) * 2);
    write_le<std::uint16_t>(f, 2);
    write_le<std::uint16_t>(f, 16);
    f.write("data", 4);
    write_le<std::uint32_t>(f, data_bytes);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = signal.samples[i] * scale;
        const double q = std::round(v * 32767.0);
        const auto s = static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
        write_le<std::int16_t>(f, s);
    }
    if (!f) fail(path, "write failed");
}

// ---------------------------------------------------------------------------
// Pressure trace CSV
// ---------------------------------------------------------------------------

PressureTrace read_trace_csv(const std::string& path) {
    std::ifstream f = open_input(path);
    std::string line;
    if (!std::getline(f, line)) fail(path, "empty file");
    const auto attrs = parse_version_line(line, "trace", path);
    const auto it = attrs.find("rate_hz");
    if (it == attrs.end()) fail(path, "version header lacks rate_hz");
    PressureTrace trace;
    trace.sample_rate = static_cast<int>(parse_long(it->second, path, "rate_hz"));
    if (trace.sample_rate <= 0) fail(path, "rate_hz must be positive");

    if (!std::getline(f, line) || trim(line) != "time_s,pressure_pa")
        fail(path, "expected header 'time_s,pressure_pa'");
    while (std::getline(f, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail(path, "malformed row '" + line + "'");
        trace.samples.push_back(parse_double(line.substr(comma + 1), path, "pressure"));
    }
    if (trace.samples.empty()) fail(path, "no samples");
    return trace;
}

void write_trace_csv(const std::string& path, const PressureTrace& trace) {
    if (trace.sample_rate <= 0) fail(path, "trace sample rate must be positive");
    std::ofstream f = open_output(path);
    f << "# barogram-trace v1 rate_hz=" << trace.sample_rate << "\n";
    f << "time_s,pressure_pa\n";
    char row[96];
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const double t = static_cast<double>(i) / trace.sample_rate;
        std::snprintf(row, sizeof row, "%.9f,%.9f\n", t, trace.samples[i]);
        f << row;
    }
    if (!f) fail(path, "write failed");
}

// ---------------------------------------------------------------------------
// Noise / equalizer / response CSVs
// ---------------------------------------------------------------------------

NoiseProfile read_noise_csv(const std::string& path) {
    std::ifstream f = open_input(path);
    std::string line;
    if (!std::getline(f, line)) fail(path, "empty file");
    const auto attrs = parse_version_line(line, "noise", path);
    NoiseProfile profile;
    if (!attrs.count("window") || !attrs.count("rate_hz"))
        fail(path, "version header needs window and rate_hz");
    profile.window_size = static_cast<int>(parse_long(attrs.at("window"), path, "window"));
    profile.sample_rate = static_cast<int>(parse_long(attrs.at("rate_hz"), path, "rate_hz"));

    if (!std::getline(f, line) || trim(line) != "bin_index,magnitude")
        fail(path, "expected header 'bin_index,magnitude'");
    while (std::getline(f, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail(path, "malformed row '" + line + "'");
        profile.magnitude.push_back(parse_double(line.substr(comma + 1), path, "magnitude"));
    }
    if (profile.magnitude.size() != static_cast<std::size_t>(profile.window_size / 2 + 1))
        fail(path, "bin count does not match window size");
    return profile;
}

void write_noise_csv(const std::string& path, const NoiseProfile& profile) {
    std::ofstream f = open_output(path);
    f << "# barogram-noise v1 window=" << profile.window_size
      << " rate_hz=" << profile.sample_rate << "\n";
    f << "bin_index,magnitude\n";
    for (std::size_t k = 0; k < profile.magnitude.size(); ++k)
        f << k << "," << format_double(profile.magnitude[k]) << "\n";
    if (!f) fail(path, "write failed");
}

EqualizerProfile read_eq_csv(const std::string& path) {
    std::ifstream f = open_input(path);
    std::string line;
    if (!std::getline(f, line)) fail(path, "empty file");
    const auto attrs = parse_version_line(line, "eq", path);
    EqualizerProfile profile;
    if (!attrs.count("band_width_hz")) fail(path, "version header needs band_width_hz");
    profile.band_width_hz = parse_double(attrs.at("band_width_hz"), path, "band_width_hz");
    if (attrs.count("start_hz")) profile.start_hz = parse_double(attrs.at("start_hz"), path, "start_hz");
    if (attrs.count("gain_cap")) profile.gain_cap = parse_double(attrs.at("gain_cap"), path, "gain_cap");

    if (!std::getline(f, line) || trim(line) != "band_index,gain")
        fail(path, "expected header 'band_index,gain'");
    profile.gains.clear();
    while (std::getline(f, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail(path, "malformed row '" + line + "'");
        profile.gains.push_back(parse_double(line.substr(comma + 1), path, "gain"));
    }
    if (profile.gains.empty()) fail(path, "no bands");
    return profile;
}

void write_eq_csv(const std::string& path, const EqualizerProfile& profile) {
    std::ofstream f = open_output(path);
    f << "# barogram-eq v1 band_width_hz=" << format_double(profile.band_width_hz)
      << " start_hz=" << format_double(profile.start_hz)
      << " gain_cap=" << format_double(profile.gain_cap) << "\n";
    f << "band_index,gain\n";
    for (std::size_t b = 0; b < profile.gains.size(); ++b)
        f << b << "," << format_double(profile.gains[b]) << "\n";
    if (!f) fail(path, "write failed");
}

FrequencyResponseCurve read_response_csv(const std::string& path) {
    std::ifstream f = open_input(path);
    std::string line;
    FrequencyResponseCurve curve;
    bool saw_header = false;
    while (std::getline(f, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') continue;  // version / comment lines
        if (!saw_header && line == "frequency_hz,gain") {
            saw_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail(path, "malformed row '" + line + "'");
        curve.points.push_back({parse_double(line.substr(0, comma), path, "frequency"),
                                parse_double(line.substr(comma + 1), path, "gain")});
    }
    try {
        curve.validate();
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return curve;
}

void write_response_csv(const std::string& path, const FrequencyResponseCurve& curve) {
    std::ofstream f = open_output(path);
    f << "# barogram-response v1\n";
    f << "frequency_hz,gain\n";
    for (const auto& p : curve.points)
        f << format_double(p.frequency_hz) << "," << format_double(p.gain) << "\n";
    if (!f) fail(path, "write failed");
}

// ---------------------------------------------------------------------------
// Key-value files
// ---------------------------------------------------------------------------

bool KeyValueFile::has(const std::string& key) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const auto& e) { return e.first == key; });
}

const std::string& KeyValueFile::get(const std::string& key) const {
    for (const auto& e : entries)
        if (e.first == key) return e.second;
    throw std::runtime_error("missing key: " + key);
}

std::string KeyValueFile::get_or(const std::string& key, const std::string& fallback) const {
    for (const auto& e : entries)
        if (e.first == key) return e.second;
    return fallback;
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
    for (auto& e : entries) {
        if (e.first == key) {
            e.second = value;
            return;
        }
    }
    entries.emplace_back(key, value);
}

KeyValueFile read_key_value(const std::string& path) {
    std::ifstream f = open_input(path);
    KeyValueFile kv;
    std::string line;
    while (std::getline(f, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(path, "malformed line '" + line + "' (expected key=value)");
        kv.entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

void write_key_value(const std::string& path, const KeyValueFile& kv, const std::string& kind) {
    std::ofstream f = open_output(path);
    f << "# barogram-" << kind << " v1\n";
    for (const auto& [key, value] : kv.entries) f << key << "=" << value << "\n";
    if (!f) fail(path, "write failed");
}

// ---------------------------------------------------------------------------
// Sensor + source configuration
// ---------------------------------------------------------------------------

namespace {

// Shortest decimal that parses back to the identical double; inline curves
// travel through manifests and must not drift on a rerun.
std::string format_double_exact(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string curve_to_inline(const FrequencyResponseCurve& curve) {
    std::string out;
    for (const auto& p : curve.points) {
        if (!out.empty()) out += ",";
        out += format_double_exact(p.frequency_hz) + ":" + format_double_exact(p.gain);
    }
    return out;
}

FrequencyResponseCurve curve_from_inline(const std::string& text) {
    FrequencyResponseCurve curve;
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("malformed curve point '" + item + "' (expected freq:gain)");
        curve.points.push_back({parse_double(trim(item.substr(0, colon)), "<inline>", "frequency"),
                                parse_double(trim(item.substr(colon + 1)), "<inline>", "gain")});
    }
    curve.validate();
    return curve;
}

namespace {

bool sensor_scoped(const std::string& key) {
    return key.rfind("sensor.", 0) == 0 || key.rfind("source.", 0) == 0;
}

}  // namespace

SensorConfig sensor_config_from_entries(const KeyValueFile& kv, const std::string& context,
                                        const std::string& base_dir) {
    const std::filesystem::path base(base_dir);
    SensorConfig cfg;
    // Applied after the loop so the key order (points before or after
    // interpolation) does not matter.
    std::optional<FrequencyResponseCurve::Interpolation> response_interp;

    auto resolve = [&](const std::string& rel) {
        const std::filesystem::path p(rel);
        return p.is_absolute() ? p.string() : (base / p).string();
    };
    auto interp_from = [&](const std::string& text) {
        if (text == "log") return FrequencyResponseCurve::Interpolation::LogFrequency;
        if (text == "linear") return FrequencyResponseCurve::Interpolation::LinearFrequency;
        fail(context, "response interpolation must be 'log' or 'linear', got '" + text + "'");
    };

    for (const auto& [key, value] : kv.entries) {
        if (!sensor_scoped(key)) continue;
        if (key == "sensor.adc_rate_hz") {
            cfg.model.adc_rate_hz = static_cast<int>(parse_long(value, context, key));
        } else if (key == "sensor.effective_bandwidth_hz") {
            cfg.model.effective_bandwidth_hz = parse_double(value, context, key);
        } else if (key == "sensor.response_csv") {
            cfg.model.response = read_response_csv(resolve(value));
        } else if (key == "sensor.response_points") {
            cfg.model.response = curve_from_inline(value);
        } else if (key == "sensor.response_interpolation") {
            response_interp = interp_from(value);
        } else if (key == "sensor.noise_psd_pa") {
            cfg.model.noise_psd_pa = parse_double(value, context, key);
        } else if (key == "sensor.noise_shape_csv") {
            cfg.model.noise_shape = read_response_csv(resolve(value));
        } else if (key == "sensor.noise_shape_points") {
            cfg.model.noise_shape = curve_from_inline(value);
        } else if (key == "sensor.baseline_pa") {
            cfg.model.baseline_pa = parse_double(value, context, key);
        } else if (key == "sensor.baseline_drift_amp_pa") {
            cfg.model.baseline_drift_amp_pa = parse_double(value, context, key);
        } else if (key == "sensor.baseline_drift_period_s") {
            cfg.model.baseline_drift_period_s = parse_double(value, context, key);
        } else if (key == "source.distance_m") {
            cfg.source.distance_m = parse_double(value, context, key);
        } else if (key == "source.spl_db") {
            cfg.source.spl_db = parse_double(value, context, key);
        } else if (key == "source.initial_phase_rad") {
            cfg.source.initial_phase_rad = parse_double(value, context, key);
        } else if (key == "source.orientation_gain") {
            cfg.source.orientation_gain = parse_double(value, context, key);
        } else if (key == "source.speed_of_sound_mps") {
            cfg.source.speed_of_sound_mps = parse_double(value, context, key);
        } else if (key == "source.absorption_db_per_m_per_khz") {
            cfg.source.absorption_db_per_m_per_khz = parse_double(value, context, key);
        } else {
            fail(context, "unknown config key: " + key);
        }
    }
    if (response_interp) cfg.model.response.interpolation = *response_interp;
    try {
        cfg.model.response.validate();
        cfg.model.noise_shape.validate();
    } catch (const std::exception& e) {
        fail(context, e.what());
    }
    return cfg;
}

SensorConfig read_sensor_config(const std::string& path) {
    const KeyValueFile kv = read_key_value(path);
    for (const auto& [key, value] : kv.entries)
        if (!sensor_scoped(key)) fail(path, "unknown config key: " + key);
    return sensor_config_from_entries(kv, path, std::filesystem::path(path).parent_path().string());
}

}  // namespace barogram::io
