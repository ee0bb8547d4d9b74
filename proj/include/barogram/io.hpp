#pragma once

#include <map>
#include <string>
#include <vector>

#include "barogram/reconstruct.hpp"
#include "barogram/sensor.hpp"
#include "barogram/signal.hpp"
#include "barogram/stft.hpp"

namespace barogram::io {

// --- WAV (16-bit PCM mono) -------------------------------------------------

AudioSignal read_wav(const std::string& path);

// Writes 16-bit PCM mono. With peak_normalize the signal is scaled to
// -1 dBFS before quantization (all-zero input stays zero).
void write_wav(const std::string& path, const AudioSignal& signal, bool peak_normalize = true);

// --- Pressure trace CSV ------------------------------------------------------
// Leading version comment carries the rate; columns are time_s,pressure_pa
// in fixed decimal formatting, LF newlines.

PressureTrace read_trace_csv(const std::string& path);
void write_trace_csv(const std::string& path, const PressureTrace& trace);

// --- Profiles ----------------------------------------------------------------

NoiseProfile read_noise_csv(const std::string& path);
void write_noise_csv(const std::string& path, const NoiseProfile& profile);

EqualizerProfile read_eq_csv(const std::string& path);
void write_eq_csv(const std::string& path, const EqualizerProfile& profile);

FrequencyResponseCurve read_response_csv(const std::string& path);
void write_response_csv(const std::string& path, const FrequencyResponseCurve& curve);

// --- Key-value files (configs and run manifests) -----------------------------
// Lines of key=value; '#' starts a comment; insertion order preserved on
// write. Unknown keys are the *caller's* concern: consumers list what they
// accept and reject the rest by name.

struct KeyValueFile {
    std::vector<std::pair<std::string, std::string>> entries;

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    void set(const std::string& key, const std::string& value);
};

KeyValueFile read_key_value(const std::string& path);
void write_key_value(const std::string& path, const KeyValueFile& kv, const std::string& kind);

// Sensor + source configuration: dotted flat keys ("sensor.adc_rate_hz",
// "source.distance_m", ...). Unknown keys raise an error naming the key.
// Curve references ("sensor.response_csv") resolve relative to the config
// file's directory; "sensor.response_points" / "sensor.noise_shape_points"
// carry inline "freq:gain,freq:gain,..." lists.
struct SensorConfig {
    SensorModel model;
    AcousticSource source;
};

SensorConfig read_sensor_config(const std::string& path);

// Same parse from an already-loaded key set: entries outside the "sensor."
// / "source." prefixes are ignored (run manifests mix them with other
// keys), unknown prefixed keys still raise. `context` names the source in
// error messages; relative curve paths resolve against base_dir.
SensorConfig sensor_config_from_entries(const KeyValueFile& kv, const std::string& context,
                                        const std::string& base_dir);

// Serialize curve points as an inline "f:g,f:g,..." list (used in manifests
// so reruns do not depend on external curve files). Values use shortest
// round-trip formatting: parsing the list reproduces the doubles exactly.
std::string curve_to_inline(const FrequencyResponseCurve& curve);
FrequencyResponseCurve curve_from_inline(const std::string& text);

}  // namespace barogram::io
